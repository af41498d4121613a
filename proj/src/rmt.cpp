#include "rmtdec/rmt.hpp"

#include "rmtdec/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace rmtdec {

HermitianOperator::HermitianOperator(Matrix entries) : entries_{std::move(entries)}
{
	if(entries_.rows() == 0 || entries_.rows() != entries_.cols())
	{
		throw std::invalid_argument("HermitianOperator: matrix must be square and non-empty");
	}
	const Eigen::Index n = entries_.rows();
	for(Eigen::Index m = 0; m < n; ++m)
	{
		for(Eigen::Index k = m; k < n; ++k)
		{
			if(entries_(m, k) != std::conj(entries_(k, m)))
			{
				throw std::invalid_argument("HermitianOperator: entry (" + std::to_string(m) + "," +
				                            std::to_string(k) + ") breaks Hermiticity");
			}
		}
	}
}

Matrix SpectralDecomposition::reconstruct() const
{
	return eigenvectors * eigenvalues.cast<std::complex<double>>().asDiagonal() * eigenvectors.adjoint();
}

HermitianOperator sample_gue(std::size_t dim, double entry_variance, RngStream& rng)
{
	if(dim == 0)
	{
		throw std::invalid_argument("sample_gue: dim must be positive");
	}
	if(!(entry_variance > 0.0))
	{
		throw std::invalid_argument("sample_gue: entry_variance must be positive");
	}
	const auto n = static_cast<Eigen::Index>(dim);
	const double sigma = std::sqrt(entry_variance);
	Matrix h(n, n);
	// Row-major fill of the upper triangle fixes the draw order.
	for(Eigen::Index m = 0; m < n; ++m)
	{
		h(m, m) = sigma * rng.normal();
		for(Eigen::Index k = m + 1; k < n; ++k)
		{
			h(m, k) = rng.complex_normal(entry_variance);
			h(k, m) = std::conj(h(m, k));
		}
	}
	return HermitianOperator{std::move(h)};
}

double environment_entry_variance(std::size_t n, EnvironmentNormalization norm)
{
	constexpr double pi = std::numbers::pi;
	const auto size = static_cast<double>(n);
	switch(norm)
	{
	case EnvironmentNormalization::LevelWeighted:
		return 64.0 * size / (9.0 * pi * pi * pi * pi);
	case EnvironmentNormalization::BandCenter:
		return size / (pi * pi);
	}
	throw std::invalid_argument("environment_entry_variance: unknown normalization");
}

double environment_spectral_radius(std::size_t n, EnvironmentNormalization norm)
{
	return 2.0 * std::sqrt(static_cast<double>(n) * environment_entry_variance(n, norm));
}

HermitianOperator sample_environment_hamiltonian(std::size_t n, RngStream& rng, EnvironmentNormalization norm)
{
	if(n < 2)
	{
		throw std::invalid_argument("sample_environment_hamiltonian: N must be at least 2");
	}
	return sample_gue(n, environment_entry_variance(n, norm), rng);
}

SpectralDecomposition spectral_decompose(const HermitianOperator& h, std::optional<std::uint64_t> seed)
{
	const Eigen::SelfAdjointEigenSolver<Matrix> solver(h.entries());
	if(solver.info() != Eigen::Success)
	{
		std::string msg = "spectral_decompose: eigensolver did not converge (dim=" + std::to_string(h.dim());
		if(seed)
		{
			msg += ", seed=" + std::to_string(*seed);
		}
		throw NumericalError(msg + ")");
	}
	return {solver.eigenvalues(), solver.eigenvectors()};
}

double form_factor_b2(double tau)
{
	if(!(tau >= 0.0))
	{
		throw std::invalid_argument("form_factor_b2: tau must be nonnegative");
	}
	return tau < 1.0 ? 1.0 - tau : 0.0;
}

namespace {

struct Window
{
	std::size_t lo;
	std::size_t hi;
};

Window central_half(std::size_t n)
{
	const std::size_t lo = n / 4;
	const std::size_t count = std::max<std::size_t>(n / 2, 2);
	return {lo, lo + count - 1};
}

void require_spectrum(std::span<const double> e, const char* who)
{
	if(e.size() < 4)
	{
		throw std::invalid_argument(std::string(who) + ": need at least 4 eigenvalues");
	}
	if(!std::is_sorted(e.begin(), e.end()))
	{
		throw std::invalid_argument(std::string(who) + ": eigenvalues must be sorted");
	}
}

} // namespace

double mean_level_spacing_center(std::span<const double> sorted_eigenvalues)
{
	require_spectrum(sorted_eigenvalues, "mean_level_spacing_center");
	const auto [lo, hi] = central_half(sorted_eigenvalues.size());
	return (sorted_eigenvalues[hi] - sorted_eigenvalues[lo]) / static_cast<double>(hi - lo);
}

std::vector<double> unfolded_central_spacings(std::span<const double> sorted_eigenvalues)
{
	const double mean = mean_level_spacing_center(sorted_eigenvalues);
	const auto [lo, hi] = central_half(sorted_eigenvalues.size());
	std::vector<double> out;
	out.reserve(hi - lo);
	for(std::size_t i = lo; i < hi; ++i)
	{
		out.push_back((sorted_eigenvalues[i + 1] - sorted_eigenvalues[i]) / mean);
	}
	return out;
}

double effective_heisenberg_time(std::span<const double> sorted_eigenvalues)
{
	require_spectrum(sorted_eigenvalues, "effective_heisenberg_time");
	const std::size_t n = sorted_eigenvalues.size();
	const std::size_t k = std::max<std::size_t>(2, n / 32);
	double density_sum = 0.0;
	for(std::size_t i = 0; i < n; ++i)
	{
		const std::size_t lo = i >= k ? i - k : 0;
		const std::size_t hi = std::min(n - 1, i + k);
		density_sum += static_cast<double>(hi - lo) / (sorted_eigenvalues[hi] - sorted_eigenvalues[lo]);
	}
	return 2.0 * std::numbers::pi * density_sum / static_cast<double>(n);
}

} // namespace rmtdec
