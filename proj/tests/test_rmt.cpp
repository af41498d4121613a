#include "rmtdec/rmt.hpp"

#include "rmtdec/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

using namespace rmtdec;

namespace {

std::vector<double> to_vector(const Eigen::VectorXd& v)
{
	return {v.data(), v.data() + v.size()};
}

/// Half-width a (in units of the radius) of the semicircle window holding half
/// of the levels: (2/pi)(a sqrt(1 - a^2) + asin a) = 1/2, by bisection.
double semicircle_half_mass_width()
{
	double lo = 0.0;
	double hi = 1.0;
	for(int k = 0; k < 100; ++k)
	{
		const double a = 0.5 * (lo + hi);
		const double mass = (2.0 / std::numbers::pi) * (a * std::sqrt(1.0 - a * a) + std::asin(a));
		(mass < 0.5 ? lo : hi) = a;
	}
	return 0.5 * (lo + hi);
}

} // namespace

TEST_CASE("sample_gue is exactly Hermitian")
{
	RngStream rng{7};
	for(std::size_t dim : {1u, 2u, 5u, 16u})
	{
		const auto h = sample_gue(dim, 0.3, rng);
		const Matrix& m = h.entries();
		for(Eigen::Index r = 0; r < m.rows(); ++r)
		{
			for(Eigen::Index c = 0; c < m.cols(); ++c)
			{
				CHECK(m(r, c) == std::conj(m(c, r)));
			}
		}
	}
}

TEST_CASE("sample_gue second moments follow the unit-variance convention")
{
	RngStream rng{11};
	constexpr int samples = 10000;
	double abs2 = 0.0;
	double diag2 = 0.0;
	std::complex<double> mean{0.0, 0.0};
	for(int k = 0; k < samples; ++k)
	{
		const auto v = sample_gue(2, 1.0, rng);
		abs2 += std::norm(v.entries()(0, 1));
		diag2 += std::norm(v.entries()(0, 0));
		mean += v.entries()(0, 1);
	}
	abs2 /= samples;
	diag2 /= samples;
	mean /= static_cast<double>(samples);
	// |V01|^2 is exponential with unit mean: standard error 1%.
	CHECK(abs2 == doctest::Approx(1.0).epsilon(0.05));
	// V00^2 is chi-squared(1): standard error sqrt(2)%.
	CHECK(diag2 == doctest::Approx(1.0).epsilon(0.07));
	CHECK(std::abs(mean) < 3.0 * std::sqrt(1.0 / samples));
}

TEST_CASE("sample_gue rejects invalid arguments")
{
	RngStream rng{1};
	CHECK_THROWS_AS(sample_gue(0, 1.0, rng), std::invalid_argument);
	CHECK_THROWS_AS(sample_gue(3, 0.0, rng), std::invalid_argument);
	CHECK_THROWS_AS(sample_gue(3, -1.0, rng), std::invalid_argument);
	CHECK_THROWS_AS(sample_environment_hamiltonian(1, rng), std::invalid_argument);
}

TEST_CASE("identical seeds give identical samples")
{
	RngStream a{42};
	RngStream b{42};
	CHECK(sample_gue(6, 2.0, a).entries() == sample_gue(6, 2.0, b).entries());
}

TEST_CASE("HermitianOperator rejects non-Hermitian input")
{
	Matrix m = Matrix::Zero(2, 2);
	m(0, 1) = {1.0, 1.0};
	m(1, 0) = {1.0, 1.0};
	CHECK_THROWS_AS(HermitianOperator{m}, std::invalid_argument);
	CHECK_THROWS_AS(HermitianOperator{Matrix(2, 3)}, std::invalid_argument);
	CHECK_THROWS_AS(HermitianOperator{Matrix(0, 0)}, std::invalid_argument);
}

TEST_CASE("spectral_decompose on trivial operators")
{
	SUBCASE("identity")
	{
		const auto d = spectral_decompose(HermitianOperator{Matrix::Identity(4, 4)});
		for(int k = 0; k < 4; ++k)
		{
			CHECK(d.eigenvalues(k) == doctest::Approx(1.0));
		}
		CHECK((d.eigenvectors.adjoint() * d.eigenvectors - Matrix::Identity(4, 4)).norm() < 1e-12);
	}
	SUBCASE("already diagonal")
	{
		Matrix m = Matrix::Zero(2, 2);
		m(0, 0) = -1.0;
		m(1, 1) = 3.0;
		const auto d = spectral_decompose(HermitianOperator{m});
		CHECK(d.eigenvalues(0) == doctest::Approx(-1.0));
		CHECK(d.eigenvalues(1) == doctest::Approx(3.0));
		CHECK(std::abs(d.eigenvectors(0, 0)) == doctest::Approx(1.0));
		CHECK(std::abs(d.eigenvectors(1, 1)) == doctest::Approx(1.0));
	}
}

TEST_CASE("spectral_decompose reconstructs random GUE samples")
{
	RngStream rng{5};
	for(std::size_t dim : {3u, 32u, 128u})
	{
		const auto h = sample_environment_hamiltonian(dim, rng);
		const auto d = spectral_decompose(h);
		const double rel = (d.reconstruct() - h.entries()).norm() / h.entries().norm();
		CHECK(rel <= 1e-10);
		CHECK((d.eigenvectors.adjoint() * d.eigenvectors - Matrix::Identity(d.eigenvectors.rows(), d.eigenvectors.cols()))
		          .norm() <= 1e-10);
		CHECK(std::is_sorted(d.eigenvalues.data(), d.eigenvalues.data() + d.eigenvalues.size()));
	}
}

TEST_CASE("form_factor_b2")
{
	CHECK(form_factor_b2(0.0) == 1.0);
	CHECK(form_factor_b2(0.5) == 0.5);
	CHECK(form_factor_b2(1.0) == 0.0);
	CHECK(form_factor_b2(2.0) == 0.0);
	CHECK_THROWS_AS(form_factor_b2(-0.1), std::invalid_argument);
}

TEST_CASE("form factor matches sampled spectral correlations")
{
	// <sum_{i,i'} e^{i (E_i - E_i') t}> / N = 1 + delta - b2(t / tau_H); away from t = 0
	// the delta term is absent.
	RngStream rng{2024};
	constexpr std::size_t n = 256;
	constexpr int spectra = 200;
	const double tau_h = 2.0 * std::numbers::pi;
	const std::vector<double> taus = {0.25, 0.5};
	std::vector<double> sum(taus.size(), 0.0);
	std::vector<double> sum2(taus.size(), 0.0);
	for(int s = 0; s < spectra; ++s)
	{
		const auto e = spectral_decompose(sample_environment_hamiltonian(n, rng)).eigenvalues;
		for(std::size_t k = 0; k < taus.size(); ++k)
		{
			const double t = taus[k] * tau_h;
			std::complex<double> z{0.0, 0.0};
			for(Eigen::Index i = 0; i < e.size(); ++i)
			{
				z += std::polar(1.0, e(i) * t);
			}
			const double v = std::norm(z) / n;
			sum[k] += v;
			sum2[k] += v * v;
		}
	}
	for(std::size_t k = 0; k < taus.size(); ++k)
	{
		const double mean = sum[k] / spectra;
		const double se = std::sqrt((sum2[k] / spectra - mean * mean) / (spectra - 1));
		CAPTURE(taus[k]);
		CHECK(std::abs(mean + form_factor_b2(taus[k]) - 1.0) <= 3.0 * se);
	}
}

TEST_CASE("mean_level_spacing_center")
{
	const std::vector<double> unit = {0, 1, 2, 3};
	const std::vector<double> two = {0, 2, 4, 6};
	CHECK(mean_level_spacing_center(unit) == doctest::Approx(1.0));
	CHECK(mean_level_spacing_center(two) == doctest::Approx(2.0));
	const std::vector<double> short_list = {0, 1, 2};
	const std::vector<double> unsorted = {0, 2, 1, 3};
	CHECK_THROWS_AS(mean_level_spacing_center(short_list), std::invalid_argument);
	CHECK_THROWS_AS(mean_level_spacing_center(unsorted), std::invalid_argument);
}

TEST_CASE("environment normalization diagnostics at N = 256")
{
	constexpr std::size_t n = 256;
	constexpr int samples = 50;
	const double a = semicircle_half_mass_width();

	SUBCASE("level-weighted normalization")
	{
		RngStream rng{99};
		const double radius = environment_spectral_radius(n);
		CHECK(radius == doctest::Approx(16.0 * n / (3.0 * std::numbers::pi * std::numbers::pi)));
		double spacing = 0.0;
		double tau = 0.0;
		int within_radius = 0;
		for(int s = 0; s < samples; ++s)
		{
			const auto e = to_vector(spectral_decompose(sample_environment_hamiltonian(n, rng)).eigenvalues);
			spacing += mean_level_spacing_center(e) / samples;
			tau += effective_heisenberg_time(e) / samples;
			within_radius += std::max(-e.front(), e.back()) <= 1.1 * radius ? 1 : 0;
		}
		// Central half of the semicircle spans 2 a R for N/2 levels.
		CHECK(spacing == doctest::Approx(4.0 * a * radius / n).epsilon(0.05));
		CHECK(tau == doctest::Approx(2.0 * std::numbers::pi).epsilon(0.05));
		CHECK(within_radius == samples);
	}
	SUBCASE("band-center normalization")
	{
		RngStream rng{98};
		const double radius = environment_spectral_radius(n, EnvironmentNormalization::BandCenter);
		CHECK(radius == doctest::Approx(2.0 * n / std::numbers::pi));
		double spacing = 0.0;
		int within_radius = 0;
		for(int s = 0; s < samples; ++s)
		{
			const auto e = to_vector(
			    spectral_decompose(sample_environment_hamiltonian(n, rng, EnvironmentNormalization::BandCenter))
			        .eigenvalues);
			spacing += mean_level_spacing_center(e) / samples;
			within_radius += std::max(-e.front(), e.back()) <= 1.1 * radius ? 1 : 0;
		}
		CHECK(spacing == doctest::Approx(1.0).epsilon(0.05));
		CHECK(within_radius == samples);
	}
}

TEST_CASE("unfolded central spacings show level repulsion")
{
	RngStream rng{3};
	std::size_t total = 0;
	std::size_t small = 0;
	double mean = 0.0;
	while(total < 10000)
	{
		const auto e = to_vector(spectral_decompose(sample_environment_hamiltonian(256, rng)).eigenvalues);
		for(const double s : unfolded_central_spacings(e))
		{
			++total;
			small += s < 0.1 ? 1 : 0;
			mean += s;
		}
	}
	CHECK(static_cast<double>(small) / static_cast<double>(total) < 0.01);
	CHECK(mean / static_cast<double>(total) == doctest::Approx(1.0).epsilon(1e-9));
}
