#pragma once

// Gaussian Unitary Ensemble sampling, spectral decomposition, and spectral
// statistics diagnostics.

#include "rmtdec/rng.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace rmtdec {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Dense complex matrix, Hermitian exactly as stored.
class HermitianOperator
{
public:
	/// Throws std::invalid_argument unless `entries` is square, non-empty, and
	/// entries(m, n) == conj(entries(n, m)) bit for bit.
	explicit HermitianOperator(Matrix entries);

	[[nodiscard]] std::size_t dim() const { return static_cast<std::size_t>(entries_.rows()); }
	[[nodiscard]] const Matrix& entries() const { return entries_; }

private:
	Matrix entries_;
};

struct SpectralDecomposition
{
	Eigen::VectorXd eigenvalues; ///< non-decreasing
	Matrix eigenvectors;         ///< unitary; column k belongs to eigenvalues[k]

	[[nodiscard]] std::size_t dim() const { return static_cast<std::size_t>(eigenvalues.size()); }

	/// U diag(E) U^dagger
	[[nodiscard]] Matrix reconstruct() const;
};

/// GUE sample: diagonal entries real N(0, v), off-diagonal complex Gaussian with
/// E|H_mn|^2 = v, mirrored to keep exact Hermiticity.
HermitianOperator sample_gue(std::size_t dim, double entry_variance, RngStream& rng);

/// How the environment spectrum is scaled to fix the Heisenberg time at 2 pi.
enum class EnvironmentNormalization
{
	/// Level-weighted mean density is 1: (1/N) integral rho(E)^2 dE = 1. This is
	/// the density that enters the decay rate, so tau_H = 2 pi holds for the
	/// ensemble as a whole. Entry variance 64 N / (9 pi^4).
	LevelWeighted,
	/// Density at the band center is 1. Entry variance N / pi^2.
	BandCenter,
};

double environment_entry_variance(std::size_t n, EnvironmentNormalization norm = EnvironmentNormalization::LevelWeighted);

/// Semicircle radius implied by environment_entry_variance.
double environment_spectral_radius(std::size_t n, EnvironmentNormalization norm = EnvironmentNormalization::LevelWeighted);

HermitianOperator sample_environment_hamiltonian(std::size_t n, RngStream& rng,
                                                 EnvironmentNormalization norm = EnvironmentNormalization::LevelWeighted);

/// Throws NumericalError on eigensolver failure. `seed` only decorates the message.
SpectralDecomposition spectral_decompose(const HermitianOperator& h, std::optional<std::uint64_t> seed = std::nullopt);

/// GUE two-level form factor: 1 - tau on [0, 1], zero beyond.
double form_factor_b2(double tau);

/// Mean nearest-neighbour gap over the central half of a sorted spectrum.
double mean_level_spacing_center(std::span<const double> sorted_eigenvalues);

/// Spacings of the central half of the spectrum divided by their mean.
std::vector<double> unfolded_central_spacings(std::span<const double> sorted_eigenvalues);

/// 2 pi times the level-weighted mean density (1/N) sum_i rho(E_i), with the
/// local density estimated from a sliding window of neighbouring levels.
double effective_heisenberg_time(std::span<const double> sorted_eigenvalues);

} // namespace rmtdec
