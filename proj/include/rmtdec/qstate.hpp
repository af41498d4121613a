#pragma once

// Initial states and two-qubit measures (purity, concurrence, spectra).

#include "rmtdec/rmt.hpp"

#include <array>
#include <string>
#include <vector>

namespace rmtdec {

/// Normalized state vector over a tensor-product space. Factors are ordered
/// with the first factor most significant in the flat index.
class PureState
{
public:
	/// Throws std::invalid_argument if the norm deviates from 1 by more than
	/// 1e-12 or if the factor dimensions do not multiply to the vector size.
	PureState(Vector amplitudes, std::vector<std::size_t> factor_dims);

	/// Single-factor convenience.
	explicit PureState(Vector amplitudes);

	[[nodiscard]] std::size_t dim() const { return static_cast<std::size_t>(amplitudes_.size()); }
	[[nodiscard]] const Vector& amplitudes() const { return amplitudes_; }
	[[nodiscard]] const std::vector<std::size_t>& factor_dims() const { return factor_dims_; }

private:
	Vector amplitudes_;
	std::vector<std::size_t> factor_dims_;
};

PureState tensor(const PureState& a, const PureState& b);

using Matrix4 = Eigen::Matrix4cd;

/// Two-qubit state in the basis |q1 q2> = |00>, |01>, |10>, |11>; q1 is the
/// coupled qubit, q2 the spectator.
class TwoQubitDensityMatrix
{
public:
	/// Hermitizes and renormalizes the trace. Throws NumericalError if either
	/// correction exceeds 1e-8 or an eigenvalue lies below -1e-10.
	static TwoQubitDensityMatrix from_matrix(const Matrix4& raw);

	static TwoQubitDensityMatrix from_pure(const Eigen::Vector4cd& psi);

	[[nodiscard]] const Matrix4& entries() const { return entries_; }

	/// 32 whitespace-separated reals, row-major, real/imag interleaved.
	[[nodiscard]] std::string serialize() const;
	static TwoQubitDensityMatrix parse(const std::string& text);

private:
	explicit TwoQubitDensityMatrix(const Matrix4& m) : entries_{m} {}
	Matrix4 entries_;
};

struct CPPoint
{
	double time;
	double purity;
	double concurrence;
};

/// cos(alpha)|00> + sin(alpha)|11>, alpha in [0, pi/4].
PureState alpha_state(double alpha);

/// i.i.d. complex Gaussian amplitudes with E|x_i|^2 = 1/N, before normalization.
Vector raw_environment_amplitudes(std::size_t n, RngStream& rng);

/// raw_environment_amplitudes scaled to exactly unit norm.
PureState random_environment_state(std::size_t n, RngStream& rng);

double purity(const TwoQubitDensityMatrix& rho);

/// Wootters concurrence max{0, l1 - l2 - l3 - l4}, l_i the square roots of the
/// eigenvalues of rho (sy x sy) rho^* (sy x sy) in non-increasing order.
double concurrence(const TwoQubitDensityMatrix& rho);

/// p |Bell><Bell| + (1 - p) I/4 with |Bell> = (|00> + |11>)/sqrt 2.
TwoQubitDensityMatrix werner_state(double p);

/// Eigenvalues, non-increasing.
std::array<double, 4> density_spectrum(const TwoQubitDensityMatrix& rho);

/// sigma_y (x) sigma_y in the computational basis.
Matrix4 sigma_yy();

} // namespace rmtdec
