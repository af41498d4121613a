#pragma once

// Reference computations that share no code path with the production
// routines they check: dense full-space evolution through a Pade matrix
// exponential, Wootters concurrence through a literal matrix square root, and
// the spectral double time integral behind f(t).

#include "rmtdec/dynamics.hpp"
#include "rmtdec/qstate.hpp"
#include "rmtdec/rng.hpp"

#include <span>
#include <string>
#include <vector>

namespace rmtdec::oracles {

/// exp(-i H t) by scaling and squaring.
Matrix unitary_by_expm(const Matrix& h, double t);

/// Builds the 4N-dimensional Hamiltonian on env (x) q1 (x) q2, evolves
/// chi (x) |phi_alpha> densely and traces out the environment.
Matrix4 full_space_spectator_rho(const SpectatorModel& model, const PureState& chi, double alpha, double t);

/// Same on env1 (x) q1 (x) env2 (x) q2 with dimension 4 N1 N2.
Matrix4 full_space_two_env_rho(const TwoEnvModel& model, const PureState& chi1, const PureState& chi2, double alpha,
                               double t);

/// max{0, l1 - l2 - l3 - l4} with l_i the eigenvalues of sqrt(rho rho~).
/// Requires rho rho~ to be nonsingular.
double concurrence_by_matrix_sqrt(const Matrix4& rho);

/// G G^dagger / Tr with G a 4x4 complex Gaussian matrix; full rank almost surely.
Matrix4 random_density_matrix(RngStream& rng);

/// Haar-random 2x2 unitary.
Eigen::Matrix2cd random_unitary2(RngStream& rng);

/// (2/N) integral_0^t integral_0^t sum_{i,i'} exp(i (E_i - E_i') (tau - tau')) dtau dtau'
/// for one spectrum, evaluated as (2/N) sum_{i,i'} 4 sin^2(w t / 2) / w^2.
std::vector<double> spectral_f(std::span<const double> eigenvalues, std::span<const double> times);

} // namespace rmtdec::oracles

namespace rmtdec::oracles {

struct OracleOutcome
{
	std::string name;
	bool passed;
	std::string detail;
};

struct OracleSuiteOptions
{
	std::size_t spectral_dim = 256;
	std::size_t spectral_samples = 100;
	std::uint64_t seed = 1;
};

/// Full-space dynamics (spectator and two-environment), matrix exponential
/// propagation, concurrence closed forms and matrix-square-root route, and the
/// f(t) spectral double integral.
std::vector<OracleOutcome> run_oracle_suite(const OracleSuiteOptions& options);

} // namespace rmtdec::oracles
