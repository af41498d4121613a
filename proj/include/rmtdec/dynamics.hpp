#pragma once

// Spectator and two-environment Hamiltonians and exact evolution of the pair.
//
// Each environment block acts on env (x) qubit with flat index i * 2 + j
// (i environment level, j qubit). The pair state is never formed in the full
// space. With non-interacting qubits, |phi_alpha> = sum_k c_k |k>|k>
// splits into two branches per environment, chi (x) |k> for k in {0, 1}, and
// the reduced density matrix is assembled from branch overlaps.

#include "rmtdec/qstate.hpp"
#include "rmtdec/rmt.hpp"

#include <array>
#include <optional>
#include <span>
#include <vector>

namespace rmtdec {

struct SpectatorModel
{
	std::size_t n;              ///< environment dimension
	HermitianOperator h_env;    ///< n x n
	HermitianOperator coupling; ///< 2n x 2n on env (x) qubit
	double lambda;              ///< coupling strength, >= 0

	/// Throws std::invalid_argument on inconsistent dimensions or negative lambda.
	void validate() const;
};

struct TwoEnvModel
{
	SpectatorModel first;  ///< couples qubit 1
	SpectatorModel second; ///< couples qubit 2
};

struct EvolvedState
{
	double time;
	TwoQubitDensityMatrix rho;
};

/// H_env (x) I_2 + lambda V.
HermitianOperator build_spectator_hamiltonian(const SpectatorModel& model);

/// exp(-i H t) psi through the eigenbasis of H.
PureState propagate(const SpectralDecomposition& decomp, const PureState& psi, double t);

/// Branch pair (Psi_0, Psi_1) of one environment, stored as 2n vectors.
using Branches = std::array<Vector, 2>;

/// rho_{(j,k),(j',k')} = c_k c_k' sum_i Psi_k(i, j) Psi_k'(i, j')^*.
TwoQubitDensityMatrix assemble_spectator_rho(const Branches& branches, double alpha);

/// rho = sum_{k,k'} c_k c_k' T^A_{kk'} (x) T^B_{kk'}.
TwoQubitDensityMatrix assemble_two_env_rho(const Branches& first, const Branches& second, double alpha);

/// Evolution of one environment block. Immutable once constructed and safe
/// to share read-only between threads.
class BlockPropagator
{
public:
	/// Diagonalizes the block Hamiltonian once. `seed` decorates failure messages.
	explicit BlockPropagator(const SpectatorModel& model, std::optional<std::uint64_t> seed = std::nullopt);

	[[nodiscard]] std::size_t env_dim() const { return n_; }
	[[nodiscard]] const SpectralDecomposition& decomposition() const { return decomp_; }

	/// Eigenbasis coefficients of chi (x) |k>, k = 0, 1, as the columns of a 2n x 2 matrix.
	[[nodiscard]] Eigen::MatrixX2cd prepare(const PureState& chi) const;

	/// Branches at time t from prepared coefficients.
	[[nodiscard]] Branches branches(const Eigen::MatrixX2cd& prepared, double t) const;

private:
	std::size_t n_;
	SpectralDecomposition decomp_;
};

class SpectatorDynamics
{
public:
	explicit SpectatorDynamics(const SpectatorModel& model, std::optional<std::uint64_t> seed = std::nullopt)
	    : block_{model, seed}
	{
	}

	[[nodiscard]] const BlockPropagator& block() const { return block_; }

	[[nodiscard]] std::vector<EvolvedState> evolve(const PureState& chi, double alpha,
	                                               std::span<const double> times) const;

private:
	BlockPropagator block_;
};

class TwoEnvDynamics
{
public:
	explicit TwoEnvDynamics(const TwoEnvModel& model, std::optional<std::uint64_t> seed = std::nullopt)
	    : first_{model.first, seed}, second_{model.second, seed}
	{
	}

	[[nodiscard]] std::vector<EvolvedState> evolve(const PureState& chi1, const PureState& chi2, double alpha,
	                                               std::span<const double> times) const;

private:
	BlockPropagator first_;
	BlockPropagator second_;
};

std::vector<EvolvedState> evolve_pair_spectator(const SpectatorModel& model, const PureState& chi, double alpha,
                                                std::span<const double> times);

std::vector<EvolvedState> evolve_pair_two_env(const TwoEnvModel& model, const PureState& chi1,
                                              const PureState& chi2, double alpha, std::span<const double> times);

} // namespace rmtdec
