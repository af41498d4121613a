#include "rmtdec/dynamics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace rmtdec {

namespace {

std::array<double, 2> branch_weights(double alpha)
{
	if(!(alpha >= 0.0 && alpha <= std::numbers::pi / 4.0))
	{
		throw std::invalid_argument("alpha must lie in [0, pi/4]");
	}
	return {std::cos(alpha), std::sin(alpha)};
}

void require_times(std::span<const double> times)
{
	if(times.empty())
	{
		throw std::invalid_argument("time list must not be empty");
	}
}

/// T_{kk'}(j, j') = sum_i Psi_k(i, j) Psi_k'(i, j')^*
Eigen::Matrix2cd overlap(const Vector& a, const Vector& b)
{
	const Eigen::Index n = a.size() / 2;
	const auto ma = Eigen::Map<const Eigen::Matrix<std::complex<double>, 2, Eigen::Dynamic>>(a.data(), 2, n);
	const auto mb = Eigen::Map<const Eigen::Matrix<std::complex<double>, 2, Eigen::Dynamic>>(b.data(), 2, n);
	return ma * mb.adjoint();
}

} // namespace

void SpectatorModel::validate() const
{
	if(n == 0 || h_env.dim() != n)
	{
		throw std::invalid_argument("SpectatorModel: environment Hamiltonian must be " + std::to_string(n) + " x " +
		                            std::to_string(n));
	}
	if(coupling.dim() != 2 * n)
	{
		throw std::invalid_argument("SpectatorModel: coupling must be " + std::to_string(2 * n) + " x " +
		                            std::to_string(2 * n));
	}
	if(!(lambda >= 0.0))
	{
		throw std::invalid_argument("SpectatorModel: lambda must be nonnegative");
	}
}

HermitianOperator build_spectator_hamiltonian(const SpectatorModel& model)
{
	model.validate();
	const auto n = static_cast<Eigen::Index>(model.n);
	Matrix h = model.lambda * model.coupling.entries();
	const Matrix& env = model.h_env.entries();
	for(Eigen::Index i = 0; i < n; ++i)
	{
		for(Eigen::Index ip = 0; ip < n; ++ip)
		{
			h(2 * i, 2 * ip) += env(i, ip);
			h(2 * i + 1, 2 * ip + 1) += env(i, ip);
		}
	}
	return HermitianOperator{std::move(h)};
}

PureState propagate(const SpectralDecomposition& decomp, const PureState& psi, double t)
{
	if(psi.dim() != decomp.dim())
	{
		throw std::invalid_argument("propagate: state dimension " + std::to_string(psi.dim()) +
		                            " does not match operator dimension " + std::to_string(decomp.dim()));
	}
	if(t == 0.0)
	{
		return psi;
	}
	const Vector phases = (decomp.eigenvalues * std::complex<double>(0.0, -t)).array().exp();
	Vector coeffs = decomp.eigenvectors.adjoint() * psi.amplitudes();
	coeffs.array() *= phases.array();
	Vector out = decomp.eigenvectors * coeffs;
	return PureState{std::move(out), psi.factor_dims()};
}

TwoQubitDensityMatrix assemble_spectator_rho(const Branches& branches, double alpha)
{
	const auto c = branch_weights(alpha);
	Matrix4 rho;
	for(int k = 0; k < 2; ++k)
	{
		for(int kp = 0; kp < 2; ++kp)
		{
			const Eigen::Matrix2cd t = overlap(branches[static_cast<std::size_t>(k)], branches[static_cast<std::size_t>(kp)]);
			const double weight = c[static_cast<std::size_t>(k)] * c[static_cast<std::size_t>(kp)];
			for(int j = 0; j < 2; ++j)
			{
				for(int jp = 0; jp < 2; ++jp)
				{
					rho(2 * j + k, 2 * jp + kp) = weight * t(j, jp);
				}
			}
		}
	}
	return TwoQubitDensityMatrix::from_matrix(rho);
}

TwoQubitDensityMatrix assemble_two_env_rho(const Branches& first, const Branches& second, double alpha)
{
	const auto c = branch_weights(alpha);
	Matrix4 rho = Matrix4::Zero();
	for(std::size_t k = 0; k < 2; ++k)
	{
		for(std::size_t kp = 0; kp < 2; ++kp)
		{
			const Eigen::Matrix2cd ta = overlap(first[k], first[kp]);
			const Eigen::Matrix2cd tb = overlap(second[k], second[kp]);
			const double weight = c[k] * c[kp];
			for(int j1 = 0; j1 < 2; ++j1)
			{
				for(int j1p = 0; j1p < 2; ++j1p)
				{
					rho.block<2, 2>(2 * j1, 2 * j1p) += weight * ta(j1, j1p) * tb;
				}
			}
		}
	}
	return TwoQubitDensityMatrix::from_matrix(rho);
}

BlockPropagator::BlockPropagator(const SpectatorModel& model, std::optional<std::uint64_t> seed)
    : n_{model.n}, decomp_{spectral_decompose(build_spectator_hamiltonian(model), seed)}
{
}

Eigen::MatrixX2cd BlockPropagator::prepare(const PureState& chi) const
{
	if(chi.dim() != n_)
	{
		throw std::invalid_argument("environment state has dimension " + std::to_string(chi.dim()) + ", expected " +
		                            std::to_string(n_));
	}
	const auto n = static_cast<Eigen::Index>(n_);
	Eigen::MatrixX2cd start = Eigen::MatrixX2cd::Zero(2 * n, 2);
	for(Eigen::Index i = 0; i < n; ++i)
	{
		start(2 * i, 0) = chi.amplitudes()(i);
		start(2 * i + 1, 1) = chi.amplitudes()(i);
	}
	return decomp_.eigenvectors.adjoint() * start;
}

Branches BlockPropagator::branches(const Eigen::MatrixX2cd& prepared, double t) const
{
	const Vector phases = (decomp_.eigenvalues * std::complex<double>(0.0, -t)).array().exp();
	const Eigen::MatrixX2cd evolved = decomp_.eigenvectors * (phases.asDiagonal() * prepared);
	return {evolved.col(0), evolved.col(1)};
}

std::vector<EvolvedState> SpectatorDynamics::evolve(const PureState& chi, double alpha,
                                                    std::span<const double> times) const
{
	require_times(times);
	branch_weights(alpha);
	const Eigen::MatrixX2cd prepared = block_.prepare(chi);
	std::vector<EvolvedState> out;
	out.reserve(times.size());
	for(const double t : times)
	{
		out.push_back({t, assemble_spectator_rho(block_.branches(prepared, t), alpha)});
	}
	return out;
}

std::vector<EvolvedState> TwoEnvDynamics::evolve(const PureState& chi1, const PureState& chi2, double alpha,
                                                 std::span<const double> times) const
{
	require_times(times);
	branch_weights(alpha);
	const Eigen::MatrixX2cd prepared1 = first_.prepare(chi1);
	const Eigen::MatrixX2cd prepared2 = second_.prepare(chi2);
	std::vector<EvolvedState> out;
	out.reserve(times.size());
	for(const double t : times)
	{
		out.push_back({t, assemble_two_env_rho(first_.branches(prepared1, t), second_.branches(prepared2, t), alpha)});
	}
	return out;
}

std::vector<EvolvedState> evolve_pair_spectator(const SpectatorModel& model, const PureState& chi, double alpha,
                                                std::span<const double> times)
{
	return SpectatorDynamics{model}.evolve(chi, alpha, times);
}

std::vector<EvolvedState> evolve_pair_two_env(const TwoEnvModel& model, const PureState& chi1,
                                              const PureState& chi2, double alpha, std::span<const double> times)
{
	return TwoEnvDynamics{model}.evolve(chi1, chi2, alpha, times);
}

} // namespace rmtdec
