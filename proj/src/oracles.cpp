#include "rmtdec/oracles.hpp"

#include <Eigen/Eigenvalues>
#include "rmtdec/theory.hpp"

#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>

namespace rmtdec::oracles {

Matrix unitary_by_expm(const Matrix& h, double t)
{
	const Matrix generator = std::complex<double>(0.0, -t) * h;
	return generator.exp();
}

Matrix4 full_space_spectator_rho(const SpectatorModel& model, const PureState& chi, double alpha, double t)
{
	const auto n = static_cast<Eigen::Index>(model.n);
	const Matrix id2 = Matrix::Identity(2, 2);
	const Matrix id4 = Matrix::Identity(4, 4);
	const Matrix h = Eigen::kroneckerProduct(model.h_env.entries(), id4).eval() +
	                 model.lambda * Eigen::kroneckerProduct(model.coupling.entries(), id2).eval();

	Vector psi = Vector::Zero(4 * n);
	for(Eigen::Index i = 0; i < n; ++i)
	{
		psi(4 * i + 0) = chi.amplitudes()(i) * std::cos(alpha); // |0 0>
		psi(4 * i + 3) = chi.amplitudes()(i) * std::sin(alpha); // |1 1>
	}
	psi = unitary_by_expm(h, t) * psi;

	Matrix4 rho = Matrix4::Zero();
	for(Eigen::Index i = 0; i < n; ++i)
	{
		const Eigen::Vector4cd block = psi.segment<4>(4 * i);
		rho += block * block.adjoint();
	}
	return rho;
}

Matrix4 full_space_two_env_rho(const TwoEnvModel& model, const PureState& chi1, const PureState& chi2, double alpha,
                               double t)
{
	const auto n1 = static_cast<Eigen::Index>(model.first.n);
	const auto n2 = static_cast<Eigen::Index>(model.second.n);
	const Matrix id2 = Matrix::Identity(2, 2);
	const Matrix block1 = Eigen::kroneckerProduct(model.first.h_env.entries(), id2).eval() +
	                      model.first.lambda * model.first.coupling.entries();
	const Matrix block2 = Eigen::kroneckerProduct(model.second.h_env.entries(), id2).eval() +
	                      model.second.lambda * model.second.coupling.entries();
	const Matrix h = Eigen::kroneckerProduct(block1, Matrix::Identity(2 * n2, 2 * n2)).eval() +
	                 Eigen::kroneckerProduct(Matrix::Identity(2 * n1, 2 * n1), block2).eval();

	// Index ((i1 * 2 + j1) * 2 N2) + (i2 * 2 + j2).
	const Eigen::Index d2 = 2 * n2;
	Vector psi = Vector::Zero(4 * n1 * n2);
	const double c[2] = {std::cos(alpha), std::sin(alpha)};
	for(int k = 0; k < 2; ++k)
	{
		for(Eigen::Index i1 = 0; i1 < n1; ++i1)
		{
			for(Eigen::Index i2 = 0; i2 < n2; ++i2)
			{
				psi((i1 * 2 + k) * d2 + i2 * 2 + k) += c[k] * chi1.amplitudes()(i1) * chi2.amplitudes()(i2);
			}
		}
	}
	psi = unitary_by_expm(h, t) * psi;

	Matrix4 rho = Matrix4::Zero();
	for(Eigen::Index i1 = 0; i1 < n1; ++i1)
	{
		for(Eigen::Index i2 = 0; i2 < n2; ++i2)
		{
			Eigen::Vector4cd v;
			for(int j1 = 0; j1 < 2; ++j1)
			{
				for(int j2 = 0; j2 < 2; ++j2)
				{
					v(2 * j1 + j2) = psi((i1 * 2 + j1) * d2 + i2 * 2 + j2);
				}
			}
			rho += v * v.adjoint();
		}
	}
	return rho;
}

double concurrence_by_matrix_sqrt(const Matrix4& rho)
{
	Matrix4 yy = Matrix4::Zero();
	yy(0, 3) = yy(3, 0) = -1.0;
	yy(1, 2) = yy(2, 1) = 1.0;
	const Matrix4 product = rho * yy * rho.conjugate() * yy;
	const Matrix4 root = product.sqrt();
	const Eigen::ComplexEigenSolver<Matrix4> solver(root, false);
	std::array<double, 4> l{};
	for(int i = 0; i < 4; ++i)
	{
		l[static_cast<std::size_t>(i)] = solver.eigenvalues()(i).real();
	}
	std::sort(l.begin(), l.end(), std::greater<>{});
	return std::max(0.0, l[0] - l[1] - l[2] - l[3]);
}

Matrix4 random_density_matrix(RngStream& rng)
{
	Matrix4 g;
	for(int r = 0; r < 4; ++r)
	{
		for(int c = 0; c < 4; ++c)
		{
			g(r, c) = rng.complex_normal(1.0);
		}
	}
	Matrix4 rho = g * g.adjoint();
	rho = 0.5 * (rho + rho.adjoint()).eval();
	return rho / rho.trace().real();
}

Eigen::Matrix2cd random_unitary2(RngStream& rng)
{
	Eigen::Matrix2cd g;
	for(int r = 0; r < 2; ++r)
	{
		for(int c = 0; c < 2; ++c)
		{
			g(r, c) = rng.complex_normal(1.0);
		}
	}
	const Eigen::HouseholderQR<Eigen::Matrix2cd> qr(g);
	Eigen::Matrix2cd q = qr.householderQ();
	const Eigen::Matrix2cd r = qr.matrixQR().triangularView<Eigen::Upper>();
	for(int k = 0; k < 2; ++k)
	{
		const std::complex<double> d = r(k, k);
		q.col(k) *= d / std::abs(d);
	}
	return q;
}

std::vector<double> spectral_f(std::span<const double> eigenvalues, std::span<const double> times)
{
	const std::size_t n = eigenvalues.size();
	std::vector<double> out(times.size(), 0.0);
	for(std::size_t k = 0; k < times.size(); ++k)
	{
		const double t = times[k];
		// Diagonal pairs contribute t^2 each.
		double sum = static_cast<double>(n) * t * t;
		for(std::size_t a = 0; a < n; ++a)
		{
			for(std::size_t b = a + 1; b < n; ++b)
			{
				const double w = eigenvalues[a] - eigenvalues[b];
				if(w == 0.0)
				{
					sum += 2.0 * t * t;
					continue;
				}
				const double s = std::sin(0.5 * w * t);
				sum += 2.0 * 4.0 * s * s / (w * w);
			}
		}
		out[k] = 2.0 * sum / static_cast<double>(n);
	}
	return out;
}

} // namespace rmtdec::oracles

namespace rmtdec::oracles {

namespace {

std::string sci(double x)
{
	char buf[32];
	std::snprintf(buf, sizeof buf, "%.3e", x);
	return buf;
}

SpectatorModel random_block(std::size_t n, double lambda, RngStream& rng)
{
	auto h = sample_environment_hamiltonian(n, rng);
	auto v = sample_gue(2 * n, 1.0, rng);
	return {n, std::move(h), std::move(v), lambda};
}

OracleOutcome spectator_dynamics(RngStream& rng)
{
	const SpectatorModel model = random_block(4, 0.5, rng);
	const PureState chi = random_environment_state(4, rng);
	std::vector<double> times(10);
	for(auto& t : times)
	{
		t = 10.0 * rng.uniform();
	}
	std::sort(times.begin(), times.end());
	const double alpha = std::numbers::pi / 4.0;
	const auto evolved = evolve_pair_spectator(model, chi, alpha, times);
	double worst = 0.0;
	for(const auto& e : evolved)
	{
		const Matrix4 ref = full_space_spectator_rho(model, chi, alpha, e.time);
		worst = std::max(worst, (e.rho.entries() - ref).cwiseAbs().maxCoeff());
	}
	return {"spectator_full_space", worst <= 1e-8, "max |drho| = " + sci(worst) + " (tol 1e-8)"};
}

OracleOutcome two_env_dynamics(RngStream& rng)
{
	const TwoEnvModel model{random_block(3, 0.4, rng), random_block(3, 0.7, rng)};
	const PureState chi1 = random_environment_state(3, rng);
	const PureState chi2 = random_environment_state(3, rng);
	std::vector<double> times(10);
	for(auto& t : times)
	{
		t = 10.0 * rng.uniform();
	}
	std::sort(times.begin(), times.end());
	const double alpha = std::numbers::pi / 8.0;
	const auto evolved = evolve_pair_two_env(model, chi1, chi2, alpha, times);
	double worst = 0.0;
	for(const auto& e : evolved)
	{
		const Matrix4 ref = full_space_two_env_rho(model, chi1, chi2, alpha, e.time);
		worst = std::max(worst, (e.rho.entries() - ref).cwiseAbs().maxCoeff());
	}
	return {"two_env_full_space", worst <= 1e-8, "max |drho| = " + sci(worst) + " (tol 1e-8)"};
}

OracleOutcome propagation(RngStream& rng)
{
	const auto h = sample_gue(16, 1.0, rng);
	Vector psi(16);
	for(Eigen::Index i = 0; i < 16; ++i)
	{
		psi(i) = rng.complex_normal(1.0);
	}
	psi.normalize();
	const PureState evolved = propagate(spectral_decompose(h), PureState{psi}, 0.7);
	const Vector ref = unitary_by_expm(h.entries(), 0.7) * psi;
	const double err = (evolved.amplitudes() - ref).cwiseAbs().maxCoeff();
	return {"propagate_vs_expm", err <= 1e-8, "max |dpsi| = " + sci(err) + " (tol 1e-8)"};
}

OracleOutcome concurrence_routes(RngStream& rng)
{
	double worst = 0.0;
	for(int k = 0; k < 1000; ++k)
	{
		const Matrix4 m = random_density_matrix(rng);
		const double fast = concurrence(TwoQubitDensityMatrix::from_matrix(m));
		worst = std::max(worst, std::abs(fast - concurrence_by_matrix_sqrt(m)));
	}
	return {"concurrence_sqrt_route", worst <= 1e-8, "1000 states, max |dC| = " + sci(worst) + " (tol 1e-8)"};
}

OracleOutcome concurrence_closed_forms()
{
	double worst = 0.0;
	for(int k = 0; k <= 20; ++k)
	{
		const double p = k / 20.0;
		const double c = concurrence(werner_state(p));
		worst = std::max(worst, std::abs(c - std::max(0.0, (3.0 * p - 1.0) / 2.0)));
		const double alpha = (std::numbers::pi / 4.0) * k / 20.0;
		const PureState phi = alpha_state(alpha);
		const double ca = concurrence(TwoQubitDensityMatrix::from_pure(phi.amplitudes()));
		worst = std::max(worst, std::abs(ca - std::sin(2.0 * alpha)));
	}
	return {"concurrence_closed_forms", worst <= 1e-10, "Werner and alpha families, max |dC| = " + sci(worst)};
}

OracleOutcome spectral_form(const OracleSuiteOptions& options, RngStream& rng)
{
	const double tau_h = theory::kDefaultHeisenbergTime;
	std::vector<double> times(20);
	for(std::size_t k = 0; k < times.size(); ++k)
	{
		times[k] = tau_h * (0.1 + 1.9 * static_cast<double>(k) / 19.0);
	}
	std::vector<double> mean(times.size(), 0.0);
	for(std::size_t s = 0; s < options.spectral_samples; ++s)
	{
		const auto decomp = spectral_decompose(sample_environment_hamiltonian(options.spectral_dim, rng));
		const std::vector<double> e(decomp.eigenvalues.data(), decomp.eigenvalues.data() + decomp.eigenvalues.size());
		const auto f = spectral_f(e, times);
		for(std::size_t k = 0; k < times.size(); ++k)
		{
			mean[k] += f[k] / static_cast<double>(options.spectral_samples);
		}
	}
	double worst = 0.0;
	for(std::size_t k = 0; k < times.size(); ++k)
	{
		worst = std::max(worst, std::abs(mean[k] / theory::f_lr(times[k], tau_h) - 1.0));
	}
	return {"f_spectral_integral", worst <= 0.05,
	        "N=" + std::to_string(options.spectral_dim) + ", " + std::to_string(options.spectral_samples) +
	            " spectra, max rel err = " + sci(worst) + " on [0.1, 2] tau_H (tol 5e-2)"};
}

} // namespace

std::vector<OracleOutcome> run_oracle_suite(const OracleSuiteOptions& options)
{
	RngStream rng{options.seed};
	std::vector<OracleOutcome> out;
	out.push_back(spectator_dynamics(rng));
	out.push_back(two_env_dynamics(rng));
	out.push_back(propagation(rng));
	out.push_back(concurrence_routes(rng));
	out.push_back(concurrence_closed_forms());
	out.push_back(spectral_form(options, rng));
	return out;
}

} // namespace rmtdec::oracles
