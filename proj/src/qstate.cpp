#include "rmtdec/qstate.hpp"

#include "rmtdec/errors.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace rmtdec {

namespace {

constexpr double kNormTolerance = 1e-12;
constexpr double kCorrectionTolerance = 1e-8;
constexpr double kNegativeEigenvalueTolerance = 1e-10;

} // namespace

PureState::PureState(Vector amplitudes, std::vector<std::size_t> factor_dims)
    : amplitudes_{std::move(amplitudes)}, factor_dims_{std::move(factor_dims)}
{
	if(amplitudes_.size() == 0)
	{
		throw std::invalid_argument("PureState: empty amplitude vector");
	}
	const std::size_t product =
	    std::accumulate(factor_dims_.begin(), factor_dims_.end(), std::size_t{1}, std::multiplies<>{});
	if(factor_dims_.empty() || product != dim())
	{
		throw std::invalid_argument("PureState: factor dimensions do not multiply to " + std::to_string(dim()));
	}
	if(std::abs(amplitudes_.squaredNorm() - 1.0) > kNormTolerance)
	{
		throw std::invalid_argument("PureState: amplitudes are not normalized");
	}
}

PureState::PureState(Vector amplitudes)
    : PureState(amplitudes, {static_cast<std::size_t>(amplitudes.size())})
{
}

PureState tensor(const PureState& a, const PureState& b)
{
	const auto nb = static_cast<Eigen::Index>(b.dim());
	Vector out(static_cast<Eigen::Index>(a.dim()) * nb);
	for(Eigen::Index i = 0; i < static_cast<Eigen::Index>(a.dim()); ++i)
	{
		out.segment(i * nb, nb) = a.amplitudes()(i) * b.amplitudes();
	}
	auto dims = a.factor_dims();
	dims.insert(dims.end(), b.factor_dims().begin(), b.factor_dims().end());
	return PureState{std::move(out), std::move(dims)};
}

TwoQubitDensityMatrix TwoQubitDensityMatrix::from_matrix(const Matrix4& raw)
{
	Matrix4 m = 0.5 * (raw + raw.adjoint());
	const double hermitian_defect = (m - raw).cwiseAbs().maxCoeff();
	if(hermitian_defect > kCorrectionTolerance)
	{
		throw NumericalError("density matrix: Hermiticity defect " + std::to_string(hermitian_defect));
	}
	const double trace = m.trace().real();
	if(std::abs(trace - 1.0) > kCorrectionTolerance)
	{
		throw NumericalError("density matrix: trace " + std::to_string(trace) + " differs from 1");
	}
	m /= trace;
	const Eigen::SelfAdjointEigenSolver<Matrix4> solver(m, Eigen::EigenvaluesOnly);
	if(solver.info() != Eigen::Success)
	{
		throw NumericalError("density matrix: eigensolver did not converge");
	}
	if(solver.eigenvalues()(0) < -kNegativeEigenvalueTolerance)
	{
		throw NumericalError("density matrix: negative eigenvalue " + std::to_string(solver.eigenvalues()(0)));
	}
	return TwoQubitDensityMatrix{m};
}

TwoQubitDensityMatrix TwoQubitDensityMatrix::from_pure(const Eigen::Vector4cd& psi)
{
	return from_matrix(psi * psi.adjoint());
}

std::string TwoQubitDensityMatrix::serialize() const
{
	std::ostringstream os;
	os.precision(17);
	for(int r = 0; r < 4; ++r)
	{
		for(int c = 0; c < 4; ++c)
		{
			if(r != 0 || c != 0)
			{
				os << ' ';
			}
			os << entries_(r, c).real() << ' ' << entries_(r, c).imag();
		}
	}
	return os.str();
}

TwoQubitDensityMatrix TwoQubitDensityMatrix::parse(const std::string& text)
{
	std::istringstream is(text);
	Matrix4 m;
	for(int r = 0; r < 4; ++r)
	{
		for(int c = 0; c < 4; ++c)
		{
			double re = 0.0;
			double im = 0.0;
			if(!(is >> re >> im))
			{
				throw std::invalid_argument("density matrix: expected 32 reals");
			}
			m(r, c) = {re, im};
		}
	}
	std::string extra;
	if(is >> extra)
	{
		throw std::invalid_argument("density matrix: trailing data '" + extra + "'");
	}
	return from_matrix(m);
}

PureState alpha_state(double alpha)
{
	if(!(alpha >= 0.0 && alpha <= std::numbers::pi / 4.0))
	{
		throw std::invalid_argument("alpha_state: alpha must lie in [0, pi/4]");
	}
	Vector amps = Vector::Zero(4);
	amps(0) = std::cos(alpha);
	amps(3) = std::sin(alpha);
	return PureState{std::move(amps), {2, 2}};
}

Vector raw_environment_amplitudes(std::size_t n, RngStream& rng)
{
	if(n == 0)
	{
		throw std::invalid_argument("random_environment_state: N must be positive");
	}
	const double variance = 1.0 / static_cast<double>(n);
	Vector x(static_cast<Eigen::Index>(n));
	for(Eigen::Index i = 0; i < x.size(); ++i)
	{
		x(i) = rng.complex_normal(variance);
	}
	return x;
}

PureState random_environment_state(std::size_t n, RngStream& rng)
{
	Vector x = raw_environment_amplitudes(n, rng);
	x /= x.norm();
	return PureState{std::move(x)};
}

double purity(const TwoQubitDensityMatrix& rho)
{
	// Tr rho^2 = sum |rho_ij|^2 for Hermitian rho.
	return rho.entries().cwiseAbs2().sum();
}

Matrix4 sigma_yy()
{
	Matrix4 yy = Matrix4::Zero();
	yy(0, 3) = -1.0;
	yy(1, 2) = 1.0;
	yy(2, 1) = 1.0;
	yy(3, 0) = -1.0;
	return yy;
}

double concurrence(const TwoQubitDensityMatrix& rho)
{
	// The square roots of the eigenvalues of rho (sy x sy) rho^* (sy x sy) are
	// the singular values of A = sqrt(rho) (sy x sy) sqrt(rho)^*, since that
	// product equals sqrt(rho) A A^dagger sqrt(rho)^-1.
	const Eigen::SelfAdjointEigenSolver<Matrix4> eig(rho.entries());
	if(eig.info() != Eigen::Success)
	{
		throw NumericalError("concurrence: eigensolver did not converge");
	}
	const Eigen::Vector4d roots = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
	const Matrix4 sqrt_rho = eig.eigenvectors() * roots.cast<std::complex<double>>().asDiagonal() *
	                         eig.eigenvectors().adjoint();
	const Matrix4 a = sqrt_rho * sigma_yy() * sqrt_rho.conjugate();
	const Eigen::JacobiSVD<Matrix4> svd(a);
	const Eigen::Vector4d& l = svd.singularValues(); // non-increasing
	return std::max(0.0, l(0) - l(1) - l(2) - l(3));
}

TwoQubitDensityMatrix werner_state(double p)
{
	if(!(p >= 0.0 && p <= 1.0))
	{
		throw std::invalid_argument("werner_state: p must lie in [0, 1]");
	}
	Eigen::Vector4cd bell = Eigen::Vector4cd::Zero();
	bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
	const Matrix4 m = p * (bell * bell.adjoint()) + (1.0 - p) * 0.25 * Matrix4::Identity();
	return TwoQubitDensityMatrix::from_matrix(m);
}

std::array<double, 4> density_spectrum(const TwoQubitDensityMatrix& rho)
{
	const Eigen::SelfAdjointEigenSolver<Matrix4> solver(rho.entries(), Eigen::EigenvaluesOnly);
	if(solver.info() != Eigen::Success)
	{
		throw NumericalError("density_spectrum: eigensolver did not converge");
	}
	const auto& ev = solver.eigenvalues();
	return {ev(3), ev(2), ev(1), ev(0)};
}

} // namespace rmtdec
