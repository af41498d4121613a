#include "rmtdec/theory.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rmtdec::theory {

namespace {

void require_time(double t)
{
	if(!(t >= 0.0))
	{
		throw std::invalid_argument("time must be nonnegative");
	}
}

} // namespace

void TheoryParams::validate() const
{
	if(!(lambda1 >= 0.0) || !(lambda2 >= 0.0))
	{
		throw std::invalid_argument("couplings must be nonnegative");
	}
	if(!(alpha >= 0.0 && alpha <= std::numbers::pi / 4.0))
	{
		throw std::invalid_argument("alpha must lie in [0, pi/4]");
	}
	if(!(tau_h1 > 0.0) || !(tau_h2 > 0.0))
	{
		throw std::invalid_argument("Heisenberg times must be positive");
	}
}

double f_lr(double t, double tau_h)
{
	require_time(t);
	if(!(tau_h > 0.0))
	{
		throw std::invalid_argument("f_lr: Heisenberg time must be positive");
	}
	if(t < tau_h)
	{
		return 2.0 * t * tau_h + 2.0 * t * t * t / (3.0 * tau_h);
	}
	return 2.0 * t * t + 2.0 * tau_h * tau_h / 3.0;
}

double g_alpha(double alpha)
{
	if(!(alpha >= 0.0 && alpha <= std::numbers::pi / 4.0))
	{
		throw std::invalid_argument("g_alpha: alpha must lie in [0, pi/4]");
	}
	const double c2 = std::cos(alpha) * std::cos(alpha);
	const double s2 = std::sin(alpha) * std::sin(alpha);
	return c2 * c2 + s2 * s2;
}

double purity_lr(double t, const TheoryParams& params)
{
	params.validate();
	require_time(t);
	const double decay = params.lambda1 * params.lambda1 * f_lr(t, params.tau_h1) +
	                     params.lambda2 * params.lambda2 * f_lr(t, params.tau_h2);
	return 1.0 - (2.0 - g_alpha(params.alpha)) * decay;
}

double purity_elr(double t, const TheoryParams& params)
{
	const double asymptote = g_alpha(params.alpha) / 2.0;
	const double span = 1.0 - asymptote;
	return asymptote + span * std::exp((purity_lr(t, params) - 1.0) / span);
}

double werner_concurrence_from_purity(double purity)
{
	if(!(purity >= 0.25 && purity <= 1.0))
	{
		throw std::invalid_argument("werner_concurrence_from_purity: purity must lie in [1/4, 1]");
	}
	return std::max(0.0, (std::sqrt(12.0 * purity - 3.0) - 1.0) / 2.0);
}

double concurrence_elr(double t, const TheoryParams& params)
{
	return werner_concurrence_from_purity(purity_elr(t, params));
}

} // namespace rmtdec::theory
