#pragma once

// Closed-form linear-response predictions for purity and concurrence decay.

#include <numbers>

namespace rmtdec::theory {

inline constexpr double kDefaultHeisenbergTime = 2.0 * std::numbers::pi;

struct TheoryParams
{
	double lambda1 = 0.0;
	double lambda2 = 0.0; ///< zero for the spectator configuration
	double alpha = std::numbers::pi / 4.0;
	double tau_h1 = kDefaultHeisenbergTime;
	double tau_h2 = kDefaultHeisenbergTime;

	/// Throws std::invalid_argument if any field is outside its domain.
	void validate() const;
};

/// 2 t tau_H + 2 t^3 / (3 tau_H) below the Heisenberg time,
/// 2 t^2 + 2 tau_H^2 / 3 from it on.
double f_lr(double t, double tau_h = kDefaultHeisenbergTime);

/// cos^4 alpha + sin^4 alpha
double g_alpha(double alpha);

/// 1 - (2 - g_alpha) [lambda1^2 f(t; tau_h1) + lambda2^2 f(t; tau_h2)]
double purity_lr(double t, const TheoryParams& params);

/// Exponentiated linear response, relaxing to g_alpha / 2.
double purity_elr(double t, const TheoryParams& params);

/// Concurrence of the Werner state with purity `purity`.
double werner_concurrence_from_purity(double purity);

double concurrence_elr(double t, const TheoryParams& params);

} // namespace rmtdec::theory
