#include "rmtdec/ensemble.hpp"

#include "rmtdec/dynamics.hpp"
#include "rmtdec/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <thread>
#include <variant>

namespace rmtdec {

namespace {

constexpr double kBoundSlack = 1e-8;

using Dynamics = std::variant<SpectatorDynamics, TwoEnvDynamics>;

struct Sample
{
	double purity;
	double concurrence;
};

Dynamics build_dynamics(const RunConfig& config, std::uint64_t seed)
{
	RngStream rng{seed};
	if(config.mode == RunMode::Spectator)
	{
		auto h_env = sample_environment_hamiltonian(config.env_dim, rng, config.env_norm);
		auto coupling = sample_gue(2 * config.env_dim, 1.0, rng);
		const SpectatorModel model{config.env_dim, std::move(h_env), std::move(coupling), config.lambda1};
		return Dynamics{std::in_place_type<SpectatorDynamics>, model, seed};
	}
	auto h1 = sample_environment_hamiltonian(config.env_dim, rng, config.env_norm);
	auto v1 = sample_gue(2 * config.env_dim, 1.0, rng);
	auto h2 = sample_environment_hamiltonian(config.env_dim2, rng, config.env_norm);
	auto v2 = sample_gue(2 * config.env_dim2, 1.0, rng);
	const TwoEnvModel model{{config.env_dim, std::move(h1), std::move(v1), config.lambda1},
	                        {config.env_dim2, std::move(h2), std::move(v2), config.lambda2}};
	return Dynamics{std::in_place_type<TwoEnvDynamics>, model, seed};
}

std::vector<EvolvedState> evolve_realization(const Dynamics& dynamics, const RunConfig& config, std::uint64_t seed)
{
	RngStream rng{seed};
	if(const auto* spectator = std::get_if<SpectatorDynamics>(&dynamics))
	{
		const PureState chi = random_environment_state(config.env_dim, rng);
		return spectator->evolve(chi, config.alpha, config.times);
	}
	const PureState chi1 = random_environment_state(config.env_dim, rng);
	const PureState chi2 = random_environment_state(config.env_dim2, rng);
	return std::get<TwoEnvDynamics>(dynamics).evolve(chi1, chi2, config.alpha, config.times);
}

std::vector<Sample> measure(const std::vector<EvolvedState>& states)
{
	std::vector<Sample> out;
	out.reserve(states.size());
	for(const auto& s : states)
	{
		const double p = purity(s.rho);
		const double c = concurrence(s.rho);
		if(p < 0.25 - kBoundSlack || p > 1.0 + kBoundSlack || c < 0.0 || c > 1.0 + kBoundSlack)
		{
			throw NumericalError("measure out of bounds at t=" + std::to_string(s.time) + ": P=" + std::to_string(p) +
			                     ", C=" + std::to_string(c));
		}
		out.push_back({p, c});
	}
	return out;
}

/// Streaming mean and sum of squared deviations.
struct Welford
{
	std::size_t n = 0;
	double mean = 0.0;
	double m2 = 0.0;

	void add(double x)
	{
		++n;
		const double delta = x - mean;
		mean += delta / static_cast<double>(n);
		m2 += delta * (x - mean);
	}

	[[nodiscard]] double stderr_of_mean() const
	{
		if(n < 2)
		{
			return 0.0;
		}
		const double variance = m2 / static_cast<double>(n - 1);
		return std::sqrt(variance / static_cast<double>(n));
	}
};

} // namespace

void RunConfig::validate() const
{
	if(env_dim < 2)
	{
		throw std::invalid_argument(mode == RunMode::Spectator ? "N must be at least 2" : "N1 must be at least 2");
	}
	if(mode == RunMode::TwoEnv && env_dim2 < 2)
	{
		throw std::invalid_argument("N2 must be at least 2");
	}
	if(!(lambda1 >= 0.0) || !std::isfinite(lambda1))
	{
		throw std::invalid_argument("lambda1 must be a nonnegative number");
	}
	if(!(lambda2 >= 0.0) || !std::isfinite(lambda2))
	{
		throw std::invalid_argument("lambda2 must be a nonnegative number");
	}
	if(mode == RunMode::Spectator && lambda2 != 0.0)
	{
		throw std::invalid_argument("lambda2 must be 0 in spectator mode");
	}
	if(!(alpha >= 0.0 && alpha <= std::numbers::pi / 4.0))
	{
		throw std::invalid_argument("alpha must lie in [0, pi/4]");
	}
	if(times.empty())
	{
		throw std::invalid_argument("times must not be empty");
	}
	if(!std::is_sorted(times.begin(), times.end()) ||
	   std::any_of(times.begin(), times.end(), [](double t) { return !std::isfinite(t); }))
	{
		throw std::invalid_argument("times must be finite and sorted");
	}
	if(n_hamiltonians == 0 || n_hamiltonians >= kHamiltonianStream)
	{
		throw std::invalid_argument("nh must be positive and below 2^32 - 1");
	}
	if(n_states == 0 || n_states >= kHamiltonianStream)
	{
		throw std::invalid_argument("ns must be positive and below 2^32 - 1");
	}
}

std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t hamiltonian_index, std::uint64_t state_index)
{
	const std::uint64_t key = (hamiltonian_index << 32) | (state_index & 0xFFFFFFFFULL);
	return mix64(mix64(master_seed) ^ key);
}

void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& fn)
{
	if(workers == 0)
	{
		workers = std::max(1U, std::thread::hardware_concurrency());
	}
	std::vector<std::exception_ptr> errors(count);
	std::atomic<std::size_t> next{0};
	auto drain = [&] {
		for(std::size_t i = next++; i < count; i = next++)
		{
			try
			{
				fn(i);
			}
			catch(...)
			{
				errors[i] = std::current_exception();
			}
		}
	};
	const auto n_threads = static_cast<std::size_t>(std::min<std::size_t>(workers, count));
	if(n_threads <= 1)
	{
		drain();
	}
	else
	{
		std::vector<std::jthread> pool;
		pool.reserve(n_threads);
		for(std::size_t w = 0; w < n_threads; ++w)
		{
			pool.emplace_back(drain);
		}
	}
	for(const auto& e : errors)
	{
		if(e)
		{
			std::rethrow_exception(e);
		}
	}
}

EnsembleResult run_ensemble(const RunConfig& config, const RunOptions& options)
{
	config.validate();
	const std::size_t nh = config.n_hamiltonians;
	const std::size_t ns = config.n_states;
	const std::size_t nt = config.times.size();

	std::vector<std::optional<Dynamics>> dynamics(nh);
	std::vector<std::string> hamiltonian_errors(nh);
	parallel_for(nh, options.workers, [&](std::size_t h) {
		try
		{
			dynamics[h].emplace(build_dynamics(config, derive_seed(config.master_seed, h, kHamiltonianStream)));
		}
		catch(const NumericalError& e)
		{
			hamiltonian_errors[h] = e.what();
		}
	});

	// One slot per realization; filled in any order, reduced in index order.
	std::vector<std::vector<Sample>> samples(nh * ns);
	std::vector<std::string> errors(nh * ns);
	parallel_for(nh * ns, options.workers, [&](std::size_t task) {
		const std::size_t h = task / ns;
		const std::size_t s = task % ns;
		if(!dynamics[h])
		{
			errors[task] = hamiltonian_errors[h];
			return;
		}
		try
		{
			if(options.realization_hook)
			{
				options.realization_hook(h, s);
			}
			const auto states = evolve_realization(*dynamics[h], config, derive_seed(config.master_seed, h, s));
			if(options.state_observer)
			{
				options.state_observer(h, s, states);
			}
			samples[task] = measure(states);
		}
		catch(const NumericalError& e)
		{
			errors[task] = e.what();
		}
	});

	EnsembleResult result;
	for(std::size_t task = 0; task < nh * ns; ++task)
	{
		if(errors[task].empty())
		{
			continue;
		}
		const std::size_t h = task / ns;
		const std::size_t s = task % ns;
		const std::uint64_t seed =
		    dynamics[h] ? derive_seed(config.master_seed, h, s) : derive_seed(config.master_seed, h, kHamiltonianStream);
		if(!options.skip_failures)
		{
			throw RealizationError(h, s, seed, errors[task]);
		}
		result.failures.push_back({h, s, seed, errors[task]});
	}

	std::vector<Welford> purity_stats(nt);
	std::vector<Welford> concurrence_stats(nt);
	for(std::size_t task = 0; task < nh * ns; ++task)
	{
		if(!errors[task].empty())
		{
			continue;
		}
		for(std::size_t k = 0; k < nt; ++k)
		{
			purity_stats[k].add(samples[task][k].purity);
			concurrence_stats[k].add(samples[task][k].concurrence);
			if(options.keep_records)
			{
				result.records.push_back({task / ns, task % ns, config.times[k], samples[task][k].purity,
				                          samples[task][k].concurrence});
			}
		}
	}
	if(purity_stats.front().n == 0)
	{
		throw NumericalError("every realization failed");
	}
	result.aggregate.points.reserve(nt);
	for(std::size_t k = 0; k < nt; ++k)
	{
		result.aggregate.points.push_back({config.times[k], purity_stats[k].mean, purity_stats[k].stderr_of_mean(),
		                                   concurrence_stats[k].mean, concurrence_stats[k].stderr_of_mean(),
		                                   purity_stats[k].n});
	}
	return result;
}

std::vector<CPPoint> cp_trajectory(const AggregateResult& result)
{
	std::vector<CPPoint> out;
	out.reserve(result.points.size());
	for(const auto& p : result.points)
	{
		out.push_back({p.time, p.purity_mean, p.concurrence_mean});
	}
	return out;
}

} // namespace rmtdec
