#pragma once

// Monte Carlo harness: realizations of (H_env, V) x initial environment states,
// evolved on a fixed time grid and reduced to per-time means and standard errors.

#include "rmtdec/dynamics.hpp"
#include "rmtdec/qstate.hpp"
#include "rmtdec/rmt.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace rmtdec {

enum class RunMode
{
	Spectator, ///< qubit 2 uncoupled; one environment
	TwoEnv,    ///< each qubit coupled to its own environment
};

struct RunConfig
{
	RunMode mode = RunMode::Spectator;
	std::size_t env_dim = 128;  ///< N, or N1 in two-environment mode
	std::size_t env_dim2 = 128; ///< N2, two-environment mode only
	double lambda1 = 0.0;
	double lambda2 = 0.0;
	double alpha = 0.0;
	std::vector<double> times;
	std::size_t n_hamiltonians = 1;
	std::size_t n_states = 1;
	std::uint64_t master_seed = 0;
	EnvironmentNormalization env_norm = EnvironmentNormalization::LevelWeighted;

	/// Throws std::invalid_argument naming the offending field.
	void validate() const;
};

struct TimeSeriesRecord
{
	std::size_t hamiltonian_index;
	std::size_t state_index;
	double time;
	double purity;
	double concurrence;

	friend bool operator==(const TimeSeriesRecord&, const TimeSeriesRecord&) = default;
};

struct AggregatePoint
{
	double time;
	double purity_mean;
	double purity_stderr;
	double concurrence_mean;
	double concurrence_stderr;
	std::size_t count;

	friend bool operator==(const AggregatePoint&, const AggregatePoint&) = default;
};

struct AggregateResult
{
	std::vector<AggregatePoint> points;

	friend bool operator==(const AggregateResult&, const AggregateResult&) = default;
};

struct RealizationFailure
{
	std::size_t hamiltonian_index;
	std::size_t state_index;
	std::uint64_t seed;
	std::string message;
};

struct RunOptions
{
	unsigned workers = 0; ///< 0 = hardware concurrency
	bool keep_records = false;
	/// Drop failing realizations from the averages instead of aborting.
	bool skip_failures = false;
	/// Called before each realization; a throwing hook counts as a numerical failure.
	std::function<void(std::size_t, std::size_t)> realization_hook;
	/// Optional per-realization observer of the evolved states, called from worker threads.
	std::function<void(std::size_t, std::size_t, const std::vector<EvolvedState>&)> state_observer;
};

struct EnsembleResult
{
	AggregateResult aggregate;
	std::vector<TimeSeriesRecord> records; ///< ordered by (h, s, t); empty unless requested
	std::vector<RealizationFailure> failures;
};

/// Reserved state index for the Hamiltonian stream of each realization.
inline constexpr std::uint64_t kHamiltonianStream = 0xFFFFFFFFULL;

/// Injective in (hamiltonian_index, state_index) for indices below 2^32.
std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t hamiltonian_index, std::uint64_t state_index);

/// Throws RealizationError on the first failure in (h, s) order unless
/// options.skip_failures is set.
EnsembleResult run_ensemble(const RunConfig& config, const RunOptions& options = {});

std::vector<CPPoint> cp_trajectory(const AggregateResult& result);

/// Runs fn(i) for i in [0, count) on up to `workers` threads. The first
/// exception in index order is rethrown after all tasks finish.
void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& fn);

} // namespace rmtdec
