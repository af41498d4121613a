#include "rmtdec/cli.hpp"

#include "rmtdec/ensemble.hpp"
#include "rmtdec/errors.hpp"
#include "rmtdec/oracles.hpp"
#include "rmtdec/results_io.hpp"
#include "rmtdec/theory.hpp"

#include <algorithm>
#include <cerrno>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <numbers>
#include <ostream>
#include <set>
#include <sstream>

namespace rmtdec::cli {

namespace {

const std::map<std::string, std::set<std::string>>& allowed_keys()
{
	static const std::set<std::string> grid = {"tmax", "steps", "times"};
	static const auto with_grid = [](std::set<std::string> keys) {
		keys.insert(grid.begin(), grid.end());
		keys.insert("out");
		return keys;
	};
	static const std::map<std::string, std::set<std::string>> keys = {
	    {"simulate", with_grid({"N", "N1", "N2", "lambda1", "lambda2", "alpha", "nh", "ns", "seed", "mode", "workers",
	                            "env_norm", "records", "skip_failures", "rho_dump"})},
	    {"theory", with_grid({"lambda1", "lambda2", "alpha", "tau_h1", "tau_h2"})},
	    {"cpdiagram", with_grid({"N", "lambda1", "alpha", "nh", "ns", "seed", "workers", "env_norm"})},
	    {"spectra", {"N", "samples", "seed", "env_norm", "bins", "bin_width", "out"}},
	    {"validate", {"N", "samples", "seed", "force_fail", "out"}},
	};
	return keys;
}

std::string trim(const std::string& s)
{
	const auto first = s.find_first_not_of(" \t\r");
	if(first == std::string::npos)
	{
		return {};
	}
	const auto last = s.find_last_not_of(" \t\r");
	return s.substr(first, last - first + 1);
}

/// Typed access to the merged parameter map.
class Params
{
public:
	explicit Params(const CliConfig& config) : map_{config.params} {}

	[[nodiscard]] bool has(const std::string& key) const { return map_.count(key) != 0; }

	[[nodiscard]] const std::string& raw(const std::string& key) const
	{
		const auto it = map_.find(key);
		if(it == map_.end())
		{
			throw UsageError("missing required key '" + key + "'");
		}
		return it->second;
	}

	[[nodiscard]] double real(const std::string& key) const { return parse_real(key, raw(key)); }
	[[nodiscard]] double real(const std::string& key, double fallback) const
	{
		return has(key) ? real(key) : fallback;
	}

	[[nodiscard]] std::uint64_t integer(const std::string& key) const { return parse_integer(key, raw(key)); }
	[[nodiscard]] std::uint64_t integer(const std::string& key, std::uint64_t fallback) const
	{
		return has(key) ? integer(key) : fallback;
	}

	[[nodiscard]] bool flag(const std::string& key) const
	{
		if(!has(key))
		{
			return false;
		}
		const std::string& v = raw(key);
		if(v == "1" || v == "true" || v == "yes")
		{
			return true;
		}
		if(v == "0" || v == "false" || v == "no")
		{
			return false;
		}
		throw UsageError("key '" + key + "': expected a boolean, got '" + v + "'");
	}

	[[nodiscard]] double alpha() const
	{
		const std::string& v = raw("alpha");
		double a = 0.0;
		if(v == "bell")
		{
			a = std::numbers::pi / 4.0;
		}
		else if(v == "product")
		{
			a = 0.0;
		}
		else
		{
			a = parse_real("alpha", v);
		}
		// Accept the printed value of pi/4 even when it rounds just above.
		if(a > std::numbers::pi / 4.0 && a < std::numbers::pi / 4.0 + 1e-12)
		{
			a = std::numbers::pi / 4.0;
		}
		if(!(a >= 0.0 && a <= std::numbers::pi / 4.0))
		{
			throw UsageError("key 'alpha': must lie in [0, pi/4], got '" + v + "'");
		}
		return a;
	}

	[[nodiscard]] std::vector<std::uint64_t> integer_list(const std::string& key) const
	{
		std::vector<std::uint64_t> out;
		for(const auto& item : split_list(raw(key)))
		{
			out.push_back(parse_integer(key, item));
		}
		return out;
	}

	[[nodiscard]] std::vector<double> time_grid() const
	{
		if(has("times"))
		{
			if(has("tmax") || has("steps"))
			{
				throw UsageError("key 'times': cannot be combined with tmax/steps");
			}
			std::vector<double> out;
			for(const auto& item : split_list(raw("times")))
			{
				out.push_back(parse_real("times", item));
			}
			if(out.empty() || !std::is_sorted(out.begin(), out.end()) || out.front() < 0.0)
			{
				throw UsageError("key 'times': expected a sorted, nonnegative, non-empty list");
			}
			return out;
		}
		const double tmax = real("tmax");
		const std::uint64_t steps = integer("steps");
		if(!(tmax >= 0.0))
		{
			throw UsageError("key 'tmax': must be nonnegative");
		}
		if(steps == 0)
		{
			throw UsageError("key 'steps': must be positive");
		}
		std::vector<double> out(steps + 1);
		for(std::uint64_t k = 0; k <= steps; ++k)
		{
			out[k] = tmax * static_cast<double>(k) / static_cast<double>(steps);
		}
		return out;
	}

	[[nodiscard]] EnvironmentNormalization env_norm() const
	{
		if(!has("env_norm"))
		{
			return EnvironmentNormalization::LevelWeighted;
		}
		const std::string& v = raw("env_norm");
		if(v == "weighted")
		{
			return EnvironmentNormalization::LevelWeighted;
		}
		if(v == "center")
		{
			return EnvironmentNormalization::BandCenter;
		}
		throw UsageError("key 'env_norm': expected 'weighted' or 'center', got '" + v + "'");
	}

	[[nodiscard]] unsigned workers() const { return static_cast<unsigned>(integer("workers", 0)); }

private:
	static std::vector<std::string> split_list(const std::string& s)
	{
		std::vector<std::string> out;
		std::string item;
		std::istringstream is(s);
		while(std::getline(is, item, ','))
		{
			item = trim(item);
			if(!item.empty())
			{
				out.push_back(item);
			}
		}
		return out;
	}

	static double parse_real(const std::string& key, const std::string& v)
	{
		char* end = nullptr;
		errno = 0;
		const double x = std::strtod(v.c_str(), &end);
		if(v.empty() || end != v.c_str() + v.size() || errno == ERANGE || !std::isfinite(x))
		{
			throw UsageError("key '" + key + "': expected a number, got '" + v + "'");
		}
		return x;
	}

	static std::uint64_t parse_integer(const std::string& key, const std::string& v)
	{
		char* end = nullptr;
		errno = 0;
		const unsigned long long x = std::strtoull(v.c_str(), &end, 10);
		if(v.empty() || v.front() == '-' || end != v.c_str() + v.size() || errno == ERANGE)
		{
			throw UsageError("key '" + key + "': expected a nonnegative integer, got '" + v + "'");
		}
		return x;
	}

	std::map<std::string, std::string> map_;
};

void prepare_out_dir(const std::filesystem::path& dir)
{
	std::error_code ec;
	std::filesystem::create_directories(dir, ec);
	if(ec)
	{
		throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
	}
}

/// Maps run-config validation messages ("N must be ...") back to usage errors.
void validate_run_config(const RunConfig& rc)
{
	try
	{
		rc.validate();
	}
	catch(const std::invalid_argument& e)
	{
		throw UsageError(std::string("key '") + [&] {
			const std::string msg = e.what();
			return msg.substr(0, msg.find(' '));
		}() + "': " + e.what());
	}
}

RunConfig run_config_from(const Params& p, bool allow_two_env)
{
	RunConfig rc;
	const std::string mode = p.has("mode") ? p.raw("mode") : "spectator";
	if(mode == "spectator")
	{
		rc.mode = RunMode::Spectator;
		rc.env_dim = p.integer("N");
		if(p.has("N1") || p.has("N2"))
		{
			throw UsageError("key 'N1': only valid with mode=two-env");
		}
	}
	else if(mode == "two-env" && allow_two_env)
	{
		rc.mode = RunMode::TwoEnv;
		if(p.has("N"))
		{
			rc.env_dim = rc.env_dim2 = p.integer("N");
		}
		if(p.has("N1"))
		{
			rc.env_dim = p.integer("N1");
		}
		if(p.has("N2"))
		{
			rc.env_dim2 = p.integer("N2");
		}
		if(!p.has("N") && !(p.has("N1") && p.has("N2")))
		{
			throw UsageError("missing required key 'N1' (or 'N')");
		}
	}
	else
	{
		throw UsageError("key 'mode': expected 'spectator' or 'two-env', got '" + mode + "'");
	}
	rc.lambda1 = p.real("lambda1");
	rc.lambda2 = p.real("lambda2", 0.0);
	rc.alpha = p.alpha();
	rc.times = p.time_grid();
	rc.n_hamiltonians = p.integer("nh");
	rc.n_states = p.integer("ns");
	rc.master_seed = p.integer("seed");
	rc.env_norm = p.env_norm();
	validate_run_config(rc);
	return rc;
}

double seconds_since(std::chrono::steady_clock::time_point start)
{
	return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

} // namespace

std::string usage()
{
	return "usage: rmtdec <simulate|theory|cpdiagram|spectra|validate> [key=value | --key value ...]\n"
	       "       [--config file]   (key = value lines, '#' comments; flags override the file)\n"
	       "\n"
	       "  simulate   N|N1,N2 lambda1 [lambda2] alpha nh ns seed (tmax steps | times) [mode workers\n"
	       "             env_norm records skip_failures rho_dump out]\n"
	       "  theory     lambda1 [lambda2] alpha [tau_h1 tau_h2] (tmax steps | times) [out]\n"
	       "  cpdiagram  N=16,64,128 lambda1 alpha nh ns seed (tmax steps | times) [workers env_norm out]\n"
	       "  spectra    N samples seed [bins bin_width env_norm out]\n"
	       "  validate   [N samples seed force_fail]\n";
}

std::map<std::string, std::string> parse_config_file(const std::filesystem::path& path)
{
	std::ifstream in(path);
	if(!in)
	{
		throw UsageError("cannot read config file '" + path.string() + "'");
	}
	std::map<std::string, std::string> out;
	std::string line;
	std::size_t line_no = 0;
	while(std::getline(in, line))
	{
		++line_no;
		line = trim(line.substr(0, line.find('#')));
		if(line.empty())
		{
			continue;
		}
		const auto eq = line.find('=');
		if(eq == std::string::npos)
		{
			throw UsageError(path.string() + ":" + std::to_string(line_no) + ": expected 'key = value'");
		}
		const std::string key = trim(line.substr(0, eq));
		if(key.empty())
		{
			throw UsageError(path.string() + ":" + std::to_string(line_no) + ": empty key");
		}
		out[key] = trim(line.substr(eq + 1));
	}
	return out;
}

CliConfig parse_arguments(const std::vector<std::string>& args)
{
	if(args.empty())
	{
		throw UsageError("missing subcommand");
	}
	CliConfig config;
	config.subcommand = args.front();
	const auto allowed = allowed_keys().find(config.subcommand);
	if(allowed == allowed_keys().end())
	{
		throw UsageError("unknown subcommand '" + config.subcommand + "'");
	}

	std::map<std::string, std::string> flags;
	std::string config_file;
	for(std::size_t i = 1; i < args.size(); ++i)
	{
		std::string arg = args[i];
		std::string key;
		std::string value;
		const bool dashed = arg.rfind("--", 0) == 0;
		if(dashed)
		{
			arg = arg.substr(2);
		}
		const auto eq = arg.find('=');
		if(eq != std::string::npos)
		{
			key = arg.substr(0, eq);
			value = arg.substr(eq + 1);
		}
		else if(dashed)
		{
			if(i + 1 >= args.size())
			{
				throw UsageError("key '" + arg + "': missing value");
			}
			key = arg;
			value = args[++i];
		}
		else
		{
			throw UsageError("unexpected argument '" + arg + "'");
		}
		if(key == "config")
		{
			config_file = value;
		}
		else
		{
			flags[key] = value;
		}
	}

	if(!config_file.empty())
	{
		config.params = parse_config_file(config_file);
	}
	for(auto& [k, v] : flags)
	{
		config.params[k] = v;
	}
	for(const auto& [k, v] : config.params)
	{
		if(allowed->second.count(k) == 0)
		{
			throw UsageError("unknown key '" + k + "' for subcommand '" + config.subcommand + "'");
		}
	}
	const auto out = config.params.find("out");
	config.out_dir = out == config.params.end() ? std::filesystem::path{"."} : std::filesystem::path{out->second};
	return config;
}

int cmd_simulate(const CliConfig& config, std::ostream& out)
{
	const Params p{config};
	const RunConfig rc = run_config_from(p, true);
	RunOptions options;
	options.workers = p.workers();
	options.keep_records = p.flag("records");
	options.skip_failures = p.flag("skip_failures");

	std::vector<EvolvedState> dumped;
	if(p.flag("rho_dump"))
	{
		options.state_observer = [&dumped](std::size_t h, std::size_t s, const std::vector<EvolvedState>& states) {
			if(h == 0 && s == 0)
			{
				dumped = states;
			}
		};
	}

	prepare_out_dir(config.out_dir);
	const auto start = std::chrono::steady_clock::now();
	const EnsembleResult result = run_ensemble(rc, options);
	const double wall = seconds_since(start);

	write_aggregate_csv(config.out_dir / "aggregate.csv", result.aggregate);
	if(options.keep_records)
	{
		write_records_csv(config.out_dir / "records.csv", result.records);
	}
	if(!dumped.empty())
	{
		std::ofstream rho_out(config.out_dir / "rho_h0_s0.txt", std::ios::binary | std::ios::trunc);
		for(const auto& e : dumped)
		{
			rho_out << format_real(e.time) << ' ' << e.rho.serialize() << '\n';
		}
		if(!rho_out)
		{
			throw IoError("write to '" + (config.out_dir / "rho_h0_s0.txt").string() + "' failed");
		}
	}
	for(const auto& f : result.failures)
	{
		out << "skipped realization h=" << f.hamiltonian_index << " s=" << f.state_index << " seed=" << f.seed
		    << ": " << f.message << '\n';
	}
	const AggregatePoint& last = result.aggregate.points.back();
	out << "simulate: " << rc.n_hamiltonians * rc.n_states - result.failures.size() << " realizations, "
	    << rc.times.size() << " times\n"
	    << "final t=" << format_real(last.time) << " P_mean=" << format_real(last.purity_mean)
	    << " C_mean=" << format_real(last.concurrence_mean) << '\n'
	    << "wall time " << wall << " s\n";
	return kSuccess;
}

int cmd_theory(const CliConfig& config, std::ostream& out)
{
	const Params p{config};
	theory::TheoryParams tp;
	tp.lambda1 = p.real("lambda1");
	tp.lambda2 = p.real("lambda2", 0.0);
	tp.alpha = p.alpha();
	tp.tau_h1 = p.real("tau_h1", theory::kDefaultHeisenbergTime);
	tp.tau_h2 = p.real("tau_h2", theory::kDefaultHeisenbergTime);
	try
	{
		tp.validate();
	}
	catch(const std::invalid_argument& e)
	{
		throw UsageError(e.what());
	}
	const auto times = p.time_grid();

	std::vector<std::vector<std::string>> rows;
	for(const double t : times)
	{
		rows.push_back({format_real(t), format_real(theory::purity_lr(t, tp)), format_real(theory::purity_elr(t, tp)),
		                format_real(theory::concurrence_elr(t, tp))});
	}
	prepare_out_dir(config.out_dir);
	write_csv(config.out_dir / "theory.csv", "t,P_LR,P_ELR,C_ELR", rows);
	out << "theory: " << times.size() << " rows written to " << (config.out_dir / "theory.csv").string() << '\n';
	return kSuccess;
}

int cmd_cpdiagram(const CliConfig& config, std::ostream& out)
{
	const Params p{config};
	const auto sizes = p.integer_list("N");
	if(sizes.empty())
	{
		throw UsageError("key 'N': expected a comma-separated list of sizes");
	}
	prepare_out_dir(config.out_dir);

	std::vector<std::vector<std::string>> reference;
	for(int k = 0; k < 200; ++k)
	{
		const double purity = 0.25 + 0.75 * k / 199.0;
		reference.push_back({format_real(purity), format_real(theory::werner_concurrence_from_purity(purity))});
	}
	write_csv(config.out_dir / "werner_reference.csv", "P,C", reference);

	for(const std::uint64_t n : sizes)
	{
		CliConfig single = config;
		single.params["N"] = std::to_string(n);
		const RunConfig rc = run_config_from(Params{single}, false);
		RunOptions options;
		options.workers = p.workers();
		const EnsembleResult result = run_ensemble(rc, options);

		std::vector<std::vector<std::string>> rows;
		double worst = 0.0;
		for(const CPPoint& pt : cp_trajectory(result.aggregate))
		{
			rows.push_back({format_real(pt.time), format_real(pt.purity), format_real(pt.concurrence)});
			const double clamped = std::clamp(pt.purity, 0.25, 1.0);
			worst = std::max(worst, std::abs(pt.concurrence - theory::werner_concurrence_from_purity(clamped)));
		}
		const auto path = config.out_dir / ("cp_N" + std::to_string(n) + ".csv");
		write_csv(path, "t,P_mean,C_mean", rows);
		out << "cpdiagram: N=" << n << " max |C - C_Werner(P)| = " << worst << " -> " << path.string() << '\n';
	}
	return kSuccess;
}

int cmd_spectra(const CliConfig& config, std::ostream& out)
{
	const Params p{config};
	const std::uint64_t n = p.integer("N");
	const std::uint64_t samples = p.integer("samples");
	const std::uint64_t seed = p.integer("seed");
	const std::uint64_t bins = p.integer("bins", 40);
	const double bin_width = p.real("bin_width", 0.1);
	const auto norm = p.env_norm();
	if(n < 4)
	{
		throw UsageError("key 'N': must be at least 4");
	}
	if(samples == 0 || bins == 0 || !(bin_width > 0.0))
	{
		throw UsageError("key 'samples': samples, bins and bin_width must be positive");
	}

	std::vector<std::vector<std::string>> eigen_rows;
	std::vector<std::size_t> histogram(bins, 0);
	std::size_t spacing_count = 0;
	double spacing_sum = 0.0;
	double tau_sum = 0.0;
	for(std::uint64_t s = 0; s < samples; ++s)
	{
		RngStream rng{derive_seed(seed, s, kHamiltonianStream)};
		const auto decomp = spectral_decompose(sample_environment_hamiltonian(n, rng, norm), seed);
		const std::vector<double> e(decomp.eigenvalues.data(), decomp.eigenvalues.data() + decomp.eigenvalues.size());
		for(const double x : e)
		{
			eigen_rows.push_back({std::to_string(s), format_real(x)});
		}
		spacing_sum += mean_level_spacing_center(e);
		tau_sum += effective_heisenberg_time(e);
		for(const double gap : unfolded_central_spacings(e))
		{
			++spacing_count;
			const auto bin = static_cast<std::size_t>(gap / bin_width);
			if(bin < bins)
			{
				++histogram[bin];
			}
		}
	}

	std::vector<std::vector<std::string>> hist_rows;
	for(std::size_t b = 0; b < bins; ++b)
	{
		hist_rows.push_back({format_real(bin_width * static_cast<double>(b)),
		                     format_real(bin_width * static_cast<double>(b + 1)), std::to_string(histogram[b]),
		                     format_real(static_cast<double>(histogram[b]) / static_cast<double>(spacing_count))});
	}
	prepare_out_dir(config.out_dir);
	write_csv(config.out_dir / "eigenvalues.csv", "sample,E", eigen_rows);
	write_csv(config.out_dir / "spacing_histogram.csv", "bin_lo,bin_hi,count,fraction", hist_rows);

	const auto sampled = static_cast<double>(samples);
	out << "spectra: " << eigen_rows.size() << " eigenvalues from " << samples << " samples of N=" << n << '\n'
	    << "mean central spacing " << spacing_sum / sampled << '\n'
	    << "effective Heisenberg time " << tau_sum / sampled << " (2 pi = " << 2.0 * std::numbers::pi << ")\n"
	    << "unfolded spacings below " << bin_width << ": "
	    << static_cast<double>(histogram[0]) / static_cast<double>(spacing_count) << '\n';
	return kSuccess;
}

int cmd_validate(const CliConfig& config, std::ostream& out)
{
	const Params p{config};
	oracles::OracleSuiteOptions options;
	options.spectral_dim = p.integer("N", options.spectral_dim);
	options.spectral_samples = p.integer("samples", options.spectral_samples);
	options.seed = p.integer("seed", options.seed);
	if(options.spectral_dim < 2 || options.spectral_samples == 0)
	{
		throw UsageError("key 'N': oracle size and sample count must be positive");
	}
	auto outcomes = oracles::run_oracle_suite(options);
	if(p.flag("force_fail"))
	{
		outcomes.push_back({"forced_failure", false, "requested by force_fail"});
	}
	std::size_t failed = 0;
	for(const auto& o : outcomes)
	{
		out << (o.passed ? "PASS " : "FAIL ") << o.name << ": " << o.detail << '\n';
		failed += o.passed ? 0 : 1;
	}
	if(failed != 0)
	{
		out << failed << " oracle(s) failed:";
		for(const auto& o : outcomes)
		{
			if(!o.passed)
			{
				out << ' ' << o.name;
			}
		}
		out << '\n';
		return kValidationFailure;
	}
	out << "all " << outcomes.size() << " oracles passed\n";
	return kSuccess;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
	try
	{
		if(!args.empty() && (args.front() == "-h" || args.front() == "--help" || args.front() == "help"))
		{
			out << usage();
			return kSuccess;
		}
		const CliConfig config = parse_arguments(args);
		if(config.subcommand == "simulate")
		{
			return cmd_simulate(config, out);
		}
		if(config.subcommand == "theory")
		{
			return cmd_theory(config, out);
		}
		if(config.subcommand == "cpdiagram")
		{
			return cmd_cpdiagram(config, out);
		}
		if(config.subcommand == "spectra")
		{
			return cmd_spectra(config, out);
		}
		return cmd_validate(config, out);
	}
	catch(const UsageError& e)
	{
		err << "error: " << e.what() << '\n' << usage();
		return kUsageError;
	}
	catch(const RealizationError& e)
	{
		err << "numerical failure: " << e.what() << "\nreplay seed: " << e.seed() << '\n';
		return kNumericalFailure;
	}
	catch(const NumericalError& e)
	{
		err << "numerical failure: " << e.what() << '\n';
		return kNumericalFailure;
	}
	catch(const IoError& e)
	{
		err << "i/o error: " << e.what() << '\n';
		return kUsageError;
	}
}

} // namespace rmtdec::cli
