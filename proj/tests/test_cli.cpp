#include "rmtdec/cli.hpp"

#include "rmtdec/results_io.hpp"
#include "rmtdec/theory.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

using namespace rmtdec;
namespace fs = std::filesystem;

namespace {

struct TempDir
{
	fs::path path;

	TempDir()
	{
		path = fs::temp_directory_path() / ("rmtdec_cli_" + std::to_string(std::random_device{}()));
		fs::create_directories(path);
	}
	~TempDir() { fs::remove_all(path); }
};

struct Outcome
{
	int code;
	std::string out;
	std::string err;
};

Outcome invoke(std::vector<std::string> args)
{
	std::ostringstream out;
	std::ostringstream err;
	const int code = cli::run(args, out, err);
	return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p)
{
	std::ifstream in(p, std::ios::binary);
	std::ostringstream ss;
	ss << in.rdbuf();
	return ss.str();
}

std::vector<std::vector<std::string>> read_rows(const fs::path& p, std::string& header)
{
	std::ifstream in(p);
	std::getline(in, header);
	std::vector<std::vector<std::string>> rows;
	std::string line;
	while(std::getline(in, line))
	{
		std::vector<std::string> cells;
		std::stringstream ss(line);
		std::string cell;
		while(std::getline(ss, cell, ','))
		{
			cells.push_back(cell);
		}
		rows.push_back(cells);
	}
	return rows;
}

const std::vector<std::string> kDecoupledBell = {"simulate", "N=64",   "lambda1=0", "lambda2=0",  "alpha=0.7853981633974483",
                                                 "nh=2",     "ns=2",   "tmax=6.283", "steps=10", "seed=1"};

} // namespace

TEST_CASE("argument parsing")
{
	TempDir dir;
	const fs::path conf = dir.path / "run.conf";
	std::ofstream(conf) << "# comment line\nN = 32\nlambda1 = 0.1   # trailing comment\n\nalpha = bell\nseed=4\n";

	const auto c = cli::parse_arguments({"simulate", "--config", conf.string(), "--lambda1", "0.2", "ns=3",
	                                     "--nh=2", "out=" + dir.path.string()});
	CHECK(c.subcommand == "simulate");
	CHECK(c.params.at("N") == "32");
	CHECK(c.params.at("lambda1") == "0.2");
	CHECK(c.params.at("alpha") == "bell");
	CHECK(c.params.at("seed") == "4");
	CHECK(c.params.at("ns") == "3");
	CHECK(c.params.at("nh") == "2");
	CHECK(c.out_dir == dir.path);
	CHECK_THROWS_WITH_AS(cli::parse_arguments({"theory", "config=" + conf.string()}),
	                     doctest::Contains("'N'"), cli::UsageError);

	CHECK_THROWS_AS(cli::parse_arguments({}), cli::UsageError);
	CHECK_THROWS_AS(cli::parse_arguments({"fly"}), cli::UsageError);
	CHECK_THROWS_AS(cli::parse_arguments({"simulate", "--N"}), cli::UsageError);
	CHECK_THROWS_AS(cli::parse_arguments({"simulate", "stray"}), cli::UsageError);
	CHECK_THROWS_AS(cli::parse_arguments({"spectra", "lambda1=0.1"}), cli::UsageError);
	CHECK_THROWS_AS(cli::parse_arguments({"simulate", "config=" + (dir.path / "missing").string()}), cli::UsageError);

	std::ofstream(dir.path / "broken.conf") << "N 32\n";
	CHECK_THROWS_AS(cli::parse_config_file(dir.path / "broken.conf"), cli::UsageError);
}

TEST_CASE("usage errors exit 2 and name the key")
{
	TempDir dir;
	const std::string out = "out=" + dir.path.string();
	auto r = invoke({"simulate", "N=8", "bogus=1", out});
	CHECK(r.code == cli::kUsageError);
	CHECK(r.err.find("bogus") != std::string::npos);

	r = invoke({"simulate", "N=8", "lambda1=abc", "alpha=bell", "nh=1", "ns=1", "seed=1", "tmax=1", "steps=2", out});
	CHECK(r.code == cli::kUsageError);
	CHECK(r.err.find("lambda1") != std::string::npos);

	r = invoke({"simulate", "N=8", "lambda1=0.1", "alpha=1.2", "nh=1", "ns=1", "seed=1", "tmax=1", "steps=2", out});
	CHECK(r.code == cli::kUsageError);
	CHECK(r.err.find("alpha") != std::string::npos);

	r = invoke({"simulate", "N=8", "lambda1=0.1", "alpha=bell", "nh=0", "ns=1", "seed=1", "tmax=1", "steps=2", out});
	CHECK(r.code == cli::kUsageError);
	CHECK(r.err.find("nh") != std::string::npos);

	r = invoke({"simulate", "N=8", "lambda1=0.1", "alpha=bell", "nh=1", "ns=1", "tmax=1", "steps=2", out});
	CHECK(r.code == cli::kUsageError);
	CHECK(r.err.find("seed") != std::string::npos);

	r = invoke({"theory", "lambda1=0.1", "alpha=bell", "times=0,2,1", out});
	CHECK(r.code == cli::kUsageError);
	CHECK(r.err.find("times") != std::string::npos);

	r = invoke({"simulate", "N=8", "lambda1=0.1", "lambda2=0.1", "alpha=bell", "nh=1", "ns=1", "seed=1", "tmax=1",
	            "steps=2", out});
	CHECK(r.code == cli::kUsageError);
	CHECK(r.err.find("lambda2") != std::string::npos);

	std::ofstream(dir.path / "occupied") << "x";
	r = invoke({"theory", "lambda1=0.1", "alpha=bell", "tmax=1", "steps=2", "out=" + (dir.path / "occupied").string()});
	CHECK(r.code == cli::kUsageError);

	CHECK(invoke({"--help"}).code == cli::kSuccess);
}

TEST_CASE("simulate")
{
	TempDir dir;
	SUBCASE("decoupled Bell pair")
	{
		auto args = kDecoupledBell;
		args.push_back("out=" + dir.path.string());
		const auto r = invoke(args);
		REQUIRE(r.code == cli::kSuccess);
		CHECK(r.out.find("P_mean=1") != std::string::npos);
		CHECK(r.out.find("wall time") != std::string::npos);
		const auto agg = read_aggregate_csv(dir.path / "aggregate.csv");
		REQUIRE(agg.points.size() == 11);
		CHECK(agg.points.back().time == doctest::Approx(6.283));
		for(const auto& p : agg.points)
		{
			CHECK(std::abs(p.purity_mean - 1.0) <= 1e-10);
			CHECK(std::abs(p.concurrence_mean - 1.0) <= 1e-10);
			CHECK(p.count == 4);
		}
		CHECK(slurp(dir.path / "aggregate.csv").rfind(std::string{kAggregateHeader} + "\n", 0) == 0);
	}
	SUBCASE("repeat runs are byte-identical")
	{
		std::vector<std::string> args = {"simulate", "N=16", "lambda1=0.3", "alpha=bell", "nh=3", "ns=2",
		                                 "times=0,0.5,2,7", "seed=9", "records=1", "rho_dump=1"};
		std::vector<std::string> contents;
		for(const std::string workers : {"1", "1", "4"})
		{
			const fs::path out = dir.path / ("w" + workers + std::to_string(contents.size()));
			auto a = args;
			a.push_back("workers=" + workers);
			a.push_back("out=" + out.string());
			REQUIRE(invoke(a).code == cli::kSuccess);
			contents.push_back(slurp(out / "aggregate.csv") + slurp(out / "records.csv") +
			                   slurp(out / "rho_h0_s0.txt"));
		}
		CHECK(contents[0] == contents[1]);
		CHECK(contents[0] == contents[2]);

		std::string header;
		const auto rows = read_rows(dir.path / "w10" / "records.csv", header);
		CHECK(header == kRecordsHeader);
		CHECK(rows.size() == 3 * 2 * 4);
		const auto rho_lines = read_rows(dir.path / "w10" / "rho_h0_s0.txt", header);
		CHECK(rho_lines.size() == 3);
	}
	SUBCASE("two-environment mode")
	{
		const auto r = invoke({"simulate", "mode=two-env", "N1=12", "N2=20", "lambda1=0.2", "lambda2=0.1",
		                       "alpha=product", "nh=2", "ns=2", "tmax=3", "steps=3", "seed=2",
		                       "out=" + dir.path.string()});
		REQUIRE(r.code == cli::kSuccess);
		const auto agg = read_aggregate_csv(dir.path / "aggregate.csv");
		CHECK(agg.points.size() == 4);
		CHECK(agg.points.back().purity_mean < 1.0);
		CHECK(agg.points.back().concurrence_mean == 0.0);
	}
	SUBCASE("numerical failure exits 3 with a replay seed")
	{
		const auto r = invoke({"simulate", "N=8", "lambda1=1e308", "alpha=bell", "nh=1", "ns=1", "tmax=1", "steps=2",
		                       "seed=1", "out=" + dir.path.string()});
		CHECK(r.code == cli::kNumericalFailure);
		CHECK(r.err.find("replay seed") != std::string::npos);
	}
}

TEST_CASE("theory")
{
	TempDir dir;
	const std::string out = "out=" + dir.path.string();
	std::string header;

	REQUIRE(invoke({"theory", "lambda1=0.025", "alpha=bell", "times=0,1", out}).code == cli::kSuccess);
	auto rows = read_rows(dir.path / "theory.csv", header);
	CHECK(header == "t,P_LR,P_ELR,C_ELR");
	REQUIRE(rows.size() == 2);
	CHECK(rows[0] == std::vector<std::string>{"0", "1", "1", "1"});
	CHECK(std::stod(rows[1][1]) == doctest::Approx(0.98812).epsilon(1e-5));

	REQUIRE(invoke({"theory", "lambda1=0", "alpha=0.3", "tmax=20", "steps=7", out}).code == cli::kSuccess);
	rows = read_rows(dir.path / "theory.csv", header);
	REQUIRE(rows.size() == 8);
	for(const auto& row : rows)
	{
		CHECK(row[1] == "1");
		CHECK(row[2] == "1");
		CHECK(row[3] == "1");
	}
}

TEST_CASE("cpdiagram")
{
	TempDir dir;
	const auto r = invoke({"cpdiagram", "N=8,12", "lambda1=0.3", "alpha=bell", "nh=2", "ns=2", "tmax=12",
	                       "steps=6", "seed=5", "out=" + dir.path.string()});
	REQUIRE(r.code == cli::kSuccess);

	std::string header;
	const auto ref = read_rows(dir.path / "werner_reference.csv", header);
	CHECK(header == "P,C");
	REQUIRE(ref.size() == 200);
	CHECK(std::stod(ref.front()[0]) == 0.25);
	CHECK(std::stod(ref.back()[0]) == 1.0);
	CHECK(std::stod(ref.back()[1]) == 1.0);
	for(const auto& row : ref)
	{
		const double p = std::stod(row[0]);
		const double c = std::stod(row[1]);
		if(p <= 1.0 / 3.0)
		{
			CHECK(c == 0.0);
		}
		else
		{
			CHECK(c > 0.0);
			CHECK(c == doctest::Approx(theory::werner_concurrence_from_purity(p)).epsilon(1e-15));
		}
	}
	CHECK(theory::werner_concurrence_from_purity(1.0 / 3.0) == doctest::Approx(0.0).epsilon(1e-12));

	for(const std::string n : {"8", "12"})
	{
		const auto rows = read_rows(dir.path / ("cp_N" + n + ".csv"), header);
		CHECK(header == "t,P_mean,C_mean");
		REQUIRE(rows.size() == 7);
		CHECK(rows[0][0] == "0");
		CHECK(std::stod(rows[0][1]) == doctest::Approx(1.0).epsilon(1e-12));
		CHECK(std::stod(rows[0][2]) == doctest::Approx(1.0).epsilon(1e-12));
	}
}

TEST_CASE("spectra")
{
	TempDir dir;
	const auto r = invoke({"spectra", "N=64", "samples=10", "seed=3", "out=" + dir.path.string()});
	REQUIRE(r.code == cli::kSuccess);
	CHECK(r.out.find("640 eigenvalues") != std::string::npos);

	std::string header;
	const auto eig = read_rows(dir.path / "eigenvalues.csv", header);
	CHECK(header == "sample,E");
	CHECK(eig.size() == 640);
	CHECK(eig.back()[0] == "9");

	const auto hist = read_rows(dir.path / "spacing_histogram.csv", header);
	CHECK(header == "bin_lo,bin_hi,count,fraction");
	CHECK(hist.size() == 40);
	double total = 0.0;
	for(const auto& row : hist)
	{
		total += std::stod(row[3]);
	}
	CHECK(total <= 1.0 + 1e-12);
	CHECK(total > 0.95);
}

TEST_CASE("validate")
{
	auto r = invoke({"validate", "N=16", "samples=2", "force_fail=1"});
	CHECK(r.code == cli::kValidationFailure);
	CHECK(r.out.find("FAIL forced_failure") != std::string::npos);
	CHECK(r.out.find("PASS spectator_full_space") != std::string::npos);
}

TEST_CASE("cpdiagram collapse onto the Werner curve improves with N")
{
	TempDir dir;
	REQUIRE(invoke({"cpdiagram", "N=16,64,128", "lambda1=0.3", "alpha=bell", "nh=10", "ns=15", "tmax=3.14159",
	                "steps=40", "seed=1", "out=" + dir.path.string()})
	            .code == cli::kSuccess);
	std::vector<double> worst;
	for(const std::string n : {"16", "64", "128"})
	{
		std::string header;
		double w = 0.0;
		for(const auto& row : read_rows(dir.path / ("cp_N" + n + ".csv"), header))
		{
			const double p = std::clamp(std::stod(row[1]), 0.25, 1.0);
			w = std::max(w, std::abs(std::stod(row[2]) - theory::werner_concurrence_from_purity(p)));
		}
		worst.push_back(w);
	}
	MESSAGE("max Werner deviation for N = 16, 64, 128: ", worst[0], ", ", worst[1], ", ", worst[2]);
	CHECK(worst[1] <= worst[0]);
	CHECK(worst[2] <= worst[1]);
}

TEST_CASE("shipped configs parse")
{
	const fs::path dir{RMTDEC_CONFIG_DIR};
	for(const auto& [file, sub] : std::vector<std::pair<std::string, std::string>>{{"fig1_crossover.conf", "simulate"},
	                                                                               {"fig1_fgr.conf", "simulate"},
	                                                                               {"fig2_cp.conf", "cpdiagram"},
	                                                                               {"fig3_concurrence.conf", "simulate"}})
	{
		CAPTURE(file);
		const auto c = cli::parse_arguments({sub, "--config", (dir / file).string()});
		CHECK(c.params.at("N").size() > 0);
		CHECK(c.params.at("lambda1").size() > 0);
	}
}
