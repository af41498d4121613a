#include "rmtdec/results_io.hpp"

#include "rmtdec/errors.hpp"

#include <doctest.h>

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
		path = fs::temp_directory_path() / ("rmtdec_io_" + std::to_string(std::random_device{}()));
		fs::create_directories(path);
	}
	~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p)
{
	std::ifstream in(p, std::ios::binary);
	std::ostringstream ss;
	ss << in.rdbuf();
	return ss.str();
}

void spit(const fs::path& p, const std::string& text)
{
	std::ofstream(p, std::ios::binary) << text;
}

} // namespace

TEST_CASE("format_real")
{
	CHECK(format_real(0.0) == "0");
	CHECK(format_real(1.0) == "1");
	CHECK(format_real(0.1) == "0.10000000000000001");
	CHECK(format_real(-2.5e-300) == "-2.5e-300");
}

TEST_CASE("records files")
{
	TempDir dir;
	SUBCASE("empty list writes the header only")
	{
		const fs::path p = dir.path / "empty.csv";
		write_records_csv(p, {});
		CHECK(slurp(p) == std::string{kRecordsHeader} + "\n");
		CHECK(read_records_csv(p).empty());
	}
	SUBCASE("round trip of a full run")
	{
		RunConfig c;
		c.env_dim = 12;
		c.lambda1 = 0.3;
		c.alpha = 0.5;
		c.times = {0.0, 0.7, 3.1, 9.0};
		c.n_hamiltonians = 10;
		c.n_states = 15;
		c.master_seed = 3;
		const auto run = run_ensemble(c, {.keep_records = true});
		REQUIRE(run.records.size() == 600);
		const fs::path p = dir.path / "records.csv";
		write_records_csv(p, run.records);
		CHECK(read_records_csv(p) == run.records);

		const fs::path q = dir.path / "aggregate.csv";
		write_aggregate_csv(q, run.aggregate);
		CHECK(read_aggregate_csv(q) == run.aggregate);
	}
}

TEST_CASE("aggregate golden file")
{
	TempDir dir;
	AggregateResult r;
	r.points.push_back({0.0, 1.0, 0.0, 1.0, 0.0, 150});
	r.points.push_back({0.1, 1.0 / 3.0, 2.5e-300, 0.5, 0.015625, 150});
	const fs::path p = dir.path / "aggregate.csv";
	write_aggregate_csv(p, r);
	const fs::path golden = fs::path{RMTDEC_TEST_DATA} / "golden_aggregate.csv";
	CHECK(slurp(p) == slurp(golden));
	CHECK(read_aggregate_csv(golden) == r);
}

TEST_CASE("malformed input")
{
	TempDir dir;
	const fs::path p = dir.path / "bad.csv";
	const std::string header{kAggregateHeader};

	const auto expect_io_error = [&](const std::string& text, const std::string& needle) {
		spit(p, text);
		try
		{
			read_aggregate_csv(p);
			FAIL("expected IoError for: ", text);
		}
		catch(const IoError& e)
		{
			const std::string what = e.what();
			CHECK(what.find(p.string()) != std::string::npos);
			CHECK(what.find(needle) != std::string::npos);
		}
	};
	expect_io_error("", "");
	expect_io_error("t,P\n", "");
	expect_io_error(header + "\n0,1,0,1\n", "2");
	expect_io_error(header + "\n0,1,0,1,0,2\n0,x,0,1,0,2\n", "3");
	expect_io_error(header + "\n0,1,0,1,0,-2\n", "2");

	CHECK_THROWS_AS(read_records_csv(dir.path / "missing.csv"), IoError);
	CHECK_THROWS_AS(write_records_csv(dir.path / "no" / "such" / "dir.csv", {}), IoError);

	spit(p, std::string{kRecordsHeader} + "\n0,0,0.5,0.9\n");
	CHECK_THROWS_AS(read_records_csv(p), IoError);
}

TEST_CASE("write_csv")
{
	TempDir dir;
	const fs::path p = dir.path / "plain.csv";
	write_csv(p, "a,b", {{"1", "2"}, {"3", "4"}});
	CHECK(slurp(p) == "a,b\n1,2\n3,4\n");
}
