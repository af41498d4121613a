#include "rmtdec/results_io.hpp"

#include "rmtdec/errors.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace rmtdec {

namespace {

std::ofstream open_for_write(const std::filesystem::path& path)
{
	std::ofstream out(path, std::ios::binary | std::ios::trunc);
	if(!out)
	{
		throw IoError("cannot open '" + path.string() + "' for writing");
	}
	return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path)
{
	out.flush();
	if(!out)
	{
		throw IoError("write to '" + path.string() + "' failed");
	}
}

std::vector<std::string> split(const std::string& line)
{
	std::vector<std::string> fields;
	std::string field;
	std::istringstream is(line);
	while(std::getline(is, field, ','))
	{
		fields.push_back(field);
	}
	if(!line.empty() && line.back() == ',')
	{
		fields.emplace_back();
	}
	return fields;
}

struct CsvReader
{
	std::filesystem::path path;
	std::ifstream in;
	std::size_t line_no = 0;

	CsvReader(const std::filesystem::path& p, std::string_view header) : path{p}, in{p, std::ios::binary}
	{
		if(!in)
		{
			throw IoError("cannot open '" + path.string() + "' for reading");
		}
		std::string line;
		if(!std::getline(in, line) || line != header)
		{
			throw IoError("'" + path.string() + "': expected header '" + std::string(header) + "'");
		}
		line_no = 1;
	}

	/// Next row split into exactly `width` fields; false at end of file.
	bool next(std::vector<std::string>& fields, std::size_t width)
	{
		std::string line;
		while(std::getline(in, line))
		{
			++line_no;
			if(line.empty())
			{
				continue;
			}
			fields = split(line);
			if(fields.size() != width)
			{
				fail("expected " + std::to_string(width) + " fields");
			}
			return true;
		}
		return false;
	}

	[[noreturn]] void fail(const std::string& why) const
	{
		throw IoError("'" + path.string() + "' line " + std::to_string(line_no) + ": " + why);
	}

	double real(const std::string& s) const
	{
		char* end = nullptr;
		errno = 0;
		const double v = std::strtod(s.c_str(), &end);
		if(s.empty() || end != s.c_str() + s.size() || errno == ERANGE)
		{
			fail("malformed number '" + s + "'");
		}
		return v;
	}

	std::size_t count(const std::string& s) const
	{
		char* end = nullptr;
		errno = 0;
		const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
		if(s.empty() || s.front() == '-' || end != s.c_str() + s.size() || errno == ERANGE)
		{
			fail("malformed integer '" + s + "'");
		}
		return static_cast<std::size_t>(v);
	}
};

} // namespace

std::string format_real(double x)
{
	char buf[32];
	std::snprintf(buf, sizeof buf, "%.17g", x);
	return buf;
}

void write_csv(const std::filesystem::path& path, std::string_view header,
               const std::vector<std::vector<std::string>>& rows)
{
	auto out = open_for_write(path);
	out << header << '\n';
	for(const auto& row : rows)
	{
		for(std::size_t i = 0; i < row.size(); ++i)
		{
			out << (i == 0 ? "" : ",") << row[i];
		}
		out << '\n';
	}
	finish(out, path);
}

void write_aggregate_csv(const std::filesystem::path& path, const AggregateResult& result)
{
	auto out = open_for_write(path);
	out << kAggregateHeader << '\n';
	for(const auto& p : result.points)
	{
		out << format_real(p.time) << ',' << format_real(p.purity_mean) << ',' << format_real(p.purity_stderr) << ','
		    << format_real(p.concurrence_mean) << ',' << format_real(p.concurrence_stderr) << ',' << p.count << '\n';
	}
	finish(out, path);
}

AggregateResult read_aggregate_csv(const std::filesystem::path& path)
{
	CsvReader reader{path, kAggregateHeader};
	AggregateResult result;
	std::vector<std::string> f;
	while(reader.next(f, 6))
	{
		result.points.push_back({reader.real(f[0]), reader.real(f[1]), reader.real(f[2]), reader.real(f[3]),
		                         reader.real(f[4]), reader.count(f[5])});
	}
	return result;
}

void write_records_csv(const std::filesystem::path& path, const std::vector<TimeSeriesRecord>& records)
{
	auto out = open_for_write(path);
	out << kRecordsHeader << '\n';
	for(const auto& r : records)
	{
		out << r.hamiltonian_index << ',' << r.state_index << ',' << format_real(r.time) << ','
		    << format_real(r.purity) << ',' << format_real(r.concurrence) << '\n';
	}
	finish(out, path);
}

std::vector<TimeSeriesRecord> read_records_csv(const std::filesystem::path& path)
{
	CsvReader reader{path, kRecordsHeader};
	std::vector<TimeSeriesRecord> records;
	std::vector<std::string> f;
	while(reader.next(f, 5))
	{
		records.push_back({reader.count(f[0]), reader.count(f[1]), reader.real(f[2]), reader.real(f[3]),
		                   reader.real(f[4])});
	}
	return records;
}

} // namespace rmtdec
