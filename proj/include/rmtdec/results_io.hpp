#pragma once

// CSV persistence for ensemble output. Reals are written with 17 significant
// digits, so reading a file back reproduces the values bit for bit.

#include "rmtdec/ensemble.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace rmtdec {

inline constexpr std::string_view kAggregateHeader = "t,P_mean,P_stderr,C_mean,C_stderr,n";
inline constexpr std::string_view kRecordsHeader = "h_index,s_index,t,P,C";

/// %.17g
std::string format_real(double x);

void write_aggregate_csv(const std::filesystem::path& path, const AggregateResult& result);
AggregateResult read_aggregate_csv(const std::filesystem::path& path);

void write_records_csv(const std::filesystem::path& path, const std::vector<TimeSeriesRecord>& records);
std::vector<TimeSeriesRecord> read_records_csv(const std::filesystem::path& path);

/// Header line followed by comma-joined rows. Throws IoError on failure.
void write_csv(const std::filesystem::path& path, std::string_view header,
               const std::vector<std::vector<std::string>>& rows);

} // namespace rmtdec
