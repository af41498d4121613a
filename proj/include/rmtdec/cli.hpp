#pragma once

// Command-line front end. Every subcommand is a pure function of its
// parameters: outputs depend on nothing but flags and config file contents.

#include <filesystem>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace rmtdec::cli {

enum ExitCode : int
{
	kSuccess = 0,
	kValidationFailure = 1,
	kUsageError = 2,
	kNumericalFailure = 3,
};

class UsageError : public std::runtime_error
{
public:
	explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

struct CliConfig
{
	std::string subcommand;
	std::map<std::string, std::string> params; ///< config file merged with flags; flags win
	std::filesystem::path out_dir;
};

/// `key = value` lines; `#` starts a comment.
std::map<std::string, std::string> parse_config_file(const std::filesystem::path& path);

/// args excludes the program name. Accepts `--key value`, `--key=value` and
/// `key=value`; `config` names a config file. Throws UsageError on unknown
/// subcommands or keys.
CliConfig parse_arguments(const std::vector<std::string>& args);

/// Parses and dispatches, mapping failures to exit codes.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int cmd_simulate(const CliConfig& config, std::ostream& out);
int cmd_theory(const CliConfig& config, std::ostream& out);
int cmd_cpdiagram(const CliConfig& config, std::ostream& out);
int cmd_spectra(const CliConfig& config, std::ostream& out);
int cmd_validate(const CliConfig& config, std::ostream& out);

std::string usage();

} // namespace rmtdec::cli
