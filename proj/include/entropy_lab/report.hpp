#pragma once

// Experiment runner behind the command-line tool: parameter schemas, command
// dispatch and the on-disk report bundle (summary.json, tables, plot data).

#include <cstdint>
#include <exception>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace entropy_lab {

using Json = nlohmann::ordered_json;

enum class Command {
  kEllipsoid,
  kCounting,
  kCarl,
  kInvert,
  kCover,
  kLps,
  kSobolev,
  kValidate,
};

std::string to_string(Command command);
Command command_from_string(const std::string& name);
const std::vector<Command>& all_commands();

enum class TableFormat { kCsv, kJson };

std::string to_string(TableFormat format);
TableFormat table_format_from_string(const std::string& name);

/// Where a reported number came from: a closed-form expression, a brute-force
/// or iterative reference computation, or a computed spectrum.
enum class Provenance { kFormula, kOracle, kSpectrum };

std::string to_string(Provenance provenance);

/// {"value": v, "provenance": "..."}
Json tagged(double value, Provenance provenance);
Json tagged(std::int64_t value, Provenance provenance);

enum class ParamType { kNumber, kInteger, kString, kNumberList };

struct ParamSpec {
  std::string name;  // snake_case; the CLI flag is the dashed form
  ParamType type;
  bool required;
  Json default_value;  // null: optional without default
  std::string help;
};

/// Parameter schema of a command, in the order the flags are listed.
const std::vector<ParamSpec>& command_schema(Command command);

/// Checks `params` against the command's schema: rejects unknown keys and
/// missing required ones, converts string values to their declared types and
/// fills defaults. Throws Error(kSchema) naming the offending key.
Json validate_params(Command command, const Json& params);

struct RunConfig {
  Command command = Command::kEllipsoid;
  Json params = Json::object();
  std::filesystem::path output_dir = "report";
  std::uint64_t seed = 1;
  unsigned threads = 1;
  TableFormat format = TableFormat::kCsv;
};

struct BundleFile {
  std::string path;  // relative to the output directory
  std::string sha256;
};

struct ReportBundle {
  Json summary;
  std::vector<BundleFile> tables;
  std::vector<BundleFile> plotdata;
};

/// Runs one command and writes its bundle under config.output_dir.
ReportBundle run(const RunConfig& config);

/// 2 for regime or hypothesis violations, 1 for anything else.
int exit_code_for(const std::exception& error);

}  // namespace entropy_lab
