#pragma once

// Batch front end. The same parser and dispatcher serve the `eqps` binary
// and the golden-file runner behind `fixtures run`.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace eqps {

inline constexpr std::uint64_t kDefaultSeed = 20240601;

struct CommandRequest {
  std::vector<std::string> command;  // e.g. {"series", "factor"}
  std::string group;
  std::string resolution;
  std::vector<std::string> series;
  std::string bound;
  std::string mode = "general";
  std::string format = "text";
  std::uint64_t seed = kDefaultSeed;
  std::string out;
  std::string cls;
  int k = 0;
  std::string a;
  std::string b;
  std::string to;
  std::string images;
  std::string factors;
  std::string fixtures;
  bool timing = false;
};

struct RunReport {
  std::string command;
  int exit_code = 0;
  std::vector<std::string> lines;  // text form of the result
  nlohmann::json result = nlohmann::json::object();
  std::vector<std::string> warnings;
  std::vector<std::string> notes;
  std::vector<std::string> legend;
  std::optional<double> timing_ms;
};

/// Thrown for command-line usage problems; maps to exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses arguments (without the program name). Throws UsageError; returns
/// nullopt when help was requested and printed to `help`.
std::optional<CommandRequest> parse_command_line(const std::vector<std::string>& args, std::string* help = nullptr);

/// Dispatches the request. Throws ParseError, ValidationError or MathError
/// with the failing module named in the message.
RunReport run(const CommandRequest& request);

std::string render_report(const RunReport& report, const std::string& format);

/// 2 for parse and usage errors, 1 for validation and math errors.
int exit_code_for(const std::exception& e);

/// Directory of the bundled fixtures (compile-time default).
std::string default_fixture_dir();

struct FixtureCheck {
  std::string name;
  bool passed = false;
  std::vector<std::string> detail;  // parse error, or a line diff
};

/// Every *.json file under `dir` must parse.
std::vector<FixtureCheck> check_fixture_files(const std::string& dir);
/// Runs the cases of `dir`/manifest.json and compares with their golden outputs.
std::vector<FixtureCheck> run_golden_cases(const std::string& dir);

}  // namespace eqps
