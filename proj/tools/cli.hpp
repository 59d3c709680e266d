#pragma once

// Command-line front end: argument and config-file parsing, then dispatch to
// the library. Kept out of main() so tests can drive it in-process.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace graphon_lab::cli {

enum class ExitCode : int { ok = 0, suite_failure = 1, usage = 2 };

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;
  std::string graphon;
  std::size_t n = 0;
  std::size_t k = 0;
  std::vector<std::size_t> n_grid;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::string method;
  std::optional<double> threshold;
  double center = 0.0;
  std::uint64_t budget_nodes = 10'000'000;
  double budget_ms = 60'000.0;
  unsigned jobs = 1;
  std::string out;
  bool table = false;
  std::string suite;
  std::string lower;
  std::string upper;
  std::string in;
  std::vector<double> cuts{0.5};
  bool help = false;
  std::string help_text;
};

// argv without the program name. Throws UsageError naming the offending key.
RunConfig parse_config(const std::vector<std::string>& args);

// Runs a parsed configuration; returns the process exit status.
int dispatch(const RunConfig& config, std::ostream& out, std::ostream& err);

// parse_config + dispatch with errors rendered to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace graphon_lab::cli
