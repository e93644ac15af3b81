#pragma once

#include "nsoc/io.hpp"
#include "nsoc/operator.hpp"
#include "nsoc/optimize.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace nsoc {

enum class Task { SolveState, Optimize, Verify, BouligandLimit, WsetLimit, ConvergenceStudy };

const char* to_string(Task t);
Task parse_task(const std::string& name);

/// Schema or invariant violation; `line` is 1-based, 0 when unknown.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(const std::string& what, int line)
      : std::invalid_argument(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

struct LimitSettings {
  BouligandLimitConfig limit;
  bool minus = true;
  bool plus = true;
  int probes = 3;
};

struct RunConfig {
  Task task = Task::SolveState;
  ProblemSpec problem;
  ControlPair controls;
  OptimizeConfig optimize;
  int verify_probes = 200;
  LimitSettings limit;
  std::vector<int> study_sizes{17, 33, 65};
  std::uint64_t seed = 0;
  std::filesystem::path output_dir = "out";
  bool vtk = false;
  Json echo;  // the parsed document, for the manifest
};

/// Parses and validates a JSON config; relative CSV paths resolve against `base_dir`.
RunConfig parse_config_text(const std::string& text, const std::filesystem::path& base_dir = ".");
RunConfig parse_config(const std::filesystem::path& path);

}  // namespace nsoc
