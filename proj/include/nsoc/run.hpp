#pragma once

#include "nsoc/config.hpp"

namespace nsoc {

/// Exit codes of run().
constexpr int kExitPass = 0;
constexpr int kExitSolverError = 1;
constexpr int kExitVerdictFail = 2;

struct RunOutcome {
  int exit_code = kExitPass;
  Json report;
  std::string message;  // solver error text, empty otherwise
};

/// Seeded smooth probe directions (f, h) with entries of order one.
std::vector<Probe> random_probes(const GridPtr& grid, int count, std::uint64_t seed);

/// Executes the configured task and writes report.json, manifest.json and field CSVs.
RunOutcome run(const RunConfig& cfg);

}  // namespace nsoc
