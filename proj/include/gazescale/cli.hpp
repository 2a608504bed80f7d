#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gazescale/config.hpp"
#include "gazescale/trace.hpp"

namespace gazescale {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 2,
  kExitParse = 3,
  kExitEvaluation = 4,
  kExitInfeasible = 5,
};

struct SimulateOptions {
  std::vector<Technique> techniques{std::begin(kAllTechniques), std::end(kAllTechniques)};
  std::vector<double> scales{std::begin(kTargetScales), std::end(kTargetScales)};
  std::vector<Direction> directions{std::begin(kAllDirections), std::end(kAllDirections)};
  int reps = 2;
  std::uint64_t seed = 0;
  double noise_sd = 0.0;
  int jobs = 1;
  std::string out_dir;
  EngineConfig config;
};

/// Generates, saves and evaluates every trial, then writes results.jsonl,
/// report.jsonl and report.txt under out_dir.
int run_simulate(const SimulateOptions& opts, std::ostream& out, std::ostream& err);

/// Prints the event timeline and the trial result of a recorded trace.
int run_replay(const std::string& trace_path, std::optional<Technique> technique,
               const EngineConfig& cfg, std::ostream& out, std::ostream& err);

/// Serves the playground protocol until SIGINT or SIGTERM.
int run_serve(int port, const EngineConfig& cfg, std::ostream& out, std::ostream& err);

/// Full command line: `gazescale simulate|replay|serve ...`.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gazescale
