#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "chemgym/vessel.hpp"

namespace chemgym::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;

/// Entry point shared by the executable and the tests. args excludes argv[0].
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// One pipeline stage, written BENCH[/SCENARIO][:POLICY] on the command line.
struct Stage {
  std::string bench;
  std::string scenario;
  std::string policy = "heuristic";
  std::filesystem::path config;  // empty: shipped config for bench/scenario
};

/// Throws ConfigError on a malformed spec.
Stage parse_stage(const std::string& spec);

struct StageOutcome {
  std::string bench;
  std::string target;
  double episode_return = 0.0;
  std::string output_label;
  Vessel output;
};

struct PipelineOutcome {
  std::vector<StageOutcome> stages;
  double final_absolute_purity = 0.0;
};

/// Runs the stages in order; each stage's output vessel is round-tripped
/// through a snapshot and becomes the next stage's input vessel. The target
/// is pinned (or sampled by the first stage) and kept for later stages.
/// When snapshot_dir is set, every stage output is written there.
PipelineOutcome run_pipeline(const std::vector<Stage>& stages, std::uint64_t seed,
                             const std::optional<std::string>& target,
                             const std::optional<std::filesystem::path>& snapshot_dir = {},
                             const std::string& snapshot_prefix = "pipeline");

}  // namespace chemgym::cli
