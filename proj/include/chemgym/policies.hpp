#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "chemgym/bench.hpp"

namespace chemgym {

class Policy {
 public:
  virtual ~Policy() = default;
  virtual Action act(const Eigen::VectorXd& observation, std::size_t step,
                     const std::string& target) = 0;
  /// Called at the start of every episode.
  virtual void reset(std::uint64_t seed) { (void)seed; }
};

/// Open-loop reaction heuristic: full heat, smallest volume, add exactly the
/// reactants feeding the target (delayed ones at their configured step).
/// Throws UnknownScenario for scenarios other than wurtz/fictitious.
std::unique_ptr<Policy> heuristic_rxn(const BenchEnv& env);
/// Scripted extraction loop from the bench config.
std::unique_ptr<Policy> heuristic_ext(const BenchEnv& env);
/// Boil off the solvent, dump it, boil the target over, end.
std::unique_ptr<Policy> heuristic_dit(const BenchEnv& env);
/// Uniform over the bench's action space.
std::unique_ptr<Policy> random_policy(const ActionSpec& spec, std::uint64_t seed);
/// Ends at once on discrete benches; neutral no-op on the reaction bench.
std::unique_ptr<Policy> idle_policy(const BenchEnv& env);

/// "heuristic", "random" or "none"; throws ConfigError otherwise.
std::unique_ptr<Policy> make_policy(std::string_view name, const BenchEnv& env, std::uint64_t seed);

/// Reactants to load for `target`: inputs of the first reaction producing it,
/// expanded until only inventory materials remain.
std::vector<std::string> required_reactants(const ReactionNetwork& net,
                                            const std::vector<std::string>& inventory,
                                            const std::string& target);

struct ReturnStats {
  std::size_t episodes = 0;
  double mean = 0.0;
  double stddev = 0.0;
  double stderr_mean = 0.0;
  std::map<std::string, double> per_target_mean;
  std::map<std::string, std::size_t> per_target_count;
};

ReturnStats summarize(const std::vector<double>& returns, const std::vector<std::string>& targets);

struct StepRecord {
  std::size_t step = 0;
  Action action;
  double reward = 0.0;
  bool done = false;
};

struct Trajectory {
  std::size_t episode = 0;
  std::uint64_t seed = 0;
  std::string target;
  std::vector<Eigen::VectorXd> observations;  // initial plus one per step
  std::vector<StepRecord> steps;
  double episode_return = 0.0;
  std::vector<Vessel> final_vessels;
};

struct RolloutOptions {
  std::size_t episodes = 1;
  std::uint64_t seed = 0;
  std::size_t parallel = 1;
  std::optional<std::string> target;
  std::optional<std::size_t> max_steps;
  bool keep_observations = false;
  bool keep_trajectories = true;
};

struct RolloutResult {
  ReturnStats stats;
  std::vector<double> returns;
  std::vector<std::string> targets;
  std::vector<Trajectory> trajectories;  // empty unless keep_trajectories
};

using EnvFactory = std::function<std::unique_ptr<BenchEnv>()>;
using PolicyFactory = std::function<std::unique_ptr<Policy>(const BenchEnv&, std::uint64_t seed)>;

/// Runs one episode; env seed and policy seed are given explicitly.
Trajectory run_episode(BenchEnv& env, Policy& policy, std::uint64_t env_seed,
                       std::uint64_t policy_seed, const RolloutOptions& opt, std::size_t index = 0);

/// Episode i uses derive_seed(opt.seed, i). With parallel > 1, worker threads
/// own independent env/policy instances and results merge by episode index,
/// so output does not depend on the thread count.
RolloutResult rollout(const EnvFactory& make_env, const PolicyFactory& make_policy_fn,
                      const RolloutOptions& opt);

/// Policy-stream seed for episode i, decorrelated from the env seed.
std::uint64_t policy_seed(std::uint64_t base, std::size_t episode);

}  // namespace chemgym
