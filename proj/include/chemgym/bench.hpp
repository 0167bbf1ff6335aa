#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "chemgym/bench_config.hpp"
#include "chemgym/random.hpp"
#include "chemgym/vessel.hpp"

namespace chemgym {

struct ActionSpec {
  enum class Kind { continuous, discrete };
  Kind kind = Kind::discrete;
  std::size_t dimension = 0;    // continuous: vector length, bounds [0,1]
  std::size_t actions = 0;      // discrete: base actions
  std::size_t multipliers = 0;  // discrete: multiplier values per action
  std::vector<std::string> labels;  // per dimension or per base action

  std::size_t choices() const { return actions * multipliers; }
  std::size_t flatten(std::size_t action, std::size_t multiplier) const {
    return action * multipliers + multiplier;
  }
};

struct ObservationSpec {
  struct Segment {
    std::string name;
    std::size_t length;
  };
  std::vector<Segment> segments;
  std::size_t size() const;
};

/// Discrete index or continuous vector.
using Action = std::variant<std::size_t, std::vector<double>>;

struct StepResult {
  Eigen::VectorXd observation;
  double reward = 0.0;
  bool done = false;
  std::map<std::string, std::string> info;  // vessel snapshots on the terminal step
};

/// Material flows across the bench boundary, for conservation checks.
struct MaterialLedger {
  std::map<std::string, double> initial;  // in vessels after reset
  std::map<std::string, double> added;    // brought in by actions
  std::map<std::string, double> lost;     // overflow and vented vapour
};

class BenchEnv {
 public:
  explicit BenchEnv(BenchResources res);
  virtual ~BenchEnv() = default;
  BenchEnv(const BenchEnv&) = delete;
  BenchEnv& operator=(const BenchEnv&) = delete;

  BenchKind kind() const { return res_.config.kind; }
  const std::string& scenario() const { return res_.config.scenario; }
  const BenchConfig& config() const { return res_.config; }
  const MaterialRegistry& registry() const { return *res_.registry; }
  const ReactionNetwork* network() const { return res_.network.get(); }

  const ActionSpec& action_spec() const { return action_spec_; }
  const ObservationSpec& observation_spec() const { return observation_spec_; }
  const std::vector<std::string>& targets() const { return res_.config.targets; }

  /// Rebuilds the initial vessels and samples a target unless one is given.
  /// Throws NotFound for a target outside targets().
  Eigen::VectorXd reset(std::uint64_t seed, const std::optional<std::string>& target = {});
  /// Throws EpisodeDone, IndexOutOfRange or DimensionMismatch.
  StepResult step(const Action& action);

  const std::string& target() const { return target_; }
  std::size_t target_index() const { return target_index_; }
  std::size_t step_count() const { return step_count_; }
  std::size_t max_steps() const { return max_steps_; }
  void set_max_steps(std::size_t n) { max_steps_ = n; }
  bool done() const { return done_; }
  double episode_return() const { return return_; }

  std::span<const Vessel> vessels() const { return vessels_; }
  /// Vessel holding the most target; carries on to the next pipeline stage.
  virtual std::size_t output_vessel() const;
  const MaterialLedger& ledger() const { return ledger_; }

  /// Replaces the primary vessel's initial contents on every later reset.
  void set_input_vessel(std::optional<Vessel> v) { input_ = std::move(v); }

 protected:
  virtual void build_initial_vessels() = 0;
  virtual void apply(const Action& action) = 0;
  virtual Eigen::VectorXd observe() = 0;
  /// Reward on the terminal step.
  virtual double terminal_reward() = 0;
  virtual void after_reset() {}

  Eigen::VectorXd one_hot() const;
  void record_added(const std::string& material, double amount);
  void record_lost(const std::map<std::string, double>& lost);
  /// Puts the pipeline input (if any) into the primary vessel slot.
  bool use_input_vessel(double capacity);

  BenchResources res_;
  ActionSpec action_spec_;
  ObservationSpec observation_spec_;
  std::vector<Vessel> vessels_;
  Rng rng_;
  std::string target_;
  std::size_t target_index_ = 0;
  std::size_t step_count_ = 0;
  std::size_t max_steps_ = 0;
  bool done_ = true;
  bool end_requested_ = false;
  double return_ = 0.0;
  MaterialLedger ledger_;
  std::optional<Vessel> input_;
};

std::unique_ptr<BenchEnv> make_reaction_bench(BenchResources res);
std::unique_ptr<BenchEnv> make_extraction_bench(BenchResources res);
std::unique_ptr<BenchEnv> make_distillation_bench(BenchResources res);
/// Dispatches on res.config.kind.
std::unique_ptr<BenchEnv> make_bench(BenchResources res);

}  // namespace chemgym
