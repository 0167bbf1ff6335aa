#include "chemgym/bench.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "chemgym/errors.hpp"

namespace chemgym {

std::size_t ObservationSpec::size() const {
  std::size_t n = 0;
  for (const auto& s : segments) n += s.length;
  return n;
}

BenchEnv::BenchEnv(BenchResources res) : res_(std::move(res)), max_steps_(res_.config.max_steps) {
  if (!res_.registry) throw ConfigError("bench created without a material registry");
  if (res_.config.targets.empty()) throw ConfigError("bench config lists no targets");
  for (const auto& t : res_.config.targets)
    if (!res_.registry->contains(t)) throw ConfigError("unknown target material '" + t + "'");
}

std::size_t BenchEnv::output_vessel() const {
  std::size_t best = 0;
  double most = -1.0;
  for (std::size_t i = 0; i < vessels_.size(); ++i) {
    const double n = total_moles(vessels_[i], target_);
    if (n > most) {
      most = n;
      best = i;
    }
  }
  return best;
}

Eigen::VectorXd BenchEnv::one_hot() const {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(targets().size()));
  v[static_cast<Eigen::Index>(target_index_)] = 1.0;
  return v;
}

void BenchEnv::record_added(const std::string& material, double amount) {
  if (amount > 0.0) ledger_.added[material] += amount;
}

void BenchEnv::record_lost(const std::map<std::string, double>& lost) {
  for (const auto& [name, n] : lost)
    if (n > 0.0) ledger_.lost[name] += n;
}

bool BenchEnv::use_input_vessel(double capacity) {
  if (!input_) return false;
  Vessel v = *input_;
  v.volume_capacity = capacity;
  if (vessels_.empty()) vessels_.push_back(v);
  else {
    v.label = vessels_.front().label;
    vessels_.front() = v;
  }
  return true;
}

Eigen::VectorXd BenchEnv::reset(std::uint64_t seed, const std::optional<std::string>& target) {
  rng_.seed(seed);
  const auto& names = targets();
  if (target) {
    auto it = std::find(names.begin(), names.end(), *target);
    if (it == names.end())
      throw NotFound("target '" + *target + "' is not offered by this bench");
    target_index_ = static_cast<std::size_t>(it - names.begin());
  } else {
    target_index_ = static_cast<std::size_t>(uniform_index(rng_, names.size()));
  }
  target_ = names[target_index_];

  vessels_.clear();
  ledger_ = {};
  step_count_ = 0;
  return_ = 0.0;
  end_requested_ = false;
  build_initial_vessels();
  for (auto& v : vessels_) normalize_amounts(v);
  for (const auto& v : vessels_)
    for (const auto& [name, n] : inventory(v)) ledger_.initial[name] += n;
  after_reset();
  done_ = max_steps_ == 0;
  return observe();
}

StepResult BenchEnv::step(const Action& action) {
  if (done_) throw EpisodeDone("episode finished; call reset");
  Action clipped = action;
  if (action_spec_.kind == ActionSpec::Kind::discrete) {
    const auto* idx = std::get_if<std::size_t>(&action);
    if (!idx) throw DimensionMismatch("discrete bench expects an action index");
    if (*idx >= action_spec_.choices())
      throw IndexOutOfRange("action " + std::to_string(*idx) + " outside [0, " +
                            std::to_string(action_spec_.choices()) + ")");
  } else {
    const auto* vec = std::get_if<std::vector<double>>(&action);
    if (!vec) throw DimensionMismatch("continuous bench expects an action vector");
    if (vec->size() != action_spec_.dimension)
      throw DimensionMismatch("action has " + std::to_string(vec->size()) + " entries, expected " +
                              std::to_string(action_spec_.dimension));
    auto& c = std::get<std::vector<double>>(clipped);
    for (auto& x : c) x = std::isnan(x) ? 0.0 : std::clamp(x, 0.0, 1.0);
  }

  apply(clipped);
  ++step_count_;
  done_ = end_requested_ || step_count_ >= max_steps_;

  StepResult r;
  r.reward = done_ ? terminal_reward() : 0.0;
  r.done = done_;
  return_ += r.reward;
  r.observation = observe();
  if (done_) {
    for (const auto& v : vessels_) {
      std::ostringstream ss;
      save_vessel(v, registry(), ss);
      r.info["vessel:" + v.label] = ss.str();
    }
  }
  return r;
}

std::unique_ptr<BenchEnv> make_bench(BenchResources res) {
  switch (res.config.kind) {
    case BenchKind::reaction: return make_reaction_bench(std::move(res));
    case BenchKind::extraction: return make_extraction_bench(std::move(res));
    case BenchKind::distillation: return make_distillation_bench(std::move(res));
  }
  throw ConfigError("unknown bench kind");
}

}  // namespace chemgym
