#include "chemgym/policies.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "chemgym/errors.hpp"

namespace chemgym {

std::vector<std::string> required_reactants(const ReactionNetwork& net,
                                            const std::vector<std::string>& inventory,
                                            const std::string& target) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  std::function<void(const std::string&)> expand = [&](const std::string& m) {
    if (!seen.insert(m).second) return;
    if (std::find(inventory.begin(), inventory.end(), m) != inventory.end()) {
      out.push_back(m);
      return;
    }
    for (const auto& r : net.reactions()) {
      const bool makes = std::any_of(r.products.begin(), r.products.end(),
                                     [&](const Term& t) { return t.first == m; });
      if (!makes) continue;
      for (const auto& [reactant, nu] : r.reactants) expand(reactant);
      return;
    }
  };
  expand(target);
  return out;
}

namespace {

class ReactionHeuristic final : public Policy {
 public:
  explicit ReactionHeuristic(const BenchEnv& env) : net_(*env.network()) {
    const auto& s = env.config().reaction;
    for (const auto& [name, n] : s.inventory) inventory_.push_back(name);
    delays_ = s.heuristic_delays;
  }

  Action act(const Eigen::VectorXd&, std::size_t step, const std::string& target) override {
    auto it = required_.find(target);
    if (it == required_.end())
      it = required_.emplace(target, required_reactants(net_, inventory_, target)).first;
    std::vector<double> a(inventory_.size() + 2, 0.0);
    a[0] = 1.0;  // heat as far as allowed
    a[1] = 0.0;  // smallest volume, highest concentration
    const auto delay = delays_.find(target);
    for (std::size_t i = 0; i < inventory_.size(); ++i) {
      if (std::find(it->second.begin(), it->second.end(), inventory_[i]) == it->second.end())
        continue;
      std::size_t start = 0;
      if (delay != delays_.end()) {
        auto d = delay->second.find(inventory_[i]);
        if (d != delay->second.end()) start = d->second;
      }
      a[i + 2] = step >= start ? 1.0 : 0.0;
    }
    return a;
  }

 private:
  const ReactionNetwork& net_;
  std::vector<std::string> inventory_;
  std::map<std::string, std::map<std::string, std::size_t>> delays_;
  std::map<std::string, std::vector<std::string>> required_;
};

std::size_t nearest_index(const std::vector<double>& values, double x) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i)
    if (std::abs(values[i] - x) < std::abs(values[best] - x)) best = i;
  return best;
}

class ScriptPolicy final : public Policy {
 public:
  ScriptPolicy(std::vector<std::size_t> script, std::size_t fallback)
      : script_(std::move(script)), fallback_(fallback) {}

  Action act(const Eigen::VectorXd&, std::size_t step, const std::string&) override {
    return step < script_.size() ? script_[step] : fallback_;
  }

 private:
  std::vector<std::size_t> script_;
  std::size_t fallback_;
};

class RandomPolicy final : public Policy {
 public:
  RandomPolicy(const ActionSpec& spec, std::uint64_t seed) : spec_(spec), rng_(seed) {}

  Action act(const Eigen::VectorXd&, std::size_t, const std::string&) override {
    if (spec_.kind == ActionSpec::Kind::discrete)
      return static_cast<std::size_t>(uniform_index(rng_, spec_.choices()));
    std::vector<double> a(spec_.dimension);
    for (auto& x : a) x = uniform01(rng_);
    return a;
  }

  void reset(std::uint64_t seed) override { rng_.seed(seed); }

 private:
  ActionSpec spec_;
  Rng rng_;
};

class ConstantPolicy final : public Policy {
 public:
  explicit ConstantPolicy(Action a) : action_(std::move(a)) {}
  Action act(const Eigen::VectorXd&, std::size_t, const std::string&) override { return action_; }

 private:
  Action action_;
};

std::size_t action_index(const ActionSpec& spec, std::string_view label) {
  auto it = std::find(spec.labels.begin(), spec.labels.end(), label);
  if (it == spec.labels.end()) throw ConfigError("unknown action '" + std::string(label) + "'");
  return static_cast<std::size_t>(it - spec.labels.begin());
}

}  // namespace

std::unique_ptr<Policy> heuristic_rxn(const BenchEnv& env) {
  if (env.kind() != BenchKind::reaction || !env.network())
    throw ConfigError("reaction heuristic needs a reaction bench");
  if (env.scenario() != "wurtz" && env.scenario() != "fictitious")
    throw UnknownScenario("no reaction heuristic for scenario '" + env.scenario() + "'");
  return std::make_unique<ReactionHeuristic>(env);
}

std::unique_ptr<Policy> heuristic_ext(const BenchEnv& env) {
  if (env.kind() != BenchKind::extraction)
    throw ConfigError("extraction heuristic needs an extraction bench");
  const auto& spec = env.action_spec();
  const auto& s = env.config().extraction;
  std::vector<std::size_t> script;
  for (const auto& [name, mult] : s.heuristic_script)
    script.push_back(spec.flatten(action_index(spec, name), nearest_index(s.multipliers, mult)));
  const std::size_t end = spec.flatten(action_index(spec, "end"), s.multipliers.size() - 1);
  return std::make_unique<ScriptPolicy>(std::move(script), end);
}

std::unique_ptr<Policy> heuristic_dit(const BenchEnv& env) {
  if (env.kind() != BenchKind::distillation)
    throw ConfigError("distillation heuristic needs a distillation bench");
  const auto& spec = env.action_spec();
  const auto& s = env.config().distillation;
  const auto hottest = static_cast<std::size_t>(
      std::max_element(s.heat_multipliers.begin(), s.heat_multipliers.end()) -
      s.heat_multipliers.begin());
  const std::size_t heat = spec.flatten(action_index(spec, "heat"), hottest);
  const std::size_t dump =
      spec.flatten(action_index(spec, "pour_b1_b2"), nearest_index(s.pour_multipliers, 1.0));
  const std::size_t end = spec.flatten(action_index(spec, "end"), 0);
  std::vector<std::size_t> script(s.heuristic_boil_steps, heat);
  if (s.extra_material) {
    script.push_back(dump);
    script.insert(script.end(), s.heuristic_second_boil_steps, heat);
  }
  return std::make_unique<ScriptPolicy>(std::move(script), end);
}

std::unique_ptr<Policy> random_policy(const ActionSpec& spec, std::uint64_t seed) {
  return std::make_unique<RandomPolicy>(spec, seed);
}

std::unique_ptr<Policy> idle_policy(const BenchEnv& env) {
  const auto& spec = env.action_spec();
  if (spec.kind == ActionSpec::Kind::discrete)
    return std::make_unique<ConstantPolicy>(spec.flatten(action_index(spec, "end"), 0));
  std::vector<double> neutral(spec.dimension, 0.0);
  neutral[0] = 0.5;
  neutral[1] = 0.5;
  return std::make_unique<ConstantPolicy>(neutral);
}

std::unique_ptr<Policy> make_policy(std::string_view name, const BenchEnv& env, std::uint64_t seed) {
  if (name == "random") return random_policy(env.action_spec(), seed);
  if (name == "none") return idle_policy(env);
  if (name == "heuristic") {
    switch (env.kind()) {
      case BenchKind::reaction: return heuristic_rxn(env);
      case BenchKind::extraction: return heuristic_ext(env);
      case BenchKind::distillation: return heuristic_dit(env);
    }
  }
  throw ConfigError("unknown policy '" + std::string(name) + "' (expected heuristic, random or none)");
}

}  // namespace chemgym
