#include <algorithm>
#include <array>

#include "chemgym/bench.hpp"
#include "chemgym/errors.hpp"
#include "chemgym/solvent_dynamics.hpp"
#include "chemgym/thermal.hpp"

namespace chemgym {

namespace {

constexpr std::array<const char*, 4> kDistillationActions{"heat", "pour_dv_b1", "pour_b1_b2",
                                                          "end"};

enum Slot : std::size_t { kDV = 0, kB1 = 1, kB2 = 2 };

class DistillationBench final : public BenchEnv {
 public:
  explicit DistillationBench(BenchResources res) : BenchEnv(std::move(res)) {
    const auto& s = res_.config.distillation;
    action_spec_.kind = ActionSpec::Kind::discrete;
    action_spec_.actions = kDistillationActions.size();
    action_spec_.multipliers = s.heat_multipliers.size();
    action_spec_.labels.assign(kDistillationActions.begin(), kDistillationActions.end());
    observation_spec_.segments = {{"pixels DV", s.pixels},
                                  {"pixels B1", s.pixels},
                                  {"pixels B2", s.pixels},
                                  {"target", targets().size()}};
  }

 protected:
  void build_initial_vessels() override {
    const auto& s = res_.config.distillation;
    for (const char* label : {"DV", "B1", "B2"}) {
      Vessel v;
      v.label = label;
      v.volume_capacity = s.capacity;
      v.temperature = s.temperature;
      vessels_.push_back(v);
    }
    if (!use_input_vessel(s.capacity)) {
      Vessel& dv = vessels_[kDV];
      add_material(dv, registry(), s.solvent, s.solvent_amount, PhaseTag::liquid);
      add_material(dv, registry(), target_, s.target_amount, PhaseTag::dissolved);
      if (s.extra_material) {
        const std::string& extra = target_ == s.salt ? s.filler : s.salt;
        add_material(dv, registry(), extra, s.target_amount, PhaseTag::dissolved);
      }
      equilibrate_solubility(dv, registry());
    }
  }

  void after_reset() override {
    initial_purity_ = absolute_purity(vessels_, registry(), target_);
  }

  void apply(const Action& action) override {
    const auto& s = res_.config.distillation;
    const std::size_t idx = std::get<std::size_t>(action);
    const std::size_t a = idx / action_spec_.multipliers;
    const std::size_t m = idx % action_spec_.multipliers;
    switch (a) {
      case 0: {
        Vessel& dv = vessels_[kDV];
        if (heat_capacity(dv, registry()) > 0.0)
          record_lost(apply_heat(dv, vessels_[kB1], registry(), s.heat_multipliers[m] * s.q_unit).vented);
        break;
      }
      case 1:
        record_lost(pour(vessels_[kDV], vessels_[kB1], registry(), s.pour_multipliers[m]).overflow);
        break;
      case 2:
        record_lost(pour(vessels_[kB1], vessels_[kB2], registry(), s.pour_multipliers[m]).overflow);
        break;
      default: end_requested_ = true; break;
    }
  }

  Eigen::VectorXd observe() override {
    const auto& s = res_.config.distillation;
    Eigen::VectorXd obs(static_cast<Eigen::Index>(observation_spec_.size()));
    Eigen::Index k = 0;
    for (const auto& v : vessels_) {
      obs.segment(k, static_cast<Eigen::Index>(s.pixels)) = layer_pixels(v, registry(), s.pixels, rng_);
      k += static_cast<Eigen::Index>(s.pixels);
    }
    const auto hot = one_hot();
    obs.segment(k, hot.size()) = hot;
    return obs;
  }

  double terminal_reward() override {
    double amount = 0.0;
    for (const auto& v : vessels_) amount += total_moles(v, target_);
    return (absolute_purity(vessels_, registry(), target_) - initial_purity_) * amount;
  }

 private:
  double initial_purity_ = 0.0;
};

}  // namespace

std::unique_ptr<BenchEnv> make_distillation_bench(BenchResources res) {
  if (res.config.kind != BenchKind::distillation)
    throw ConfigError("config is not a distillation bench");
  return std::make_unique<DistillationBench>(std::move(res));
}

}  // namespace chemgym
