#include <algorithm>
#include <array>

#include "chemgym/bench.hpp"
#include "chemgym/errors.hpp"
#include "chemgym/solvent_dynamics.hpp"
#include "chemgym/thermal.hpp"

namespace chemgym {

namespace {

// Base actions, in index order.
constexpr std::array<const char*, 8> kExtractionActions{
    "mix", "settle", "add_s1", "add_s2", "drain_ev_b1", "pour_ev_b2", "pour_b1_ev", "end"};

enum Slot : std::size_t { kEV = 0, kB1 = 1, kB2 = 2 };

class ExtractionBench final : public BenchEnv {
 public:
  explicit ExtractionBench(BenchResources res) : BenchEnv(std::move(res)) {
    const auto& s = res_.config.extraction;
    action_spec_.kind = ActionSpec::Kind::discrete;
    action_spec_.actions = kExtractionActions.size();
    action_spec_.multipliers = s.multipliers.size();
    action_spec_.labels.assign(kExtractionActions.begin(), kExtractionActions.end());
    observation_spec_.segments = {{"pixels EV", s.pixels},
                                  {"pixels B1", s.pixels},
                                  {"pixels B2", s.pixels},
                                  {"target", targets().size()}};
  }

 protected:
  void build_initial_vessels() override {
    const auto& s = res_.config.extraction;
    for (const char* label : {"EV", "B1", "B2"}) {
      Vessel v;
      v.label = label;
      v.volume_capacity = s.capacity;
      vessels_.push_back(v);
    }
    if (!use_input_vessel(s.capacity)) {
      Vessel& ev = vessels_[kEV];
      add_material(ev, registry(), s.solvent, s.solvent_amount, PhaseTag::liquid);
      add_material(ev, registry(), s.salt, s.salt_amount, PhaseTag::dissolved);
      const std::string& product = target_ == s.salt ? s.filler : target_;
      add_material(ev, registry(), product, s.target_amount, PhaseTag::dissolved);
    }
  }

  void after_reset() override {
    initial_purity_ = solute_purity(vessels_, registry(), target_);
  }

  void add_solvent(const std::string& name, double mult) {
    const auto& s = res_.config.extraction;
    Vessel& ev = vessels_[kEV];
    const double litres = std::min(mult * s.add_unit_litres, free_volume(ev, registry()));
    const double n = litres / registry().lookup(name).molar_volume();
    if (!(n > 0.0)) return;
    add_material(ev, registry(), name, n, PhaseTag::liquid);
    record_added(name, n);
    equilibrate_solubility(ev, registry());
  }

  void apply(const Action& action) override {
    const auto& s = res_.config.extraction;
    const std::size_t idx = std::get<std::size_t>(action);
    const std::size_t a = idx / action_spec_.multipliers;
    const double mult = s.multipliers[idx % action_spec_.multipliers];
    Vessel& ev = vessels_[kEV];
    switch (a) {
      case 0: mix(ev, registry(), mult * s.mix_unit); break;
      case 1: settle(ev, registry(), mult * s.settle_unit); break;
      case 2: add_solvent(s.solvent_s1, mult); break;
      case 3: add_solvent(s.solvent_s2, mult); break;
      case 4: record_lost(drain(ev, vessels_[kB1], registry(), mult).overflow); break;
      case 5: record_lost(pour(ev, vessels_[kB2], registry(), mult).overflow); break;
      case 6: record_lost(pour(vessels_[kB1], ev, registry(), mult).overflow); break;
      default: end_requested_ = true; break;
    }
  }

  Eigen::VectorXd observe() override {
    const auto& s = res_.config.extraction;
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
    return (solute_purity(vessels_, registry(), target_) - initial_purity_) * amount;
  }

 private:
  double initial_purity_ = 0.0;
};

}  // namespace

std::unique_ptr<BenchEnv> make_extraction_bench(BenchResources res) {
  if (res.config.kind != BenchKind::extraction)
    throw ConfigError("config is not an extraction bench");
  return std::make_unique<ExtractionBench>(std::move(res));
}

}  // namespace chemgym
