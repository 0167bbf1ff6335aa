#include <doctest.h>

#include <cmath>
#include <limits>

#include "chemgym/bench.hpp"
#include "chemgym/errors.hpp"
#include "common.hpp"

using namespace chemgym;

namespace {

std::unique_ptr<BenchEnv> bench(BenchKind kind, const std::string& scenario = "") {
  return make_bench(testing::resources(kind, scenario));
}

std::size_t segment_offset(const ObservationSpec& spec, const std::string& name) {
  std::size_t off = 0;
  for (const auto& s : spec.segments) {
    if (s.name == name) return off;
    off += s.length;
  }
  FAIL("no segment " << name);
  return 0;
}

std::vector<double> neutral(std::size_t dim) {
  std::vector<double> a(dim, 0.0);
  a[0] = a[1] = 0.5;
  return a;
}

}  // namespace

TEST_CASE("wurtz reaction bench spaces") {
  auto env = bench(BenchKind::reaction, "wurtz");
  CHECK(env->action_spec().kind == ActionSpec::Kind::continuous);
  CHECK(env->action_spec().dimension == 6);
  CHECK(env->observation_spec().size() == 100 + 3 + 4 + 7);
  CHECK(env->max_steps() == 20);
  const auto obs = env->reset(3);
  CHECK(obs.size() == 114);
  const auto rem = segment_offset(env->observation_spec(), "remaining");
  for (std::size_t i = 0; i < 4; ++i) CHECK(obs[static_cast<Eigen::Index>(rem + i)] == 1.0);
  CHECK(obs.minCoeff() >= 0.0);
  CHECK(obs.maxCoeff() <= 1.0);
}

TEST_CASE("target override sets the one-hot") {
  auto env = bench(BenchKind::reaction, "wurtz");
  const auto obs = env->reset(0, std::string("NaCl"));
  const auto off = static_cast<Eigen::Index>(segment_offset(env->observation_spec(), "target"));
  CHECK(env->target_index() == 6);
  CHECK(obs.segment(off, 7).sum() == 1.0);
  CHECK(obs[off + 6] == 1.0);
  CHECK_THROWS_AS(env->reset(0, std::string("water")), NotFound);

  auto fict = bench(BenchKind::reaction, "fictitious");
  fict->reset(0, std::string("E"));
  CHECK(fict->target_index() == 0);
}

TEST_CASE("a wurtz config with the fictitious network is rejected") {
  auto cfg = load_bench_config(default_config_path(BenchKind::reaction, "wurtz"));
  cfg.reactions_path = data_dir() / "reactions" / "fictitious.rxn";
  CHECK_THROWS_AS(load_resources(cfg), ConfigError);
}

TEST_CASE("unknown bench or scenario") {
  CHECK_THROWS_AS(bench_kind_from_string("xyz"), ConfigError);
  CHECK_THROWS_AS(default_config_path(BenchKind::reaction, "suzuki"), UnknownScenario);
}

TEST_CASE("neutral reaction action changes neither temperature nor volume") {
  auto env = bench(BenchKind::reaction, "wurtz");
  env->reset(1);
  const Vessel before = env->vessels()[0];
  env->step(neutral(6));
  const Vessel& after = env->vessels()[0];
  CHECK(after.temperature == before.temperature);
  CHECK(after.volume_capacity == before.volume_capacity);
  CHECK(after.solutes.empty());
}

TEST_CASE("reaction action mapping and clipping") {
  auto env = bench(BenchKind::reaction, "wurtz");
  const auto& s = env->config().reaction;
  env->reset(1);
  std::vector<double> a{1.0, 0.0, 0.5, 0.0, 0.0, 0.0};
  env->step(a);
  const Vessel& v = env->vessels()[0];
  CHECK(v.temperature == std::min(s.temperature_initial + s.temperature_unit, s.temperature_max));
  CHECK(v.volume_capacity == s.volume_initial - s.volume_unit);
  // Half the 1-chlorohexane went in; without sodium none of it reacts.
  CHECK(total_moles(v, "1-chlorohexane") == doctest::Approx(0.5));

  // Out-of-range and NaN entries are clipped, not rejected.
  std::vector<double> wild{7.0, -3.0, std::numeric_limits<double>::quiet_NaN(), 2.0, 0.0, 0.0};
  CHECK_NOTHROW(env->step(wild));
  CHECK(total_moles(env->vessels()[0], "2-chlorohexane") == doctest::Approx(1.0));
  CHECK(total_moles(env->vessels()[0], "1-chlorohexane") == doctest::Approx(0.5));

  CHECK_THROWS_AS(env->step(std::vector<double>(5, 0.0)), DimensionMismatch);
  CHECK_THROWS_AS(env->step(Action{std::size_t{0}}), DimensionMismatch);
}

TEST_CASE("reward is sparse and episodes end at the step budget") {
  auto env = bench(BenchKind::reaction, "wurtz");
  env->reset(5, std::string("dodecane"));
  std::vector<double> a{1.0, 0.0, 1.0, 0.0, 0.0, 1.0};
  for (std::size_t k = 0; k + 1 < env->max_steps(); ++k) {
    const auto r = env->step(a);
    CHECK(r.reward == 0.0);
    CHECK_FALSE(r.done);
    CHECK(r.info.empty());
  }
  const auto last = env->step(a);
  CHECK(last.done);
  CHECK(last.reward == doctest::Approx(total_moles(env->vessels()[0], "dodecane")));
  CHECK(last.reward >= 0.45);
  CHECK(last.reward <= 0.5 + 1e-9);
  CHECK(last.info.count("vessel:reaction vessel") == 1);
  CHECK_THROWS_AS(env->step(a), EpisodeDone);
}

TEST_CASE("fictitious: non-E targets pay for E") {
  auto env = bench(BenchKind::reaction, "fictitious");
  env->reset(2, std::string("F"));
  // inventory order A, B, C, D
  std::vector<double> a{1.0, 0.0, 1.0, 0.0, 0.0, 1.0};
  StepResult r;
  while (!env->done()) r = env->step(a);
  const Vessel& v = env->vessels()[0];
  CHECK(total_moles(v, "E") == 0.0);
  CHECK(r.reward == doctest::Approx(total_moles(v, "F") - total_moles(v, "E")));
  CHECK(r.reward > 0.9);
}

TEST_CASE("same seed, same observations") {
  for (auto kind : {BenchKind::reaction, BenchKind::extraction, BenchKind::distillation}) {
    auto a = bench(kind);
    auto b = bench(kind);
    CHECK(a->reset(77) == b->reset(77));
    CHECK(a->target() == b->target());
  }
}

TEST_CASE("extraction bench layout and initial state") {
  auto env = bench(BenchKind::extraction);
  CHECK(env->action_spec().kind == ActionSpec::Kind::discrete);
  CHECK(env->action_spec().choices() == 40);
  CHECK(env->observation_spec().size() == 307);
  CHECK(env->max_steps() == 50);
  env->reset(0, std::string("dodecane"));
  const Vessel& ev = env->vessels()[0];
  CHECK(ev.label == "EV");
  CHECK(total_moles(ev, "diethyl ether") == 4.0);
  CHECK(total_moles(ev, "NaCl") == doctest::Approx(1.0));
  CHECK(total_moles(ev, "dodecane") == doctest::Approx(1.0));
  env->reset(0, std::string("NaCl"));
  CHECK(total_moles(env->vessels()[0], "dodecane") == doctest::Approx(1.0));
  CHECK_THROWS_AS(env->step(Action{std::size_t{40}}), IndexOutOfRange);
}

TEST_CASE("ending at once earns nothing") {
  for (auto kind : {BenchKind::extraction, BenchKind::distillation}) {
    auto env = bench(kind);
    env->reset(4);
    const auto& spec = env->action_spec();
    const auto r = env->step(Action{spec.flatten(spec.actions - 1, 0)});
    CHECK(r.done);
    CHECK(r.reward == 0.0);
    CHECK(env->step_count() == 1);
  }
}

TEST_CASE("extraction: water wash moves salt out of the product vessel") {
  auto env = bench(BenchKind::extraction);
  env->reset(0, std::string("dodecane"));
  const auto& spec = env->action_spec();
  const std::size_t full = spec.multipliers - 1;
  env->step(Action{spec.flatten(2, full)});  // add water
  env->step(Action{spec.flatten(0, full)});  // mix
  env->step(Action{spec.flatten(1, full)});  // settle
  env->step(Action{spec.flatten(4, 1)});     // drain 0.4 into B1
  const auto r = env->step(Action{spec.flatten(7, 0)});
  CHECK(r.done);
  CHECK(r.reward > 0.0);
  // Bound: (1 - initial purity) * amount
  CHECK(r.reward <= (1.0 - 1.0 / 3.0) + 1e-12);
  CHECK(total_moles(env->vessels()[1], "NaCl") > 0.5);
}

TEST_CASE("distillation bench layout and initial purity") {
  auto env = bench(BenchKind::distillation);
  CHECK(env->action_spec().choices() == 40);
  CHECK(env->observation_spec().size() == 307);
  env->reset(0, std::string("dodecane"));
  const auto vs = env->vessels();
  CHECK(absolute_purity(vs, env->registry(), "dodecane") == doctest::Approx(1.0 / 6.0));
  CHECK(vs[0].label == "DV");
}

TEST_CASE("distillation: cooling alone earns nothing") {
  auto env = bench(BenchKind::distillation);
  env->reset(3);
  StepResult r;
  for (int i = 0; i < 5; ++i) r = env->step(Action{std::size_t{0}});  // strongest cooling
  r = env->step(Action{std::size_t{30}});
  CHECK(r.done);
  CHECK(r.reward == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(env->vessels()[0].temperature < 298.15);
}

TEST_CASE("step budget zero means done at reset") {
  auto env = bench(BenchKind::extraction);
  env->set_max_steps(0);
  env->reset(0);
  CHECK(env->done());
  CHECK_THROWS_AS(env->step(Action{std::size_t{0}}), EpisodeDone);
}

TEST_CASE("input vessel replaces the primary vessel contents") {
  auto env = bench(BenchKind::distillation);
  Vessel in;
  in.label = "from elsewhere";
  add_material(in, env->registry(), "hexane", 2.0, PhaseTag::liquid);
  env->set_input_vessel(in);
  env->reset(0, std::string("dodecane"));
  const Vessel& dv = env->vessels()[0];
  CHECK(dv.label == "DV");
  CHECK(dv.volume_capacity == env->config().distillation.capacity);
  CHECK(total_moles(dv, "hexane") == 2.0);
  CHECK(total_moles(dv, "diethyl ether") == 0.0);
}
