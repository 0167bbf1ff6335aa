#include <doctest.h>

#include "chemgym/errors.hpp"
#include "chemgym/thermal.hpp"
#include "common.hpp"

using namespace chemgym;

namespace {

Vessel with(std::initializer_list<std::pair<const char*, double>> liquids, double capacity = 2.0) {
  Vessel v;
  v.volume_capacity = capacity;
  for (const auto& [name, n] : liquids) add_material(v, testing::shipped(), name, n, PhaseTag::liquid);
  return v;
}

Vessel big_condenser() {
  Vessel c;
  c.volume_capacity = 10.0;
  return c;
}

}  // namespace

TEST_CASE("sensible heating is q / C") {
  const auto& reg = testing::shipped();
  Vessel v = with({{"water", 10.0}});
  Vessel c = big_condenser();
  CHECK(heat_capacity(v, reg) == doctest::Approx(753.0));
  const auto r = apply_heat(v, c, reg, 1000.0);
  CHECK(v.temperature == doctest::Approx(298.15 + 1000.0 / 753.0));
  CHECK(r.sensible_J == 1000.0);
  CHECK(r.latent_J == 0.0);
  CHECK(is_empty(c));
}

TEST_CASE("boiling holds the lower boiling point until that liquid is gone") {
  const auto& reg = testing::shipped();
  Vessel v = with({{"diethyl ether", 4.0}, {"water", 10.0}});
  Vessel c = big_condenser();
  const double C = 4.0 * 172.5 + 10.0 * 75.3;
  const double to_bp = C * (307.8 - 298.15);
  const double q = to_bp + 26520.0;  // one mole of ether
  const auto r = apply_heat(v, c, reg, q);
  CHECK(v.temperature == doctest::Approx(307.8));
  CHECK(r.vaporized.at("diethyl ether") == doctest::Approx(1.0));
  CHECK(v.solvents.at("diethyl ether") == doctest::Approx(3.0));
  CHECK(c.solvents.at("diethyl ether") == doctest::Approx(1.0));
  CHECK(r.sensible_J + r.latent_J + r.unused_J == doctest::Approx(q));

  // Enough for the rest of the ether plus some more: temperature climbs toward water's plateau.
  const auto r2 = apply_heat(v, c, reg, 3.0 * 26520.0 + 500.0);
  CHECK(v.solvents.count("diethyl ether") == 0);
  CHECK(v.temperature == doctest::Approx(307.8 + 500.0 / (10.0 * 75.3)));
  CHECK(r2.latent_J == doctest::Approx(3.0 * 26520.0));
}

TEST_CASE("boiling order follows boiling points") {
  const auto& reg = testing::shipped();
  const Vessel v = with({{"water", 1.0}, {"hexane", 1.0}, {"diethyl ether", 1.0}});
  const auto order = boil_point_order(v, reg);
  REQUIRE(order.size() == 3);
  CHECK(order[0].first == "diethyl ether");
  CHECK(order[1].first == "hexane");
  CHECK(order[2].first == "water");
}

TEST_CASE("a full condenser vents the rest") {
  const auto& reg = testing::shipped();
  Vessel v = with({{"diethyl ether", 4.0}});
  Vessel c;
  c.volume_capacity = 0.05;
  const auto r = apply_heat(v, c, reg, 1e6);
  const double held = 0.05 / reg.lookup("diethyl ether").molar_volume();
  CHECK(c.solvents.at("diethyl ether") == doctest::Approx(held));
  CHECK(r.vented.at("diethyl ether") == doctest::Approx(4.0 - held));
}

TEST_CASE("cooling stops at the temperature floor") {
  const auto& reg = testing::shipped();
  Vessel v = with({{"water", 1.0}});
  Vessel c = big_condenser();
  const auto r = apply_heat(v, c, reg, -1e6);
  CHECK(v.temperature == kMinTemperature);
  CHECK(r.sensible_J == doctest::Approx(75.3 * (kMinTemperature - 298.15)));
  CHECK(r.sensible_J + r.unused_J == doctest::Approx(-1e6));
}

TEST_CASE("a vessel above its boiling point flashes") {
  const auto& reg = testing::shipped();
  Vessel v = with({{"diethyl ether", 1.0}});
  v.temperature = 310.0;
  Vessel c = big_condenser();
  const auto r = apply_heat(v, c, reg, 100.0);
  CHECK(v.temperature == doctest::Approx(307.8));
  CHECK(r.sensible_J == doctest::Approx(172.5 * (307.8 - 310.0)));
  CHECK(r.sensible_J + r.latent_J == doctest::Approx(100.0));
}

TEST_CASE("heating nothing is an error; zero heat is a no-op") {
  const auto& reg = testing::shipped();
  Vessel v;
  Vessel c = big_condenser();
  CHECK_NOTHROW(apply_heat(v, c, reg, 0.0));
  CHECK_THROWS_AS(apply_heat(v, c, reg, 10.0), EmptyVessel);
}

TEST_CASE("solutes drop out when their solvent boils away") {
  const auto& reg = testing::shipped();
  Vessel v = with({{"diethyl ether", 4.0}}, 1.0);
  add_material(v, reg, "dodecane", 1.0, PhaseTag::dissolved);
  add_material(v, reg, "NaCl", 1.0, PhaseTag::dissolved);
  Vessel c = big_condenser();
  apply_heat(v, c, reg, 130000.0);
  CHECK(v.solvents.count("diethyl ether") == 0);
  CHECK(v.solutes.empty());
  CHECK(v.solids.at("NaCl") == doctest::Approx(1.0));
  // The liquid product becomes the liquid pool and starts boiling only at its own point.
  CHECK(total_moles(v, "dodecane") == doctest::Approx(1.0));
  CHECK(v.temperature <= reg.lookup("dodecane").boiling_point);
  CHECK(c.solutes.empty());
}

TEST_CASE("solubility limit scales with host volume") {
  const auto& reg = testing::shipped();
  Vessel v = with({{"water", 1.0}});
  const double cap = reg.lookup("NaCl").solubility_limit * reg.lookup("water").molar_volume();
  add_material(v, reg, "NaCl", 1.0, PhaseTag::dissolved);
  equilibrate_solubility(v, reg);
  CHECK(dissolved_moles(v, "NaCl") == doctest::Approx(cap));
  CHECK(v.solids.at("NaCl") == doctest::Approx(1.0 - cap));
  // More water redissolves the precipitate.
  add_material(v, reg, "water", 20.0, PhaseTag::liquid);
  equilibrate_solubility(v, reg);
  CHECK(dissolved_moles(v, "NaCl") == doctest::Approx(1.0));
  CHECK(v.solids.count("NaCl") == 0);
}
