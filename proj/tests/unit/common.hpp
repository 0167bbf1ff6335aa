#pragma once

#include <initializer_list>
#include <string>

#include "chemgym/bench_config.hpp"
#include "chemgym/materials.hpp"

namespace testing {

inline const chemgym::MaterialRegistry& shipped() {
  static const auto reg = chemgym::load_registry_file(chemgym::data_dir() / "materials.json");
  return reg;
}

// Hand-written record with round numbers so oracles are easy to compute by hand.
inline chemgym::Material material(const std::string& name, double density, double polarity,
                                  std::initializer_list<chemgym::Role> roles,
                                  chemgym::Phase phase = chemgym::Phase::liquid) {
  chemgym::Material m;
  m.name = name;
  m.molar_mass = 100.0;
  m.density = density;
  m.polarity = polarity;
  m.heat_capacity_molar = 100.0;
  m.boiling_point = 350.0;
  m.enthalpy_vaporization = 30000.0;
  m.solubility_limit = 10.0;
  m.phase_default = phase;
  for (auto r : roles) m.roles |= static_cast<std::uint8_t>(r);
  return m;
}

inline chemgym::BenchResources resources(chemgym::BenchKind kind, const std::string& scenario = "") {
  return chemgym::load_resources(chemgym::default_config_path(kind, scenario));
}

}  // namespace testing
