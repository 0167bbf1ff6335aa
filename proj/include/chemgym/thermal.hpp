#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "chemgym/vessel.hpp"

namespace chemgym {

inline constexpr double kMinTemperature = 0.1;  // K

/// Where the heat went. sensible + latent + unused == requested heat.
struct HeatReport {
  double sensible_J = 0.0;
  double latent_J = 0.0;
  double unused_J = 0.0;  // cooling demanded below the temperature floor
  std::map<std::string, double> vaporized;  // mol boiled off, per material
  std::map<std::string, double> vented;     // condensate the condenser could not hold
};

/// J/K over every amount in the vessel.
double heat_capacity(const Vessel& v, const MaterialRegistry& reg);

/// Liquid-pool materials sorted by ascending boiling point.
std::vector<std::pair<std::string, double>> boil_point_order(const Vessel& v,
                                                             const MaterialRegistry& reg);

/// Adds (q > 0) or removes (q < 0) heat. Boiling liquids hold the temperature
/// and condense solute-free into `condenser`. Throws EmptyVessel if the source
/// has no heat capacity and q != 0.
HeatReport apply_heat(Vessel& source, Vessel& condenser, const MaterialRegistry& reg, double q);

/// Precipitates dissolved solute above limit x host-solvent volume and
/// redissolves solids when there is room.
void equilibrate_solubility(Vessel& v, const MaterialRegistry& reg);

}  // namespace chemgym
