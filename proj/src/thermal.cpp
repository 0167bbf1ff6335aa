#include "chemgym/thermal.hpp"

#include <algorithm>
#include <cmath>

#include "chemgym/errors.hpp"
#include "chemgym/solvent_dynamics.hpp"

namespace chemgym {

namespace {

double host_volume(const Vessel& v, const MaterialRegistry& reg) {
  double vol = 0.0;
  for (const auto& h : host_solvents(v, reg)) vol += v.solvents.at(h) * reg.lookup(h).molar_volume();
  return vol;
}

// Solutes left without their solvent move to the remaining hosts, or drop out
// of solution as their default phase.
void release_orphans(Vessel& v, const MaterialRegistry& reg, const std::string& solvent) {
  std::vector<std::pair<std::string, double>> orphans;
  for (auto it = v.solutes.begin(); it != v.solutes.end();) {
    if (it->first.second == solvent) {
      orphans.emplace_back(it->first.first, it->second);
      it = v.solutes.erase(it);
    } else {
      ++it;
    }
  }
  const bool hosts_left = !host_solvents(v, reg).empty();
  for (const auto& [name, n] : orphans) {
    if (hosts_left) {
      add_material(v, reg, name, n, PhaseTag::dissolved);
      continue;
    }
    switch (reg.lookup(name).phase_default) {
      case Phase::liquid: v.solvents[name] += n; break;
      case Phase::gas: v.gases[name] += n; break;
      case Phase::solid: v.solids[name] += n; break;
    }
  }
}

}  // namespace

double heat_capacity(const Vessel& v, const MaterialRegistry& reg) {
  double c = 0.0;
  for (const auto& [name, n] : inventory(v)) c += n * reg.lookup(name).heat_capacity_molar;
  return c;
}

std::vector<std::pair<std::string, double>> boil_point_order(const Vessel& v,
                                                             const MaterialRegistry& reg) {
  std::vector<std::pair<std::string, double>> out;
  for (const auto& [name, n] : v.solvents)
    if (n > 0.0) out.emplace_back(name, reg.lookup(name).boiling_point);
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& b) { return a.second < b.second; });
  return out;
}

HeatReport apply_heat(Vessel& source, Vessel& condenser, const MaterialRegistry& reg, double q) {
  HeatReport report;
  if (q == 0.0) return report;
  if (!(heat_capacity(source, reg) > 0.0))
    throw EmptyVessel("no heat capacity in '" + source.label + "'");

  if (q < 0.0) {
    const double c = heat_capacity(source, reg);
    const double target = source.temperature + q / c;
    if (target >= kMinTemperature) {
      source.temperature = target;
      report.sensible_J = q;
    } else {
      report.sensible_J = c * (kMinTemperature - source.temperature);
      report.unused_J = q - report.sensible_J;
      source.temperature = kMinTemperature;
    }
    return report;
  }

  double remaining = q;
  while (remaining > 0.0) {
    const double c = heat_capacity(source, reg);
    if (!(c > 0.0)) {
      report.unused_J += remaining;
      break;
    }
    const auto order = boil_point_order(source, reg);
    if (order.empty()) {
      source.temperature += remaining / c;
      report.sensible_J += remaining;
      break;
    }
    const auto& [name, bp] = order.front();
    if (source.temperature != bp) {
      // Negative when the vessel starts above the boiling point (flash).
      const double need = c * (bp - source.temperature);
      if (need > remaining) {
        source.temperature += remaining / c;
        report.sensible_J += remaining;
        break;
      }
      source.temperature = bp;
      report.sensible_J += need;
      remaining -= need;
    }

    const Material& m = reg.lookup(name);
    const double n = source.solvents.at(name);
    const double full = n * m.enthalpy_vaporization;
    const double boiled = full > remaining ? remaining / m.enthalpy_vaporization : n;
    const double spent = full > remaining ? remaining : full;
    report.latent_J += spent;
    remaining -= spent;
    report.vaporized[name] += boiled;

    const double room = std::max(0.0, condenser.volume_capacity - liquid_volume(condenser, reg));
    const double kept = std::min(boiled, room / m.molar_volume());
    if (kept > 0.0) condenser.solvents[name] += kept;
    if (boiled - kept > 0.0) report.vented[name] += boiled - kept;

    if (boiled == n) {
      source.solvents.erase(name);
      release_orphans(source, reg, name);
      equilibrate_solubility(source, reg);
    } else {
      source.solvents[name] = n - boiled;
    }
    if (full > spent) break;
  }
  normalize_amounts(source);
  normalize_amounts(condenser);
  return report;
}

void equilibrate_solubility(Vessel& v, const MaterialRegistry& reg) {
  const double vol = host_volume(v, reg);
  std::vector<std::string> names;
  for (const auto& [key, n] : v.solutes) names.push_back(key.first);
  for (const auto& [name, n] : v.solids)
    if (reg.lookup(name).has_role(Role::solute)) names.push_back(name);
  std::sort(names.begin(), names.end());
  names.erase(std::unique(names.begin(), names.end()), names.end());

  for (const auto& name : names) {
    const double cap = reg.lookup(name).solubility_limit * vol;
    const double dissolved = dissolved_moles(v, name);
    if (dissolved > cap) {
      const double keep = cap / dissolved;
      double moved = 0.0;
      for (auto& [key, n] : v.solutes) {
        if (key.first != name) continue;
        const double before = n;
        n *= keep;
        moved += before - n;
      }
      v.solids[name] += moved;
    } else if (vol > 0.0 && reg.lookup(name).has_role(Role::solute)) {
      auto it = v.solids.find(name);
      if (it == v.solids.end()) continue;
      const double n = std::min(it->second, cap - dissolved);
      if (n <= 0.0) continue;
      it->second -= n;
      add_material(v, reg, name, n, PhaseTag::dissolved);
    }
  }
  normalize_amounts(v);
}

}  // namespace chemgym
