#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>

#include "chemgym/materials.hpp"

namespace chemgym {

enum class PhaseTag { solid, liquid, gas, dissolved };

std::string_view to_string(PhaseTag p);

/// (solute, host solvent)
using SoluteKey = std::pair<std::string, std::string>;

/// Mutable container state. Amounts in mol; `solvents` is the liquid pool
/// (every free liquid, solvent role or not), dissolved species live in
/// `solutes` keyed by their host solvent and take no volume.
struct Vessel {
  std::string label;
  double temperature = 298.15;   // K
  double volume_capacity = 1.0;  // L
  double pressure = 101.325;     // kPa
  double settle_time = 0.0;
  std::map<std::string, double> solvents;
  std::map<SoluteKey, double> solutes;
  std::map<std::string, double> solids;
  std::map<std::string, double> gases;

  bool operator==(const Vessel&) const = default;
};

struct TransferReport {
  std::map<std::pair<std::string, PhaseTag>, double> moved;
  std::map<std::string, double> overflow;

  double moved_total() const;
  double overflow_total() const;
};

inline constexpr double kAmountTolerance = 1e-12;

/// Throws CapacityExceeded when a liquid addition would overfill the vessel
/// and NoSolventPresent for a dissolved addition without a host solvent.
/// Dissolved amounts are split across solvents by liquid volume.
void add_material(Vessel& v, const MaterialRegistry& reg, std::string_view material, double amount,
                  PhaseTag phase);

/// Moves the top `fraction` of the liquid column. Both vessels end fully mixed.
TransferReport pour(Vessel& src, Vessel& dst, const MaterialRegistry& reg, double fraction);
/// Moves the bottom `fraction` of the liquid column. Only dst is agitated.
TransferReport drain(Vessel& src, Vessel& dst, const MaterialRegistry& reg, double fraction);

double liquid_volume(const Vessel& v, const MaterialRegistry& reg);
double free_volume(const Vessel& v, const MaterialRegistry& reg);
double total_moles(const Vessel& v, std::string_view material);
double dissolved_moles(const Vessel& v, std::string_view material);
std::map<std::string, double> inventory(const Vessel& v);
bool is_empty(const Vessel& v);

/// Clamps tiny negatives and drops zero entries.
void normalize_amounts(Vessel& v);

/// Amount-weighted purity over solute particles (solvent-role materials
/// excluded, dissolved salts counted per ion).
double solute_purity(std::span<const Vessel> vessels, const MaterialRegistry& reg,
                     std::string_view target);
/// Amount-weighted purity over all formula moles in each vessel.
double absolute_purity(std::span<const Vessel> vessels, const MaterialRegistry& reg,
                       std::string_view target);

void save_vessel(const Vessel& v, const MaterialRegistry& reg, std::ostream& out);
/// Throws ParseError on malformed input and ValidationError when the snapshot
/// was written against another registry or names unknown materials.
Vessel load_vessel(std::istream& in, const MaterialRegistry& reg);
void save_vessel_file(const Vessel& v, const MaterialRegistry& reg, const std::filesystem::path& p);
Vessel load_vessel_file(const std::filesystem::path& p, const MaterialRegistry& reg);

}  // namespace chemgym
