#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "chemgym/kinetics.hpp"
#include "chemgym/materials.hpp"

namespace chemgym {

enum class BenchKind { reaction, extraction, distillation };

std::string_view to_string(BenchKind k);
/// Accepts "rxn", "ext", "dit"; throws ConfigError otherwise.
BenchKind bench_kind_from_string(std::string_view s);

using Amounts = std::vector<std::pair<std::string, double>>;

struct ReactionSettings {
  std::string solvent = "diethyl ether";
  double solvent_amount = 4.0;
  Amounts inventory;
  // Non-empty: reward is moles(target) - moles(penalty) unless target == penalty.
  std::string penalty;
  double temperature_initial = 288.15, temperature_min = 273.15, temperature_max = 303.15;
  double temperature_unit = 15.0;
  double volume_initial = 1.0, volume_min = 0.5, volume_max = 2.0, volume_unit = 0.25;
  double pressure = 101.325, pressure_max = 202.65;
  double dt_per_step = 1.0;
  std::size_t spectrum_bins = 100;
  IntegratorConfig integrator;
  // target -> (reactant -> step at which the heuristic starts adding it)
  std::map<std::string, std::map<std::string, std::size_t>> heuristic_delays;
};

struct ExtractionSettings {
  double capacity = 1.5;
  std::string solvent = "diethyl ether";
  double solvent_amount = 4.0;
  std::string salt = "NaCl";
  double salt_amount = 1.0;
  double target_amount = 1.0;
  std::string filler = "dodecane";  // loaded instead when the target is the salt
  std::string solvent_s1 = "water";
  std::string solvent_s2 = "hexane";
  double add_unit_litres = 0.4;
  double mix_unit = 5.0;
  double settle_unit = 5.0;
  std::vector<double> multipliers{0.2, 0.4, 0.6, 0.8, 1.0};
  std::vector<std::pair<std::string, double>> heuristic_script;
  std::size_t pixels = 100;
};

struct DistillationSettings {
  double capacity = 1.0;
  double temperature = 298.15;
  std::string solvent = "diethyl ether";
  double solvent_amount = 4.0;
  double target_amount = 1.0;
  bool extra_material = true;
  std::string salt = "NaCl";
  std::string filler = "dodecane";
  double q_unit = 12000.0;  // J per unit heat multiplier
  std::vector<double> heat_multipliers;
  std::vector<double> pour_multipliers;
  std::size_t heuristic_boil_steps = 10;
  std::size_t heuristic_second_boil_steps = 12;
  std::size_t pixels = 100;
};

struct BenchConfig {
  BenchKind kind = BenchKind::reaction;
  std::string scenario;
  std::filesystem::path registry_path;
  std::filesystem::path reactions_path;  // reaction bench only
  std::size_t max_steps = 20;
  std::uint64_t seed = 0;
  std::vector<std::string> targets;
  ReactionSettings reaction;
  ExtractionSettings extraction;
  DistillationSettings distillation;
};

/// JSON-with-comments scenario file; relative paths resolve against its
/// directory. Throws ConfigError.
BenchConfig load_bench_config(const std::filesystem::path& path);

/// Directory holding the shipped data: $CHEMGYM_DATA_DIR or the build-time default.
std::filesystem::path data_dir();
/// Shipped config for (bench, scenario); scenario may be empty for ext/dit.
/// Throws UnknownScenario.
std::filesystem::path default_config_path(BenchKind kind, std::string_view scenario);

/// Everything a bench instance reads; shared read-only between instances.
struct BenchResources {
  BenchConfig config;
  std::shared_ptr<const MaterialRegistry> registry;
  std::shared_ptr<const ReactionNetwork> network;  // null for ext/dit
};

/// Loads registry/network named by the config and checks them against it.
/// Throws ConfigError.
BenchResources load_resources(const BenchConfig& cfg);
BenchResources load_resources(const std::filesystem::path& config_path);

}  // namespace chemgym
