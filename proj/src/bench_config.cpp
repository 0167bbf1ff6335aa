#include "chemgym/bench_config.hpp"

#include <cstdlib>
#include <fstream>
#include <iterator>

#include <json.hpp>

#include "chemgym/errors.hpp"

#ifndef CHEMGYM_DEFAULT_DATA_DIR
#define CHEMGYM_DEFAULT_DATA_DIR "data"
#endif

namespace chemgym {

namespace {

using nlohmann::json;

template <class T>
void read(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

Amounts read_amounts(const json& j) {
  Amounts out;
  for (const auto& e : j) {
    if (!e.is_array() || e.size() != 2) throw ConfigError("amount entries are [name, mol] pairs");
    out.emplace_back(e[0].get<std::string>(), e[1].get<double>());
  }
  return out;
}

void read_reaction(const json& j, ReactionSettings& s) {
  read(j, "solvent", s.solvent);
  read(j, "solvent_amount", s.solvent_amount);
  if (j.contains("inventory")) s.inventory = read_amounts(j.at("inventory"));
  read(j, "penalty", s.penalty);
  if (j.contains("temperature")) {
    const auto& t = j.at("temperature");
    read(t, "initial", s.temperature_initial);
    read(t, "min", s.temperature_min);
    read(t, "max", s.temperature_max);
    read(t, "unit", s.temperature_unit);
  }
  if (j.contains("volume")) {
    const auto& v = j.at("volume");
    read(v, "initial", s.volume_initial);
    read(v, "min", s.volume_min);
    read(v, "max", s.volume_max);
    read(v, "unit", s.volume_unit);
  }
  read(j, "pressure", s.pressure);
  read(j, "pressure_max", s.pressure_max);
  read(j, "dt_per_step", s.dt_per_step);
  read(j, "spectrum_bins", s.spectrum_bins);
  if (j.contains("integrator")) {
    const auto& i = j.at("integrator");
    read(i, "rel_tol", s.integrator.rel_tol);
    read(i, "abs_tol", s.integrator.abs_tol);
    read(i, "max_steps", s.integrator.max_steps);
  }
  if (j.contains("heuristic_delays"))
    s.heuristic_delays =
        j.at("heuristic_delays").get<std::map<std::string, std::map<std::string, std::size_t>>>();

  if (s.inventory.empty()) throw ConfigError("reaction bench needs an inventory");
  if (!(s.temperature_min > 0.0 && s.temperature_min <= s.temperature_initial &&
        s.temperature_initial <= s.temperature_max))
    throw ConfigError("temperature range must satisfy 0 < min <= initial <= max");
  if (!(s.volume_min > 0.0 && s.volume_min <= s.volume_initial && s.volume_initial <= s.volume_max))
    throw ConfigError("volume range must satisfy 0 < min <= initial <= max");
  if (!(s.dt_per_step >= 0.0)) throw ConfigError("dt_per_step must be >= 0");
  if (!(s.pressure_max > 0.0)) throw ConfigError("pressure_max must be positive");
  if (!(s.integrator.rel_tol > 0.0 && s.integrator.abs_tol > 0.0))
    throw ConfigError("integrator tolerances must be positive");
}

void read_extraction(const json& j, ExtractionSettings& s) {
  read(j, "capacity", s.capacity);
  read(j, "solvent", s.solvent);
  read(j, "solvent_amount", s.solvent_amount);
  read(j, "salt", s.salt);
  read(j, "salt_amount", s.salt_amount);
  read(j, "target_amount", s.target_amount);
  read(j, "filler", s.filler);
  read(j, "solvent_s1", s.solvent_s1);
  read(j, "solvent_s2", s.solvent_s2);
  read(j, "add_unit_litres", s.add_unit_litres);
  read(j, "mix_unit", s.mix_unit);
  read(j, "settle_unit", s.settle_unit);
  read(j, "multipliers", s.multipliers);
  read(j, "pixels", s.pixels);
  if (j.contains("heuristic_script"))
    for (const auto& e : j.at("heuristic_script")) {
      if (!e.is_array() || e.size() != 2)
        throw ConfigError("heuristic_script entries are [action, multiplier] pairs");
      s.heuristic_script.emplace_back(e[0].get<std::string>(), e[1].get<double>());
    }
  if (s.multipliers.empty()) throw ConfigError("extraction multipliers must not be empty");
  if (!(s.capacity > 0.0)) throw ConfigError("extraction capacity must be positive");
}

void read_distillation(const json& j, DistillationSettings& s) {
  read(j, "capacity", s.capacity);
  read(j, "temperature", s.temperature);
  read(j, "solvent", s.solvent);
  read(j, "solvent_amount", s.solvent_amount);
  read(j, "target_amount", s.target_amount);
  read(j, "extra_material", s.extra_material);
  read(j, "salt", s.salt);
  read(j, "filler", s.filler);
  read(j, "q_unit", s.q_unit);
  read(j, "heat_multipliers", s.heat_multipliers);
  read(j, "pour_multipliers", s.pour_multipliers);
  read(j, "heuristic_boil_steps", s.heuristic_boil_steps);
  read(j, "heuristic_second_boil_steps", s.heuristic_second_boil_steps);
  read(j, "pixels", s.pixels);
  if (s.heat_multipliers.empty())
    for (int i = 0; i < 10; ++i) s.heat_multipliers.push_back(-1.0 + 2.0 * i / 9.0);
  if (s.pour_multipliers.empty())
    for (int i = 1; i <= 10; ++i) s.pour_multipliers.push_back(i / 10.0);
  if (s.heat_multipliers.size() != s.pour_multipliers.size())
    throw ConfigError("heat and pour multiplier lists must have equal length");
  if (!(s.q_unit > 0.0)) throw ConfigError("q_unit must be positive");
  if (!(s.capacity > 0.0)) throw ConfigError("distillation capacity must be positive");
}

}  // namespace

std::string_view to_string(BenchKind k) {
  switch (k) {
    case BenchKind::reaction: return "rxn";
    case BenchKind::extraction: return "ext";
    case BenchKind::distillation: return "dit";
  }
  return "rxn";
}

BenchKind bench_kind_from_string(std::string_view s) {
  if (s == "rxn") return BenchKind::reaction;
  if (s == "ext") return BenchKind::extraction;
  if (s == "dit") return BenchKind::distillation;
  throw ConfigError("unknown bench '" + std::string(s) + "' (expected rxn, ext or dit)");
}

BenchConfig load_bench_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  BenchConfig cfg;
  try {
    const json j = json::parse(text, nullptr, true, true);
    if (j.value("format_version", 0) != 1)
      throw ConfigError("config needs \"format_version\": 1");
    cfg.kind = bench_kind_from_string(j.at("bench").get<std::string>());
    read(j, "scenario", cfg.scenario);
    const auto base = path.parent_path();
    cfg.registry_path = base / j.at("registry").get<std::string>();
    if (j.contains("reactions")) cfg.reactions_path = base / j.at("reactions").get<std::string>();
    read(j, "max_steps", cfg.max_steps);
    read(j, "seed", cfg.seed);
    cfg.targets = j.at("targets").get<std::vector<std::string>>();
    switch (cfg.kind) {
      case BenchKind::reaction:
        if (cfg.reactions_path.empty()) throw ConfigError("reaction bench needs \"reactions\"");
        read_reaction(j.at("reaction"), cfg.reaction);
        break;
      case BenchKind::extraction:
        read_extraction(j.value("extraction", json::object()), cfg.extraction);
        break;
      case BenchKind::distillation:
        read_distillation(j.value("distillation", json::object()), cfg.distillation);
        break;
    }
  } catch (const json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  if (cfg.targets.empty()) throw ConfigError(path.string() + ": no targets");
  return cfg;
}

std::filesystem::path data_dir() {
  if (const char* env = std::getenv("CHEMGYM_DATA_DIR"); env && *env) return env;
  return CHEMGYM_DEFAULT_DATA_DIR;
}

std::filesystem::path default_config_path(BenchKind kind, std::string_view scenario) {
  const auto dir = data_dir() / "config";
  switch (kind) {
    case BenchKind::reaction:
      if (scenario.empty() || scenario == "wurtz") return dir / "rxn_wurtz.json";
      if (scenario == "fictitious") return dir / "rxn_fictitious.json";
      break;
    case BenchKind::extraction:
      if (scenario.empty() || scenario == "wurtz") return dir / "ext.json";
      break;
    case BenchKind::distillation:
      if (scenario.empty() || scenario == "wurtz") return dir / "dit.json";
      if (scenario == "no-salt") return dir / "dit_no_salt.json";
      break;
  }
  throw UnknownScenario("no scenario '" + std::string(scenario) + "' for bench " +
                        std::string(to_string(kind)));
}

BenchResources load_resources(const BenchConfig& cfg) {
  BenchResources res;
  res.config = cfg;
  try {
    res.registry = std::make_shared<const MaterialRegistry>(load_registry_file(cfg.registry_path));
    if (cfg.kind == BenchKind::reaction) {
      res.network = std::make_shared<const ReactionNetwork>(load_reactions_file(cfg.reactions_path));
      check_against(*res.network, *res.registry);
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  const auto& reg = *res.registry;
  auto need = [&](const std::string& name, const char* what) {
    if (!reg.contains(name))
      throw ConfigError(std::string(what) + " '" + name + "' is not in registry '" + reg.name() + "'");
  };
  for (const auto& t : cfg.targets) need(t, "target");
  switch (cfg.kind) {
    case BenchKind::reaction: {
      const auto& r = cfg.reaction;
      need(r.solvent, "solvent");
      if (!reg.lookup(r.solvent).is_solvent())
        throw ConfigError("'" + r.solvent + "' is not a solvent");
      for (const auto& [name, n] : r.inventory) {
        need(name, "reactant");
        if (res.network->index_of(name) < 0)
          throw ConfigError("reactant '" + name + "' does not take part in network '" +
                            res.network->name() + "'");
        if (!(n >= 0.0)) throw ConfigError("inventory amounts must be >= 0");
      }
      for (const auto& t : cfg.targets)
        if (res.network->index_of(t) < 0)
          throw ConfigError("target '" + t + "' is not produced by network '" +
                            res.network->name() + "'");
      if (!r.penalty.empty() && res.network->index_of(r.penalty) < 0)
        throw ConfigError("penalty material '" + r.penalty + "' is not in the network");
      break;
    }
    case BenchKind::extraction: {
      const auto& e = cfg.extraction;
      for (const auto* n : {&e.solvent, &e.solvent_s1, &e.solvent_s2}) {
        need(*n, "solvent");
        if (!reg.lookup(*n).is_solvent()) throw ConfigError("'" + *n + "' is not a solvent");
      }
      need(e.salt, "salt");
      need(e.filler, "filler");
      break;
    }
    case BenchKind::distillation: {
      const auto& d = cfg.distillation;
      need(d.solvent, "solvent");
      need(d.salt, "salt");
      need(d.filler, "filler");
      break;
    }
  }
  return res;
}

BenchResources load_resources(const std::filesystem::path& config_path) {
  return load_resources(load_bench_config(config_path));
}

}  // namespace chemgym
