#include "chemgym/vessel.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>

#include <json.hpp>

#include "chemgym/errors.hpp"
#include "chemgym/solvent_dynamics.hpp"

namespace chemgym {

namespace {

constexpr int kSnapshotVersion = 1;

template <class Map>
void clean(Map& m) {
  for (auto it = m.begin(); it != m.end();) {
    if (it->second < kAmountTolerance && it->second > -kAmountTolerance && it->second != 0.0)
      it->second = std::max(it->second, 0.0);
    if (it->second <= 0.0) it = m.erase(it);
    else ++it;
  }
}

double layer_cdf(double x, double mu, double sigma) {
  return 0.5 * std::erfc(-(x - mu) / (sigma * std::sqrt(2.0)));
}

// Fraction of each layer lying on the moved side of the cut.
std::vector<double> transfer_shares(const LayerProfile& prof, double fraction, bool top_first) {
  std::vector<double> share(prof.size(), 0.0);
  if (fraction <= 0.0) return share;
  if (fraction >= 1.0) {
    std::fill(share.begin(), share.end(), 1.0);
    return share;
  }
  const double s = prof.sigma();
  if (top_first) {
    const double x = prof.quantile(1.0 - fraction);
    for (std::size_t i = 0; i < prof.size(); ++i) share[i] = 1.0 - layer_cdf(x, prof.mean[i], s);
  } else {
    const double x = prof.quantile(fraction);
    for (std::size_t i = 0; i < prof.size(); ++i) share[i] = layer_cdf(x, prof.mean[i], s);
  }
  return share;
}

TransferReport transfer(Vessel& src, Vessel& dst, const MaterialRegistry& reg, double fraction,
                        bool top_first) {
  TransferReport report;
  if (!(fraction > 0.0)) return report;
  fraction = std::min(fraction, 1.0);

  const LayerProfile prof = layer_profile(src, reg);
  if (prof.empty()) return report;
  const auto share = transfer_shares(prof, fraction, top_first);

  std::map<std::string, double> liquid_out;
  std::map<SoluteKey, double> solute_out;
  double volume_out = 0.0;
  for (std::size_t i = 0; i < prof.size(); ++i) {
    const std::string& name = prof.names[i];
    const double n = src.solvents.at(name) * share[i];
    if (n <= 0.0) continue;
    liquid_out[name] = n;
    volume_out += n * reg.lookup(name).molar_volume();
  }
  for (const auto& [key, amount] : src.solutes) {
    const auto it = std::find(prof.names.begin(), prof.names.end(), key.second);
    if (it == prof.names.end()) continue;
    const double n = amount * share[static_cast<std::size_t>(it - prof.names.begin())];
    if (n > 0.0) solute_out[key] = n;
  }

  // Remove from the source exactly what leaves it.
  for (const auto& [name, n] : liquid_out) src.solvents[name] -= n;
  for (const auto& [key, n] : solute_out) src.solutes[key] -= n;

  const double room = std::max(0.0, dst.volume_capacity - liquid_volume(dst, reg));
  const double keep = volume_out > room ? room / volume_out : 1.0;
  for (const auto& [name, n] : liquid_out) {
    const double in = n * keep;
    dst.solvents[name] += in;
    report.moved[{name, PhaseTag::liquid}] += in;
    if (n - in > 0.0) report.overflow[name] += n - in;
  }
  for (const auto& [key, n] : solute_out) {
    const double in = n * keep;
    dst.solutes[key] += in;
    report.moved[{key.first, PhaseTag::dissolved}] += in;
    if (n - in > 0.0) report.overflow[key.first] += n - in;
  }
  normalize_amounts(src);
  normalize_amounts(dst);
  return report;
}

nlohmann::ordered_json amounts_to_json(const std::map<std::string, double>& m) {
  auto j = nlohmann::ordered_json::object();
  for (const auto& [k, v] : m) j[k] = v;
  return j;
}

}  // namespace

std::string_view to_string(PhaseTag p) {
  switch (p) {
    case PhaseTag::solid: return "solid";
    case PhaseTag::liquid: return "liquid";
    case PhaseTag::gas: return "gas";
    case PhaseTag::dissolved: return "dissolved";
  }
  return "liquid";
}

double TransferReport::moved_total() const {
  double s = 0.0;
  for (const auto& [k, v] : moved) s += v;
  return s;
}

double TransferReport::overflow_total() const {
  double s = 0.0;
  for (const auto& [k, v] : overflow) s += v;
  return s;
}

void normalize_amounts(Vessel& v) {
  clean(v.solvents);
  clean(v.solutes);
  clean(v.solids);
  clean(v.gases);
}

double liquid_volume(const Vessel& v, const MaterialRegistry& reg) {
  double vol = 0.0;
  for (const auto& [name, n] : v.solvents) vol += n * reg.lookup(name).molar_volume();
  return vol;
}

double free_volume(const Vessel& v, const MaterialRegistry& reg) {
  return std::max(0.0, v.volume_capacity - liquid_volume(v, reg));
}

double dissolved_moles(const Vessel& v, std::string_view material) {
  double n = 0.0;
  for (const auto& [key, amount] : v.solutes)
    if (key.first == material) n += amount;
  return n;
}

double total_moles(const Vessel& v, std::string_view material) {
  const std::string name(material);
  double n = dissolved_moles(v, material);
  for (const auto* m : {&v.solvents, &v.solids, &v.gases}) {
    auto it = m->find(name);
    if (it != m->end()) n += it->second;
  }
  return n;
}

std::map<std::string, double> inventory(const Vessel& v) {
  std::map<std::string, double> inv;
  for (const auto* m : {&v.solvents, &v.solids, &v.gases})
    for (const auto& [name, n] : *m) inv[name] += n;
  for (const auto& [key, n] : v.solutes) inv[key.first] += n;
  return inv;
}

bool is_empty(const Vessel& v) {
  return v.solvents.empty() && v.solutes.empty() && v.solids.empty() && v.gases.empty();
}

void add_material(Vessel& v, const MaterialRegistry& reg, std::string_view material, double amount,
                  PhaseTag phase) {
  if (!(amount >= 0.0)) throw ValidationError("negative amount of " + std::string(material));
  const Material& m = reg.lookup(material);
  if (amount == 0.0) return;
  switch (phase) {
    case PhaseTag::solid: v.solids[m.name] += amount; break;
    case PhaseTag::gas: v.gases[m.name] += amount; break;
    case PhaseTag::liquid: {
      const double vol = liquid_volume(v, reg) + amount * m.molar_volume();
      if (vol > v.volume_capacity * (1.0 + 1e-12))
        throw CapacityExceeded("adding " + std::to_string(amount) + " mol " + m.name + " to '" +
                               v.label + "' needs " + std::to_string(vol) + " L of " +
                               std::to_string(v.volume_capacity) + " L");
      v.solvents[m.name] += amount;
      break;
    }
    case PhaseTag::dissolved: {
      const auto hosts = host_solvents(v, reg);
      if (hosts.empty())
        throw NoSolventPresent("no solvent in '" + v.label + "' to dissolve " + m.name);
      double total = 0.0;
      std::vector<double> vols;
      for (const auto& h : hosts) {
        vols.push_back(v.solvents.at(h) * reg.lookup(h).molar_volume());
        total += vols.back();
      }
      for (std::size_t i = 0; i < hosts.size(); ++i)
        v.solutes[{m.name, hosts[i]}] += amount * vols[i] / total;
      break;
    }
  }
}

TransferReport pour(Vessel& src, Vessel& dst, const MaterialRegistry& reg, double fraction) {
  if (!(fraction > 0.0)) return {};
  auto report = transfer(src, dst, reg, fraction, /*top_first=*/true);
  agitate(src, reg);
  agitate(dst, reg);
  return report;
}

TransferReport drain(Vessel& src, Vessel& dst, const MaterialRegistry& reg, double fraction) {
  if (!(fraction > 0.0)) return {};
  auto report = transfer(src, dst, reg, fraction, /*top_first=*/false);
  agitate(dst, reg);
  return report;
}

namespace {

struct PurityTerms {
  double target = 0.0;  // formula moles of target
  double numerator = 0.0;
  double denominator = 0.0;
};

double weighted_purity(const std::vector<PurityTerms>& terms) {
  double total = 0.0;
  for (const auto& t : terms) total += t.target;
  if (!(total > 0.0)) return 0.0;
  double acc = 0.0;
  for (const auto& t : terms) {
    if (t.target <= 0.0 || t.denominator <= 0.0) continue;
    acc += (t.target / total) * (t.numerator / t.denominator);
  }
  return acc;
}

}  // namespace

double solute_purity(std::span<const Vessel> vessels, const MaterialRegistry& reg,
                     std::string_view target) {
  std::vector<PurityTerms> terms;
  const int target_particles = reg.lookup(target).dissociation;
  for (const auto& v : vessels) {
    PurityTerms t;
    for (const auto& [name, n] : inventory(v)) {
      const Material& m = reg.lookup(name);
      if (m.is_solvent()) continue;
      t.denominator += n * m.dissociation;
    }
    t.target = total_moles(v, target);
    t.numerator = t.target * target_particles;
    terms.push_back(t);
  }
  return weighted_purity(terms);
}

double absolute_purity(std::span<const Vessel> vessels, const MaterialRegistry& reg,
                       std::string_view target) {
  reg.lookup(target);
  std::vector<PurityTerms> terms;
  for (const auto& v : vessels) {
    PurityTerms t;
    for (const auto& [name, n] : inventory(v)) t.denominator += n;
    t.target = total_moles(v, target);
    t.numerator = t.target;
    terms.push_back(t);
  }
  return weighted_purity(terms);
}

void save_vessel(const Vessel& v, const MaterialRegistry& reg, std::ostream& out) {
  nlohmann::ordered_json j;
  j["format_version"] = kSnapshotVersion;
  j["registry"] = reg.name();
  j["label"] = v.label;
  j["temperature"] = v.temperature;
  j["volume_capacity"] = v.volume_capacity;
  j["pressure"] = v.pressure;
  j["settle_time"] = v.settle_time;
  j["solvents"] = amounts_to_json(v.solvents);
  j["solutes"] = nlohmann::ordered_json::array();
  for (const auto& [key, n] : v.solutes)
    j["solutes"].push_back({{"solute", key.first}, {"solvent", key.second}, {"amount", n}});
  j["solids"] = amounts_to_json(v.solids);
  j["gases"] = amounts_to_json(v.gases);
  out << j.dump(2) << '\n';
}

Vessel load_vessel(std::istream& in, const MaterialRegistry& reg) {
  const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text, nullptr, true, true);
  } catch (const nlohmann::json::parse_error& e) {
    const auto line = 1 + std::count(text.begin(), text.begin() + std::min(e.byte, text.size()), '\n');
    throw ParseError(e.what(), static_cast<std::size_t>(line));
  }
  Vessel v;
  try {
    if (j.at("format_version").get<int>() != kSnapshotVersion)
      throw ParseError("unsupported vessel format_version", 0);
    const auto registry = j.at("registry").get<std::string>();
    if (registry != reg.name())
      throw ValidationError("snapshot written against registry '" + registry + "', loaded with '" +
                            reg.name() + "'");
    v.label = j.at("label").get<std::string>();
    v.temperature = j.at("temperature").get<double>();
    v.volume_capacity = j.at("volume_capacity").get<double>();
    v.pressure = j.at("pressure").get<double>();
    v.settle_time = j.at("settle_time").get<double>();
    auto read = [&](const char* key, std::map<std::string, double>& dst) {
      for (const auto& [name, n] : j.at(key).items()) {
        reg.lookup(name);
        dst[name] = n.get<double>();
      }
    };
    read("solvents", v.solvents);
    read("solids", v.solids);
    read("gases", v.gases);
    for (const auto& s : j.at("solutes")) {
      SoluteKey key{s.at("solute").get<std::string>(), s.at("solvent").get<std::string>()};
      reg.lookup(key.first);
      reg.lookup(key.second);
      v.solutes[key] = s.at("amount").get<double>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("vessel snapshot: ") + e.what(), 0);
  } catch (const NotFound& e) {
    throw ValidationError(e.what());
  }
  if (!(v.temperature > 0.0) || !(v.volume_capacity > 0.0))
    throw ValidationError("vessel temperature and capacity must be positive");
  for (const auto* m : {&v.solvents, &v.solids, &v.gases})
    for (const auto& [name, n] : *m)
      if (n < 0.0) throw ValidationError("negative amount of " + name);
  for (const auto& [key, n] : v.solutes)
    if (n < 0.0) throw ValidationError("negative amount of " + key.first);
  return v;
}

void save_vessel_file(const Vessel& v, const MaterialRegistry& reg, const std::filesystem::path& p) {
  std::ofstream out(p);
  if (!out) throw Error("cannot write " + p.string());
  save_vessel(v, reg, out);
}

Vessel load_vessel_file(const std::filesystem::path& p, const MaterialRegistry& reg) {
  std::ifstream in(p);
  if (!in) throw NotFound("cannot open vessel snapshot " + p.string());
  return load_vessel(in, reg);
}

}  // namespace chemgym
