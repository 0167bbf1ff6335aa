#include "chemgym/materials.hpp"

#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>

#include <json.hpp>

#include "chemgym/errors.hpp"

namespace chemgym {

namespace {

using nlohmann::ordered_json;

constexpr int kFormatVersion = 1;

std::size_t line_of_offset(std::string_view text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + offset, '\n'));
}

// Line numbers of the records inside the top-level "materials" array, so that
// schema errors can point at the offending record. Skips strings and comments.
std::vector<std::size_t> record_lines(std::string_view text) {
  std::vector<std::size_t> lines;
  std::size_t line = 1;
  int depth = 0;
  int array_depth = -1;
  std::string last_key;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '\n') {
      ++line;
    } else if (c == '/' && i + 1 < text.size() && text[i + 1] == '/') {
      while (i < text.size() && text[i] != '\n') ++i;
      ++line;
    } else if (c == '/' && i + 1 < text.size() && text[i + 1] == '*') {
      i += 2;
      while (i + 1 < text.size() && !(text[i] == '*' && text[i + 1] == '/')) {
        if (text[i] == '\n') ++line;
        ++i;
      }
      ++i;
    } else if (c == '"') {
      std::string s;
      for (++i; i < text.size() && text[i] != '"'; ++i) {
        if (text[i] == '\\') ++i;
        else s.push_back(text[i]);
      }
      if (depth == 1) last_key = std::move(s);
    } else if (c == '{' || c == '[') {
      if (c == '[' && depth == 1 && last_key == "materials") array_depth = depth + 1;
      if (c == '{' && depth == array_depth) lines.push_back(line);
      ++depth;
    } else if (c == '}' || c == ']') {
      --depth;
      if (depth < array_depth) array_depth = -1;
    }
  }
  return lines;
}

std::uint8_t role_from_string(std::string_view s) {
  if (s == "solvent") return static_cast<std::uint8_t>(Role::solvent);
  if (s == "solute") return static_cast<std::uint8_t>(Role::solute);
  if (s == "reactant") return static_cast<std::uint8_t>(Role::reactant);
  throw ValidationError("unknown role '" + std::string(s) + "'");
}

Material material_from_json(const ordered_json& j) {
  Material m;
  m.name = j.at("name").get<std::string>();
  m.molar_mass = j.at("molar_mass").get<double>();
  m.density = j.at("density").get<double>();
  m.polarity = j.at("polarity").get<double>();
  m.heat_capacity_molar = j.at("heat_capacity_molar").get<double>();
  m.boiling_point = j.at("boiling_point").get<double>();
  m.enthalpy_vaporization = j.at("enthalpy_vaporization").get<double>();
  m.solubility_limit = j.at("solubility_limit").get<double>();
  for (const auto& p : j.at("uv_peaks")) {
    if (!p.is_array() || p.size() != 3)
      throw ValidationError("uv peak must be [center_nm, width_nm, height]");
    m.uv_peaks.push_back({p[0].get<double>(), p[1].get<double>(), p[2].get<double>()});
  }
  m.phase_default = phase_from_string(j.at("phase_default").get<std::string>());
  for (const auto& r : j.at("roles")) m.roles |= role_from_string(r.get<std::string>());
  m.dissociation = j.value("dissociation", 1);
  return m;
}

ordered_json material_to_json(const Material& m) {
  ordered_json j;
  j["name"] = m.name;
  j["molar_mass"] = m.molar_mass;
  j["density"] = m.density;
  j["polarity"] = m.polarity;
  j["heat_capacity_molar"] = m.heat_capacity_molar;
  j["boiling_point"] = m.boiling_point;
  j["enthalpy_vaporization"] = m.enthalpy_vaporization;
  j["solubility_limit"] = m.solubility_limit;
  j["uv_peaks"] = ordered_json::array();
  for (const auto& p : m.uv_peaks) j["uv_peaks"].push_back({p.center_nm, p.width_nm, p.height});
  j["phase_default"] = std::string(to_string(m.phase_default));
  j["roles"] = ordered_json::array();
  for (auto [role, label] : {std::pair{Role::solvent, "solvent"}, std::pair{Role::solute, "solute"},
                             std::pair{Role::reactant, "reactant"}}) {
    if (m.has_role(role)) j["roles"].push_back(label);
  }
  if (m.dissociation != 1) j["dissociation"] = m.dissociation;
  return j;
}

}  // namespace

std::string_view to_string(Phase p) {
  switch (p) {
    case Phase::solid: return "solid";
    case Phase::liquid: return "liquid";
    case Phase::gas: return "gas";
  }
  return "liquid";
}

Phase phase_from_string(std::string_view s) {
  if (s == "solid") return Phase::solid;
  if (s == "liquid") return Phase::liquid;
  if (s == "gas") return Phase::gas;
  throw ValidationError("unknown phase '" + std::string(s) + "'");
}

void validate_material(const Material& m) {
  auto positive = [&](double v, const char* field) {
    if (!(v > 0.0) || !std::isfinite(v))
      throw ValidationError("material '" + m.name + "': " + field + " must be positive");
  };
  if (m.name.empty()) throw ValidationError("material with empty name");
  positive(m.molar_mass, "molar_mass");
  positive(m.density, "density");
  positive(m.heat_capacity_molar, "heat_capacity_molar");
  positive(m.boiling_point, "boiling_point");
  positive(m.enthalpy_vaporization, "enthalpy_vaporization");
  positive(m.solubility_limit, "solubility_limit");
  if (!(m.polarity >= 0.0))
    throw ValidationError("material '" + m.name + "': polarity must be >= 0");
  if (m.dissociation < 1)
    throw ValidationError("material '" + m.name + "': dissociation must be >= 1");
  for (const auto& p : m.uv_peaks) {
    positive(p.width_nm, "uv peak width");
    if (!(p.height >= 0.0))
      throw ValidationError("material '" + m.name + "': uv peak height must be >= 0");
  }
}

MaterialRegistry::MaterialRegistry(std::string name, std::vector<Material> materials)
    : name_(std::move(name)), materials_(std::move(materials)) {
  for (std::size_t i = 0; i < materials_.size(); ++i) {
    validate_material(materials_[i]);
    if (!index_.emplace(materials_[i].name, i).second)
      throw ValidationError("duplicate material name '" + materials_[i].name + "'");
  }
}

const Material* MaterialRegistry::find(std::string_view name) const noexcept {
  auto it = index_.find(std::string(name));
  return it == index_.end() ? nullptr : &materials_[it->second];
}

const Material& MaterialRegistry::lookup(std::string_view name) const {
  if (const Material* m = find(name)) return *m;
  throw NotFound("unknown material '" + std::string(name) + "'");
}

MaterialRegistry load_registry(std::istream& source) {
  const std::string text{std::istreambuf_iterator<char>(source), std::istreambuf_iterator<char>()};
  ordered_json doc;
  try {
    doc = ordered_json::parse(text, nullptr, true, /*ignore_comments=*/true);
  } catch (const ordered_json::parse_error& e) {
    throw ParseError(e.what(), line_of_offset(text, e.byte));
  }
  if (!doc.is_object()) throw ParseError("materials file must hold a single object", 1);
  if (!doc.contains("format_version")) throw ParseError("missing format_version", 1);
  if (doc["format_version"] != kFormatVersion)
    throw ParseError("unsupported format_version " + doc["format_version"].dump(), 1);
  if (!doc.contains("materials") || !doc["materials"].is_array())
    throw ParseError("missing 'materials' array", 1);

  const auto lines = record_lines(text);
  std::vector<Material> materials;
  const auto& records = doc["materials"];
  for (std::size_t i = 0; i < records.size(); ++i) {
    const std::size_t line = i < lines.size() ? lines[i] : 0;
    try {
      materials.push_back(material_from_json(records[i]));
      validate_material(materials.back());
    } catch (const ordered_json::exception& e) {
      throw ParseError(std::string("material record: ") + e.what(), line);
    } catch (const ValidationError& e) {
      throw ParseError(e.what(), line);
    }
  }
  return MaterialRegistry(doc.value("registry", std::string("default")), std::move(materials));
}

MaterialRegistry load_registry_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw NotFound("cannot open materials file " + path.string());
  return load_registry(in);
}

void save_registry(const MaterialRegistry& registry, std::ostream& out) {
  ordered_json doc;
  doc["format_version"] = kFormatVersion;
  doc["registry"] = registry.name();
  doc["materials"] = ordered_json::array();
  for (const auto& m : registry.materials()) doc["materials"].push_back(material_to_json(m));
  out << doc.dump(2) << '\n';
}

}  // namespace chemgym
