#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace chemgym {

enum class Phase { solid, liquid, gas };

enum class Role : std::uint8_t { solvent = 1, solute = 2, reactant = 4 };

struct UvPeak {
  double center_nm = 0.0;
  double width_nm = 1.0;
  double height = 0.0;
  bool operator==(const UvPeak&) const = default;
};

/// Immutable physical and spectral record. Units: g/mol, g/mL, J/(mol K), K,
/// J/mol, mol per L of solvent.
struct Material {
  std::string name;
  double molar_mass = 0.0;
  double density = 0.0;
  double polarity = 0.0;
  double heat_capacity_molar = 0.0;
  double boiling_point = 0.0;
  double enthalpy_vaporization = 0.0;
  double solubility_limit = 0.0;
  std::vector<UvPeak> uv_peaks;
  Phase phase_default = Phase::liquid;
  std::uint8_t roles = 0;
  // Particles per formula unit once dissolved (NaCl -> Na+ + Cl- gives 2).
  int dissociation = 1;

  bool has_role(Role r) const { return (roles & static_cast<std::uint8_t>(r)) != 0; }
  bool is_solvent() const { return has_role(Role::solvent); }
  /// Litres occupied by one mole of the pure liquid.
  double molar_volume() const { return molar_mass / density / 1000.0; }

  bool operator==(const Material&) const = default;
};

class MaterialRegistry {
 public:
  MaterialRegistry() = default;
  /// Validates and freezes; throws ValidationError on duplicates or
  /// non-positive constants.
  MaterialRegistry(std::string name, std::vector<Material> materials);

  const std::string& name() const { return name_; }
  std::span<const Material> materials() const { return materials_; }
  std::size_t size() const { return materials_.size(); }

  /// Throws NotFound for undeclared names.
  const Material& lookup(std::string_view name) const;
  const Material* find(std::string_view name) const noexcept;
  bool contains(std::string_view name) const noexcept { return find(name) != nullptr; }

  bool operator==(const MaterialRegistry& other) const {
    return name_ == other.name_ && materials_ == other.materials_;
  }

 private:
  std::string name_;
  std::vector<Material> materials_;
  std::unordered_map<std::string, std::size_t> index_;
};

void validate_material(const Material& m);

MaterialRegistry load_registry(std::istream& source);
MaterialRegistry load_registry_file(const std::filesystem::path& path);
void save_registry(const MaterialRegistry& registry, std::ostream& out);

std::string_view to_string(Phase p);
Phase phase_from_string(std::string_view s);

}  // namespace chemgym
