#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "chemgym/materials.hpp"
#include "chemgym/rkf45.hpp"
#include "chemgym/vessel.hpp"

namespace chemgym {

inline constexpr double kGasConstant = 8.314;  // J/(mol K)

using Term = std::pair<std::string, int>;  // (material, stoichiometric coefficient)

struct Reaction {
  std::vector<Term> reactants;
  std::vector<Term> products;
  double pre_exponential = 0.0;
  double activation_energy = 0.0;  // J/mol

  bool operator==(const Reaction&) const = default;
};

struct IntegratorConfig {
  double rel_tol = 1e-6;
  double abs_tol = 1e-9;
  std::size_t max_steps = 200000;
  double gas_constant = kGasConstant;
};

/// Reactions compiled to a stoichiometry matrix over an ordered species list.
class ReactionNetwork {
 public:
  ReactionNetwork() = default;
  /// Throws ValidationError for empty sides or non-positive coefficients.
  ReactionNetwork(std::string name, std::vector<Reaction> reactions);

  const std::string& name() const { return name_; }
  const std::vector<Reaction>& reactions() const { return reactions_; }
  const std::vector<std::string>& species() const { return species_; }
  std::size_t species_count() const { return species_.size(); }
  /// Index into species(), or -1.
  int index_of(std::string_view material) const;

  /// Net stoichiometry, species x reactions (products positive).
  const Eigen::MatrixXd& stoichiometry() const { return net_; }
  /// Rate-law exponents, species x reactions.
  const Eigen::MatrixXd& orders() const { return order_; }

 private:
  std::string name_;
  std::vector<Reaction> reactions_;
  std::vector<std::string> species_;
  Eigen::MatrixXd net_;
  Eigen::MatrixXd order_;
};

double rate_constant(const Reaction& r, double temperature, double gas_constant = kGasConstant);

/// Per-reaction rates k_r * prod [X]^nu at the given temperature.
Eigen::VectorXd reaction_rates(const ReactionNetwork& net, const Eigen::VectorXd& conc,
                               double temperature, double gas_constant = kGasConstant);

/// d[X]/dt for every species. Throws DimensionMismatch on a wrong-length vector.
Eigen::VectorXd derivatives(const ReactionNetwork& net, const Eigen::VectorXd& conc,
                            double temperature, double gas_constant = kGasConstant);

/// Advances a concentration vector by dt with the adaptive integrator.
Eigen::VectorXd integrate_concentrations(const ReactionNetwork& net, const Eigen::VectorXd& conc,
                                         double temperature, double dt,
                                         const IntegratorConfig& cfg = {},
                                         Rkf45Stats* stats = nullptr);

/// Reacts the dissolved species of `v` for dt. Concentrations are taken over
/// the vessel volume (volume_capacity); products dissolve by solvent volume.
void integrate(const ReactionNetwork& net, Vessel& v, const MaterialRegistry& reg, double dt,
               const IntegratorConfig& cfg = {});

/// Line-oriented reactions file; throws ParseError with the offending line.
ReactionNetwork load_reactions(std::istream& in);
ReactionNetwork load_reactions_file(const std::filesystem::path& path);
void save_reactions(const ReactionNetwork& net, std::ostream& out);
/// Throws ValidationError if the network names a material missing from reg.
void check_against(const ReactionNetwork& net, const MaterialRegistry& reg);

}  // namespace chemgym
