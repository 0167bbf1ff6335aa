#include "chemgym/kinetics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "chemgym/errors.hpp"
#include "chemgym/solvent_dynamics.hpp"

namespace chemgym {

ReactionNetwork::ReactionNetwork(std::string name, std::vector<Reaction> reactions)
    : name_(std::move(name)), reactions_(std::move(reactions)) {
  auto add_species = [&](const std::string& s) {
    if (std::find(species_.begin(), species_.end(), s) == species_.end()) species_.push_back(s);
  };
  for (const auto& r : reactions_) {
    if (r.reactants.empty() || r.products.empty())
      throw ValidationError("reaction needs at least one reactant and one product");
    if (!(r.pre_exponential >= 0.0) || !(r.activation_energy >= 0.0))
      throw ValidationError("reaction parameters must be non-negative");
    for (const auto* side : {&r.reactants, &r.products})
      for (const auto& [m, nu] : *side) {
        if (nu < 1) throw ValidationError("coefficient of " + m + " must be a positive integer");
        add_species(m);
      }
  }
  const auto ns = static_cast<Eigen::Index>(species_.size());
  const auto nr = static_cast<Eigen::Index>(reactions_.size());
  net_ = Eigen::MatrixXd::Zero(ns, nr);
  order_ = Eigen::MatrixXd::Zero(ns, nr);
  for (Eigen::Index j = 0; j < nr; ++j) {
    const auto& r = reactions_[static_cast<std::size_t>(j)];
    for (const auto& [m, nu] : r.reactants) {
      net_(index_of(m), j) -= nu;
      order_(index_of(m), j) += nu;
    }
    for (const auto& [m, nu] : r.products) net_(index_of(m), j) += nu;
  }
}

int ReactionNetwork::index_of(std::string_view material) const {
  auto it = std::find(species_.begin(), species_.end(), material);
  return it == species_.end() ? -1 : static_cast<int>(it - species_.begin());
}

double rate_constant(const Reaction& r, double temperature, double gas_constant) {
  return r.pre_exponential * std::exp(-r.activation_energy / (gas_constant * temperature));
}

Eigen::VectorXd reaction_rates(const ReactionNetwork& net, const Eigen::VectorXd& conc,
                               double temperature, double gas_constant) {
  if (conc.size() != static_cast<Eigen::Index>(net.species_count()))
    throw DimensionMismatch("concentration vector has " + std::to_string(conc.size()) +
                            " entries, network has " + std::to_string(net.species_count()) +
                            " species");
  const auto& order = net.orders();
  Eigen::VectorXd rates(order.cols());
  for (Eigen::Index j = 0; j < order.cols(); ++j) {
    double r = rate_constant(net.reactions()[static_cast<std::size_t>(j)], temperature, gas_constant);
    for (Eigen::Index i = 0; i < order.rows(); ++i) {
      const int nu = static_cast<int>(order(i, j));
      const double c = std::max(conc[i], 0.0);
      for (int p = 0; p < nu; ++p) r *= c;
    }
    rates[j] = r;
  }
  return rates;
}

Eigen::VectorXd derivatives(const ReactionNetwork& net, const Eigen::VectorXd& conc,
                            double temperature, double gas_constant) {
  return net.stoichiometry() * reaction_rates(net, conc, temperature, gas_constant);
}

Eigen::VectorXd integrate_concentrations(const ReactionNetwork& net, const Eigen::VectorXd& conc,
                                         double temperature, double dt,
                                         const IntegratorConfig& cfg, Rkf45Stats* stats) {
  if (conc.size() != static_cast<Eigen::Index>(net.species_count()))
    throw DimensionMismatch("concentration vector does not match the network");
  if (!(dt > 0.0)) return conc;
  Rkf45Options opt;
  opt.rel_tol = cfg.rel_tol;
  opt.abs_tol = cfg.abs_tol;
  opt.max_steps = cfg.max_steps;
  opt.initial_step = std::min(dt, 1e-3);
  auto rhs = [&](double, const Eigen::VectorXd& y) {
    return derivatives(net, y, temperature, cfg.gas_constant);
  };
  return rkf45<double>(rhs, conc, 0.0, dt, opt, stats);
}

void integrate(const ReactionNetwork& net, Vessel& v, const MaterialRegistry& reg, double dt,
               const IntegratorConfig& cfg) {
  if (!(dt > 0.0) || net.species_count() == 0) return;
  const double volume = v.volume_capacity;
  const auto ns = static_cast<Eigen::Index>(net.species_count());
  Eigen::VectorXd amount(ns);
  for (Eigen::Index i = 0; i < ns; ++i)
    amount[i] = dissolved_moles(v, net.species()[static_cast<std::size_t>(i)]);
  if (amount.maxCoeff() <= 0.0) return;

  const Eigen::VectorXd out = integrate_concentrations(net, amount / volume, v.temperature, dt, cfg) * volume;

  for (Eigen::Index i = 0; i < ns; ++i) {
    const std::string& s = net.species()[static_cast<std::size_t>(i)];
    const double target = std::max(out[i], 0.0);
    const double before = amount[i];
    if (target == before) continue;
    if (before > 0.0) {
      // Keep the existing split across host solvents.
      const double scale = target / before;
      for (auto& [key, n] : v.solutes)
        if (key.first == s) n *= scale;
    } else {
      add_material(v, reg, s, target, PhaseTag::dissolved);
    }
  }
  normalize_amounts(v);
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<Term> parse_side(std::string_view side, std::size_t line) {
  std::vector<Term> terms;
  std::size_t pos = 0;
  while (true) {
    const auto next = side.find(" + ", pos);
    const std::string term = trim(side.substr(pos, next == std::string_view::npos ? side.npos : next - pos));
    if (term.empty()) throw ParseError("empty reaction term", line);
    int nu = 1;
    std::string name = term;
    const auto space = term.find_first_of(" \t");
    if (space != std::string::npos &&
        std::all_of(term.begin(), term.begin() + static_cast<std::ptrdiff_t>(space),
                    [](char c) { return c >= '0' && c <= '9'; })) {
      nu = std::stoi(term.substr(0, space));
      name = trim(std::string_view(term).substr(space));
    }
    if (nu < 1) throw ParseError("coefficient of " + name + " must be >= 1", line);
    terms.emplace_back(name, nu);
    if (next == std::string_view::npos) break;
    pos = next + 3;
  }
  return terms;
}

double parse_param(const std::string& params, const std::string& key, std::size_t line) {
  std::istringstream ss(params);
  std::string tok;
  while (ss >> tok) {
    if (tok.rfind(key + "=", 0) == 0) {
      try {
        std::size_t used = 0;
        const double v = std::stod(tok.substr(key.size() + 1), &used);
        if (used != tok.size() - key.size() - 1) throw std::invalid_argument(tok);
        return v;
      } catch (const std::exception&) {
        throw ParseError("bad value in '" + tok + "'", line);
      }
    }
  }
  throw ParseError("missing " + key + "=", line);
}

void write_side(std::ostream& out, const std::vector<Term>& side) {
  for (std::size_t i = 0; i < side.size(); ++i) {
    if (i) out << " + ";
    if (side[i].second != 1) out << side[i].second << ' ';
    out << side[i].first;
  }
}

}  // namespace

ReactionNetwork load_reactions(std::istream& in) {
  std::string name;
  std::vector<Reaction> reactions;
  bool versioned = false;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string text = trim(raw.substr(0, raw.find('#')));
    if (text.empty()) continue;
    std::istringstream ss(text);
    std::string keyword;
    ss >> keyword;
    std::string rest = trim(text.substr(keyword.size()));
    if (keyword == "format_version") {
      if (rest != "1") throw ParseError("unsupported format_version " + rest, line);
      versioned = true;
    } else if (!versioned) {
      throw ParseError("format_version must come first", line);
    } else if (keyword == "network") {
      if (rest.empty()) throw ParseError("network needs a name", line);
      name = rest;
    } else if (keyword == "reaction") {
      const auto bar = rest.find('|');
      if (bar == std::string::npos) throw ParseError("reaction needs '| A=... Ea=...'", line);
      const std::string eq = rest.substr(0, bar);
      const std::string params = rest.substr(bar + 1);
      const auto arrow = eq.find("->");
      if (arrow == std::string::npos) throw ParseError("reaction needs '->'", line);
      Reaction r;
      r.reactants = parse_side(trim(eq.substr(0, arrow)), line);
      r.products = parse_side(trim(eq.substr(arrow + 2)), line);
      r.pre_exponential = parse_param(params, "A", line);
      r.activation_energy = parse_param(params, "Ea", line);
      if (!(r.pre_exponential >= 0.0) || !(r.activation_energy >= 0.0))
        throw ParseError("A and Ea must be non-negative", line);
      reactions.push_back(std::move(r));
    } else {
      throw ParseError("unknown keyword '" + keyword + "'", line);
    }
  }
  if (!versioned) throw ParseError("missing format_version", line);
  if (reactions.empty()) throw ParseError("no reactions declared", line);
  return ReactionNetwork(name, std::move(reactions));
}

ReactionNetwork load_reactions_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw NotFound("cannot open reactions file " + path.string());
  return load_reactions(in);
}

void save_reactions(const ReactionNetwork& net, std::ostream& out) {
  out << "format_version 1\n";
  if (!net.name().empty()) out << "network " << net.name() << '\n';
  out.precision(17);
  for (const auto& r : net.reactions()) {
    out << "reaction ";
    write_side(out, r.reactants);
    out << " -> ";
    write_side(out, r.products);
    out << " | A=" << r.pre_exponential << " Ea=" << r.activation_energy << '\n';
  }
}

void check_against(const ReactionNetwork& net, const MaterialRegistry& reg) {
  for (const auto& s : net.species())
    if (!reg.contains(s))
      throw ValidationError("network '" + net.name() + "' uses unknown material '" + s + "'");
}

}  // namespace chemgym
