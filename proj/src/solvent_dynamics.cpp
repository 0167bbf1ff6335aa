#include "chemgym/solvent_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace chemgym {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

double normal_cdf(double z) { return 0.5 * std::erfc(-z * kInvSqrt2); }

std::vector<double> solute_totals_by_host(const Vessel& v, const std::string& solute,
                                          const std::vector<std::string>& hosts) {
  std::vector<double> s(hosts.size(), 0.0);
  for (std::size_t i = 0; i < hosts.size(); ++i) {
    auto it = v.solutes.find({solute, hosts[i]});
    if (it != v.solutes.end()) s[i] = it->second;
  }
  return s;
}

std::vector<std::string> dissolved_species(const Vessel& v) {
  std::vector<std::string> names;
  for (const auto& [key, n] : v.solutes)
    if (names.empty() || names.back() != key.first) names.push_back(key.first);
  return names;
}

// Moves the partition from settle coordinate t_prev to t_next following the
// forward (settling) or backward (mixing) branch, conserving each solute.
void repartition(Vessel& v, const MaterialRegistry& reg, double t_prev, double t_next) {
  if (t_next == t_prev) return;
  const auto hosts = host_solvents(v, reg);
  if (hosts.empty()) return;
  for (const auto& solute : dissolved_species(v)) {
    auto current = solute_totals_by_host(v, solute, hosts);
    double total = 0.0;
    for (double x : current) total += x;
    if (!(total > 0.0)) continue;

    const Eigen::VectorXd q_next = equilibrium_partition(v, reg, solute, t_next) * total;
    const Eigen::VectorXd q_prev = equilibrium_partition(v, reg, solute, t_prev) * total;
    std::vector<double> next(hosts.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < hosts.size(); ++i) {
      double x;
      if (t_next > t_prev) {
        x = q_next[static_cast<Eigen::Index>(i)] + current[i] - q_prev[static_cast<Eigen::Index>(i)];
      } else {
        const double ratio = t_prev > kMixTime ? (t_next - kMixTime) / (t_prev - kMixTime) : 0.0;
        x = q_next[static_cast<Eigen::Index>(i)] +
            ratio * (current[i] - q_prev[static_cast<Eigen::Index>(i)]);
      }
      next[i] = std::max(x, 0.0);
      sum += next[i];
    }
    for (std::size_t i = 0; i < hosts.size(); ++i) {
      const double amount = sum > 0.0 ? next[i] * total / sum : total / static_cast<double>(hosts.size());
      if (amount > 0.0) v.solutes[{solute, hosts[i]}] = amount;
      else v.solutes.erase({solute, hosts[i]});
    }
  }
}

}  // namespace

double layer_mean(const Vessel& v, const MaterialRegistry& reg, std::string_view solvent, double t,
                  double t_mix) {
  const double d_i = reg.lookup(solvent).density;
  double sum = 0.0;
  for (const auto& [name, n] : v.solvents) {
    if (name == solvent || n <= 0.0) continue;
    sum += reg.lookup(name).density - d_i;
  }
  return (t - t_mix) * sum;
}

double layer_variance(double t) { return std::exp(-t) / std::sqrt(2.0 * std::numbers::pi); }

double LayerProfile::sigma() const { return std::sqrt(variance); }

double LayerProfile::cdf(double x) const {
  const double s = sigma();
  double f = 0.0;
  for (Eigen::Index i = 0; i < mean.size(); ++i) f += weight[i] * normal_cdf((x - mean[i]) / s);
  return f;
}

double LayerProfile::quantile(double p) const {
  const double s = sigma();
  double lo = mean.minCoeff() - 8.0 * s;
  double hi = mean.maxCoeff() + 8.0 * s;
  if (p <= 0.0) return lo;
  if (p >= 1.0) return hi;
  const double inv = 1.0 / (s * std::sqrt(2.0 * std::numbers::pi));
  double x = 0.0;
  for (Eigen::Index i = 0; i < mean.size(); ++i) x += weight[i] * mean[i];
  x = std::clamp(x, lo, hi);
  // Newton steps guarded by a shrinking bracket.
  for (int it = 0; it < 200; ++it) {
    double f = -p, df = 0.0;
    for (Eigen::Index i = 0; i < mean.size(); ++i) {
      const double z = (x - mean[i]) / s;
      f += weight[i] * normal_cdf(z);
      df += weight[i] * inv * std::exp(-0.5 * z * z);
    }
    if (f > 0.0) hi = x;
    else lo = x;
    if (std::abs(f) < 1e-14 || hi - lo < 1e-14 * (1.0 + std::abs(x))) break;
    double next = df > 0.0 ? x - f / df : lo - 1.0;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    x = next;
  }
  return x;
}

Eigen::VectorXd LayerProfile::responsibilities(double x) const {
  Eigen::VectorXd logw(mean.size());
  for (Eigen::Index i = 0; i < mean.size(); ++i) {
    const double z = x - mean[i];
    logw[i] = weight[i] > 0.0 ? std::log(weight[i]) - z * z / (2.0 * variance)
                              : -std::numeric_limits<double>::infinity();
  }
  const double top = logw.maxCoeff();
  Eigen::VectorXd w = (logw.array() - top).exp();
  return w / w.sum();
}

LayerProfile layer_profile(const Vessel& v, const MaterialRegistry& reg) {
  LayerProfile p;
  std::vector<double> vols;
  double total = 0.0;
  for (const auto& [name, n] : v.solvents) {
    if (n <= 0.0) continue;
    p.names.push_back(name);
    vols.push_back(n * reg.lookup(name).molar_volume());
    total += vols.back();
  }
  const auto k = static_cast<Eigen::Index>(p.names.size());
  p.mean.resize(k);
  p.weight.resize(k);
  for (Eigen::Index i = 0; i < k; ++i) {
    p.mean[i] = layer_mean(v, reg, p.names[static_cast<std::size_t>(i)], v.settle_time);
    p.weight[i] = vols[static_cast<std::size_t>(i)] / total;
  }
  p.variance = layer_variance(v.settle_time);
  return p;
}

std::vector<std::string> host_solvents(const Vessel& v, const MaterialRegistry& reg) {
  std::vector<std::string> hosts;
  for (const auto& [name, n] : v.solvents)
    if (n > 0.0 && reg.lookup(name).is_solvent()) hosts.push_back(name);
  return hosts;
}

Eigen::VectorXd asymptotic_partition(const Vessel& v, const MaterialRegistry& reg,
                                     std::string_view solute) {
  const auto hosts = host_solvents(v, reg);
  const auto n = static_cast<Eigen::Index>(hosts.size());
  if (n == 0) return {};
  if (n == 1) return Eigen::VectorXd::Ones(1);
  const double ps = reg.lookup(solute).polarity;
  Eigen::VectorXd dist(n);
  for (Eigen::Index i = 0; i < n; ++i)
    dist[i] = std::abs(ps - reg.lookup(hosts[static_cast<std::size_t>(i)]).polarity);
  const double sum = dist.sum();
  if (!(sum > 0.0)) return Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
  return (1.0 - dist.array() / sum).matrix() / static_cast<double>(n - 1);
}

Eigen::VectorXd equilibrium_partition(const Vessel& v, const MaterialRegistry& reg,
                                      std::string_view solute, double t, double t_mix) {
  const auto hosts = host_solvents(v, reg);
  const auto n = static_cast<Eigen::Index>(hosts.size());
  if (n == 0) return {};
  Eigen::VectorXd vol(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& h = hosts[static_cast<std::size_t>(i)];
    vol[i] = v.solvents.at(h) * reg.lookup(h).molar_volume();
  }
  vol /= vol.sum();
  const double e = std::exp(kPartitionRate * (t_mix - t));
  return vol * e + asymptotic_partition(v, reg, solute) * (1.0 - e);
}

void settle(Vessel& v, const MaterialRegistry& reg, double dt) {
  if (!(dt > 0.0)) return;
  const double t_prev = std::max(v.settle_time, kMixTime);
  const double t_next = t_prev + dt;
  repartition(v, reg, t_prev, t_next);
  v.settle_time = t_next;
  normalize_amounts(v);
}

void mix(Vessel& v, const MaterialRegistry& reg, double dt) {
  if (!(dt > 0.0)) return;
  const double t_prev = std::max(v.settle_time, kMixTime);
  const double t_next = std::max(kMixTime, t_prev - dt);
  // From the mixed floor a backward step still restores S*(t_mix).
  repartition(v, reg, t_next == t_prev ? kMixTime + 1.0 : t_prev, t_next);
  v.settle_time = t_next;
  normalize_amounts(v);
}

void agitate(Vessel& v, const MaterialRegistry& reg) {
  const double t_prev = std::max(v.settle_time, kMixTime + 1.0);
  repartition(v, reg, t_prev, kMixTime);
  v.settle_time = kMixTime;
  normalize_amounts(v);
}

std::vector<int> render_layers(const Vessel& v, const MaterialRegistry& reg, std::size_t n_pixels,
                               Rng& rng) {
  std::vector<int> labels(n_pixels, kAirLabel);
  const LayerProfile prof = layer_profile(v, reg);
  if (prof.empty() || n_pixels == 0) return labels;
  const double fill = std::min(1.0, liquid_volume(v, reg) / v.volume_capacity);
  const auto n_liquid = std::min<std::size_t>(
      n_pixels, static_cast<std::size_t>(std::llround(static_cast<double>(n_pixels) * fill)));
  for (std::size_t k = 0; k < n_liquid; ++k) {
    const double h = (static_cast<double>(k) + 0.5) / static_cast<double>(n_liquid);
    const Eigen::VectorXd r = prof.responsibilities(prof.quantile(h));
    const double u = uniform01(rng);
    double acc = 0.0;
    int label = static_cast<int>(prof.size()) - 1;
    for (Eigen::Index i = 0; i < r.size(); ++i) {
      acc += r[i];
      if (u < acc) {
        label = static_cast<int>(i);
        break;
      }
    }
    labels[k] = label;
  }
  return labels;
}

Eigen::VectorXd layer_pixels(const Vessel& v, const MaterialRegistry& reg, std::size_t n_pixels,
                             Rng& rng) {
  const auto labels = render_layers(v, reg, n_pixels, rng);
  const LayerProfile prof = layer_profile(v, reg);
  Eigen::VectorXd px = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n_pixels));
  for (std::size_t k = 0; k < n_pixels; ++k) {
    if (labels[k] == kAirLabel) continue;
    const double d = reg.lookup(prof.names[static_cast<std::size_t>(labels[k])]).density;
    px[static_cast<Eigen::Index>(k)] = std::clamp(d / 2.0, 0.0, 1.0);
  }
  return px;
}

std::vector<unsigned char> layer_gray_row(const Vessel& v, const MaterialRegistry& reg,
                                          std::size_t n_pixels, Rng& rng) {
  const auto labels = render_layers(v, reg, n_pixels, rng);
  const LayerProfile prof = layer_profile(v, reg);
  std::vector<unsigned char> row(n_pixels, 0);
  for (std::size_t k = 0; k < n_pixels; ++k) {
    if (labels[k] == kAirLabel) continue;
    const double d = reg.lookup(prof.names[static_cast<std::size_t>(labels[k])]).density;
    row[k] = static_cast<unsigned char>(std::clamp(std::lround(d * 127.5), 1L, 255L));
  }
  return row;
}

}  // namespace chemgym
