#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "chemgym/random.hpp"
#include "chemgym/vessel.hpp"

namespace chemgym {

inline constexpr double kMixTime = 0.0;
// Rate at which the partition relaxes from volume-proportional to polarity-driven.
inline constexpr double kPartitionRate = 30.0;

/// Layer centre of `solvent` among the liquids of `v`; upward axis, 0 = column centre.
double layer_mean(const Vessel& v, const MaterialRegistry& reg, std::string_view solvent,
                  double t, double t_mix = kMixTime);
/// Spread shared by every layer.
double layer_variance(double t);

/// Gaussian mixture describing the liquid column of a vessel.
struct LayerProfile {
  std::vector<std::string> names;
  Eigen::VectorXd mean;
  Eigen::VectorXd weight;  // volume fractions, sum 1
  double variance = 0.0;

  std::size_t size() const { return names.size(); }
  bool empty() const { return names.empty(); }
  double sigma() const;
  /// Mixture CDF at position x.
  double cdf(double x) const;
  /// Inverse CDF (Newton, bisection-guarded); p in [0,1].
  double quantile(double p) const;
  /// Per-layer w_i N(x; mu_i, sigma^2) at x, normalized to sum 1.
  Eigen::VectorXd responsibilities(double x) const;
};

LayerProfile layer_profile(const Vessel& v, const MaterialRegistry& reg);

/// Solvent-role liquids able to host solutes, in map order.
std::vector<std::string> host_solvents(const Vessel& v, const MaterialRegistry& reg);

/// Polarity-driven long-time split of `solute` over host_solvents(v), sums to 1.
Eigen::VectorXd asymptotic_partition(const Vessel& v, const MaterialRegistry& reg,
                                     std::string_view solute);
/// Target split at settle coordinate t, sums to 1.
Eigen::VectorXd equilibrium_partition(const Vessel& v, const MaterialRegistry& reg,
                                      std::string_view solute, double t,
                                      double t_mix = kMixTime);

void settle(Vessel& v, const MaterialRegistry& reg, double dt);
void mix(Vessel& v, const MaterialRegistry& reg, double dt);
/// Full agitation: settle_time to t_mix and volume-proportional partition.
void agitate(Vessel& v, const MaterialRegistry& reg);

inline constexpr int kAirLabel = -1;

/// Pixel labels bottom to top: index into layer_profile(v).names or kAirLabel.
/// Consumes exactly one draw per liquid pixel.
std::vector<int> render_layers(const Vessel& v, const MaterialRegistry& reg, std::size_t n_pixels,
                               Rng& rng);
/// Observation values in [0,1]: half the layer density, 0 for air.
Eigen::VectorXd layer_pixels(const Vessel& v, const MaterialRegistry& reg, std::size_t n_pixels,
                             Rng& rng);
/// One byte per pixel for image export; air is 0, liquids map density to 1..255.
std::vector<unsigned char> layer_gray_row(const Vessel& v, const MaterialRegistry& reg,
                                          std::size_t n_pixels, Rng& rng);

}  // namespace chemgym
