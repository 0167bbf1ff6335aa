#include "chemgym/characterization.hpp"

#include <cmath>
#include <string>

#include "chemgym/errors.hpp"

namespace chemgym {

double Spectrum::wavelength(std::size_t bin) const {
  const double width = (max_nm - min_nm) / static_cast<double>(bins());
  return min_nm + (static_cast<double>(bin) + 0.5) * width;
}

Spectrum uv_vis(const Vessel& v, const MaterialRegistry& reg, const SpectrumConfig& cfg) {
  if (cfg.bins == 0) throw ValidationError("spectrum needs at least one bin");
  Spectrum s;
  s.min_nm = cfg.min_nm;
  s.max_nm = cfg.max_nm;
  const auto n = static_cast<Eigen::Index>(cfg.bins);
  s.absorbance = Eigen::VectorXd::Zero(n);

  const auto inv = inventory(v);
  double total = 0.0;
  for (const auto& [name, amount] : inv) total += amount;
  if (!(total > 0.0)) return s;

  const double width = (cfg.max_nm - cfg.min_nm) / static_cast<double>(cfg.bins);
  const Eigen::ArrayXd lambda =
      cfg.min_nm + (Eigen::ArrayXd::LinSpaced(n, 0.0, static_cast<double>(n - 1)) + 0.5) * width;
  Eigen::ArrayXd acc = Eigen::ArrayXd::Zero(n);
  for (const auto& [name, amount] : inv) {
    const double frac = amount / total;
    for (const auto& p : reg.lookup(name).uv_peaks) {
      const Eigen::ArrayXd z = (lambda - p.center_nm) / p.width_nm;
      acc += frac * p.height * (-0.5 * z.square()).exp();
    }
  }
  s.absorbance = acc.min(1.0).max(0.0).matrix();
  return s;
}

Measurement characterize(const Vessel& v, const MaterialRegistry& reg, std::string_view method,
                         const SpectrumConfig& cfg) {
  if (method == "uv-vis") return uv_vis(v, reg, cfg);
  throw UnknownMethod("unknown characterization method '" + std::string(method) + "'");
}

}  // namespace chemgym
