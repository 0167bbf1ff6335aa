#pragma once

#include <string_view>
#include <variant>

#include <Eigen/Dense>

#include "chemgym/vessel.hpp"

namespace chemgym {

struct SpectrumConfig {
  std::size_t bins = 100;
  double min_nm = 400.0;
  double max_nm = 800.0;
};

struct Spectrum {
  Eigen::VectorXd absorbance;  // one value per bin, in [0,1]
  double min_nm = 400.0;
  double max_nm = 800.0;

  std::size_t bins() const { return static_cast<std::size_t>(absorbance.size()); }
  double wavelength(std::size_t bin) const;  // bin centre
};

/// Concentration-weighted Gaussian peaks of every material present, clipped to [0,1].
Spectrum uv_vis(const Vessel& v, const MaterialRegistry& reg, const SpectrumConfig& cfg = {});

using Measurement = std::variant<Spectrum>;

/// Dispatches on method name; only "uv-vis" is registered. Throws UnknownMethod.
Measurement characterize(const Vessel& v, const MaterialRegistry& reg, std::string_view method,
                         const SpectrumConfig& cfg = {});

}  // namespace chemgym
