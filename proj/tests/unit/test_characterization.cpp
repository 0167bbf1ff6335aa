#include <doctest.h>

#include <cmath>

#include "chemgym/characterization.hpp"
#include "chemgym/errors.hpp"
#include "common.hpp"

using namespace chemgym;

namespace {

MaterialRegistry peaks_registry() {
  auto s = testing::material("s", 1.0, 0.5, {Role::solvent});
  auto a = testing::material("a", 1.0, 0.5, {Role::solute});
  a.uv_peaks = {{500.0, 20.0, 0.8}};
  auto b = testing::material("b", 1.0, 0.5, {Role::solute});
  b.uv_peaks = {{600.0, 30.0, 0.6}, {700.0, 10.0, 0.4}};
  auto hot = testing::material("hot", 1.0, 0.5, {Role::solute});
  hot.uv_peaks = {{550.0, 50.0, 9.0}};
  return MaterialRegistry("peaks", {s, a, b, hot});
}

double gauss(double x, double c, double w, double h) {
  return h * std::exp(-(x - c) * (x - c) / (2 * w * w));
}

}  // namespace

TEST_CASE("bins sit at their centres") {
  const auto reg = peaks_registry();
  const Spectrum s = uv_vis(Vessel{}, reg);
  CHECK(s.bins() == 100);
  CHECK(s.wavelength(0) == doctest::Approx(402.0));
  CHECK(s.wavelength(99) == doctest::Approx(798.0));
}

TEST_CASE("empty vessel gives a zero spectrum") {
  const Spectrum s = uv_vis(Vessel{}, peaks_registry());
  CHECK(s.absorbance.isZero());
}

TEST_CASE("peaks are weighted by mole fraction") {
  const auto reg = peaks_registry();
  Vessel v;
  v.volume_capacity = 10.0;
  add_material(v, reg, "s", 3.0, PhaseTag::liquid);  // no peaks, still dilutes
  add_material(v, reg, "a", 1.0, PhaseTag::dissolved);
  const Spectrum s = uv_vis(v, reg);
  for (std::size_t i = 0; i < s.bins(); i += 7) {
    const double x = s.wavelength(i);
    CHECK(s.absorbance[static_cast<Eigen::Index>(i)] == doctest::Approx(0.25 * gauss(x, 500, 20, 0.8)));
  }
}

TEST_CASE("blends add below saturation") {
  const auto reg = peaks_registry();
  Vessel va, vb, mix;
  for (auto* v : {&va, &vb, &mix}) v->volume_capacity = 10.0;
  add_material(va, reg, "a", 1.0, PhaseTag::liquid);
  add_material(vb, reg, "b", 1.0, PhaseTag::liquid);
  add_material(mix, reg, "a", 1.0, PhaseTag::liquid);
  add_material(mix, reg, "b", 3.0, PhaseTag::liquid);
  const auto sa = uv_vis(va, reg).absorbance;
  const auto sb = uv_vis(vb, reg).absorbance;
  const auto sm = uv_vis(mix, reg).absorbance;
  CHECK((sm - (0.25 * sa + 0.75 * sb)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("absorbance saturates at one") {
  const auto reg = peaks_registry();
  Vessel v;
  v.volume_capacity = 10.0;
  add_material(v, reg, "hot", 1.0, PhaseTag::liquid);
  const auto s = uv_vis(v, reg).absorbance;
  CHECK(s.maxCoeff() == 1.0);
  CHECK(s.minCoeff() >= 0.0);
}

TEST_CASE("method dispatch") {
  const auto reg = peaks_registry();
  CHECK(std::holds_alternative<Spectrum>(characterize(Vessel{}, reg, "uv-vis")));
  CHECK_THROWS_AS(characterize(Vessel{}, reg, "nmr"), UnknownMethod);
  SpectrumConfig cfg;
  cfg.bins = 0;
  CHECK_THROWS_AS(uv_vis(Vessel{}, reg, cfg), ValidationError);
}
