#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>

#include <Eigen/Dense>

#include "chemgym/errors.hpp"

namespace chemgym {

struct Rkf45Options {
  double rel_tol = 1e-6;
  double abs_tol = 1e-9;
  std::size_t max_steps = 200000;
  double initial_step = 1e-3;
  // Components below this after a trial step force a smaller step.
  double negative_floor = -1e-12;
};

struct Rkf45Stats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
};

/// Embedded 4(5) Fehlberg pair, advancing the fifth-order solution.
/// f(t, y) returns dy/dt. Throws StepLimitExceeded after max_steps attempts.
template <class Scalar, class Rhs>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> rkf45(Rhs&& f, Eigen::Matrix<Scalar, Eigen::Dynamic, 1> y,
                                               Scalar t0, Scalar t1, const Rkf45Options& opt,
                                               Rkf45Stats* stats = nullptr) {
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using std::abs;
  using std::max;
  using std::min;
  using std::pow;

  if (!(t1 > t0)) return y;

  // Fehlberg tableau.
  const Scalar a21 = Scalar(1) / 4;
  const Scalar a31 = Scalar(3) / 32, a32 = Scalar(9) / 32;
  const Scalar a41 = Scalar(1932) / 2197, a42 = Scalar(-7200) / 2197, a43 = Scalar(7296) / 2197;
  const Scalar a51 = Scalar(439) / 216, a52 = Scalar(-8), a53 = Scalar(3680) / 513,
               a54 = Scalar(-845) / 4104;
  const Scalar a61 = Scalar(-8) / 27, a62 = Scalar(2), a63 = Scalar(-3544) / 2565,
               a64 = Scalar(1859) / 4104, a65 = Scalar(-11) / 40;
  const Scalar b1 = Scalar(16) / 135, b3 = Scalar(6656) / 12825, b4 = Scalar(28561) / 56430,
               b5 = Scalar(-9) / 50, b6 = Scalar(2) / 55;
  const Scalar c1 = Scalar(25) / 216, c3 = Scalar(1408) / 2565, c4 = Scalar(2197) / 4104,
               c5 = Scalar(-1) / 5;

  Scalar t = t0;
  Scalar h = min(Scalar(opt.initial_step), t1 - t0);
  std::size_t steps = 0;
  while (t < t1) {
    if (++steps > opt.max_steps)
      throw StepLimitExceeded("rkf45: " + std::to_string(opt.max_steps) +
                              " steps without reaching the end of the interval");
    const bool last = t + h >= t1;
    if (last) h = t1 - t;

    const Vec k1 = f(t, y);
    const Vec k2 = f(t + h / 4, (y + h * (a21 * k1)).eval());
    const Vec k3 = f(t + 3 * h / 8, (y + h * (a31 * k1 + a32 * k2)).eval());
    const Vec k4 = f(t + 12 * h / 13, (y + h * (a41 * k1 + a42 * k2 + a43 * k3)).eval());
    const Vec k5 = f(t + h, (y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4)).eval());
    const Vec k6 =
        f(t + h / 2, (y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5)).eval());

    const Vec y5 = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const Vec y4 = y + h * (c1 * k1 + c3 * k3 + c4 * k4 + c5 * k5);

    const Scalar scale = Scalar(opt.abs_tol) + Scalar(opt.rel_tol) * max(y.cwiseAbs().maxCoeff(),
                                                                         y5.cwiseAbs().maxCoeff());
    const Scalar err = (y5 - y4).cwiseAbs().maxCoeff() / scale;
    const bool negative = y5.size() > 0 && y5.minCoeff() < Scalar(opt.negative_floor);

    if (err <= Scalar(1) && !negative) {
      t = last ? t1 : t + h;
      y = y5;
      if (stats) ++stats->accepted;
      const Scalar grow = err > Scalar(0) ? Scalar(0.9) * pow(err, Scalar(-0.2)) : Scalar(5);
      h *= min(Scalar(5), max(Scalar(0.2), grow));
    } else {
      if (stats) ++stats->rejected;
      if (negative && err <= Scalar(1)) {
        h /= 2;
      } else {
        h *= max(Scalar(0.2), Scalar(0.9) * pow(err, Scalar(-0.2)));
      }
    }
  }
  return y;
}

/// Classical fixed-step fourth-order Runge-Kutta, used as a reference.
template <class Scalar, class Rhs>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> rk4_fixed(Rhs&& f,
                                                   Eigen::Matrix<Scalar, Eigen::Dynamic, 1> y,
                                                   Scalar t0, Scalar t1, Scalar h) {
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  const auto n = static_cast<long long>(std::ceil((t1 - t0) / h - 1e-9));
  if (n <= 0) return y;
  const Scalar step = (t1 - t0) / static_cast<Scalar>(n);
  Scalar t = t0;
  for (long long i = 0; i < n; ++i) {
    const Vec k1 = f(t, y);
    const Vec k2 = f(t + step / 2, (y + step / 2 * k1).eval());
    const Vec k3 = f(t + step / 2, (y + step / 2 * k2).eval());
    const Vec k4 = f(t + step, (y + step * k3).eval());
    y += step / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
    t = t0 + static_cast<Scalar>(i + 1) * step;
  }
  return y;
}

}  // namespace chemgym
