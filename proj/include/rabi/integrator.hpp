#pragma once

// Embedded Dormand-Prince 5(4) stepper with FSAL, elementwise max-norm error
// control and the standard 4th-order continuous extension for dense output.
// Works on any Eigen dense type (matrices for rho, vectors for kets).

#include "rabi/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>

namespace rabi::detail {

struct AdaptiveOptions {
  double rel_tol;
  double abs_tol;
  double dt_initial;
  double dt_min;
};

struct StepStats {
  long accepted = 0;
  long rejected = 0;
  long rhs_evaluations = 0;
};

namespace dp {
inline constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                        a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                        a65 = -5103.0 / 18656;
inline constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                        a76 = 11.0 / 84;
inline constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                        e6 = 22.0 / 525, e7 = -1.0 / 40;
inline constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                        d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                        d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;
}  // namespace dp

/// Integrates dy/dt = f(t, y) from t0 to t1.
///
/// `f(t, y, dy)` writes the derivative. `cap(t)` bounds the next step from t.
/// `sink(k, y)` receives the interpolated state at each sample time
/// samples[k] (which must be sorted and lie in [t0, t1]). `post(t, y)` may
/// modify y after an accepted step and returns true if it did.
template <class State, class Rhs, class Cap, class Sink, class Post>
StepStats integrate_dopri5(Rhs&& f, State y, double t0, double t1, std::span<const double> samples,
                           const AdaptiveOptions& opt, Cap&& cap, Sink&& sink, Post&& post) {
  using namespace dp;
  StepStats stats;
  std::size_t next_sample = 0;
  while (next_sample < samples.size() && samples[next_sample] <= t0) sink(next_sample++, y);

  State k1 = State::Zero(y.rows(), y.cols());
  State k2 = k1, k3 = k1, k4 = k1, k5 = k1, k6 = k1, k7 = k1, ytmp = k1, ynew = k1;
  f(t0, y, k1);
  ++stats.rhs_evaluations;

  double t = t0;
  double h = opt.dt_initial;
  bool last_rejected = false;
  while (t < t1) {
    const double limit = std::min(cap(t), t1 - t);
    double step = std::min(h, limit);
    const bool clipped = step < h;
    // Do not leave a sliver shorter than dt_min before t1.
    if (t1 - (t + step) < opt.dt_min) step = t1 - t;

    ytmp = y + step * a21 * k1;
    f(t + c2 * step, ytmp, k2);
    ytmp = y + step * (a31 * k1 + a32 * k2);
    f(t + c3 * step, ytmp, k3);
    ytmp = y + step * (a41 * k1 + a42 * k2 + a43 * k3);
    f(t + c4 * step, ytmp, k4);
    ytmp = y + step * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
    f(t + c5 * step, ytmp, k5);
    ytmp = y + step * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
    f(t + step, ytmp, k6);
    ynew = y + step * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
    f(t + step, ynew, k7);
    stats.rhs_evaluations += 6;

    ytmp = step * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    const auto scale =
        (opt.abs_tol + opt.rel_tol * y.cwiseAbs().cwiseMax(ynew.cwiseAbs()).array()).eval();
    const double err = (ytmp.cwiseAbs().array() / scale).maxCoeff();

    if (!(err <= 1.0)) {
      ++stats.rejected;
      const double fac = std::isfinite(err) ? std::max(0.2, 0.9 * std::pow(err, -0.2)) : 0.2;
      h = step * fac;
      last_rejected = true;
      if (h < opt.dt_min) throw IntegrationError("step size underflow", t);
      continue;
    }

    ++stats.accepted;
    const double t_new = (step == t1 - t) ? t1 : t + step;
    if (next_sample < samples.size() && samples[next_sample] <= t_new) {
      const State diff = ynew - y;
      const State bspl = step * k1 - diff;
      const State r4 = diff - step * k7 - bspl;
      const State r5 = step * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
      while (next_sample < samples.size() && samples[next_sample] <= t_new) {
        const double th = (samples[next_sample] - t) / step;
        const double th1 = 1.0 - th;
        ytmp = y + th * (diff + th1 * (bspl + th * (r4 + th1 * r5)));
        sink(next_sample++, ytmp);
      }
    }

    y.swap(ynew);
    k1.swap(k7);
    t = t_new;
    if (post(t, y)) {
      f(t, y, k1);
      ++stats.rhs_evaluations;
    }

    double fac = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
    fac = std::clamp(fac, 0.2, last_rejected ? 1.0 : 5.0);
    // A step clipped by `cap` says little about the achievable size; keep the larger guess.
    h = clipped ? std::max(h, step * fac) : step * fac;
    last_rejected = false;
  }
  while (next_sample < samples.size()) sink(next_sample++, y);
  return stats;
}

/// Classical RK4 with substeps no longer than dt between consecutive samples.
template <class State, class Rhs, class Sink>
StepStats integrate_rk4(Rhs&& f, State y, double t0, std::span<const double> samples, double dt, Sink&& sink) {
  StepStats stats;
  State k1 = State::Zero(y.rows(), y.cols());
  State k2 = k1, k3 = k1, k4 = k1, ytmp = k1;
  double t = t0;
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const double span = samples[k] - t;
    if (span > 0.0) {
      const long n = std::max(1L, static_cast<long>(std::ceil(span / dt - 1e-9)));
      const double h = span / static_cast<double>(n);
      for (long i = 0; i < n; ++i) {
        const double ti = t + static_cast<double>(i) * h;
        f(ti, y, k1);
        ytmp = y + 0.5 * h * k1;
        f(ti + 0.5 * h, ytmp, k2);
        ytmp = y + 0.5 * h * k2;
        f(ti + 0.5 * h, ytmp, k3);
        ytmp = y + h * k3;
        f(ti + h, ytmp, k4);
        y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        stats.rhs_evaluations += 4;
        ++stats.accepted;
      }
      t = samples[k];
    }
    sink(k, y);
  }
  return stats;
}

}  // namespace rabi::detail
