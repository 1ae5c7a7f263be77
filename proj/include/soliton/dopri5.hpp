#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

namespace soliton::ode {

/// One accepted Dormand–Prince step with its 4th-order continuous extension.
///
/// Valid for t between t0 and t0 + h (h may be negative).
struct DenseStep {
  double t0 = 0.0;
  double h = 0.0;
  std::array<double, 5> rcont{};

  [[nodiscard]] double t1() const noexcept { return t0 + h; }
  [[nodiscard]] double left() const noexcept { return std::min(t0, t0 + h); }
  [[nodiscard]] double right() const noexcept { return std::max(t0, t0 + h); }

  [[nodiscard]] double operator()(double t) const noexcept {
    const double s = (t - t0) / h;
    const double s1 = 1.0 - s;
    return rcont[0] + s * (rcont[1] + s1 * (rcont[2] + s * (rcont[3] + s1 * rcont[4])));
  }
};

struct Options {
  double rtol = 1e-10;
  double atol = 1e-12;
  double safety = 0.9;
  double fac_min = 0.2;
  double fac_max = 5.0;
  long max_steps = 500000;
};

enum class StopReason { ReachedEnd, Event, StepTooSmall, MaxSteps, NonFinite };

struct Run {
  std::vector<DenseStep> steps;
  double t = 0.0;  // last accepted time
  double y = 0.0;  // last accepted value
  StopReason reason = StopReason::ReachedEnd;
};

namespace detail {

// Dormand & Prince (1980) 5(4) tableau, FSAL.
inline constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                        a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                        a64 = 49.0 / 176, a65 = -5103.0 / 18656;
inline constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                        a75 = -2187.0 / 6784, a76 = 11.0 / 84;
inline constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                        e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
inline constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                        d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                        d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;

}  // namespace detail

/// Integrate the scalar autonomous problem y′ = f(y) from (t0, y0) towards t_end
/// (which may be ±infinity). `stop(t, y)` is checked after every accepted step;
/// returning true halts with StopReason::Event.
///
/// Steps whose size falls below the resolution of t end the run with
/// StepTooSmall; callers decide whether that is a blow-up or a failure.
template <class F, class Stop>
Run integrate(F&& f, double t0, double y0, double t_end, const Options& opt, Stop&& stop) {
  using namespace detail;
  Run run;
  run.t = t0;
  run.y = y0;
  if (t_end == t0) return run;
  const double dir = t_end > t0 ? 1.0 : -1.0;
  const double eps = std::numeric_limits<double>::epsilon();

  double t = t0;
  double y = y0;
  double k1 = f(y);

  // Initial step from the local scale of y and y′.
  double h;
  {
    const double sc = opt.atol + opt.rtol * std::abs(y);
    const double d0 = std::abs(y) / sc;
    const double d1v = std::abs(k1) / sc;
    h = (d0 < 1e-5 || d1v < 1e-5) ? 1e-6 : 0.01 * d0 / d1v;
    h = std::min(h, std::abs(t_end - t));
    if (!std::isfinite(h)) h = 1e-6;
  }

  for (long n = 0;; ++n) {
    if (n >= opt.max_steps) {
      run.reason = StopReason::MaxSteps;
      break;
    }
    const double h_floor = 64.0 * eps * std::max(std::abs(t), 1e-300);
    if (h < h_floor) {
      run.reason = StopReason::StepTooSmall;
      break;
    }
    bool last = false;
    if (std::abs(t_end - t) <= h) {
      h = std::abs(t_end - t);
      last = true;
    }
    const double hs = dir * h;

    const double k2 = f(y + hs * a21 * k1);
    const double k3 = f(y + hs * (a31 * k1 + a32 * k2));
    const double k4 = f(y + hs * (a41 * k1 + a42 * k2 + a43 * k3));
    const double k5 = f(y + hs * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const double k6 = f(y + hs * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    const double y1 = y + hs * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
    const double k7 = f(y1);

    const double err_raw = hs * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    const double sc = opt.atol + opt.rtol * std::max(std::abs(y), std::abs(y1));
    double err = std::abs(err_raw) / sc;
    if (!std::isfinite(err) || !std::isfinite(y1)) err = 1e10;

    if (err <= 1.0) {
      DenseStep step;
      step.t0 = t;
      step.h = hs;
      const double ydiff = y1 - y;
      const double bspl = hs * k1 - ydiff;
      step.rcont = {y, ydiff, bspl, ydiff - hs * k7 - bspl,
                    hs * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7)};
      run.steps.push_back(step);
      t = last ? t_end : t + hs;
      y = y1;
      k1 = k7;
      run.t = t;
      run.y = y;
      if (stop(t, y)) {
        run.reason = StopReason::Event;
        break;
      }
      if (last) {
        run.reason = StopReason::ReachedEnd;
        break;
      }
      const double fac = err == 0.0 ? opt.fac_max
                                    : std::clamp(opt.safety * std::pow(err, -0.2), opt.fac_min,
                                                 opt.fac_max);
      h *= fac;
    } else {
      h *= std::max(opt.fac_min, opt.safety * std::pow(err, -0.2));
    }
    if (!std::isfinite(h)) {
      run.reason = StopReason::NonFinite;
      break;
    }
  }
  return run;
}

}  // namespace soliton::ode
