#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <utility>
#include <vector>

#include "soliton/error.hpp"
#include "soliton/geometry.hpp"
#include "soliton/verify.hpp"

// E[g] = ∫ K log|K| dμ on radial windows of a warped metric dr² + b²dθ², and its
// first variation along h = φ·g + ψ·(dr² − b²dθ²) with φ, ψ supported in the window.

namespace soliton {

/// A radial variation h = φ·g + ψ·(dr² − b²dθ²). φ and ψ live on the metric grid
/// and are zero outside the window; trace h = 2φ and |h̊|_g = √2·|ψ|.
struct VariationField {
  std::pair<double, double> window;
  std::vector<long double> phi;
  std::vector<long double> psi;
};

namespace detail {

using L = long double;

inline constexpr L kTwoPi = 2 * std::numbers::pi_v<L>;

/// Grid indices of the window ends; the window must leave `margin` samples on both sides.
inline std::pair<std::size_t, std::size_t> window_indices(const WarpedMetric& m,
                                                          std::pair<double, double> w,
                                                          std::size_t margin) {
  const std::size_t n = m.size();
  if (n < 2 * margin + 3 || !(w.second > w.first)) {
    throw Error(ErrorCode::Window, "window is empty or the metric has too few samples");
  }
  const double h = m.spacing();
  const double slack = 1e-9 * h;
  if (w.first < m.r.front() - slack || w.second > m.r.back() + slack) {
    throw Error(ErrorCode::Window, "window exceeds the metric domain");
  }
  const std::size_t i0 = m.index_of(w.first);
  const std::size_t i1 = m.index_of(w.second);
  if (i0 < margin || i1 + margin >= n) {
    throw Error(ErrorCode::Window, "window too close to the edge of the metric grid");
  }
  if (i1 < i0 + 2) throw Error(ErrorCode::Window, "window spans fewer than two grid steps");
  return {i0, i1};
}

/// Composite Simpson on samples i0..i1; an odd number of intervals ends with the 3/8 rule.
template <class F>
L simpson(F&& f, std::size_t i0, std::size_t i1, L h) {
  const std::size_t intervals = i1 - i0;
  std::size_t end = i1;
  L tail = 0;
  if (intervals % 2 == 1) {
    end = i1 - 3;
    tail = 3 * h / 8 * (f(end) + 3 * f(end + 1) + 3 * f(end + 2) + f(i1));
  }
  L s = 0;
  for (std::size_t i = i0; i + 2 <= end; i += 2) s += f(i) + 4 * f(i + 1) + f(i + 2);
  return s * h / 3 + tail;
}

inline L d1(const std::vector<L>& v, std::size_t i, L h) {
  return (v[i - 2] - 8 * v[i - 1] + 8 * v[i + 1] - v[i + 2]) / (12 * h);
}

inline L d2(const std::vector<L>& v, std::size_t i, L h) {
  return (-v[i - 2] + 16 * v[i - 1] - 30 * v[i] + 16 * v[i + 1] - v[i + 2]) / (12 * h * h);
}

inline void require_curvature(const std::vector<L>& K, std::size_t i0, std::size_t i1) {
  for (std::size_t i = i0; i <= i1; ++i) {
    if (!(std::abs(K[i]) >= kZeroCurvature)) {
      throw Error(ErrorCode::ZeroCurvature, "|K| < 1e-12 inside the window");
    }
  }
}

/// u = log|K| on i0 − 2 .. i1 + 2.
inline std::vector<L> log_curvature(const WarpedMetric& m, std::size_t i0, std::size_t i1) {
  require_curvature(m.K_ext, i0 - 2, i1 + 2);
  std::vector<L> u(m.size(), 0);
  for (std::size_t i = i0 - 2; i <= i1 + 2; ++i) u[i] = std::log(std::abs(m.K_ext[i]));
  return u;
}

inline void check_field(const WarpedMetric& m, const VariationField& v) {
  if (v.phi.size() != m.size() || v.psi.size() != m.size()) {
    throw Error(ErrorCode::InvalidArgument, "variation field does not match the metric grid");
  }
}

/// E of K on samples i0..i1 with area density `density` (= b for the unperturbed metric).
template <class Kf, class Af>
L energy_sum(Kf&& K, Af&& density, std::size_t i0, std::size_t i1, L h) {
  return kTwoPi * simpson(
                      [&](std::size_t i) {
                        const L k = K(i);
                        return k * std::log(std::abs(k)) * density(i);
                      },
                      i0, i1, h);
}

}  // namespace detail

/// E = 2π∫ K log|K| b dr over the grid samples in the window.
inline double energy(const WarpedMetric& m, std::pair<double, double> window) {
  const auto [i0, i1] = detail::window_indices(m, window, 0);
  detail::require_curvature(m.K_ext, i0, i1);
  return static_cast<double>(detail::energy_sum([&](std::size_t i) { return m.K_ext[i]; },
                                                [&](std::size_t i) { return m.b_ext[i]; }, i0,
                                                i1, m.spacing_ext()));
}

/// 2π∫ K b dr over the window.
inline double total_curvature(const WarpedMetric& m, std::pair<double, double> window) {
  const auto [i0, i1] = detail::window_indices(m, window, 0);
  return static_cast<double>(
      detail::kTwoPi *
      detail::simpson([&](std::size_t i) { return m.K_ext[i] * m.b_ext[i]; }, i0, i1,
                      m.spacing_ext()));
}

/// exp(−1/(1 − x²)) on (−1, 1): flat at both ends.
inline long double bump(long double x) {
  if (!(std::abs(x) < 1)) return 0;
  return std::exp(-1 / (1 - x * x));
}

inline long double bump_derivative(long double x) {
  if (!(std::abs(x) < 1)) return 0;
  const long double s = 1 - x * x;
  return -2 * x / (s * s) * std::exp(-1 / s);
}

/// φ = phi_amp·β, ψ = psi_amp·β with β a bump filling the window.
inline VariationField bump_variation(const WarpedMetric& m, std::pair<double, double> window,
                                     double phi_amp, double psi_amp) {
  detail::window_indices(m, window, 2);
  const long double c = (static_cast<long double>(window.first) + window.second) / 2;
  const long double w = (static_cast<long double>(window.second) - window.first) / 2;
  VariationField v{window, std::vector<long double>(m.size()), std::vector<long double>(m.size())};
  for (std::size_t i = 0; i < m.size(); ++i) {
    const long double beta = bump((m.r_ext[i] - c) / w);
    v.phi[i] = phi_amp * beta;
    v.psi[i] = psi_amp * beta;
  }
  return v;
}

/// h = L_X g for X = ξ(r)∂_r with ξ a bump on the window:
/// φ = ξ′ + ξ·b′/b = div X,  ψ = ξ′ − ξ·b′/b.
inline VariationField lie_variation(const WarpedMetric& m, std::pair<double, double> window) {
  const auto [i0, i1] = detail::window_indices(m, window, 2);
  for (std::size_t i = i0 + 1; i < i1; ++i) {
    if (!(m.b_ext[i] > 0)) throw Error(ErrorCode::Window, "b vanishes inside the window");
  }
  const long double c = (static_cast<long double>(window.first) + window.second) / 2;
  const long double w = (static_cast<long double>(window.second) - window.first) / 2;
  VariationField v{window, std::vector<long double>(m.size()), std::vector<long double>(m.size())};
  for (std::size_t i = i0 + 1; i < i1; ++i) {
    const long double x = (m.r_ext[i] - c) / w;
    const long double xi = bump(x);
    const long double dxi = bump_derivative(x) / w;
    const long double q = m.b_prime_ext[i] / m.b_ext[i];
    v.phi[i] = dxi + xi * q;
    v.psi[i] = dxi - xi * q;
  }
  return v;
}

/// Largest |φ|, |ψ| and their first two differences at the window ends.
inline double support_defect(const WarpedMetric& m, const VariationField& v) {
  detail::check_field(m, v);
  const auto [i0, i1] = detail::window_indices(m, v.window, 2);
  const long double h = m.spacing_ext();
  long double worst = 0;
  for (std::size_t i : {i0, i1}) {
    for (const auto* f : {&v.phi, &v.psi}) {
      worst = std::max({worst, std::abs((*f)[i]), std::abs(detail::d1(*f, i, h)),
                        std::abs(detail::d2(*f, i, h))});
    }
  }
  return static_cast<double>(worst);
}

/// δ_h E = −¼∫ 2φ(Δu + 2K) dμ + ½∫ ψ(u″ − (b′/b)u′) dμ, u = log|K|, dμ = 2πb dr,
/// with fourth-order differences of u.
inline double first_variation(const WarpedMetric& m, const VariationField& v) {
  using L = long double;
  detail::check_field(m, v);
  const auto [i0, i1] = detail::window_indices(m, v.window, 2);
  const auto u = detail::log_curvature(m, i0, i1);
  const L h = m.spacing_ext();
  auto integrand = [&](std::size_t i) -> L {
    if (v.phi[i] == 0 && v.psi[i] == 0) return 0;
    const L b = m.b_ext[i];
    const L q = m.b_prime_ext[i] / b;
    const L du = detail::d1(u, i, h), ddu = detail::d2(u, i, h);
    return (-v.phi[i] / 2 * (ddu + q * du + 2 * m.K_ext[i]) + v.psi[i] / 2 * (ddu - q * du)) * b;
  };
  return static_cast<double>(detail::kTwoPi * detail::simpson(integrand, i0, i1, h));
}

/// −½∫ (Δu + 2K)·φ dμ: for a Lie-derivative field φ = div X, the value the
/// first variation takes at a critical metric.
inline double noether_integral(const WarpedMetric& m, const VariationField& v) {
  using L = long double;
  detail::check_field(m, v);
  const auto [i0, i1] = detail::window_indices(m, v.window, 2);
  const auto u = detail::log_curvature(m, i0, i1);
  const L h = m.spacing_ext();
  auto integrand = [&](std::size_t i) -> L {
    if (v.phi[i] == 0) return 0;
    const L q = m.b_prime_ext[i] / m.b_ext[i];
    return -v.phi[i] / 2 * (detail::d2(u, i, h) + q * detail::d1(u, i, h) + 2 * m.K_ext[i]) *
           m.b_ext[i];
  };
  return static_cast<double>(detail::kTwoPi * detail::simpson(integrand, i0, i1, h));
}

namespace detail {

/// E on the window for g + εh, rebuilt from scratch: g_ε = E dr² + B² dθ² with
/// E = 1 + ε(φ + ψ), B = b·√(1 + ε(φ − ψ)), K_ε = −(1/(√E B))·d/dr(B′/√E), dμ = √E·B dr dθ.
inline L perturbed_energy(const WarpedMetric& m, const VariationField& v, std::size_t i0,
                          std::size_t i1, L eps) {
  const L h = m.spacing_ext();
  const std::size_t n = m.size();
  std::vector<L> E(n, 1), B(m.b_ext.begin(), m.b_ext.end());
  for (std::size_t i = i0 - 2; i <= i1 + 2; ++i) {
    E[i] = 1 + eps * (v.phi[i] + v.psi[i]);
    const L s = 1 + eps * (v.phi[i] - v.psi[i]);
    if (!(E[i] > 0) || !(s > 0)) throw Error(ErrorCode::InvalidArgument, "eps too large");
    B[i] = m.b_ext[i] * std::sqrt(s);
  }
  std::vector<L> K(n, 0);
  for (std::size_t i = i0; i <= i1; ++i) {
    // (1/√E)(B′/√E)′ = B″/E − E′B′/(2E²)
    const L dB = d1(B, i, h), ddB = d2(B, i, h), dE = d1(E, i, h);
    K[i] = -(ddB / E[i] - dE * dB / (2 * E[i] * E[i])) / B[i];
    if (!(std::abs(K[i]) >= kZeroCurvature)) {
      throw Error(ErrorCode::ZeroCurvature, "perturbed curvature vanishes inside the window");
    }
  }
  return energy_sum([&](std::size_t i) { return K[i]; },
                    [&](std::size_t i) { return std::sqrt(E[i]) * B[i]; }, i0, i1, h);
}

}  // namespace detail

/// (E[g + εh] − E[g − εh])/(2ε) from rebuilt perturbed metrics. The samples outside the
/// window agree for ±ε and cancel, so only the window enters.
inline double fd_variation(const WarpedMetric& m, const VariationField& v, double eps) {
  using L = long double;
  detail::check_field(m, v);
  if (!(eps > 0)) throw Error(ErrorCode::InvalidArgument, "eps must be positive");
  const auto [i0, i1] = detail::window_indices(m, v.window, 2);
  if (i0 == 0 || !(m.b_ext[i0] > 0)) {
    // a window touching the axis would need −B″/B at b = 0; shrink it by a step
    throw Error(ErrorCode::Window, "window must stay off the axis b = 0");
  }
  const L plus = detail::perturbed_energy(m, v, i0, i1, eps);
  const L minus = detail::perturbed_energy(m, v, i0, i1, -static_cast<L>(eps));
  return static_cast<double>((plus - minus) / (2 * static_cast<L>(eps)));
}

/// sup over the window of |Δ log|K| + 2K − 2λ|, central second differences.
inline double noether_defect(const WarpedMetric& m, std::pair<double, double> window) {
  using L = long double;
  const auto [i0, i1] = detail::window_indices(m, window, 1);
  detail::require_curvature(m.K_ext, i0 - 1, i1 + 1);
  const L h = m.spacing_ext();
  const L lambda = m.params.lambda();
  L worst = 0;
  for (std::size_t i = i0; i <= i1; ++i) {
    if (!(m.b_ext[i] > 0)) continue;
    const L um = std::log(std::abs(m.K_ext[i - 1]));
    const L u0 = std::log(std::abs(m.K_ext[i]));
    const L up = std::log(std::abs(m.K_ext[i + 1]));
    const L q = m.b_prime_ext[i] / m.b_ext[i];
    const L lap = (up - 2 * u0 + um) / (h * h) + q * (up - um) / (2 * h);
    worst = std::max(worst, std::abs(lap + 2 * m.K_ext[i] - 2 * lambda));
  }
  return static_cast<double>(worst);
}

struct VariationReport {
  double analytic = 0.0;
  std::vector<double> eps;
  std::vector<double> finite_difference;
  double slope_estimate = 0.0;  // least-squares slope of log|fd − analytic| against log ε
  double noether_defect = 0.0;
};

inline VariationReport variation_report(const WarpedMetric& m, const VariationField& v,
                                        std::vector<double> eps = {1e-3, 5e-4, 2.5e-4}) {
  VariationReport rep;
  rep.analytic = first_variation(m, v);
  rep.eps = std::move(eps);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t k = 0;
  for (double e : rep.eps) {
    const double fd = fd_variation(m, v, e);
    rep.finite_difference.push_back(fd);
    const double err = std::abs(fd - rep.analytic);
    if (err > 0) {
      const double x = std::log(e), y = std::log(err);
      sx += x, sy += y, sxx += x * x, sxy += x * y, ++k;
    }
  }
  const double den = static_cast<double>(k) * sxx - sx * sx;
  rep.slope_estimate =
      k >= 2 && den != 0 ? (static_cast<double>(k) * sxy - sx * sy) / den : std::nan("");
  rep.noether_defect = noether_defect(m, v.window);
  return rep;
}

}  // namespace soliton
