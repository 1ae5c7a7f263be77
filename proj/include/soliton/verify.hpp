#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "soliton/error.hpp"
#include "soliton/geometry.hpp"
#include "soliton/profile.hpp"

namespace soliton {

/// Suprema of the soliton residuals over the interior samples of a metric.
///
/// With u = log|K|:  tracefree  |u″ − (b′/b)u′|,   laplace   |u″ + (b′/b)u′ − 2(λ − K)|,
///                   potential  |u′ − 2μb|,        killing   |u′/b − 2μ|.
struct ResidualReport {
  double max_tracefree = 0.0;
  double max_laplace = 0.0;
  double max_potential = 0.0;
  double max_killing = 0.0;
  double h = 0.0;
  double r_lo = 0.0;
  double r_hi = 0.0;
  std::size_t samples = 0;
  std::size_t checked = 0;     // interior samples that entered the suprema
  std::size_t components = 0;  // runs of constant sign of K with |K| ≥ 1e−12

  [[nodiscard]] double max_all() const noexcept {
    return std::max({max_tracefree, max_laplace, max_potential, max_killing});
  }
};

inline constexpr double kZeroCurvature = 1e-12;

namespace detail {

/// Central first and second differences of u = log|K| at the interior samples
/// of each run where K keeps its sign and |K| ≥ 1e−12 (non-finite K ends a run).
template <class Visit>
std::size_t for_each_interior(const WarpedMetric& m, Visit&& visit) {
  using L = long double;
  const std::size_t n = m.size();
  if (n < 3) throw Error(ErrorCode::Edge, "need at least three samples");
  const L h = m.spacing_ext();
  std::vector<L> u(n);
  std::vector<int> sign(n);
  for (std::size_t i = 0; i < n; ++i) {
    const L k = m.K_ext[i];
    sign[i] = !(std::abs(k) >= kZeroCurvature) || !std::isfinite(k) ? 0 : (k > 0 ? 1 : -1);
    u[i] = sign[i] == 0 ? 0 : std::log(std::abs(k));
  }
  std::size_t runs = 0;
  std::size_t i = 0;
  while (i < n) {
    if (sign[i] == 0) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < n && sign[j + 1] == sign[i]) ++j;
    if (j >= i + 2) {
      ++runs;
      for (std::size_t k = i + 1; k < j; ++k) {
        if (!(m.b_ext[k] > 0)) continue;
        const L d1 = (u[k + 1] - u[k - 1]) / (2 * h);
        const L d2 = (u[k + 1] - 2 * u[k] + u[k - 1]) / (h * h);
        visit(k, d1, d2);
      }
    }
    i = j + 1;
  }
  if (runs == 0) {
    throw Error(ErrorCode::ZeroCurvature, "no run of samples with |K| >= 1e-12 and constant sign");
  }
  return runs;
}

}  // namespace detail

/// Residuals of ∇̊² log|K| = 0, Δ log|K| = 2(λ − K), d log|K|/dr = 2μb and of
/// the Killing property of J∇ log|K|, by central differences on the metric grid.
inline ResidualReport soliton_residual(const WarpedMetric& m) {
  ResidualReport rep;
  rep.h = m.spacing();
  rep.samples = m.size();
  if (m.size() > 0) {
    rep.r_lo = m.r.front();
    rep.r_hi = m.r.back();
  }
  using L = long double;
  const L lambda = m.params.lambda();
  const L mu = m.params.mu();
  L tf = 0, lap = 0, pot = 0, kil = 0;
  rep.components = detail::for_each_interior(m, [&](std::size_t k, L d1, L d2) {
    const L b = m.b_ext[k];
    const L q = m.b_prime_ext[k] / b;
    tf = std::max(tf, std::abs(d2 - q * d1));
    lap = std::max(lap, std::abs(d2 + q * d1 - 2 * (lambda - m.K_ext[k])));
    pot = std::max(pot, std::abs(d1 - 2 * mu * b));
    kil = std::max(kil, std::abs(d1 / b - 2 * mu));
    ++rep.checked;
  });
  rep.max_tracefree = static_cast<double>(tf);
  rep.max_laplace = static_cast<double>(lap);
  rep.max_potential = static_cast<double>(pot);
  rep.max_killing = static_cast<double>(kil);
  return rep;
}

inline double potential_check(const WarpedMetric& m) { return soliton_residual(m).max_potential; }

inline double killing_check(const WarpedMetric& m) { return soliton_residual(m).max_killing; }

struct SmoothExtension {
  bool extends = false;
  std::optional<double> K_origin;
};

/// Whether the metric closes up smoothly at t = 0 (lim a = 1), and K there.
inline SmoothExtension smooth_extension_check(const ProfileA& prof) {
  const auto& lo = prof.lower();
  const auto& hi = prof.upper();
  if (!(lo.t <= 0.0 && 0.0 <= hi.t)) {
    throw Error(ErrorCode::Domain, "t = 0 is not in the closure of the profile's domain");
  }
  SmoothExtension out;
  if ((lo.t == 0.0 && lo.tag == EndTag::BlowUp) || (hi.t == 0.0 && hi.tag == EndTag::BlowUp)) {
    return out;
  }
  const double a0 = prof(0.0);
  out.extends = std::abs(a0 - 1.0) <= kSmoothOriginTol;
  if (out.extends) out.K_origin = prof.params().lambda() - 2.0 * prof.params().mu();
  return out;
}

/// K at r = 0 from −b″/b alone: fourth-order second differences at the first two
/// admissible samples, extrapolated with the even expansion K(r) = K(0) + c·r².
inline double origin_curvature(const WarpedMetric& m) {
  if (m.size() < 12 || m.r.front() != 0.0) {
    throw Error(ErrorCode::Edge, "metric must start at r = 0 with enough samples");
  }
  using L = long double;
  const L h = m.spacing_ext();
  auto k_at = [&](std::size_t i) {
    const auto& b = m.b_ext;
    const L d2 = (-b[i - 2] + 16 * b[i - 1] - 30 * b[i] + 16 * b[i + 1] - b[i + 2]) / (12 * h * h);
    return -d2 / b[i];
  };
  const L r1 = m.r_ext[5], r2 = m.r_ext[6];
  return static_cast<double>((r2 * r2 * k_at(5) - r1 * r1 * k_at(6)) / (r2 * r2 - r1 * r1));
}

}  // namespace soliton
