#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "soliton/error.hpp"
#include "soliton/ode_core.hpp"
#include "soliton/params.hpp"
#include "soliton/profile.hpp"

namespace soliton {

/// K = λ − 2μ/a.
inline double curvature_from_a(const SolitonParams& params, double a) {
  if (std::isinf(a)) return params.lambda();
  return params.curvature(a);
}

enum class ClosedFormMetric { None, Cigar, Exploding, G3 };

/// Samples of g = dr² + b(r)²dθ² on a uniform r-grid.
///
/// The `*_ext` vectors hold the same samples in extended precision; finite-difference
/// checks of derivatives up to fourth order read those.
struct WarpedMetric {
  SolitonParams params;
  std::vector<double> r;
  std::vector<double> b;
  std::vector<double> b_prime;
  std::vector<double> K;
  std::vector<double> t_of_r;
  std::vector<long double> r_ext;
  std::vector<long double> b_ext;
  std::vector<long double> b_prime_ext;
  std::vector<long double> K_ext;
  ClosedFormMetric closed_form = ClosedFormMetric::None;
  double closed_form_nu = 0.0;

  explicit WarpedMetric(SolitonParams p) : params(p) {}

  [[nodiscard]] std::size_t size() const noexcept { return r.size(); }
  [[nodiscard]] double spacing() const noexcept { return static_cast<double>(spacing_ext()); }
  [[nodiscard]] long double spacing_ext() const noexcept {
    const std::size_t n = r_ext.size();
    return n < 2 ? 0.0L : (r_ext.back() - r_ext.front()) / static_cast<long double>(n - 1);
  }
  /// Index of the grid sample closest to x.
  [[nodiscard]] std::size_t index_of(double x) const {
    const double h = spacing();
    if (h <= 0.0) return 0;
    const double k = std::round((x - r.front()) / h);
    if (k < 0.0) return 0;
    return std::min(static_cast<std::size_t>(k), r.size() - 1);
  }

  void resize(std::size_t n) {
    for (auto* v : {&r, &b, &b_prime, &K, &t_of_r}) v->resize(n);
    for (auto* v : {&r_ext, &b_ext, &b_prime_ext, &K_ext}) v->resize(n);
  }
  void set(std::size_t i, long double r_i, long double b_i, long double db_i, long double K_i) {
    r_ext[i] = r_i;
    b_ext[i] = b_i;
    b_prime_ext[i] = db_i;
    K_ext[i] = K_i;
    r[i] = static_cast<double>(r_i);
    b[i] = static_cast<double>(b_i);
    b_prime[i] = static_cast<double>(db_i);
    K[i] = static_cast<double>(K_i);
    t_of_r[i] = static_cast<double>(b_i * b_i / 4);
  }
};

/// Build a metric from explicit b, b′, b″ (used for non-soliton test metrics).
/// The callables may take long double for full use of the extended samples.
template <class B, class DB, class D2B>
WarpedMetric metric_from_functions(const SolitonParams& params, B&& b, DB&& db, D2B&& d2b,
                                   double r_lo, double r_hi, std::size_t n) {
  if (n < 2 || !(r_hi > r_lo)) throw Error(ErrorCode::WindowEmpty, "need n >= 2 and r_hi > r_lo");
  WarpedMetric m(params);
  m.resize(n);
  const long double h = (static_cast<long double>(r_hi) - r_lo) / static_cast<long double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    const long double r = r_lo + h * static_cast<long double>(i);
    const long double bv = b(r);
    m.set(i, r, bv, db(r), -d2b(r) / bv);
  }
  return m;
}

namespace detail {

/// ∫ a(β²/4) dβ over [b_lo, b_hi]: arc length between the circles of radius b_lo and b_hi.
inline double arc_length_b(const ProfileA& prof, double b_lo, double b_hi) {
  if (b_hi == b_lo) return 0.0;
  // Double-exponential rule: the integrand may be singular at a blow-up end.
  boost::math::quadrature::tanh_sinh<double> rule(12);
  // Two-argument form: the one-argument wrapper in some Boost versions can place
  // abscissae exactly on the end points.
  auto f = [&prof](double beta, double) { return prof(beta * beta / 4.0); };
  return rule.integrate(f, b_lo, b_hi, 1e-13);
}

/// ∫ a(β²/4) dβ between neighbouring samples, in extended precision. A fine step settles with
/// a shallow GK15 pass, whose error estimate is pessimistic by several digits near a singular
/// end; a coarse step, or a trial point reaching into the singular end, goes to tanh-sinh.
inline long double arc_length_piece(const ProfileA& prof, long double b_lo, long double b_hi) {
  if (b_hi == b_lo) return 0.0L;
  auto f = [&prof](long double beta) { return prof.extended(beta * beta / 4); };
  long double err = 0;
  const long double gk = boost::math::quadrature::gauss_kronrod<long double, 15>::integrate(
      f, b_lo, b_hi, 2, 1e-17L, &err);
  if (err <= 1e-8L * std::abs(gk)) return gk;
  static thread_local boost::math::quadrature::tanh_sinh<long double> rule(10);
  auto g = [&prof](long double beta, long double) { return prof.extended(beta * beta / 4); };
  if (b_hi < b_lo) return -rule.integrate(g, b_hi, b_lo, 1e-15L);
  return rule.integrate(g, b_lo, b_hi, 1e-15L);
}

/// The t-range usable for geometry: the numeric range intersected with t ≥ 0.
inline std::pair<double, double> geometric_t_range(const ProfileA& prof) {
  auto [lo, hi] = prof.numeric_range();
  lo = std::max(lo, 0.0);
  if (prof.lower().t < 0.0 && prof.upper().t > 0.0) lo = 0.0;
  if (!(hi > lo)) throw Error(ErrorCode::Domain, "profile has no t > 0 part");
  return {lo, hi};
}

inline bool has_smooth_origin(const ProfileA& prof) {
  const bool zero_in_domain =
      (prof.lower().t < 0.0 && prof.upper().t > 0.0) ||
      (prof.lower().t == 0.0 && prof.lower().tag == EndTag::SmoothOrigin);
  return zero_in_domain && std::abs(prof(0.0) - 1.0) <= kSmoothOriginTol;
}

}  // namespace detail

/// Reconstruct g = dr² + b²dθ² with a(b²/4)·b′ = 1 through the anchor b(r0) = b0.
///
/// r(b) = r0 + ∫_{b0}^{b} a(β²/4) dβ is evaluated by adaptive quadrature and inverted
/// by Newton iteration marching outward from the anchor. The r-window is clipped to
/// the metric's domain.
inline WarpedMetric build_warped_metric(const ProfileA& prof, std::pair<double, double> anchor,
                                        std::pair<double, double> r_window, std::size_t n) {
  const auto& p = prof.params();
  const auto [r0, b0] = anchor;
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "need at least two samples");
  if (!(b0 >= 0.0)) throw Error(ErrorCode::InvalidArgument, "b0 must be non-negative");
  const auto [t_min, t_max] = detail::geometric_t_range(prof);
  const double b_min = 2.0 * std::sqrt(t_min);
  const double b_max = std::isinf(t_max) ? kInf : 2.0 * std::sqrt(t_max);
  if (b0 == 0.0) {
    if (!detail::has_smooth_origin(prof)) {
      throw Error(ErrorCode::NotSmoothOrigin, "b0 = 0 requires lim_{t->0} a = 1");
    }
  } else if (b0 < b_min || b0 > b_max) {
    throw Error(ErrorCode::Domain, "b0^2/4 outside the profile's t-domain");
  }

  const double r_dom_lo = r0 - detail::arc_length_b(prof, b_min, b0);
  const double r_dom_hi = std::isinf(b_max) ? kInf : r0 + detail::arc_length_b(prof, b0, b_max);
  const double lo = std::max(r_window.first, r_dom_lo);
  const double hi = std::min(r_window.second, r_dom_hi);
  if (!(hi > lo)) throw Error(ErrorCode::WindowEmpty, "r-window misses the metric's domain");

  using L = long double;
  WarpedMetric m(p);
  m.resize(n);
  const L h = (static_cast<L>(hi) - lo) / static_cast<L>(n - 1);
  std::vector<L> rs(n), bs(n);
  for (std::size_t i = 0; i < n; ++i) rs[i] = lo + h * static_cast<L>(i);
  const L lo_b = b_min;
  const L hi_b = b_max;

  // Solve ∫_{b_c}^{b} a dβ = r − r_c by Newton kept inside a bracket, bisecting whenever a
  // step leaves it: near a log-singular end a plain Newton iteration creeps. The starting
  // guess is the Taylor step b_c + b′Δr − ½K·b·Δr².
  auto advance = [&](L r_c, L b_c, L r_target) {
    const L dr = r_target - r_c;
    if (dr == 0) return b_c;
    L lo_br = dr > 0 ? b_c : lo_b;
    L hi_br = dr > 0 ? hi_b : b_c;
    const L a_c = prof.extended(b_c * b_c / 4);
    const L k_c = detail::curvature_accurate<L>(p, a_c);
    // midpoint of the bracket, or a doubling step while it is unbounded above
    auto bisect = [&] {
      return std::isinf(hi_br) ? 2 * std::max(lo_br, L(1)) : (lo_br + hi_br) / 2;
    };
    L b = b_c + dr / a_c - k_c * b_c * dr * dr / 2;
    if (!(b > lo_br && b < hi_br)) b = bisect();
    constexpr L tol = 8 * std::numeric_limits<L>::epsilon();
    L prev_step = std::numeric_limits<L>::infinity();
    for (int it = 0; it < 200; ++it) {
      const L resid = detail::arc_length_piece(prof, b_c, b) - dr;
      if (resid == 0) return b;
      (resid > 0 ? hi_br : lo_br) = b;
      L next = b - resid / prof.extended(b * b / 4);
      const L scale = std::max(std::abs(b), L(1e-300));
      const L step = std::abs(next - b);
      if (step <= tol * scale) return next;
      // a Newton step that stops shrinking has reached the noise floor of the residual
      if (step <= 1e-15L * scale && step >= prev_step / 2) return next;
      if (next > lo_br && next < hi_br) {
        prev_step = step;
      } else {
        next = bisect();
        prev_step = std::numeric_limits<L>::infinity();
      }
      if (hi_br - lo_br <= tol * scale) return next;
      b = next;
    }
    throw Error(ErrorCode::StepFailure, "metric march did not converge at r = " +
                                            std::to_string(static_cast<double>(r_target)));
  };

  // First sample at or above the anchor.
  const auto split =
      static_cast<std::size_t>(std::lower_bound(rs.begin(), rs.end(), L(r0)) - rs.begin());
  L r_c = r0, b_c = b0;
  for (std::size_t i = split; i < n; ++i) {
    b_c = advance(r_c, b_c, rs[i]);
    r_c = rs[i];
    bs[i] = b_c;
  }
  r_c = r0;
  b_c = b0;
  for (std::size_t i = split; i-- > 0;) {
    b_c = advance(r_c, b_c, rs[i]);
    r_c = rs[i];
    bs[i] = b_c;
  }

  for (std::size_t i = 0; i < n; ++i) {
    const L a = prof.extended(bs[i] * bs[i] / 4);
    m.set(i, rs[i], bs[i], 1 / a, detail::curvature_accurate<L>(p, a));
  }

  if (const auto* cf = std::get_if<ClosedForm>(&prof.representation());
      cf != nullptr && cf->kind == ClosedForm::Kind::ReciprocalAffine) {
    const double nu2 = std::abs(p.mu());
    if (p.mu() < 0.0 && cf->coefficient == 1.0) {
      m.closed_form = ClosedFormMetric::Cigar;
      m.closed_form_nu = std::sqrt(nu2);
    } else if (p.mu() > 0.0 && cf->coefficient == 1.0) {
      m.closed_form = ClosedFormMetric::Exploding;
      m.closed_form_nu = std::sqrt(nu2);
    } else if (p.mu() > 0.0 && cf->coefficient <= 0.0) {
      m.closed_form = ClosedFormMetric::G3;
      m.closed_form_nu = std::sqrt(-cf->coefficient / p.mu());
    }
  }
  return m;
}

/// −b″/b at the grid sample nearest r, by central differences.
inline double curvature_from_b(const WarpedMetric& m, double r) {
  const std::size_t i = m.index_of(r);
  if (m.size() < 11 || i < 5 || i + 5 >= m.size()) {
    throw Error(ErrorCode::Edge, "curvature stencil needs 5 samples on each side");
  }
  const long double h = m.spacing_ext();
  const long double d2 = (m.b_ext[i + 1] - 2 * m.b_ext[i] + m.b_ext[i - 1]) / (h * h);
  return static_cast<double>(-d2 / m.b_ext[i]);
}

/// Geodesic curvature b′/b of the circle at r0 (cubic Hermite interpolation).
inline double geodesic_curvature(const WarpedMetric& m, double r0) {
  if (m.size() < 2 || r0 < m.r.front() || r0 > m.r.back()) {
    throw Error(ErrorCode::Domain, "r0 outside the metric grid");
  }
  const double h = m.spacing();
  std::size_t i = std::min(static_cast<std::size_t>((r0 - m.r.front()) / h), m.size() - 2);
  const double s = (r0 - m.r[i]) / h;
  auto hermite = [&](double y0, double y1, double d0, double d1) {
    const double s2 = s * s, s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * h * d0 + (-2 * s3 + 3 * s2) * y1 +
           (s3 - s2) * h * d1;
  };
  const double b = hermite(m.b[i], m.b[i + 1], m.b_prime[i], m.b_prime[i + 1]);
  const double db = hermite(m.b_prime[i], m.b_prime[i + 1], -m.K[i] * m.b[i],
                            -m.K[i + 1] * m.b[i + 1]);
  if (!(b > 0.0)) throw Error(ErrorCode::Domain, "b(r0) must be positive");
  return db / b;
}

// ---------------------------------------------------------------------------
// Geometry report

enum class CurvatureSign { Positive, Negative, Zero };

inline std::string to_string(CurvatureSign s) {
  switch (s) {
    case CurvatureSign::Positive: return "POSITIVE";
    case CurvatureSign::Negative: return "NEGATIVE";
    case CurvatureSign::Zero: return "ZERO";
  }
  return "UNKNOWN";
}

enum class EndKind { SmoothPoint, ConeEnd, CylinderEnd, CuspEnd, GeodesicBoundary, ExplodingEnd };

inline std::string to_string(EndKind k) {
  switch (k) {
    case EndKind::SmoothPoint: return "SMOOTH_POINT";
    case EndKind::ConeEnd: return "CONE_END";
    case EndKind::CylinderEnd: return "CYLINDER_END";
    case EndKind::CuspEnd: return "CUSP_END";
    case EndKind::GeodesicBoundary: return "GEODESIC_BOUNDARY";
    case EndKind::ExplodingEnd: return "EXPLODING_END";
  }
  return "UNKNOWN";
}

/// Tagged end descriptor. `value` is K at the origin, the cone angle, the
/// cylinder radius, the boundary length or ν, depending on `kind`; unused for cusps.
struct EndDescriptor {
  EndKind kind = EndKind::SmoothPoint;
  double value = 0.0;
};

struct GeometryReport {
  bool complete_inner = false;
  bool complete_outer = false;
  bool complete = false;
  CurvatureSign curvature_sign = CurvatureSign::Zero;
  double K_inf = 0.0;
  double K_sup = 0.0;
  EndDescriptor inner_end;
  EndDescriptor outer_end;
  /// Arc length from the inner end to the outer end (infinite for complete ends).
  double inner_distance = 0.0;  // from t_ref's circle to the inner end
  double outer_distance = 0.0;  // from t_ref's circle to the outer end

  [[nodiscard]] bool bounded_curvature() const noexcept {
    return std::isfinite(K_inf) && std::isfinite(K_sup);
  }
};

namespace detail {

struct EndAnalysis {
  EndDescriptor descriptor;
  double a_limit = 0.0;      // lim a toward this end
  double tail_length = 0.0;  // arc length beyond the numeric range (may be infinite)
  bool complete = false;
};

inline EndAnalysis analyse_inner(const ProfileA& prof, double t_lo) {
  const auto& p = prof.params();
  const auto& e = prof.lower();
  EndAnalysis out;
  // With T0 unresolved, t = 0 may or may not lie in the domain: a cone point, a cusp and a
  // geodesic boundary are all consistent with the samples.
  if (e.tag == EndTag::BlowUp && !e.certified && std::abs(e.t) <= e.uncertainty) {
    throw Error(ErrorCode::UnresolvedEnd, "blow-up time T0 is numerically indistinguishable from 0");
  }
  if (t_lo == 0.0 && (e.t < 0.0 || e.tag == EndTag::SmoothOrigin)) {
    const double a0 = prof(0.0);
    out.a_limit = a0;
    if (std::abs(a0 - 1.0) <= kSmoothOriginTol) {
      out.descriptor = {EndKind::SmoothPoint, p.lambda() - 2.0 * p.mu()};
      out.complete = true;
    } else {
      // Cone point of angle 2π/a(0): the completion is not a smooth surface.
      out.descriptor = {EndKind::ConeEnd, 2.0 * std::numbers::pi / a0};
      out.complete = false;
    }
    return out;
  }
  if (e.tag != EndTag::BlowUp) {
    throw Error(ErrorCode::UnresolvedEnd, "inner end is truncated; widen the window");
  }
  out.a_limit = kInf;
  const double T0 = e.t;
  const bool at_zero = e.certified && T0 == 0.0;
  if (at_zero) {
    out.tail_length = kInf;
    out.complete = true;
    // b → 0 and K → λ: check both at the last resolved circle.
    const double b_edge = 2.0 * std::sqrt(std::max(t_lo, 0.0));
    const double k_edge = curvature_from_a(p, prof(t_lo));
    if (!prof.is_closed_form() &&
        (!(b_edge < 1e-4) || !(std::abs(k_edge - p.lambda()) < 1e-3))) {
      throw Error(ErrorCode::UnresolvedEnd, "cusp end not resolved by the samples");
    }
    out.descriptor = {EndKind::CuspEnd, 0.0};
    return out;
  }
  const double radius = 2.0 * std::sqrt(T0);
  if (p.lambda() == 0.0) {
    out.tail_length = kInf;
    out.complete = true;
    out.descriptor = {EndKind::CylinderEnd, radius};
  } else {
    const double gap = t_lo - T0;
    out.tail_length = std::sqrt(gap / (std::abs(p.lambda()) * T0));
    out.complete = false;
    out.descriptor = {EndKind::GeodesicBoundary, 2.0 * std::numbers::pi * radius};
  }
  return out;
}

inline EndAnalysis analyse_outer(const ProfileA& prof, double t_hi) {
  const auto& p = prof.params();
  const auto& e = prof.upper();
  EndAnalysis out;
  switch (e.tag) {
    case EndTag::Converges: {
      // Compare a over the last tenth of [t_lo, t_max], with t_max at least 250
      // relaxation times 1/(4|μ|γ) out (values past the nodes come from the tail model).
      const double relax = 1.0 / (4.0 * std::abs(p.mu()) * e.limit);
      const double t_lo = std::max(prof.numeric_range().first, 0.0);
      const double t_max = std::max(t_hi, t_lo + 250.0 * relax);
      const double a_hi = prof(t_max);
      const double a_lo = prof(t_max - 0.1 * (t_max - t_lo));
      if (!(std::abs(a_hi - a_lo) < kConvergedAccept * a_hi)) {
        throw Error(ErrorCode::UnresolvedEnd, "a(t) has not settled near its limit");
      }
      out.a_limit = e.limit;
      out.tail_length = kInf;
      out.complete = true;
      out.descriptor = {EndKind::ConeEnd, 2.0 * std::numbers::pi / e.limit};
      return out;
    }
    case EndTag::DecayToZero: {
      const double c1 = prof(t_hi) * t_hi;
      const double c2 = prof(0.9 * t_hi) * 0.9 * t_hi;
      if (!(t_hi > 0.0) || std::abs(c1 - c2) > 1e-2 * std::abs(c1)) {
        throw Error(ErrorCode::UnresolvedEnd, "decay tail a ~ c/t did not fit");
      }
      out.a_limit = 0.0;
      out.tail_length = 2.0 * c1 / std::sqrt(t_hi);
      out.complete = false;
      out.descriptor = {EndKind::ExplodingEnd, 1.0 / (2.0 * std::sqrt(c1))};
      return out;
    }
    case EndTag::BlowUp: {
      out.a_limit = kInf;
      const double T1 = e.t;
      if (!(T1 > 0.0)) throw Error(ErrorCode::Domain, "profile blows up before t = 0");
      const double radius = 2.0 * std::sqrt(T1);
      if (p.lambda() == 0.0) {
        out.tail_length = kInf;
        out.complete = true;
        out.descriptor = {EndKind::CylinderEnd, radius};
      } else {
        out.tail_length = std::sqrt(std::max(T1 - t_hi, 0.0) / (std::abs(p.lambda()) * T1));
        out.complete = false;
        out.descriptor = {EndKind::GeodesicBoundary, 2.0 * std::numbers::pi * radius};
      }
      return out;
    }
    default:
      throw Error(ErrorCode::UnresolvedEnd, "outer end is truncated; widen the window");
  }
}

}  // namespace detail

/// Completeness, curvature range and end structure of the metric of a profile.
inline GeometryReport geometry_report(const ProfileA& prof, double tol = 1e-10) {
  (void)tol;
  const auto& p = prof.params();
  GeometryReport rep;

  if (prof.is_constant()) {
    const double g = p.gamma();
    rep.K_inf = rep.K_sup = 0.0;
    rep.curvature_sign = CurvatureSign::Zero;
    const bool smooth = std::abs(g - 1.0) <= kSmoothOriginTol;
    rep.inner_end = smooth ? EndDescriptor{EndKind::SmoothPoint, 0.0}
                           : EndDescriptor{EndKind::ConeEnd, 2.0 * std::numbers::pi / g};
    rep.outer_end = {EndKind::ConeEnd, 2.0 * std::numbers::pi / g};
    rep.complete_inner = smooth;
    rep.complete_outer = true;
    rep.complete = smooth;
    rep.inner_distance = std::sqrt(std::max(prof.t_ref(), 0.0)) * 2.0 * g;
    rep.outer_distance = kInf;
    return rep;
  }

  const auto [t_lo, t_hi] = detail::geometric_t_range(prof);
  const auto inner = detail::analyse_inner(prof, t_lo);
  const auto outer = detail::analyse_outer(prof, t_hi);

  const double t_mid = std::clamp(prof.t_ref(), t_lo, t_hi);
  const double b_lo = 2.0 * std::sqrt(t_lo), b_mid = 2.0 * std::sqrt(t_mid),
               b_hi = 2.0 * std::sqrt(t_hi);
  rep.inner_distance = detail::arc_length_b(prof, b_lo, b_mid) + inner.tail_length;
  rep.outer_distance = detail::arc_length_b(prof, b_mid, b_hi) + outer.tail_length;

  rep.inner_end = inner.descriptor;
  rep.outer_end = outer.descriptor;
  rep.complete_inner = inner.complete && std::isinf(rep.inner_distance) ==
                                             (inner.descriptor.kind != EndKind::SmoothPoint);
  rep.complete_outer = outer.complete && std::isinf(rep.outer_distance);
  rep.complete = rep.complete_inner && rep.complete_outer;

  const double k_in = inner.a_limit == 0.0 ? -std::copysign(kInf, p.mu())
                                           : curvature_from_a(p, inner.a_limit);
  const double k_out = outer.a_limit == 0.0 ? -std::copysign(kInf, p.mu())
                                            : curvature_from_a(p, outer.a_limit);
  rep.K_inf = std::min(k_in, k_out);
  rep.K_sup = std::max(k_in, k_out);
  const int mono = prof.monotonicity();
  rep.curvature_sign = mono > 0 ? CurvatureSign::Positive
                                : (mono < 0 ? CurvatureSign::Negative : CurvatureSign::Zero);
  return rep;
}

/// Distance from the origin (or the inner end) to the outer end of the metric.
inline double distance_to_outer_end(const ProfileA& prof) {
  const auto [t_lo, t_hi] = detail::geometric_t_range(prof);
  const auto outer = detail::analyse_outer(prof, t_hi);
  return detail::arc_length_b(prof, 2.0 * std::sqrt(t_lo), 2.0 * std::sqrt(t_hi)) +
         outer.tail_length;
}

/// CSV with header `r,b,db_dr,K`.
inline void write_metric_csv(std::ostream& os, const WarpedMetric& m) {
  os << "r,b,db_dr,K\n";
  for (std::size_t i = 0; i < m.size(); ++i) {
    os << detail::fmt17(m.r[i]) << ',' << detail::fmt17(m.b[i]) << ','
       << detail::fmt17(m.b_prime[i]) << ',' << detail::fmt17(m.K[i]) << '\n';
  }
}

}  // namespace soliton
