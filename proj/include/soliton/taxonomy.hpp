#pragma once

#include <array>
#include <cctype>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "soliton/error.hpp"
#include "soliton/geometry.hpp"
#include "soliton/ode_core.hpp"
#include "soliton/params.hpp"
#include "soliton/profile.hpp"

namespace soliton {

enum class Family {
  G1Cigar,
  G2Exploding,
  G3,
  G4Plus,
  G4Minus,
  G5,
  G6,
  G7,
  G8,
  G9,
  G10,
  G11,
  G12,
  FlatSeparatrix,
  UnresolvedT0Sign,
};

inline std::string to_string(Family f) {
  switch (f) {
    case Family::G1Cigar: return "G1_CIGAR";
    case Family::G2Exploding: return "G2_EXPLODING";
    case Family::G3: return "G3";
    case Family::G4Plus: return "G4_PLUS";
    case Family::G4Minus: return "G4_MINUS";
    case Family::G5: return "G5";
    case Family::G6: return "G6";
    case Family::G7: return "G7";
    case Family::G8: return "G8";
    case Family::G9: return "G9";
    case Family::G10: return "G10";
    case Family::G11: return "G11";
    case Family::G12: return "G12";
    case Family::FlatSeparatrix: return "FLAT_SEPARATRIX";
    case Family::UnresolvedT0Sign: return "UNRESOLVED_T0_SIGN";
  }
  return "UNKNOWN";
}

/// Accepts the tag names and the short forms g1 … g12, g4+, g4-, g4p, g4m.
inline std::optional<Family> parse_family(std::string_view s) {
  std::string k;
  for (char c : s) k.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  if (k == "G1" || k == "G1_CIGAR") return Family::G1Cigar;
  if (k == "G2" || k == "G2_EXPLODING") return Family::G2Exploding;
  if (k == "G3") return Family::G3;
  if (k == "G4+" || k == "G4P" || k == "G4_PLUS") return Family::G4Plus;
  if (k == "G4-" || k == "G4M" || k == "G4_MINUS") return Family::G4Minus;
  if (k == "G5") return Family::G5;
  if (k == "G6") return Family::G6;
  if (k == "G7") return Family::G7;
  if (k == "G8") return Family::G8;
  if (k == "G9") return Family::G9;
  if (k == "G10") return Family::G10;
  if (k == "G11") return Family::G11;
  if (k == "G12") return Family::G12;
  if (k == "FLAT_SEPARATRIX") return Family::FlatSeparatrix;
  return std::nullopt;
}

enum class Topology { Disk, Plane, PuncturedDisk, PuncturedPlane };

inline std::string to_string(Topology t) {
  switch (t) {
    case Topology::Disk: return "D";
    case Topology::Plane: return "R2";
    case Topology::PuncturedDisk: return "D*";
    case Topology::PuncturedPlane: return "R2*";
  }
  return "?";
}

/// Static description of one family: what geometry_report should find.
struct FamilyInfo {
  Family family;
  Topology topology;
  double nu_lo;
  double nu_hi;
  bool nu_lo_closed;
  bool complete;
  CurvatureSign curvature;
  EndKind inner;  // end at the smaller t
  EndKind outer;
  std::string_view summary;
};

inline const FamilyInfo& family_info(Family f) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  constexpr double pi = std::numbers::pi;
  using E = EndKind;
  using C = CurvatureSign;
  using T = Topology;
  static const std::array<FamilyInfo, 13> table{{
      {Family::G1Cigar, T::Plane, 0, inf, false, true, C::Positive, E::SmoothPoint,
       E::CylinderEnd, "steady cigar; asymptotic to a cylinder of radius 1/nu"},
      {Family::G2Exploding, T::Plane, 0, inf, false, false, C::Negative, E::SmoothPoint,
       E::ExplodingEnd, "steady exploding soliton; unbounded negative curvature"},
      {Family::G3, T::PuncturedPlane, 0, inf, true, false, C::Negative, E::CylinderEnd,
       E::ExplodingEnd, "steady; cylinder of radius nu at 0, asymptotic to g2(1)"},
      {Family::G4Plus, T::Disk, 1, pi / 2, false, false, C::Positive, E::SmoothPoint,
       E::GeodesicBoundary, "shrinking; totally geodesic boundary of length 2pi"},
      {Family::G4Minus, T::Disk, pi / 2, inf, false, false, C::Positive, E::SmoothPoint,
       E::GeodesicBoundary, "shrinking; totally geodesic boundary of length 2pi"},
      {Family::G5, T::Plane, 0, inf, false, false, C::Negative, E::SmoothPoint, E::ExplodingEnd,
       "shrinking; asymptotic to g2(nu)"},
      {Family::G6, T::Plane, 0, 2 * pi, false, true, C::Positive, E::SmoothPoint, E::ConeEnd,
       "expanding; flat cone of angle nu at infinity"},
      {Family::G7, T::Plane, 2 * pi, inf, false, true, C::Negative, E::SmoothPoint, E::ConeEnd,
       "expanding; flat cone of angle nu at infinity"},
      {Family::G8, T::PuncturedPlane, 0, inf, false, true, C::Negative, E::CuspEnd, E::ConeEnd,
       "expanding; hyperbolic cusp at 0, flat cone of angle nu at infinity"},
      {Family::G9, T::PuncturedDisk, 0, inf, false, false, C::Negative, E::GeodesicBoundary,
       E::ConeEnd, "expanding; flat cone of angle nu, totally geodesic boundary of length 2pi"},
      {Family::G10, T::Plane, 0, inf, false, false, C::Negative, E::SmoothPoint,
       E::ExplodingEnd, "expanding; asymptotic to g2(nu)"},
      {Family::G11, T::PuncturedPlane, 0, inf, false, false, C::Negative, E::CuspEnd,
       E::ExplodingEnd, "expanding; hyperbolic cusp at 0, asymptotic to g2(nu)"},
      {Family::G12, T::PuncturedDisk, 0, inf, false, false, C::Negative, E::GeodesicBoundary,
       E::ExplodingEnd, "expanding; asymptotic to g2(nu), totally geodesic boundary of length 2pi"},
  }};
  for (const auto& row : table) {
    if (row.family == f) return row;
  }
  throw Error(ErrorCode::InvalidArgument, "no table row for " + to_string(f));
}

inline const std::array<Family, 13>& all_families() {
  static const std::array<Family, 13> list{
      Family::G1Cigar, Family::G2Exploding, Family::G3,  Family::G4Plus, Family::G4Minus,
      Family::G5,      Family::G6,          Family::G7,  Family::G8,     Family::G9,
      Family::G10,     Family::G11,         Family::G12};
  return list;
}

struct FamilyLabel {
  Family tag = Family::UnresolvedT0Sign;
  /// Estimate of T₀ and its uncertainty when the decision depended on sign(T₀).
  double t0 = std::numeric_limits<double>::quiet_NaN();
  double t0_uncertainty = std::numeric_limits<double>::quiet_NaN();

  [[nodiscard]] std::optional<Topology> topology() const {
    if (tag == Family::FlatSeparatrix) return Topology::Plane;
    if (tag == Family::UnresolvedT0Sign) return std::nullopt;
    return family_info(tag).topology;
  }
  friend bool operator==(const FamilyLabel& l, Family f) { return l.tag == f; }
};

namespace detail {

struct T0Estimate {
  double t0;
  double uncertainty;
  bool certified;
};

/// Backward blow-up time from the first integral through the anchor.
inline T0Estimate backward_blow_up(const ProfileA& prof) {
  const auto& lo = prof.lower();
  if (lo.tag == EndTag::BlowUp) return {lo.t, lo.uncertainty, lo.certified};
  const double dt = time_to_blow_up(prof.params(), prof.a_ref());
  const double t0 = prof.t_ref() + dt;
  return {t0, 8.0 * std::numeric_limits<double>::epsilon() * (std::abs(prof.t_ref()) + std::abs(dt)),
          false};
}

}  // namespace detail

/// Family of a profile, following the case analysis of a′ = 4μa²(a/γ − 1).
inline FamilyLabel classify(const ProfileA& prof) {
  const auto& p = prof.params();
  FamilyLabel out;
  if (prof.is_constant() || prof.monotonicity() == 0) {
    out.tag = Family::FlatSeparatrix;
    return out;
  }
  const double mu = p.mu();
  const double a = prof.a_ref();

  // Decide on sign(T₀); an unresolved sign is reported rather than guessed.
  auto by_t0 = [&](Family neg, Family zero, Family pos) {
    const auto e = detail::backward_blow_up(prof);
    out.t0 = e.t0;
    out.t0_uncertainty = e.uncertainty;
    if (e.certified) {
      out.tag = e.t0 < 0.0 ? neg : (e.t0 == 0.0 ? zero : pos);
    } else if (std::abs(e.t0) <= e.uncertainty) {
      out.tag = Family::UnresolvedT0Sign;
    } else {
      out.tag = e.t0 < 0.0 ? neg : pos;
    }
    return out;
  };

  if (p.gamma_infinite()) {
    if (mu < 0.0) {
      out.tag = Family::G1Cigar;
      return out;
    }
    return by_t0(Family::G2Exploding, Family::G3, Family::G3);
  }
  const double g = p.gamma();
  if (g > 0.0) {
    if (mu > 0.0) {
      out.tag = a > g ? Family::G4Plus : Family::G5;
      return out;
    }
    if (a < g) {
      out.tag = Family::G6;
      return out;
    }
    return by_t0(Family::G7, Family::G8, Family::G9);
  }
  if (mu < 0.0) {
    out.tag = Family::G4Minus;
    return out;
  }
  return by_t0(Family::G10, Family::G11, Family::G12);
}

// ---------------------------------------------------------------------------
// Catalog

struct CatalogEntry {
  FamilyLabel family;
  double nu;
  SolitonParams params;
  ProfileA profile;
  std::string normalization_note;
};

namespace detail {

/// Distance from the origin to the boundary for the a(0) = 1, T₁ = 1/4 disk
/// solution with parameter γ < 1, γ ≠ 0, computed in the variable u = 1/a from
/// the exact first integral: dist = ∫₀¹ du / ((2λ − 4μu)·√t(1/u)).
inline double disk_radius(double gamma) {
  const double mu = -1.0 - std::log1p(-gamma) / gamma;
  const double lambda = 2.0 * mu / gamma;
  // t(1/u) = Φ-difference between a = 1 and a = 1/u, written in w = 1 − u to
  // avoid cancellation near the origin.
  auto t_of = [=](double w) {
    const double u = 1.0 - w;
    return -w / (4.0 * mu) -
           lambda / (8.0 * mu * mu) * std::log1p(-gamma * w / (1.0 - gamma * u));
  };
  auto f = [=](double u, double uc) {
    // uc is the distance to the nearer endpoint; use it for w near u = 1.
    const double w = u > 0.5 ? uc : 1.0 - u;
    const double t = t_of(w);
    if (!(t > 0.0)) return 0.0;
    return 1.0 / ((2.0 * lambda - 4.0 * mu * u) * std::sqrt(t));
  };
  boost::math::quadrature::tanh_sinh<double> rule;
  return rule.integrate(f, 0.0, 1.0, 1e-14);
}

inline double mu_for_unit_blow_up(double gamma) { return -1.0 - std::log1p(-gamma) / gamma; }

/// γ with disk_radius(γ) = ν, by bisection in a variable that spreads the range.
inline double disk_gamma_for(double nu, bool plus) {
  // g4⁺: γ = 1 − e^{−s}, s ∈ (0, 36]; g4⁻: γ = −e^{s}, s ∈ [−36, 36].
  auto gamma_of = [plus](double s) { return plus ? -std::expm1(-s) : -std::exp(s); };
  double lo = plus ? 1e-12 : -36.0;
  double hi = 36.0;
  auto radius = [&](double s) { return disk_radius(gamma_of(s)); };
  // radius decreases with γ: increasing s raises γ for g4⁺ and lowers it for g4⁻.
  const double r_lo = radius(lo), r_hi = radius(hi);
  const double r_min = std::min(r_lo, r_hi), r_max = std::max(r_lo, r_hi);
  if (!(nu > r_min && nu < r_max)) {
    throw Error(ErrorCode::Range, "nu = " + std::to_string(nu) +
                                      " not reachable by the bisection bracket [" +
                                      std::to_string(r_min) + ", " + std::to_string(r_max) + "]");
  }
  for (int it = 0; it < 200 && hi - lo > 4e-16 * std::max(1.0, std::abs(hi)); ++it) {
    const double mid = 0.5 * (lo + hi);
    const double r = radius(mid);
    const bool above = plus ? r > nu : r < nu;
    (above ? lo : hi) = mid;
  }
  return gamma_of(0.5 * (lo + hi));
}

inline void check_range(Family f, double nu) {
  const auto& info = family_info(f);
  const bool lo_ok = info.nu_lo_closed ? nu >= info.nu_lo : nu > info.nu_lo;
  if (!std::isfinite(nu) || !lo_ok || !(nu < info.nu_hi)) {
    throw Error(ErrorCode::Range, to_string(f) + ": nu = " + std::to_string(nu) +
                                      " outside the family's range");
  }
}

/// Integrate through an anchor placed so that the backward blow-up happens at
/// exactly T₀ (the first-integral value), and mark T₀ as certified.
inline ProfileA profile_with_t0(const SolitonParams& p, double a_ref, double T0) {
  const double t_ref = T0 - time_to_blow_up(p, a_ref);
  auto prof = integrate_profile(p, t_ref, a_ref, {-kInf, kInf});
  Endpoint lo = prof.lower();
  if (lo.tag != EndTag::BlowUp) {
    throw Error(ErrorCode::StepFailure, "expected a backward blow-up");
  }
  lo.t = T0;
  lo.certified = true;
  return ProfileA(p, prof.representation(), lo, prof.upper(), prof.t_ref(), prof.a_ref());
}

}  // namespace detail

/// Canonical representative of a family at parameter ν.
inline CatalogEntry catalog(Family f, double nu) {
  if (f == Family::FlatSeparatrix || f == Family::UnresolvedT0Sign) {
    throw Error(ErrorCode::InvalidArgument, to_string(f) + " has no catalog entry");
  }
  detail::check_range(f, nu);
  const double two_pi = 2.0 * std::numbers::pi;
  auto entry = [&](SolitonParams p, ProfileA prof, std::string note) {
    FamilyLabel label = classify(prof);
    return CatalogEntry{label, nu, p, std::move(prof), std::move(note)};
  };

  switch (f) {
    case Family::G1Cigar: {
      const auto p = make_params(0.0, -nu * nu);
      return entry(p, closed_form_profile(p, 1.0), "lambda = 0, mu = -nu^2, a = 1/(1 - 4 nu^2 t)");
    }
    case Family::G2Exploding: {
      const auto p = make_params(0.0, nu * nu);
      return entry(p, closed_form_profile(p, 1.0), "lambda = 0, mu = nu^2, a = 1/(1 + 4 nu^2 t)");
    }
    case Family::G3: {
      const auto p = make_params(0.0, 1.0);
      return entry(p, closed_form_profile(p, -nu * nu), "lambda = 0, mu = 1, a = 1/(4t - nu^2)");
    }
    case Family::G4Plus:
    case Family::G4Minus: {
      const double g = detail::disk_gamma_for(nu, f == Family::G4Plus);
      const auto p = SolitonParams::from_mu_gamma(detail::mu_for_unit_blow_up(g), g);
      auto prof = integrate_profile(p, 0.0, 1.0, {-kInf, kInf});
      auto e = entry(p, std::move(prof),
                     "a(0) = 1, T1 = 1/4 (boundary length 2pi), gamma by bisection on "
                     "dist(0, boundary) = nu");
      e.nu = detail::disk_radius(g);
      return e;
    }
    case Family::G5: {
      const auto p = SolitonParams::from_mu_gamma(nu * nu, 2.0);
      return entry(p, integrate_profile(p, 0.0, 1.0, {-kInf, kInf}),
                   "a(0) = 1, gamma = 2, mu = nu^2");
    }
    case Family::G6:
    case Family::G7: {
      const double g = two_pi / nu;
      const auto p = make_params(-1.0, -g / 2.0);
      return entry(p, integrate_profile(p, 0.0, 1.0, {-kInf, kInf}),
                   "lambda = -1, gamma = 2pi/nu, a(0) = 1");
    }
    case Family::G8:
    case Family::G9: {
      const double g = two_pi / nu;
      const auto p = make_params(-1.0, -g / 2.0);
      const double T0 = f == Family::G8 ? 0.0 : 0.25;
      return entry(p, detail::profile_with_t0(p, 2.0 * g, T0),
                   f == Family::G8 ? "lambda = -1, gamma = 2pi/nu, T0 = 0 exactly"
                                   : "lambda = -1, gamma = 2pi/nu, T0 = 1/4 (boundary length 2pi)");
    }
    case Family::G10:
      break;
    case Family::G11:
    case Family::G12: {
      const auto p = make_params(-1.0, nu * nu);
      const double T0 = f == Family::G11 ? 0.0 : 0.25;
      return entry(p, detail::profile_with_t0(p, 1.0, T0),
                   f == Family::G11 ? "lambda = -1, mu = nu^2, T0 = 0 exactly"
                                    : "lambda = -1, mu = nu^2, T0 = 1/4 (boundary length 2pi)");
    }
    default:
      break;
  }
  const auto p = make_params(-1.0, nu * nu);
  return entry(p, integrate_profile(p, 0.0, 1.0, {-kInf, kInf}), "lambda = -1, mu = nu^2, a(0) = 1");
}

/// A metric window well inside the domain of a catalog entry: from the origin when
/// the metric closes up smoothly, otherwise centred on the anchor circle. Each side
/// is at most half a curvature length 1/√|K| at the anchor (and at most 1/2), and
/// stays 60% of the way short of any end at finite distance.
struct MetricWindow {
  std::pair<double, double> anchor;  // (r0, b0)
  std::pair<double, double> r_range;
};

inline MetricWindow default_window(const ProfileA& prof) {
  const auto rep = geometry_report(prof);
  const auto& p = prof.params();
  const bool smooth = rep.inner_end.kind == EndKind::SmoothPoint;
  const double t_ref = smooth ? 0.0 : std::max(prof.t_ref(), 0.0);
  const double k_ref = smooth ? p.lambda() - 2.0 * p.mu() : p.curvature(prof(t_ref));
  const double ell = std::min(0.5, 0.5 / std::sqrt(std::max(std::abs(k_ref), 1e-300)));
  const double w_out = std::min(smooth ? 2.0 * ell : ell, 0.4 * rep.outer_distance);
  if (smooth) return {{0.0, 0.0}, {0.0, w_out}};
  const double w_in = std::min(ell, 0.4 * rep.inner_distance);
  return {{0.0, 2.0 * std::sqrt(t_ref)}, {-w_in, w_out}};
}

/// Metric of a profile on its default window with grid spacing close to h.
inline WarpedMetric default_metric(const ProfileA& prof, double h) {
  const auto w = default_window(prof);
  const double len = w.r_range.second - w.r_range.first;
  const auto n = static_cast<std::size_t>(std::llround(len / h)) + 1;
  return build_warped_metric(prof, w.anchor, w.r_range, std::max<std::size_t>(n, 3));
}

}  // namespace soliton
