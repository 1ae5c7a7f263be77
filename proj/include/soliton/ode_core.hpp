#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "soliton/dopri5.hpp"
#include "soliton/error.hpp"
#include "soliton/params.hpp"
#include "soliton/profile.hpp"

namespace soliton {

struct IntegrateOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  long max_steps = 500000;
};

/// a(t) = 1/(4μt + φ) on its maximal positive interval (steady solitons only).
inline ProfileA closed_form_profile(const SolitonParams& params, double phi) {
  if (!params.gamma_infinite()) {
    throw Error(ErrorCode::NotSteady, "closed form exists only for lambda = 0");
  }
  if (!std::isfinite(phi)) throw Error(ErrorCode::InvalidArgument, "phi must be finite");
  const double mu = params.mu();
  const double root = -phi / (4.0 * mu);
  Endpoint lower, upper;
  if (mu < 0.0) {
    lower = {-kInf, EndTag::DecayToZero, 0.0, 0.0, true};
    upper = {root, EndTag::BlowUp, kInf, 0.0, true};
  } else {
    lower = {root, EndTag::BlowUp, kInf, 0.0, true};
    upper = {kInf, EndTag::DecayToZero, 0.0, 0.0, true};
  }
  // Anchor at t = 0 when it is in the domain, otherwise on the circle where |K| = 1.
  double t_ref = 0.0;
  if (!(t_ref > lower.t && t_ref < upper.t)) t_ref = root + 1.0 / (8.0 * mu * std::abs(mu));
  const double a_ref = 1.0 / (4.0 * mu * t_ref + phi);
  return ProfileA(params, ClosedForm{ClosedForm::Kind::ReciprocalAffine, phi}, lower, upper, t_ref,
                  a_ref);
}

/// The separatrix a ≡ γ on a window (both ends TRUNCATED).
inline ProfileA constant_profile(const SolitonParams& params, double t_lo = -kInf,
                                 double t_hi = kInf) {
  if (!params.has_positive_separatrix()) {
    throw Error(ErrorCode::Domain, "no positive separatrix for these parameters");
  }
  const double g = params.gamma();
  const double t_ref = std::isfinite(t_lo) ? t_lo : (std::isfinite(t_hi) ? t_hi : 0.0);
  return ProfileA(params, ClosedForm{ClosedForm::Kind::Constant, g},
                  {t_lo, EndTag::Truncated, g, 0.0, true}, {t_hi, EndTag::Truncated, g, 0.0, true},
                  t_ref, g);
}

namespace detail {

struct DirectionResult {
  std::vector<ode::DenseStep> steps;
  Endpoint end;
};

inline double blow_up_refine(const SolitonParams& p, double t_h, double a_h, double dir) {
  // Local models: a ≈ 1/(4|μ||T − t|) when λ = 0, a ≈ 1/√(4|λ||T − t|) otherwise.
  if (p.lambda() == 0.0) return t_h + dir / (4.0 * std::abs(p.mu()) * a_h);
  return t_h + dir / (4.0 * std::abs(p.lambda()) * a_h * a_h);
}

inline DirectionResult integrate_direction(const SolitonParams& p, double t_ref, double a_ref,
                                           double t_end, const IntegrateOptions& opt) {
  DirectionResult out;
  const double dir = t_end >= t_ref ? 1.0 : -1.0;
  if (t_end == t_ref) {
    out.end = {t_end, EndTag::Truncated, a_ref, 0.0, false};
    return out;
  }
  const bool sep = p.has_positive_separatrix();
  const double g = sep ? p.gamma() : 0.0;
  // The separatrix attracts in direction `dir` iff dir·f′(γ) = dir·4μγ < 0.
  const bool attracting = sep && dir * p.mu() < 0.0;

  ode::Options o;
  o.rtol = opt.rtol;
  o.atol = opt.atol;
  o.max_steps = opt.max_steps;
  auto f = [&p](double a) { return p.rhs(a); };
  auto stop = [&](double, double a) {
    if (a > kBlowUpThreshold || a < kZeroThreshold) return true;
    return attracting && std::abs(a - g) <= kConvergedStop * g;
  };
  ode::Run run = ode::integrate(f, t_ref, a_ref, t_end, o, stop);
  out.steps = std::move(run.steps);

  const double a = run.y;
  const double t = run.t;
  const bool growing = dir * p.rhs(a) > 0.0;
  const double scale = sep ? std::max(1.0, g) : 1.0;
  // The blow-up time is taken from the first integral through the anchor, so that
  // the domain agrees with the projected values; the integrator's own estimate is
  // kept and their disagreement is reported as the uncertainty.
  auto blow_up = [&]() {
    const double T_int = blow_up_refine(p, t, a, dir);
    const double T = t_ref + time_to_blow_up(p, a_ref);
    if (!(std::abs(T - T_int) <= 1e-6 * std::max(1.0, std::abs(T)))) {
      throw Error(ErrorCode::StepFailure, "integrated blow-up time disagrees with the first integral");
    }
    const double unc = std::max(std::abs(T - T_int),
                                8.0 * std::numeric_limits<double>::epsilon() *
                                    (std::abs(t_ref) + std::abs(T - t_ref)));
    Endpoint e{T, EndTag::BlowUp, kInf, unc, false};
    e.t_integrated = T_int;
    return e;
  };

  switch (run.reason) {
    case ode::StopReason::Event:
      if (a > kBlowUpThreshold) {
        out.end = blow_up();
      } else if (a < kZeroThreshold) {
        out.end = {dir * kInf, EndTag::DecayToZero, 0.0, 0.0, false};
      } else {
        out.end = {dir * kInf, EndTag::Converges, g, 0.0, false};
      }
      break;
    case ode::StopReason::StepTooSmall:
      // Near a finite-time blow-up the step size reaches the resolution of t
      // before a reaches the event threshold when λ ≠ 0.
      if (growing && a > 1e4 * scale) {
        out.end = blow_up();
      } else {
        throw Error(ErrorCode::StepFailure,
                    "step size underflow at t = " + std::to_string(t) + " (a = " +
                        std::to_string(a) + ")");
      }
      break;
    case ode::StopReason::MaxSteps:
    case ode::StopReason::NonFinite:
      throw Error(ErrorCode::StepFailure, "integration stalled; last good t = " + std::to_string(t));
    case ode::StopReason::ReachedEnd:
      if (attracting && std::abs(a - g) <= kConvergedAccept * g) {
        out.end = {dir * kInf, EndTag::Converges, g, 0.0, false};
      } else if (t == 0.0 && std::abs(a - 1.0) <= kSmoothOriginTol) {
        out.end = {0.0, EndTag::SmoothOrigin, a, 0.0, true};
      } else {
        out.end = {t, EndTag::Truncated, a, 0.0, true};
      }
      break;
  }
  return out;
}

}  // namespace detail

/// Integrate a′ = 4μa²(a/γ − 1) through (t_ref, a_ref) across [t_lo, t_hi]
/// (infinite edges allowed), stopping at blow-up, decay or separatrix events.
inline ProfileA integrate_profile(const SolitonParams& params, double t_ref, double a_ref,
                                  std::pair<double, double> window,
                                  const IntegrateOptions& opt = {}) {
  if (!(a_ref > 0.0) || !std::isfinite(a_ref)) {
    throw Error(ErrorCode::NonpositiveA, "a_ref must be positive and finite");
  }
  auto [t_lo, t_hi] = window;
  if (!(t_lo <= t_ref && t_ref <= t_hi) || !std::isfinite(t_ref)) {
    throw Error(ErrorCode::InvalidArgument, "t_ref must lie inside the window");
  }
  if (!(opt.rtol > 0.0) || !(opt.atol > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "tolerances must be positive");
  }
  if (params.has_positive_separatrix()) {
    const double g = params.gamma();
    if (std::abs(a_ref - g) <= kSeparatrixSnap * std::max(1.0, g)) {
      auto prof = constant_profile(params, t_lo, t_hi);
      return ProfileA(params, prof.representation(), prof.lower(), prof.upper(), t_ref, g);
    }
  }

  auto back = detail::integrate_direction(params, t_ref, a_ref, t_lo, opt);
  auto fwd = detail::integrate_direction(params, t_ref, a_ref, t_hi, opt);

  Sampled s;
  s.steps.reserve(back.steps.size() + fwd.steps.size());
  for (auto it = back.steps.rbegin(); it != back.steps.rend(); ++it) s.steps.push_back(*it);
  for (const auto& st : fwd.steps) s.steps.push_back(st);
  if (s.steps.empty()) throw Error(ErrorCode::Domain, "empty integration window");
  return ProfileA(params, std::move(s), back.end, fwd.end, t_ref, a_ref);
}

inline ProfileA integrate_profile(const SolitonParams& params, double t_ref, double a_ref,
                                  std::pair<double, double> window, double tol) {
  IntegrateOptions opt;
  opt.rtol = tol;
  opt.atol = tol * 1e-2;
  return integrate_profile(params, t_ref, a_ref, window, opt);
}

/// Blow-up time of the solution with a(0) = 1: 4μT = −1 − log(1 − γ)/γ.
///
/// For 0 < γ < 1, μ > 0 this is the forward blow-up T₁; for the other sign
/// combinations with γ < 1 it is the time of the (forward or backward) blow-up.
inline double blow_up_time_closed(double mu, double gamma) {
  if (mu == 0.0) throw Error(ErrorCode::MuZero, "mu must be non-zero");
  if (!(gamma < 1.0) || gamma == 0.0 || std::isnan(gamma)) {
    throw Error(ErrorCode::Domain, "blow-up formula needs gamma < 1, gamma != 0");
  }
  return (-1.0 - std::log1p(-gamma) / gamma) / (4.0 * mu);
}

// ---------------------------------------------------------------------------
// Symmetries of the solution space.

struct Scale {
  double alpha;
};
struct Rescale {
  double beta;
};
struct Translate {
  double tau;
};
using SymmetryAction = std::variant<Scale, Rescale, Translate>;

namespace detail {

inline Endpoint recheck_origin(const ProfileA& p, Endpoint e) {
  if (e.tag == EndTag::SmoothOrigin || (e.tag == EndTag::Truncated && e.t == 0.0)) {
    const bool smooth = e.t == 0.0 && std::abs(e.limit - 1.0) <= kSmoothOriginTol;
    e.tag = smooth ? EndTag::SmoothOrigin : EndTag::Truncated;
  }
  (void)p;
  return e;
}

}  // namespace detail

/// Transform a profile by one of the three symmetries:
///   Scale(α):    (μ, γ, a) ↦ (μ/α, αγ, αa)             λ ↦ λ/α²
///   Rescale(β):  (μ, γ, a) ↦ (μ/β², γ, a(·/β²))          metric scaled by β²
///   Translate(τ): a ↦ a(· − τ)
inline ProfileA apply_symmetry(const ProfileA& prof, const SymmetryAction& action) {
  const auto& p = prof.params();
  Endpoint lo = prof.lower();
  Endpoint hi = prof.upper();
  ProfileA::Representation rep = prof.representation();

  if (const auto* s = std::get_if<Scale>(&action)) {
    const double al = s->alpha;
    if (!(al > 0.0) || !std::isfinite(al)) throw Error(ErrorCode::InvalidArgument, "alpha > 0");
    const auto np = SolitonParams::make(p.lambda() / (al * al), p.mu() / al);
    if (auto* cf = std::get_if<ClosedForm>(&rep)) {
      if (cf->kind == ClosedForm::Kind::Constant) {
        cf->coefficient *= al;
      } else {
        cf->coefficient /= al;
      }
    } else {
      for (auto& st : std::get<Sampled>(rep).steps) {
        for (auto& c : st.rcont) c *= al;
      }
    }
    lo.limit *= al;
    hi.limit *= al;
    lo = detail::recheck_origin(prof, lo);
    hi = detail::recheck_origin(prof, hi);
    return ProfileA(np, std::move(rep), lo, hi, prof.t_ref(), prof.a_ref() * al);
  }

  if (const auto* r = std::get_if<Rescale>(&action)) {
    const double b2 = r->beta * r->beta;
    if (!(r->beta > 0.0) || !std::isfinite(r->beta)) {
      throw Error(ErrorCode::InvalidArgument, "beta > 0");
    }
    const auto np = SolitonParams::make(p.lambda() / b2, p.mu() / b2);
    if (auto* smp = std::get_if<Sampled>(&rep)) {
      for (auto& st : smp->steps) {
        st.t0 *= b2;
        st.h *= b2;
      }
    }
    lo.t *= b2;
    hi.t *= b2;
    lo.t_integrated *= b2;
    hi.t_integrated *= b2;
    lo.uncertainty *= b2;
    hi.uncertainty *= b2;
    return ProfileA(np, std::move(rep), lo, hi, prof.t_ref() * b2, prof.a_ref());
  }

  const double tau = std::get<Translate>(action).tau;
  if (!std::isfinite(tau)) throw Error(ErrorCode::InvalidArgument, "tau must be finite");
  if (auto* cf = std::get_if<ClosedForm>(&rep)) {
    if (cf->kind == ClosedForm::Kind::ReciprocalAffine) cf->coefficient -= 4.0 * p.mu() * tau;
  } else {
    for (auto& st : std::get<Sampled>(rep).steps) st.t0 += tau;
  }
  lo.t += tau;
  hi.t += tau;
  lo.t_integrated += tau;
  hi.t_integrated += tau;
  lo = detail::recheck_origin(prof, lo);
  hi = detail::recheck_origin(prof, hi);
  return ProfileA(p, std::move(rep), lo, hi, prof.t_ref() + tau, prof.a_ref());
}

// ---------------------------------------------------------------------------

namespace detail {
inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}
}  // namespace detail

/// CSV with header `t,a,dadt`, `n` uniform samples over [t_lo, t_hi].
inline void write_profile_csv(std::ostream& os, const ProfileA& prof, double t_lo, double t_hi,
                              int n) {
  os << "t,a,dadt\n";
  for (int i = 0; i < n; ++i) {
    const double t = n == 1 ? t_lo : t_lo + (t_hi - t_lo) * i / (n - 1);
    const double a = prof(t);
    os << detail::fmt17(t) << ',' << detail::fmt17(a) << ','
       << detail::fmt17(prof.params().rhs(a)) << '\n';
  }
}

}  // namespace soliton
