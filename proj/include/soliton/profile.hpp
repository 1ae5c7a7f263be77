#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "soliton/dopri5.hpp"
#include "soliton/error.hpp"
#include "soliton/params.hpp"

namespace soliton {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Event thresholds for the profile integrator.
inline constexpr double kBlowUpThreshold = 1e8;
inline constexpr double kZeroThreshold = 1e-10;
/// |a_ref − γ| below this (times max(1, γ)) selects the constant solution.
inline constexpr double kSeparatrixSnap = 1e-13;
/// Integration towards an attracting separatrix stops once |a − γ| ≤ this·γ;
/// the remaining approach follows the linearized tail.
inline constexpr double kConvergedStop = 1e-9;
/// A window edge closer than this (relative) to a stable separatrix counts as converged.
inline constexpr double kConvergedAccept = 1e-7;
/// |a(0) − 1| below this marks a smooth origin.
inline constexpr double kSmoothOriginTol = 1e-8;

enum class EndTag { BlowUp, DecayToZero, Converges, SmoothOrigin, Truncated };

inline std::string to_string(EndTag tag) {
  switch (tag) {
    case EndTag::BlowUp: return "BLOW_UP";
    case EndTag::DecayToZero: return "DECAY_TO_ZERO";
    case EndTag::Converges: return "CONVERGES";
    case EndTag::SmoothOrigin: return "SMOOTH_ORIGIN";
    case EndTag::Truncated: return "TRUNCATED";
  }
  return "UNKNOWN";
}

/// One end of the maximal interval.
struct Endpoint {
  double t = 0.0;  // T0 or T1, possibly ±infinity
  EndTag tag = EndTag::Truncated;
  double limit = 0.0;        // lim a at this end (infinity for blow-up, a∞ for converges)
  double uncertainty = 0.0;  // numerical uncertainty of t (finite blow-up ends only)
  bool certified = false;    // t is known analytically rather than estimated
  double t_integrated = std::numeric_limits<double>::quiet_NaN();  // integrator-only estimate
};

struct ClosedForm {
  enum class Kind { ReciprocalAffine, Constant };
  Kind kind = Kind::ReciprocalAffine;
  double coefficient = 0.0;  // φ in a = 1/(4μt + φ), or the constant value
};

struct Sampled {
  std::vector<ode::DenseStep> steps;  // sorted by left(), contiguous
};

namespace detail {

/// λ − 2μ/a, written to keep full relative accuracy near a = γ.
template <class Real = double>
Real curvature_accurate(const SolitonParams& p, Real a) {
  const Real mu = p.mu();
  if (p.gamma_infinite()) return -2 * mu / a;
  const Real g = Real(2) * mu / Real(p.lambda());
  return 2 * mu * (a - g) / (a * g) + Real(0);  // + 0 turns −0 on the separatrix into 0
}

/// Φ(a) − Φ(a_ref) for the first integral Φ(a) = 1/(4μa) + λ/(8μ²)·log|λ − 2μ/a| of
/// the separable equation; along any solution Φ(a(t)) − t is constant.
template <class Real = double>
Real first_integral_difference(const SolitonParams& p, Real a, Real a_ref) {
  using std::abs;
  using std::log;
  const Real mu = p.mu();
  Real out = (1 / a - 1 / a_ref) / (4 * mu);
  if (!p.gamma_infinite()) {
    const Real q = curvature_accurate<Real>(p, a);
    const Real q_ref = curvature_accurate<Real>(p, a_ref);
    out += Real(p.lambda()) / (8 * mu * mu) * log(abs(q / q_ref));
  }
  return out;
}

/// ∫_a^∞ da/f(a): time remaining until blow-up, from the exact first integral.
template <class Real = double>
Real time_to_blow_up(const SolitonParams& p, Real a) {
  using std::log1p;
  const Real mu = p.mu();
  Real out = -1 / (4 * mu * a);
  if (!p.gamma_infinite()) {
    // Φ(∞) − Φ(a) with log|λ| − log|λ − 2μ/a| = −log1p(−γ/a).
    const Real g = Real(2) * mu / Real(p.lambda());
    out -= Real(p.lambda()) / (8 * mu * mu) * log1p(-g / a);
  }
  return out;
}

}  // namespace detail

/// A positive solution a(t) of the soliton ODE on its maximal interval.
class ProfileA {
 public:
  using Representation = std::variant<ClosedForm, Sampled>;

  ProfileA(SolitonParams params, Representation rep, Endpoint lower, Endpoint upper, double t_ref,
           double a_ref)
      : params_(params),
        rep_(std::move(rep)),
        lower_(lower),
        upper_(upper),
        t_ref_(t_ref),
        a_ref_(a_ref) {}

  [[nodiscard]] const SolitonParams& params() const noexcept { return params_; }
  [[nodiscard]] const Representation& representation() const noexcept { return rep_; }
  [[nodiscard]] const Endpoint& lower() const noexcept { return lower_; }
  [[nodiscard]] const Endpoint& upper() const noexcept { return upper_; }
  [[nodiscard]] double t_ref() const noexcept { return t_ref_; }
  [[nodiscard]] double a_ref() const noexcept { return a_ref_; }
  [[nodiscard]] double T0() const noexcept { return lower_.t; }
  [[nodiscard]] double T1() const noexcept { return upper_.t; }

  [[nodiscard]] bool is_closed_form() const noexcept {
    return std::holds_alternative<ClosedForm>(rep_);
  }
  [[nodiscard]] bool is_constant() const noexcept {
    const auto* cf = std::get_if<ClosedForm>(&rep_);
    return cf != nullptr && cf->kind == ClosedForm::Kind::Constant;
  }
  [[nodiscard]] const Sampled* sampled() const noexcept { return std::get_if<Sampled>(&rep_); }

  [[nodiscard]] bool contains(double t) const noexcept { return t > lower_.t && t < upper_.t; }

  /// +1 increasing, −1 decreasing, 0 constant.
  [[nodiscard]] int monotonicity() const noexcept {
    const double f = params_.rhs(a_ref_);
    return f > 0.0 ? 1 : (f < 0.0 ? -1 : 0);
  }

  /// Finite t-range on which values are computed from the representation itself
  /// (integrator nodes, or the closed form clipped to the event thresholds).
  [[nodiscard]] std::pair<double, double> numeric_range() const {
    if (const auto* s = sampled()) {
      if (s->steps.empty()) return {t_ref_, t_ref_};
      double lo = s->steps.front().left(), hi = s->steps.back().right();
      // Keep the last node short of a blow-up time taken from the first integral.
      if (lower_.tag == EndTag::BlowUp) lo = std::max(lo, lower_.t + blow_up_margin(lower_));
      if (upper_.tag == EndTag::BlowUp) hi = std::min(hi, upper_.t - blow_up_margin(upper_));
      return {lo, hi};
    }
    const auto& cf = std::get<ClosedForm>(rep_);
    if (cf.kind == ClosedForm::Kind::Constant) return {lower_.t, upper_.t};
    return {clip_closed(lower_), clip_closed(upper_)};
  }

  /// a(t), accurate to a few ulps.
  ///
  /// Sampled profiles use the dense output as the starting guess for a Newton
  /// projection onto the exact first integral through the anchor; beyond the last
  /// integrator node the analytic tail model of that end is the starting guess.
  [[nodiscard]] double operator()(double t) const { return static_cast<double>(extended(t)); }

  /// a(t) in extended precision, for finite-difference checks that need more
  /// than double resolution.
  [[nodiscard]] long double extended(long double t) const {
    const double td = static_cast<double>(t);
    check_domain(td);
    if (const auto* cf = std::get_if<ClosedForm>(&rep_)) {
      if (cf->kind == ClosedForm::Kind::Constant) return cf->coefficient;
      return 1.0L / (4.0L * params_.mu() * t + cf->coefficient);
    }
    const auto [lo, hi] = numeric_range();
    if (td < lo) return polish(t, tail_guess(lower_, lo, td));
    if (td > hi) return polish(t, tail_guess(upper_, hi, td));
    return polish(t, dense(td));
  }

  /// Raw dense-output value (no projection). Equals operator() for closed forms.
  [[nodiscard]] double interpolate(double t) const {
    check_domain(t);
    if (const auto* cf = std::get_if<ClosedForm>(&rep_)) return closed_value(*cf, t);
    const auto [lo, hi] = numeric_range();
    if (t < lo) return tail_guess(lower_, lo, t);
    if (t > hi) return tail_guess(upper_, hi, t);
    return dense(t);
  }

  /// Derivative of the dense-output polynomial (closed forms: exact derivative).
  [[nodiscard]] double interpolate_derivative(double t) const {
    if (is_closed_form()) return params_.rhs(interpolate(t));
    const auto& step = locate(t);
    const double s = (t - step.t0) / step.h;
    const double s1 = 1.0 - s;
    const auto& r = step.rcont;
    const double q = r[3] + s1 * r[4];
    const double dq = -r[4];
    const double p = r[2] + s * q;
    const double dp = q + s * dq;
    const double m = r[1] + s1 * p;
    const double dm = -p + s1 * dp;
    return (m + s * dm) / step.h;
  }

  /// a′(t) from the ODE right-hand side.
  [[nodiscard]] double derivative(double t) const { return params_.rhs((*this)(t)); }

 private:
  void check_domain(double t) const {
    if (!(t >= lower_.t && t <= upper_.t) || std::isnan(t)) {
      throw Error(ErrorCode::Domain, "t = " + std::to_string(t) + " outside profile domain");
    }
  }

  double clip_closed(const Endpoint& e) const {
    const auto& cf = std::get<ClosedForm>(rep_);
    const double mu = params_.mu();
    if (e.tag == EndTag::BlowUp) {
      const double back = 1.0 / (4.0 * std::abs(mu) * kBlowUpThreshold);
      const double margin = std::max(back, 64.0 * std::numeric_limits<double>::epsilon() *
                                               std::abs(e.t));
      return e.t < t_ref_ ? e.t + margin : e.t - margin;
    }
    if (e.tag == EndTag::DecayToZero) return (1.0 / kZeroThreshold - cf.coefficient) / (4.0 * mu);
    return e.t;
  }

  double blow_up_margin(const Endpoint& e) const {
    return std::max(std::abs(detail::time_to_blow_up(params_, kBlowUpThreshold)),
                    64.0 * std::numeric_limits<double>::epsilon() * std::abs(e.t));
  }

  double closed_value(const ClosedForm& cf, double t) const {
    return cf.kind == ClosedForm::Kind::Constant ? cf.coefficient
                                                 : 1.0 / (4.0 * params_.mu() * t + cf.coefficient);
  }

  const ode::DenseStep& locate(double t) const {
    const auto& steps = std::get<Sampled>(rep_).steps;
    if (steps.empty()) throw Error(ErrorCode::Domain, "empty sampled profile");
    auto it = std::upper_bound(steps.begin(), steps.end(), t,
                               [](double v, const ode::DenseStep& s) { return v < s.left(); });
    if (it != steps.begin()) --it;
    return *it;
  }

  double dense(double t) const { return locate(t)(t); }

  double tail_guess(const Endpoint& e, double t_edge, double t) const {
    const double a_edge = dense(t_edge);
    const double mu = params_.mu();
    const double lambda = params_.lambda();
    switch (e.tag) {
      case EndTag::Converges: {
        const double g = params_.gamma();
        return g + (a_edge - g) * std::exp(4.0 * mu * g * (t - t_edge));
      }
      case EndTag::DecayToZero:
        return 1.0 / (1.0 / a_edge + 4.0 * mu * (t - t_edge));
      case EndTag::BlowUp: {
        const double gap = std::abs(e.t - t);
        if (lambda == 0.0) return 1.0 / (4.0 * std::abs(mu) * gap);
        return 1.0 / std::sqrt(4.0 * std::abs(lambda) * gap);
      }
      default:
        return a_edge;
    }
  }

  /// Newton iteration on Φ(a) − Φ(a_ref) = t − t_ref, with dΦ/da = 1/f(a).
  ///
  /// Within a few ulps of a blow-up time the equation is too ill-conditioned to
  /// have a representable solution; the guess is returned if Newton wanders off.
  long double polish(long double t, double guess) const {
    using L = long double;
    const L dt = t - static_cast<L>(t_ref_);
    const bool sep = params_.has_positive_separatrix();
    const L g = sep ? static_cast<L>(params_.mu()) * 2 / static_cast<L>(params_.lambda()) : 0;
    const L side = sep ? (a_ref_ > g ? 1 : -1) : 0;
    const L a_ref = a_ref_;
    const L lambda = params_.lambda(), mu = params_.mu();
    L a = guess;
    for (int it = 0; it < 16; ++it) {
      const L resid = detail::first_integral_difference<L>(params_, a, a_ref) - dt;
      L step = -resid * a * a * (2 * lambda * a - 4 * mu);
      L next = a + step;
      for (int k = 0; k < 60 && (next <= 0 || (sep && (next - g) * side <= 0)); ++k) {
        step /= 2;
        next = a + step;
      }
      if (!std::isfinite(next)) break;
      const bool done = std::abs(next - a) <= 4 * std::numeric_limits<L>::epsilon() * a;
      a = next;
      if (done) break;
    }
    if (!std::isfinite(a) || a > 2.0L * guess || a < 0.5L * guess) return guess;
    return a;
  }

  SolitonParams params_;
  Representation rep_;
  Endpoint lower_;
  Endpoint upper_;
  double t_ref_;
  double a_ref_;
};

}  // namespace soliton
