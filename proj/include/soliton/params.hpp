#pragma once

#include <cmath>
#include <limits>
#include <string>

#include "soliton/error.hpp"

namespace soliton {

enum class SolitonKind { Shrinking, Steady, Expanding };

/// Parameters (λ, μ, γ) of a′ = 4μa²(a/γ − 1) = 2λa³ − 4μa².
///
/// λ and μ are primary; γ = 2μ/λ is derived and is infinite for steady
/// solitons. The right-hand side is always evaluated in the (λ, μ) form so
/// the steady case never divides by zero.
class SolitonParams {
 public:
  static SolitonParams make(double lambda, double mu) {
    if (!std::isfinite(lambda) || !std::isfinite(mu)) {
      throw Error(ErrorCode::InvalidArgument, "lambda and mu must be finite");
    }
    if (mu == 0.0) {
      throw Error(ErrorCode::MuZero, "mu must be non-zero");
    }
    return SolitonParams(lambda, mu);
  }

  /// Build from (μ, γ); γ may be ±infinity for the steady case.
  static SolitonParams from_mu_gamma(double mu, double gamma) {
    if (gamma == 0.0 || std::isnan(gamma)) {
      throw Error(ErrorCode::InvalidArgument, "gamma must be non-zero");
    }
    const double lambda = std::isinf(gamma) ? 0.0 : 2.0 * mu / gamma;
    return make(lambda, mu);
  }

  [[nodiscard]] double lambda() const noexcept { return lambda_; }
  [[nodiscard]] double mu() const noexcept { return mu_; }
  [[nodiscard]] bool gamma_infinite() const noexcept { return lambda_ == 0.0; }

  /// +infinity when steady.
  [[nodiscard]] double gamma() const noexcept {
    return gamma_infinite() ? std::numeric_limits<double>::infinity() : 2.0 * mu_ / lambda_;
  }

  [[nodiscard]] SolitonKind kind() const noexcept {
    if (lambda_ > 0.0) return SolitonKind::Shrinking;
    if (lambda_ < 0.0) return SolitonKind::Expanding;
    return SolitonKind::Steady;
  }

  /// True when a positive separatrix a ≡ γ exists.
  [[nodiscard]] bool has_positive_separatrix() const noexcept {
    return !gamma_infinite() && gamma() > 0.0;
  }

  /// a′ as a function of a.
  [[nodiscard]] double rhs(double a) const noexcept {
    return a * a * (2.0 * lambda_ * a - 4.0 * mu_);
  }

  /// d(a′)/da.
  [[nodiscard]] double rhs_derivative(double a) const noexcept {
    return a * (6.0 * lambda_ * a - 8.0 * mu_);
  }

  /// Gauss curvature K = λ − 2μ/a of the associated metric.
  [[nodiscard]] double curvature(double a) const noexcept { return lambda_ - 2.0 * mu_ / a; }

  friend bool operator==(const SolitonParams&, const SolitonParams&) = default;

 private:
  SolitonParams(double lambda, double mu) : lambda_(lambda), mu_(mu) {}

  double lambda_;
  double mu_;
};

inline SolitonParams make_params(double lambda, double mu) { return SolitonParams::make(lambda, mu); }

inline std::string to_string(SolitonKind k) {
  switch (k) {
    case SolitonKind::Shrinking: return "shrinking";
    case SolitonKind::Steady: return "steady";
    case SolitonKind::Expanding: return "expanding";
  }
  return "unknown";
}

}  // namespace soliton
