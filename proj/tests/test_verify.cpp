#include <gtest/gtest.h>

#include <cmath>

#include "samples.hpp"
#include "soliton/verify.hpp"

using namespace soliton;
namespace st = soliton::testing;

namespace {

constexpr double kInfD = std::numeric_limits<double>::infinity();

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::InvalidArgument;
}

WarpedMetric cigar_metric(double h = 1e-3) {
  const auto prof = closed_form_profile(make_params(0.0, -1.0), 1.0);
  return build_warped_metric(prof, {0, 0}, {0, 5}, static_cast<std::size_t>(5 / h) + 1);
}

}  // namespace

TEST(Residual, CigarIsSoliton) {
  const auto rep = soliton_residual(cigar_metric());
  EXPECT_LE(rep.max_tracefree, 1e-5);
  EXPECT_LE(rep.max_laplace, 1e-5);
  EXPECT_LE(rep.max_potential, 1e-6);
  EXPECT_LE(rep.max_killing, 1e-6);
  EXPECT_DOUBLE_EQ(rep.h, 1e-3);
  EXPECT_EQ(rep.samples, 5001u);
  EXPECT_EQ(rep.components, 1u);
  EXPECT_GT(rep.checked, 4900u);
}

TEST(Residual, ExplodingPotential) {
  const auto prof = closed_form_profile(make_params(0.0, 1.0), 1.0);
  // u‴ grows like sec⁴r toward 1.2; at h = 1e-3 the truncation error alone is about 1e-5
  const auto m = build_warped_metric(prof, {0, 0}, {0, 1.2}, 6001);
  EXPECT_LE(potential_check(m), 1e-6);
  EXPECT_LE(killing_check(m), 1e-6);
}

TEST(Residual, PerturbedCigarAgainstAnalyticOracle) {
  // Suprema over the same interior grid of the exact expressions, evaluated symbolically at
  // 30 digits; the discrete values differ by the O(h²) differencing error only.
  const auto m = st::perturbed_cigar(0.01L, 3).metric;
  const auto rep = soliton_residual(m);
  EXPECT_NEAR(rep.max_tracefree, 8.82233511317, 1e-3);
  EXPECT_NEAR(rep.max_laplace, 8.821270596925, 1e-3);
  EXPECT_NEAR(rep.max_potential, 1.854595977349, 1e-4);
  EXPECT_NEAR(rep.max_killing, 3.042597568511, 1e-4);
  EXPECT_GE(rep.max_tracefree, 1e-2);
  EXPECT_GE(potential_check(m), 1e-2);
  EXPECT_GE(killing_check(m), 1e-2);
}

TEST(Residual, ConstantCurvatureBand) {
  // round sphere K ≡ 1 = λ: u is constant and Δu = 2(λ − K) = 0
  auto m = metric_from_functions(
      make_params(1.0, 1.0), [](long double r) { return std::sin(r); },
      [](long double r) { return std::cos(r); }, [](long double r) { return -std::sin(r); }, 0.1,
      3.0, 2901);
  const auto rep = soliton_residual(m);
  EXPECT_LE(rep.max_tracefree, 1e-9);
  EXPECT_LE(rep.max_laplace, 1e-9);
}

TEST(Residual, FlatMetricHasZeroCurvature) {
  const auto prof = integrate_profile(make_params(-2.0, -1.0), 0.0, 1.0, {-kInfD, kInfD});
  const auto m = build_warped_metric(prof, {0, 0}, {0, 2}, 201);
  EXPECT_EQ(code_of([&] { soliton_residual(m); }), ErrorCode::ZeroCurvature);
  EXPECT_EQ(code_of([&] { potential_check(m); }), ErrorCode::ZeroCurvature);
  EXPECT_EQ(code_of([&] { killing_check(m); }), ErrorCode::ZeroCurvature);
}

TEST(Residual, SplitsAtCurvatureSignChange) {
  // b = sin r + r/2 keeps b > 0 on (0, 5) while K = sin r / b changes sign at π
  auto m = metric_from_functions(
      make_params(0.0, 1.0), [](long double r) { return std::sin(r) + r / 2; },
      [](long double r) { return std::cos(r) + 0.5L; },
      [](long double r) { return -std::sin(r); }, 0.5, 5.0, 4501);
  const auto rep = soliton_residual(m);
  EXPECT_EQ(rep.components, 2u);
  EXPECT_LT(rep.checked, m.size() - 2);
  EXPECT_TRUE(std::isfinite(rep.max_tracefree));
}

TEST(Residual, SecondOrderConvergence) {
  const auto coarse = soliton_residual(cigar_metric(2e-3));
  const auto fine = soliton_residual(cigar_metric(1e-3));
  EXPECT_GE(coarse.max_tracefree / fine.max_tracefree, 3.5);
  EXPECT_GE(coarse.max_laplace / fine.max_laplace, 3.5);
  EXPECT_GE(coarse.max_potential / fine.max_potential, 3.5);
  EXPECT_GE(coarse.max_killing / fine.max_killing, 3.5);
}

TEST(Residual, CatalogKillingDefect) {
  for (const auto& e : st::sampled_catalog()) {
    EXPECT_LE(killing_check(default_metric(e.profile, 1e-3)), 1e-5) << st::entry_name(e);
  }
}

TEST(Residual, ScaleCovariant) {
  for (Family f : {Family::G6, Family::G10, Family::G4Minus}) {
    const auto e = catalog(f, f == Family::G4Minus ? 2.5 : 1.0);
    const auto base = soliton_residual(default_metric(e.profile, 1e-3));
    const auto moved = apply_symmetry(e.profile, Rescale{2.0});
    const auto scaled = soliton_residual(default_metric(moved, 1e-3));
    EXPECT_LE(scaled.max_all(), 1e-5) << to_string(f);
    const double ratio = scaled.max_tracefree / base.max_tracefree;
    EXPECT_GT(ratio, 1.0 / 20) << to_string(f);
    EXPECT_LT(ratio, 20.0) << to_string(f);
  }
}

TEST(SmoothExtension, Cigar) {
  const auto s = smooth_extension_check(closed_form_profile(make_params(0.0, -1.0), 1.0));
  EXPECT_TRUE(s.extends);
  ASSERT_TRUE(s.K_origin.has_value());
  EXPECT_EQ(*s.K_origin, 2.0);
}

TEST(SmoothExtension, G3OutsideDomain) {
  const auto g3 = closed_form_profile(make_params(0.0, 1.0), -1.0);  // blow-up at T0 = 1/4
  EXPECT_EQ(code_of([&] { smooth_extension_check(g3); }), ErrorCode::Domain);
}

TEST(SmoothExtension, G5) {
  const auto p = SolitonParams::from_mu_gamma(1.0, 2.0);
  ASSERT_EQ(p.lambda(), 1.0);
  const auto s = smooth_extension_check(integrate_profile(p, 0.0, 1.0, {-kInfD, kInfD}));
  EXPECT_TRUE(s.extends);
  ASSERT_TRUE(s.K_origin.has_value());
  EXPECT_EQ(*s.K_origin, -1.0);
}

TEST(SmoothExtension, NotSmooth) {
  const auto prof = integrate_profile(make_params(-1.0, -1.0), 0.0, 1.5, {-kInfD, kInfD});
  const auto s = smooth_extension_check(prof);
  EXPECT_FALSE(s.extends);
  EXPECT_FALSE(s.K_origin.has_value());
}

TEST(OriginCurvature, FromWarpingFunctionAlone) {
  EXPECT_NEAR(origin_curvature(cigar_metric()), 2.0, 1e-6);
  const auto g6 = catalog(Family::G6, 1.0);
  const auto m = default_metric(g6.profile, 1e-3);
  EXPECT_NEAR(origin_curvature(m), g6.params.lambda() - 2 * g6.params.mu(), 1e-6);
}
