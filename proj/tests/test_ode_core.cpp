#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/exp_sinh.hpp>

#include "soliton/ode_core.hpp"

using namespace soliton;

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

double ode_defect(const ProfileA& prof, double t) {
  // derivative of the evaluated profile by a central difference, against the right-hand side
  const double h = 1e-5 * std::max(1.0, std::abs(t));
  const double d = (prof.extended(t + h) - prof.extended(t - h)) / (2 * h);
  return std::abs(d - prof.params().rhs(prof(t))) / (1 + std::abs(d));
}

// ∫_{a}^{∞} da / (2λa³ − 4μa²), the oracle for blow-up times.
double separable_time(double lambda, double mu, double a) {
  boost::math::quadrature::exp_sinh<double> q;
  return q.integrate([=](double s) {
    const double x = a + s;
    return 1.0 / (x * x * (2 * lambda * x - 4 * mu));
  });
}

}  // namespace

TEST(Params, GammaFromLambdaAndMu) {
  EXPECT_TRUE(std::isinf(make_params(0.0, -1.0).gamma()));
  EXPECT_EQ(make_params(-2.0, -1.0).gamma(), 1.0);
  EXPECT_EQ(make_params(0.5, 1.0).kind(), SolitonKind::Shrinking);
  EXPECT_EQ(make_params(0.0, 1.0).kind(), SolitonKind::Steady);
  EXPECT_EQ(make_params(-1.0, 1.0).kind(), SolitonKind::Expanding);
}

TEST(Params, MuZeroRejected) {
  EXPECT_EQ(code_of([] { make_params(0.5, 0.0); }), ErrorCode::MuZero);
  EXPECT_EQ(code_of([] { make_params(NAN, 1.0); }), ErrorCode::InvalidArgument);
}

TEST(ClosedForm, Cigar) {
  const auto prof = closed_form_profile(make_params(0.0, -1.0), 1.0);
  EXPECT_EQ(prof.T0(), -kInfD);
  EXPECT_DOUBLE_EQ(prof.T1(), 0.25);
  EXPECT_EQ(prof.upper().tag, EndTag::BlowUp);
  EXPECT_DOUBLE_EQ(prof(0.125), 2.0);
}

TEST(ClosedForm, Exploding) {
  const auto prof = closed_form_profile(make_params(0.0, 1.0), 1.0);
  EXPECT_DOUBLE_EQ(prof.T0(), -0.25);
  EXPECT_EQ(prof.T1(), kInfD);
  EXPECT_EQ(prof.upper().tag, EndTag::DecayToZero);
  EXPECT_DOUBLE_EQ(prof(1.0), 0.2);
}

TEST(ClosedForm, ReciprocalWithNegativeCoefficient) {
  const auto prof = closed_form_profile(make_params(0.0, 1.0), -1.0);
  EXPECT_DOUBLE_EQ(prof.T0(), 0.25);
  EXPECT_EQ(prof.lower().tag, EndTag::BlowUp);
  EXPECT_DOUBLE_EQ(prof(0.5), 1.0);
}

TEST(ClosedForm, NotSteady) {
  EXPECT_EQ(code_of([] { closed_form_profile(make_params(1.0, 1.0), 1.0); }),
            ErrorCode::NotSteady);
}

TEST(Integrate, MatchesCigarClosedForm) {
  const auto prof = integrate_profile(make_params(0.0, -1.0), 0.0, 1.0, {-1.0, 0.2}, 1e-10);
  for (int i = 0; i <= 100; ++i) {
    const double t = 0.2 * i / 100;
    const double exact = 1.0 / (1.0 - 4.0 * t);
    EXPECT_LE(std::abs(prof.interpolate(t) - exact) / exact, 1e-8) << "t = " << t;
  }
}

TEST(Integrate, SeparatrixIsConstant) {
  for (double mu : {-1.0, 0.5, 3.0}) {
    const auto p = SolitonParams::from_mu_gamma(mu, 1.0);
    const auto prof = integrate_profile(p, 0.0, 1.0, {-5.0, 5.0}, 1e-10);
    EXPECT_TRUE(prof.is_constant());
    EXPECT_EQ(prof.lower().tag, EndTag::Truncated);
    EXPECT_EQ(prof.upper().tag, EndTag::Truncated);
    EXPECT_EQ(prof(3.0), 1.0);
  }
}

TEST(Integrate, ConvergesToStableSeparatrix) {
  const auto prof = integrate_profile(make_params(-2.0, -1.0), 0.0, 0.5, {-kInfD, kInfD}, 1e-10);
  EXPECT_EQ(prof.monotonicity(), 1);
  EXPECT_EQ(prof.upper().tag, EndTag::Converges);
  EXPECT_EQ(prof.T1(), kInfD);
  EXPECT_DOUBLE_EQ(prof.upper().limit, 1.0);
  // linearization at a = 1 gives a decay rate 4|μ|; the fitted envelope e^{-t} is far looser
  double prev = 0.0;
  for (double t = 0.0; t <= 20.0; t += 0.5) {
    const double a = prof(t);
    EXPECT_LE(std::abs(a - 1.0), std::exp(-t));
    EXPECT_GE(a, prev);
    prev = a;
  }
}

TEST(Integrate, NonpositiveAnchor) {
  const auto p = make_params(0.0, 1.0);
  EXPECT_EQ(code_of([&] { integrate_profile(p, 0.0, 0.0, {-1.0, 1.0}, 1e-10); }),
            ErrorCode::NonpositiveA);
  EXPECT_EQ(code_of([&] { integrate_profile(p, 0.0, -1.0, {-1.0, 1.0}, 1e-10); }),
            ErrorCode::NonpositiveA);
}

TEST(Integrate, OdeResidualOnSamples) {
  struct Case {
    double lambda, mu, a;
  };
  for (const auto c : {Case{1.0, 0.25, 1.0}, Case{-1.0, -1.0, 3.0}, Case{-1.0, 1.0, 1.0},
                       Case{4.0, 1.0, 0.3}, Case{-2.0, -1.0, 0.5}}) {
    const auto prof = integrate_profile(make_params(c.lambda, c.mu), 0.0, c.a, {-kInfD, kInfD});
    const auto [lo, hi] = prof.numeric_range();
    const double a = std::max(lo, -50.0), b = std::min(hi, 50.0);
    for (int i = 1; i < 100; ++i) {
      const double t = a + (b - a) * i / 100;
      EXPECT_LE(ode_defect(prof, t), 1e-7) << c.lambda << ' ' << c.mu << " t = " << t;
    }
  }
}

TEST(Integrate, MonotonicityTrichotomy) {
  const auto inc = integrate_profile(make_params(4.0, 1.0), 0.0, 1.0, {-1.0, 0.0});  // a > γ = 1/2
  const auto dec = integrate_profile(make_params(1.0, 1.0), 0.0, 1.0, {-1.0, 1.0});  // a < γ = 2
  const auto mirrored = integrate_profile(make_params(-1.0, -1.0), 0.0, 1.0, {-1.0, 1.0});
  EXPECT_EQ(inc.monotonicity(), 1);
  EXPECT_EQ(dec.monotonicity(), -1);
  EXPECT_EQ(mirrored.monotonicity(), 1);  // μ < 0, a < γ = 2
  EXPECT_LT(inc(-0.5), inc(-0.1));
  EXPECT_GT(dec(-0.5), dec(0.5));
  EXPECT_LT(mirrored(-0.5), mirrored(0.5));
}

TEST(BlowUp, ClosedFormMatchesSeparableIntegral) {
  const double t1 = blow_up_time_closed(1.0, 0.5);
  EXPECT_NEAR(t1, (-1.0 + 2.0 * std::numbers::ln2) / 4.0, 1e-15);
  EXPECT_NEAR(t1, separable_time(4.0, 1.0, 1.0), 1e-12);
  const auto prof = integrate_profile(make_params(4.0, 1.0), 0.0, 1.0, {-kInfD, kInfD});
  EXPECT_EQ(prof.upper().tag, EndTag::BlowUp);
  EXPECT_NEAR(prof.T1(), t1, 1e-6);
  EXPECT_NEAR(prof.upper().t_integrated, t1, 1e-6);
}

TEST(BlowUp, NegativeMuNegativeGamma) {
  const double t1 = blow_up_time_closed(-1.0, -1.0);
  EXPECT_NEAR(t1, (-1.0 + std::numbers::ln2) / -4.0, 1e-15);
  EXPECT_NEAR(t1, separable_time(2.0, -1.0, 1.0), 1e-12);
  const auto prof = integrate_profile(make_params(2.0, -1.0), 0.0, 1.0, {-kInfD, kInfD});
  EXPECT_NEAR(prof.T1(), t1, 1e-6);
}

TEST(BlowUp, Domain) {
  EXPECT_EQ(code_of([] { blow_up_time_closed(1.0, 1.0); }), ErrorCode::Domain);
  EXPECT_EQ(code_of([] { blow_up_time_closed(1.0, 2.0); }), ErrorCode::Domain);
  EXPECT_EQ(code_of([] { blow_up_time_closed(1.0, 0.0); }), ErrorCode::Domain);
}

TEST(BlowUp, HaltingTimeMatchesQuadrature) {
  struct Case {
    double lambda, mu, a;
  };
  for (const auto c : {Case{4.0, 1.0, 2.0}, Case{-1.0, -1.0, 5.0}, Case{-1.0, 0.5, 1.0},
                       Case{0.0, -2.0, 0.7}}) {
    const auto prof = integrate_profile(make_params(c.lambda, c.mu), 0.0, c.a, {-kInfD, kInfD});
    const bool forward = prof.monotonicity() > 0;
    const double oracle = separable_time(c.lambda, c.mu, c.a);
    const double t = forward ? prof.T1() : prof.T0();
    EXPECT_NEAR(t, oracle, 1e-6) << c.lambda << ' ' << c.mu << ' ' << c.a;
  }
}

TEST(Symmetry, ScaleCigar) {
  const auto cigar = closed_form_profile(make_params(0.0, -1.0), 1.0);
  const auto s = apply_symmetry(cigar, Scale{2.0});
  EXPECT_DOUBLE_EQ(s.params().mu(), -0.5);
  for (double t : {-1.0, 0.0, 0.1, 0.2}) {
    EXPECT_NEAR(s(t), 2.0 / (1.0 - 4.0 * t), 1e-14 * s(t));
    const double exact_slope = 8.0 / ((1.0 - 4.0 * t) * (1.0 - 4.0 * t));
    EXPECT_LE(std::abs(s.params().rhs(s(t)) - exact_slope) / (1 + exact_slope), 1e-10);
  }
}

TEST(Symmetry, TranslateShiftsDomain) {
  const auto prof = integrate_profile(make_params(4.0, 1.0), 0.0, 1.0, {-kInfD, kInfD});
  const auto moved = apply_symmetry(prof, Translate{0.1});
  EXPECT_DOUBLE_EQ(moved.T1(), prof.T1() + 0.1);
  for (double t : {-0.5, 0.0, 0.05}) EXPECT_DOUBLE_EQ(moved(t + 0.1), prof(t));
}

TEST(Symmetry, RescaleParams) {
  const auto prof = integrate_profile(make_params(-2.0, -1.0), 0.0, 0.5, {-kInfD, kInfD});
  const auto r = apply_symmetry(prof, Rescale{2.0});
  EXPECT_DOUBLE_EQ(r.params().mu(), -0.25);
  EXPECT_DOUBLE_EQ(r.params().lambda(), -0.5);
  EXPECT_DOUBLE_EQ(2 * r.params().mu() / r.params().lambda(), r.params().gamma());
  for (double t : {-2.0, 0.0, 3.0}) EXPECT_LE(ode_defect(r, t), 1e-9);
}

TEST(Symmetry, RescaleKeepsSmoothOrigin) {
  const auto prof = integrate_profile(make_params(-1.0, -1.0), 0.0, 1.0, {-kInfD, kInfD});
  const auto r = apply_symmetry(prof, Rescale{3.0});
  EXPECT_DOUBLE_EQ(r(0.0), 1.0);
}

TEST(Symmetry, CommutesWithIntegration) {
  const auto p = make_params(-1.0, -1.0);
  const auto prof = integrate_profile(p, 0.0, 3.0, {-kInfD, kInfD});
  struct Case {
    SymmetryAction act;
    SolitonParams params;
    double t_ref, a_ref;
  };
  const Case cases[] = {
      {Scale{2.0}, make_params(-0.25, -0.5), 0.0, 6.0},
      {Rescale{0.5}, make_params(-4.0, -4.0), 0.0, 3.0},
      {Translate{0.3}, p, 0.3, 3.0},
  };
  for (const auto& c : cases) {
    const auto moved = apply_symmetry(prof, c.act);
    const auto direct = integrate_profile(c.params, c.t_ref, c.a_ref, {-kInfD, kInfD});
    const auto [lo, hi] = direct.numeric_range();
    for (int i = 1; i < 50; ++i) {
      const double t = std::max(lo, -20.0) + (hi - std::max(lo, -20.0)) * i / 50;
      EXPECT_NEAR(moved(t), direct(t), 1e-8 * direct(t)) << "action " << c.act.index();
    }
  }
}

TEST(ProfileCsv, HeaderAndPrecision) {
  std::ostringstream os;
  write_profile_csv(os, closed_form_profile(make_params(0.0, -1.0), 1.0), 0.0, 0.2, 3);
  std::string line;
  std::istringstream is(os.str());
  std::getline(is, line);
  EXPECT_EQ(line, "t,a,dadt");
  std::getline(is, line);
  EXPECT_EQ(line, "0,1,4");
  std::getline(is, line);
  EXPECT_EQ(line, "0.10000000000000001,1.6666666666666667,11.111111111111112");
}
