#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fichera/analysis.hpp"

using namespace fichera;

namespace {
std::vector<SweepPoint> synthetic(double c, double scale = 1.0) {
  std::vector<SweepPoint> out;
  for (int R = 2; R <= 10; ++R) {
    SweepPoint s;
    s.R = R;
    // mix = 0 keeps dir - mix exact in floating point.
    s.mix = 0.0;
    s.dir = scale * std::exp(-c * R);
    out.push_back(s);
  }
  return out;
}
}  // namespace

TEST_CASE("exponential fit recovers exact decay rates") {
  FitResult fit = fit_exponential(synthetic(1.672785), 4, 10);
  CHECK(fit.slope == doctest::Approx(-1.672785).epsilon(1e-10));
  CHECK(fit.max_abs_residual < 1e-10);
  for (auto [Rmid, s] : fit.local_slopes)
    CHECK(s == doctest::Approx(-1.672785).epsilon(1e-9));

  // Scale invariance: a positive prefactor shifts the intercept only.
  FitResult scaled = fit_exponential(synthetic(1.672785, 37.5), 4, 10);
  CHECK(scaled.slope == doctest::Approx(fit.slope).epsilon(1e-12));
  CHECK(scaled.intercept != doctest::Approx(fit.intercept));

  // Window honored: points outside do not affect the fit.
  auto series = synthetic(0.5);
  series[0].dir = 1e6;  // R=2, outside [4,10]
  CHECK(fit_exponential(series, 4, 10).slope ==
        doctest::Approx(-0.5).epsilon(1e-10));

  // Nonpositive differences are an error, not a NaN.
  auto bad = synthetic(1.0);
  bad[5].dir = bad[5].mix;
  CHECK_THROWS(fit_exponential(bad, 4, 10));
  CHECK_THROWS(fit_exponential(synthetic(1.0), 9.5, 10.5));  // one point
}

TEST_CASE("limit extrapolation from a bracketing pair") {
  auto [mean, half] = extrapolate_lambda_inf(9.17, 9.16);
  CHECK(mean == doctest::Approx(9.165));
  CHECK(half == doctest::Approx(0.005));
  CHECK_THROWS(extrapolate_lambda_inf(9.16, 9.17));
}

TEST_CASE("gap report") {
  const double ess = 9.1704;
  std::vector<SweepPoint> layers;
  for (int R = 4; R <= 10; ++R) {
    SweepPoint s;
    s.R = R;
    double lim = 8.914;
    s.mix = lim - 0.4 * std::exp(-1.0 * R);
    s.dir = lim + 0.6 * std::exp(-1.0 * R);
    layers.push_back(s);
  }
  GapReport rep = gap_report(ess, layers);
  CHECK(rep.bound_state);
  CHECK(rep.lambda_1 ==
        doctest::Approx(8.914 + 0.1 * std::exp(-10.0)).epsilon(1e-12));
  CHECK(rep.gap == doctest::Approx((ess - rep.lambda_1) / rep.lambda_1));
  CHECK(rep.agmon_gamma == doctest::Approx(std::sqrt(ess - rep.lambda_1)));
  CHECK(rep.fitted_beta == doctest::Approx(1.0).epsilon(1e-9));

  // Degenerate input: no bound state resolved.
  std::vector<SweepPoint> flat{{4.0, ess, ess}, {5.0, ess + 1e-3, ess}};
  GapReport deg = gap_report(ess, flat);
  CHECK_FALSE(deg.bound_state);
  CHECK(deg.gap == 0.0);
  CHECK(deg.agmon_gamma == 0.0);
}

TEST_CASE("sandwich verdict") {
  SandwichResult ok = lower_upper_sandwich(0.8387 * M_PI * M_PI,
                                           0.9291 * M_PI * M_PI,
                                           0.9032 * M_PI * M_PI);
  CHECK(ok.pass);
  CHECK(ok.lower_margin > 0);
  CHECK(ok.upper_margin > 0);

  CHECK_FALSE(lower_upper_sandwich(0.95, 0.99, 0.90).pass);
  SandwichResult eq = lower_upper_sandwich(1.0, 1.0, 1.0);
  CHECK(eq.pass);
  CHECK(eq.lower_margin == 0.0);
  CHECK(eq.upper_margin == 0.0);
}

TEST_CASE("p-ladder extrapolation") {
  // Exact geometric ladder: recovered limit to machine precision.
  std::vector<double> ladder;
  for (int p = 1; p <= 5; ++p) ladder.push_back(7.5 + 0.8 * std::pow(0.3, p));
  CHECK(aitken_extrapolate(ladder) == doctest::Approx(7.5).epsilon(1e-12));
  auto [lo, hi] = p_ladder_bracket(ladder);
  CHECK(lo == doctest::Approx(7.5).epsilon(1e-12));
  CHECK(hi == doctest::Approx(ladder.back()).epsilon(1e-15));
  CHECK(lo <= hi);
  CHECK_THROWS(aitken_extrapolate({1.0, 2.0}));
  // Stagnated ladder returns the last value instead of dividing by zero.
  CHECK(aitken_extrapolate({3.0, 3.0, 3.0}) == doctest::Approx(3.0));
}
