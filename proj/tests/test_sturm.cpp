#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fichera/guides.hpp"
#include "fichera/sturm.hpp"

using namespace fichera;

namespace {
const double PI2 = M_PI * M_PI;

// Moderate-accuracy transverse curve shared by the test cases below.
const LambdaCurve& test_curve() {
  static LambdaCurve curve = [] {
    Discretization disc;
    disc.p = 8;
    ReferenceGuide guide(disc);
    return sweep_lambda(guide, log_spaced(1e-3, 10.0, 40));
  }();
  return curve;
}
}  // namespace

TEST_CASE("constant potential is reproduced exactly") {
  SturmProblem prob;
  prob.L = 0.0;
  prob.R_trunc = 2.0;
  prob.potential = [](double) { return 3.25; };

  SturmResult neu = solve_sturm(prob);
  CHECK(neu.mu == doctest::Approx(3.25).epsilon(1e-10));
  // Ground state constant: nodal values all equal 1/sqrt(length).
  for (int i = 0; i < neu.q.size(); ++i)
    CHECK(neu.q[i] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-10));

  // Neumann-Dirichlet interval: mu = c + (pi / (2 len))^2.
  prob.far_bc = BC::Dirichlet;
  SturmResult dir = solve_sturm(prob);
  CHECK(dir.mu == doctest::Approx(3.25 + PI2 / 16.0).epsilon(1e-10));
  CHECK(dir.q[dir.q.size() - 1] == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(dir.q_at_L > 0);
}

TEST_CASE("truncation and degree insensitivity") {
  const LambdaCurve& curve = test_curve();
  for (double L : {-0.5, 0.3}) {
    SturmProblem prob = SturmProblem::from_curve(curve, L);
    double mu40 = solve_sturm(prob).mu;
    prob.R_trunc = 80.0;
    double mu80 = solve_sturm(prob).mu;
    CHECK(mu40 == doctest::Approx(mu80).epsilon(1e-8));
    prob.R_trunc = 40.0;
    prob.degree = 14;
    double mu14 = solve_sturm(prob).mu;
    CHECK(mu40 == doctest::Approx(mu14).epsilon(1e-8));
  }
}

TEST_CASE("mu curve ordering against the potential") {
  const LambdaCurve& curve = test_curve();
  std::vector<double> Ls{-0.9, -0.6, -0.4, -0.2, -0.05, 0.3, 0.8};
  auto samples = mu_curve(curve, Ls);
  for (const auto& s : samples) {
    CHECK(s.mu <= curve.lambda_inf + 1e-6);
    CHECK(s.q_at_L > 0);
  }
  // Near -1 the potential wins; for L >= 0 mu exceeds it.
  CHECK(samples[0].mu < samples[0].lambda_at_L);
  CHECK(samples[5].mu > samples[5].lambda_at_L);
  CHECK(samples[6].mu > samples[6].lambda_at_L);
  // Nondecreasing between the crossing (~ -0.23) and 0.
  CHECK(samples[3].mu <= samples[4].mu + 1e-10);
}

TEST_CASE("closed-form derivative of mu") {
  const LambdaCurve& curve = test_curve();
  const double h = 1e-3;
  for (double L : {-0.5, 0.5}) {
    double d = mu_derivative(curve, L);
    auto pair = mu_curve(curve, {L - h, L + h});
    double fd = (pair[1].mu - pair[0].mu) / (2 * h);
    CHECK(d == doctest::Approx(fd).epsilon(1e-3));
  }
  CHECK(mu_derivative(curve, 0.5) > 0);
  CHECK_THROWS(mu_derivative(curve, 0.0));
}

TEST_CASE("crossing point realizes the lower bound") {
  const LambdaCurve& curve = test_curve();
  LstarResult ls = find_Lstar(curve, 1e-4);
  CHECK(ls.L_star > -0.26);
  CHECK(ls.L_star < -0.20);
  CHECK(ls.bracket <= 1e-4);
  // mu(L*) = lambda(L*) within bracket-induced tolerance.
  CHECK(ls.mu_star ==
        doctest::Approx(curve.value(ls.L_star)).epsilon(5e-3));
  CHECK(ls.mu_star / PI2 == doctest::Approx(0.838653).epsilon(3e-3));
  // Derivative vanishes at the crossing (minimum of mu).
  CHECK(std::abs(mu_derivative(curve, ls.L_star)) < 0.05);
  // mu - lambda changes sign exactly once on a grid of (-1, 0).
  auto samples = mu_curve(curve, [] {
    std::vector<double> g;
    for (int i = 1; i < 100; ++i) g.push_back(-1.0 + i / 100.0);
    return g;
  }());
  int flips = 0;
  for (size_t i = 1; i < samples.size(); ++i)
    if ((samples[i - 1].mu - samples[i - 1].lambda_at_L < 0) !=
        (samples[i].mu - samples[i].lambda_at_L < 0))
      ++flips;
  CHECK(flips == 1);
}

TEST_CASE("finite-interval family is insensitive beyond R = 4") {
  const LambdaCurve& curve = test_curve();
  std::vector<double> mins;
  for (double R : {4.0, 6.0, 10.0, 40.0}) {
    double best = 1e30;
    for (double L = -0.30; L <= -0.16; L += 0.02) {
      SturmProblem prob = SturmProblem::from_curve(curve, L);
      prob.R_trunc = R;
      prob.far_bc = BC::Dirichlet;
      best = std::min(best, solve_sturm(prob).mu);
    }
    mins.push_back(best);
  }
  // R = 4 already sits within 5e-4 of the half-line value; R >= 6 within 1e-5.
  CHECK(mins[0] == doctest::Approx(mins[3]).epsilon(5e-4));
  for (size_t i = 1; i + 1 < mins.size(); ++i)
    CHECK(mins[i] == doctest::Approx(mins[3]).epsilon(1e-5));
}

TEST_CASE("closed-form Bargmann bound") {
  // Against adaptive-order numerical quadrature of the integrand.
  auto numeric = [](double omega, double L, double L0) {
    QuadRule q = gauss_legendre(64);
    double hi = L + 40.0 / omega, out = 0;
    int ncell = 64;
    for (int c = 0; c < ncell; ++c) {
      double a = L + (hi - L) * c / ncell, b = L + (hi - L) * (c + 1) / ncell;
      for (int i = 0; i < q.points.size(); ++i) {
        double t = 0.5 * (a + b) + 0.5 * (b - a) * q.points[i];
        out += 0.5 * (b - a) * q.weights[i] * t *
               std::exp(-2 * omega * (t - L0));
      }
    }
    return 1 + 2 * out;
  };
  for (auto [omega, L, L0] :
       {std::tuple{0.8364, 1.0, 1.0}, {0.5, 2.0, 0.3}, {1.7, 0.2, -0.1}}) {
    CHECK(bargmann_bound(omega, L, L0) ==
          doctest::Approx(numeric(omega, L, L0)).epsilon(1e-10));
  }
  double w = 0.8364;
  CHECK(bargmann_bound(w, 1.0, 1.0) ==
        doctest::Approx(1 + 2 * (1 / (2 * w) + 1 / (4 * w * w))).epsilon(1e-14));
  // Large omega: the potential integral vanishes.
  CHECK(bargmann_bound(200.0, 1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-1));
  CHECK_THROWS(bargmann_bound(0.0, 1.0, 1.0));
}
