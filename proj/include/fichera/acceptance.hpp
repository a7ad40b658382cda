#pragma once

// The fifteen reproduction criteria, shared between the acceptance test
// binary and the `reproduce` subcommand.  Each criterion returns a record
// with the computed numbers, the reference values, the tolerance used, and
// a pass/fail verdict.  All solver artifacts go through the disk cache so
// later criteria reuse earlier sweeps.

#include <cmath>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "fichera/analysis.hpp"
#include "fichera/cache.hpp"
#include "fichera/certificate.hpp"
#include "fichera/curve.hpp"
#include "fichera/eigensolve.hpp"
#include "fichera/guides.hpp"
#include "fichera/io.hpp"
#include "fichera/sturm.hpp"

namespace fichera {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  Json details;  // computed values, references, tolerances, margins
};

struct AcceptanceConfig {
  bool quick = false;        // lighter degrees, relaxed tolerances
  SolveCache cache{""};      // empty path = no caching
  int p2d() const { return quick ? 8 : 16; }
  int curve_samples() const { return quick ? 40 : 60; }
};

namespace detail {

inline std::string disc_key(const Discretization& d) {
  std::ostringstream os;
  os << "p=" << d.p << ";layers=" << d.grading.layers
     << ";ratio=" << fmt_g17(d.grading.ratio) << ";base=" << d.base
     << ";tol=" << fmt_g17(d.tol) << ";seed=" << d.seed;
  return os.str();
}

// Dirichlet/mixed ground-state pair on the broken guide via the weighted
// reference route, cached.  Returns (dir, mix) lowest eigenvalues (count of
// them each).
inline std::pair<std::vector<double>, std::vector<double>> cached_broken_pair(
    const AcceptanceConfig& cfg, const ReferenceGuide& guide, double R,
    int count) {
  std::string key = "broken-ref;" + disc_key(guide.disc()) +
                    ";R=" + fmt_g17(R) + ";count=" + std::to_string(count);
  if (auto hit = cfg.cache.load(key))
    return {(*hit)["dir"].get<std::vector<double>>(),
            (*hit)["mix"].get<std::vector<double>>()};
  auto [dir, mix] = dirichlet_mixed_pair(guide, R, count);
  std::vector<double> dv(dir.values.begin(), dir.values.end());
  std::vector<double> mv(mix.values.begin(), mix.values.end());
  cfg.cache.store(key, Json{{"dir", dv}, {"mix", mv}});
  return {dv, mv};
}

inline std::pair<std::vector<double>, std::vector<double>> cached_guide_pair(
    const AcceptanceConfig& cfg, Guide2D kind, double R,
    const Discretization& disc, int count) {
  std::string kname = kind == Guide2D::Rounded ? "rounded" : "scaled";
  std::string key = "guide2d;" + kname + ";" + disc_key(disc) +
                    ";R=" + fmt_g17(R) + ";count=" + std::to_string(count);
  if (auto hit = cfg.cache.load(key))
    return {(*hit)["dir"].get<std::vector<double>>(),
            (*hit)["mix"].get<std::vector<double>>()};
  auto [dir, mix] =
      dirichlet_mixed_pair(Geometry2D::make(kind, R, true), R, disc, count);
  std::vector<double> dv(dir.values.begin(), dir.values.end());
  std::vector<double> mv(mix.values.begin(), mix.values.end());
  cfg.cache.store(key, Json{{"dir", dv}, {"mix", mv}});
  return {dv, mv};
}

inline std::pair<std::vector<double>, std::vector<double>> cached_layer_pair(
    const AcceptanceConfig& cfg, Layer3D kind, double R, int level, int p,
    int count) {
  std::string kname = kind == Layer3D::Fichera ? "fichera" : "scaled-fichera";
  std::string key = "layer3d;" + kname + ";R=" + fmt_g17(R) +
                    ";level=" + std::to_string(level) +
                    ";p=" + std::to_string(p) +
                    ";count=" + std::to_string(count);
  if (auto hit = cfg.cache.load(key))
    return {(*hit)["dir"].get<std::vector<double>>(),
            (*hit)["mix"].get<std::vector<double>>()};
  Discretization disc;
  disc.p = p;
  auto [dir, mix] =
      dirichlet_mixed_pair(Geometry3D::make(kind, R, level, true), disc, count);
  std::vector<double> dv(dir.values.begin(), dir.values.end());
  std::vector<double> mv(mix.values.begin(), mix.values.end());
  cfg.cache.store(key, Json{{"dir", dv}, {"mix", mv}});
  return {dv, mv};
}

inline LambdaCurve cached_lambda_curve(const AcceptanceConfig& cfg,
                                       const ReferenceGuide& guide,
                                       int nsamples) {
  std::string key = "lambda-curve;" + disc_key(guide.disc()) +
                    ";n=" + std::to_string(nsamples);
  LambdaCurve curve;
  if (auto hit = cfg.cache.load(key)) {
    for (const auto& row : (*hit)["samples"]) {
      LambdaSample s;
      s.x3 = row["x3"];
      s.lambda = row["lambda"];
      s.p = row["p"];
      s.mesh_id = row["mesh_id"];
      curve.samples.push_back(s);
    }
    curve.finalize((*hit)["dir_at_last"], curve.samples.back().lambda);
    return curve;
  }
  curve = sweep_lambda(guide, log_spaced(1e-3, 10.0, nsamples));
  double dir = curve.lambda_inf + curve.halfgap;
  Json rows = Json::array();
  for (const auto& s : curve.samples)
    rows.push_back(Json{{"x3", s.x3},
                        {"lambda", s.lambda},
                        {"p", s.p},
                        {"mesh_id", s.mesh_id}});
  cfg.cache.store(key, Json{{"samples", rows}, {"dir_at_last", dir}});
  return curve;
}

// Limit of the broken guide at the reference sweep resolution.
inline std::pair<double, double> broken_lambda_inf(const AcceptanceConfig& cfg) {
  Discretization disc;
  disc.p = cfg.p2d();
  ReferenceGuide guide(disc);
  auto [dir, mix] = cached_broken_pair(cfg, guide, 10.0, 1);
  return extrapolate_lambda_inf(dir[0], mix[0]);
}

// 3D estimate of the layer ground state: Aitken extrapolation of the p
// ladder of Dirichlet/mixed means at the largest truncation.
inline std::pair<double, double> layer_lambda1(const AcceptanceConfig& cfg,
                                               Layer3D kind, double R,
                                               int pmax) {
  std::vector<double> means;
  for (int p = 1; p <= pmax; ++p) {
    auto [dir, mix] = cached_layer_pair(cfg, kind, R, 1, p, 1);
    means.push_back(0.5 * (dir[0] + mix[0]));
  }
  double est = aitken_extrapolate(means);
  return {est, std::abs(means.back() - est)};
}

inline bool rel_close(double value, double ref, double tol) {
  return std::abs(value - ref) <= tol * std::abs(ref);
}

inline Json check(const char* what, double value, double ref, double tol,
                  bool& pass) {
  bool ok = rel_close(value, ref, tol);
  pass = pass && ok;
  return Json{{"what", what},
              {"computed", value},
              {"reference", ref},
              {"rel_tol", tol},
              {"pass", ok}};
}

}  // namespace detail

inline CriterionResult run_criterion(int id, const AcceptanceConfig& cfg) {
  using namespace detail;
  const double PI2 = M_PI * M_PI;
  CriterionResult res;
  res.id = id;
  res.pass = true;
  Json checks = Json::array();

  switch (id) {
    case 1: {
      res.name = "mixed square eigenvalues";
      Mesh m = build_square_mesh(0.0, 1.0, 2);
      FeSpace s = make_space(m, 8);
      BCMap bc{{"xmin", BC::Dirichlet},
               {"ymin", BC::Dirichlet},
               {"xmax", BC::Neumann},
               {"ymax", BC::Neumann}};
      AssembledSystem sys = assemble(s, bc);
      EigenResult r = smallest_eigenpairs(sys, 2);
      checks.push_back(check("lambda1", r.values[0], 0.5 * PI2, 1e-8, res.pass));
      checks.push_back(check("lambda2", r.values[1], 2.5 * PI2, 1e-8, res.pass));
      break;
    }
    case 2: {
      res.name = "closed-form branch of the transverse curve";
      for (double x3 : {-0.9, -0.5, -0.1}) {
        Mesh m = build_square_mesh(0.0, 1.0 + x3, 2);
        FeSpace s = make_space(m, 8);
        BCMap bc{{"xmin", BC::Dirichlet},
                 {"ymin", BC::Dirichlet},
                 {"xmax", BC::Neumann},
                 {"ymax", BC::Neumann}};
        AssembledSystem sys = assemble(s, bc);
        EigenResult r = smallest_eigenpairs(sys, 1);
        checks.push_back(check(("x3=" + fmt_g17(x3)).c_str(), r.values[0],
                               LambdaCurve::closed_form(x3), 1e-8, res.pass));
      }
      break;
    }
    case 3: {
      res.name = "guide limit 0.9291205 pi^2";
      Discretization disc;
      disc.p = cfg.p2d();
      ReferenceGuide guide(disc);
      for (int R = 1; R <= 10; ++R) cached_broken_pair(cfg, guide, R, 1);
      auto [mean, half] = broken_lambda_inf(cfg);
      double tol = cfg.quick ? 1e-3 : 5e-5;
      checks.push_back(
          check("lambda_inf/pi^2", mean / PI2, 0.9291205, tol, res.pass));
      checks.push_back(Json{{"what", "half-gap"}, {"computed", half}});
      break;
    }
    case 4: {
      res.name = "guide convergence rate -2 omega";
      Discretization disc;
      disc.p = cfg.p2d();
      ReferenceGuide guide(disc);
      std::vector<SweepPoint> series;
      for (int R = 1; R <= 10; ++R) {
        auto [dir, mix] = cached_broken_pair(cfg, guide, R, 1);
        series.push_back({double(R), dir[0], mix[0]});
      }
      FitResult fit = fit_exponential(series, 4, 10);
      double tol = cfg.quick ? 0.02 : 0.01;
      checks.push_back(check("slope", fit.slope, -1.67279, tol, res.pass));
      break;
    }
    case 5: {
      res.name = "boundary formula for d(lambda)/dR";
      Discretization disc;
      disc.p = 16;
      // The centered difference divides eigenvalue noise by 2h = 2e-3, so
      // the reference needs eigenvalues well below 1e-10 absolute error.
      disc.tol = 1e-13;
      ReferenceGuide guide(disc);
      const double h = 1e-3;
      auto lam_at = [&](double R) {
        AssembledSystem sys;
        EigenResult r = guide.solve(R, true, 1, &sys);
        return rayleigh_polish(sys, r.vectors.col(0), r.values[0]);
      };
      for (double R : {1.0, 2.0, 5.0}) {
        double d = eigen_derivative(guide, R);
        double fd = (lam_at(R + h) - lam_at(R - h)) / (2 * h);
        checks.push_back(
            check(("R=" + fmt_g17(R)).c_str(), d, fd, 1e-3, res.pass));
        bool positive = d > 0;
        res.pass = res.pass && positive;
        checks.push_back(Json{{"what", "positivity"},
                              {"computed", d},
                              {"pass", positive}});
      }
      break;
    }
    case 6: {
      res.name = "series representation of the arm tail";
      Discretization disc;
      disc.p = cfg.quick ? 12 : 16;
      const double R = 5.0;
      Geometry2D geom = Geometry2D::make(Guide2D::Broken, R, true);
      Mesh m = build_guide_mesh(geom, disc.grading, disc.base);
      FeSpace s = make_space(m, disc.p);
      AssembledSystem sys = assemble(s, geom.bc_map);
      EigenResult r = smallest_eigenpairs(sys, 1, disc.tol, disc.seed);
      Eigen::VectorXd u = sys.extend_vec(r.vectors.col(0));
      SeriesSolution sol = series_from_fem(s, u, R, r.values[0], 30);
      double maxdiff = 0;
      for (double x1 : {1.5, 2.5, 3.5})
        for (double x2 : {-0.7, -0.5, -0.3}) {
          double se = series_eval(sol, x1, x2);
          double fe = fe_eval(s, u, Eigen::Vector3d(x1, x2, 0.0));
          maxdiff = std::max(maxdiff, std::abs(se - fe));
        }
      double dtol = cfg.quick ? 1e-5 : 1e-6;
      bool ok = maxdiff <= dtol;
      res.pass = res.pass && ok;
      checks.push_back(Json{{"what", "mid-strip max |series - FE|"},
                            {"computed", maxdiff},
                            {"abs_tol", dtol},
                            {"pass", ok}});
      // Cross-section norm decay rate vs the Agmon rate omega.
      double omega = std::sqrt(PI2 - r.values[0]);
      QuadRule q = gauss_legendre(40);
      auto snorm = [&](double rho) {
        double out = 0;
        for (int i = 0; i < q.points.size(); ++i) {
          double x2 = -0.5 + 0.5 * q.points[i];
          double v = series_eval(sol, rho, x2);
          out += 0.5 * q.weights[i] * v * v;
        }
        return std::sqrt(out);
      };
      double slope = 0.5 * std::log(snorm(3.0) / snorm(1.0));
      checks.push_back(check("trace decay slope", slope, -omega, 0.02, res.pass));
      break;
    }
    case 7: {
      res.name = "1D reduction: crossing point and lower bound";
      Discretization disc;
      disc.p = cfg.p2d();
      ReferenceGuide guide(disc);
      LambdaCurve curve = cached_lambda_curve(cfg, guide, cfg.curve_samples());
      LstarResult ls = find_Lstar(curve, 1e-4);
      bool in_range = std::abs(ls.L_star - (-0.228)) <= 0.005;
      res.pass = res.pass && in_range;
      checks.push_back(Json{{"what", "L*"},
                            {"computed", ls.L_star},
                            {"reference", -0.228},
                            {"abs_tol", 0.005},
                            {"pass", in_range}});
      double mutol = cfg.quick ? 3e-3 : 1e-3;
      checks.push_back(check("mu*/pi^2", ls.mu_star / PI2, 0.838653, mutol,
                             res.pass));
      const double h = 1e-3;
      for (double L : {-0.6, -0.35, 0.4}) {
        double d = mu_derivative(curve, L);
        auto pair = mu_curve(curve, {L - h, L + h});
        double fd = (pair[1].mu - pair[0].mu) / (2 * h);
        checks.push_back(
            check(("mu' at L=" + fmt_g17(L)).c_str(), d, fd, 1e-3, res.pass));
      }
      std::vector<double> grid;
      for (int i = 1; i < 100; ++i) grid.push_back(-1.0 + i / 100.0);
      auto samples = mu_curve(curve, grid);
      int flips = 0;
      for (size_t i = 1; i < samples.size(); ++i)
        if ((samples[i - 1].mu < samples[i - 1].lambda_at_L) !=
            (samples[i].mu < samples[i].lambda_at_L))
          ++flips;
      bool one = (flips == 1);
      res.pass = res.pass && one;
      checks.push_back(Json{{"what", "sign changes of mu - lambda"},
                            {"computed", flips},
                            {"reference", 1},
                            {"pass", one}});
      cfg.cache.store("lstar;" + disc_key(disc),
                      Json{{"L_star", ls.L_star}, {"mu_star", ls.mu_star}});
      break;
    }
    case 8: {
      res.name = "finite-interval 1D family insensitivity";
      Discretization disc;
      disc.p = cfg.p2d();
      ReferenceGuide guide(disc);
      LambdaCurve curve = cached_lambda_curve(cfg, guide, cfg.curve_samples());
      auto mu_of = [&](double L, double R) {
        SturmProblem prob = SturmProblem::from_curve(curve, L);
        prob.R_trunc = R;
        prob.far_bc = BC::Dirichlet;
        return solve_sturm(prob).mu;
      };
      std::vector<double> mins;
      for (double R : {4.0, 6.0, 8.0, 10.0, 40.0}) {
        // Golden-section minimization over L so the spread reflects the
        // truncation, not the L grid.
        double a = -0.35, b = -0.12, gr = (std::sqrt(5.0) - 1) / 2;
        double c = b - gr * (b - a), d = a + gr * (b - a);
        double fc = mu_of(c, R), fd = mu_of(d, R);
        while (b - a > 1e-5) {
          if (fc < fd) {
            b = d, d = c, fd = fc, c = b - gr * (b - a), fc = mu_of(c, R);
          } else {
            a = c, c = d, fc = fd, d = a + gr * (b - a), fd = mu_of(d, R);
          }
        }
        mins.push_back(std::min(fc, fd));
      }
      double spread = (*std::max_element(mins.begin(), mins.end()) -
                       *std::min_element(mins.begin(), mins.end())) /
                      mins.back();
      // The interval with the shortest right arm (R=4) carries an intrinsic
      // Dirichlet truncation error ~ exp(-2 sqrt(lambda_inf - mu) * 4) ~ 5e-4,
      // which exceeds this tolerance; the criterion reports this honestly.
      bool ok = spread < 1e-4;
      res.pass = res.pass && ok;
      checks.push_back(Json{{"what", "relative spread of min_L mu(L,R)"},
                            {"computed", spread},
                            {"rel_tol", 1e-4},
                            {"values", mins},
                            {"pass", ok}});
      double spread_ge6 =
          (*std::max_element(mins.begin() + 1, mins.end()) -
           *std::min_element(mins.begin() + 1, mins.end())) /
          mins.back();
      checks.push_back(Json{{"what", "relative spread for R >= 6 (diagnostic)"},
                            {"computed", spread_ge6}});
      break;
    }
    case 9: {
      res.name = "3D layer eigenvalues on the coarse grid";
      auto [ess, esshalf] = broken_lambda_inf(cfg);
      for (int R = 2; R <= 10; ++R) {
        auto [dir, mix] = cached_layer_pair(cfg, Layer3D::Fichera, R, 1, 4, 3);
        if (R >= 3) {
          bool below = dir[0] < ess && mix[0] < ess;
          res.pass = res.pass && below;
          checks.push_back(Json{{"what", "lambda1 below threshold, R=" +
                                             std::to_string(R)},
                                {"dir", dir[0]},
                                {"mix", mix[0]},
                                {"threshold", ess},
                                {"pass", below}});
        }
        bool degen = rel_close(mix[1], mix[2], 1e-10) &&
                     rel_close(dir[1], dir[2], 1e-10);
        bool above = mix[1] > ess && dir[1] > ess;
        res.pass = res.pass && degen && above;
        checks.push_back(Json{{"what", "lambda2=lambda3 and above threshold, R=" +
                                           std::to_string(R)},
                              {"mix2", mix[1]},
                              {"mix3", mix[2]},
                              {"dir2", dir[1]},
                              {"pass", degen && above}});
      }
      auto [l1, bracket] = layer_lambda1(cfg, Layer3D::Fichera, 10.0, 4);
      checks.push_back(
          check("lambda1(layer)/pi^2", l1 / PI2, 0.9032, 5e-3, res.pass));
      cfg.cache.store("layer-lambda1",
                      Json{{"value", l1}, {"bracket", bracket}});
      break;
    }
    case 10: {
      res.name = "3D gap and Agmon rate";
      auto [ess, esshalf] = broken_lambda_inf(cfg);
      std::vector<SweepPoint> series;
      for (int R = 2; R <= 10; ++R) {
        auto [dir, mix] = cached_layer_pair(cfg, Layer3D::Fichera, R, 1, 4, 3);
        series.push_back({double(R), dir[0], mix[0]});
      }
      GapReport rep = gap_report(ess, series);
      bool g_ok = std::abs(rep.gap - 0.029) <= 0.003;
      bool gamma_ok = std::abs(rep.agmon_gamma - 0.5046) <= 0.01;
      bool beta_ok = std::abs(rep.fitted_beta - 2 * rep.agmon_gamma) <= 0.15;
      res.pass = g_ok && gamma_ok && beta_ok;
      checks.push_back(Json{{"what", "relative gap"},
                            {"computed", rep.gap},
                            {"reference", 0.029},
                            {"abs_tol", 0.003},
                            {"pass", g_ok}});
      checks.push_back(Json{{"what", "agmon gamma"},
                            {"computed", rep.agmon_gamma},
                            {"reference", 0.5046},
                            {"abs_tol", 0.01},
                            {"pass", gamma_ok}});
      checks.push_back(Json{{"what", "|beta - 2 gamma|"},
                            {"beta", rep.fitted_beta},
                            {"two_gamma", 2 * rep.agmon_gamma},
                            {"abs_tol", 0.15},
                            {"pass", beta_ok}});
      break;
    }
    case 11: {
      res.name = "lower/upper sandwich";
      Discretization disc;
      disc.p = cfg.p2d();
      ReferenceGuide guide(disc);
      LambdaCurve curve = cached_lambda_curve(cfg, guide, cfg.curve_samples());
      double mu_star;
      if (auto hit = cfg.cache.load("lstar;" + disc_key(disc)))
        mu_star = (*hit)["mu_star"];
      else
        mu_star = find_Lstar(curve, 1e-4).mu_star;
      auto [ess, esshalf] = broken_lambda_inf(cfg);
      double l1;
      if (auto hit = cfg.cache.load("layer-lambda1"))
        l1 = (*hit)["value"];
      else
        l1 = layer_lambda1(cfg, Layer3D::Fichera, 10.0, 4).first;
      SandwichResult sw = lower_upper_sandwich(mu_star, ess, l1);
      bool positive = sw.pass && sw.lower_margin > 0 && sw.upper_margin > 0;
      res.pass = positive;
      checks.push_back(Json{{"what", "mu* <= lambda1(layer) <= lambda_inf"},
                            {"mu_star", mu_star},
                            {"lambda_1", l1},
                            {"lambda_inf", ess},
                            {"lower_margin", sw.lower_margin},
                            {"upper_margin", sw.upper_margin},
                            {"pass", positive}});
      break;
    }
    case 12: {
      res.name = "rounded guide limit and rate";
      Discretization disc;
      disc.p = cfg.p2d();
      std::vector<SweepPoint> series;
      for (int R = 2; R <= 12; ++R) {
        auto [dir, mix] = cached_guide_pair(cfg, Guide2D::Rounded, R, disc, 1);
        series.push_back({double(R), dir[0], mix[0]});
      }
      auto [mean, half] =
          extrapolate_lambda_inf(series.back().dir, series.back().mix);
      double tol = cfg.quick ? 3e-3 : 1e-3;
      checks.push_back(
          check("lambda1/pi^2", mean / PI2, 0.9865, tol, res.pass));
      FitResult fit = fit_exponential(series, 6, 12);
      checks.push_back(check("slope", fit.slope, -0.7294, 0.01, res.pass));
      cfg.cache.store("rounded-limit", Json{{"value", mean}, {"half", half}});
      break;
    }
    case 13: {
      res.name = "cross sections: scaled guide and scaled layer";
      Discretization disc;
      disc.p = cfg.p2d();
      auto [dir, mix] =
          cached_guide_pair(cfg, Guide2D::ScaledBroken, 12.0, disc, 1);
      auto [mean2d, half2d] = extrapolate_lambda_inf(dir[0], mix[0]);
      double tol2d = cfg.quick ? 3e-3 : 1e-3;
      checks.push_back(
          check("lambda1(2D cross)/pi^2", mean2d / PI2, 0.6596, tol2d, res.pass));
      auto [l1, bracket] = layer_lambda1(cfg, Layer3D::ScaledFichera, 8.0, 4);
      checks.push_back(
          check("lambda1(3D cross)/pi^2", l1 / PI2, 0.5165, 0.01, res.pass));
      double g = (mean2d - l1) / l1;
      bool g_ok = std::abs(g - 0.277) <= 0.01;
      res.pass = res.pass && g_ok;
      checks.push_back(Json{{"what", "relative gap of the cross"},
                            {"computed", g},
                            {"reference", 0.277},
                            {"abs_tol", 0.01},
                            {"pass", g_ok}});
      break;
    }
    case 14: {
      res.name = "variational certificate for the rounded guide";
      bool zero_ok = std::abs(radial_testfn_energy(1)) < 1e-12;
      res.pass = res.pass && zero_ok;
      checks.push_back(Json{{"what", "J of the radial trial function"},
                            {"computed", radial_testfn_energy(1)},
                            {"abs_tol", 1e-12},
                            {"pass", zero_ok}});
      Discretization disc;
      disc.p = 8;
      Certificate cert = run_certificate(disc);
      bool neg = cert.J_psi0 < 0, verdict = cert.verdict;
      res.pass = res.pass && neg && verdict;
      checks.push_back(Json{{"what", "J(extension) < 0 and quotient < pi^2"},
                            {"J", cert.J_psi0},
                            {"rayleigh_over_pi2", cert.rayleigh_over_pi2},
                            {"pass", neg && verdict}});
      double fem = glued_rayleigh_fem(cert, disc, 24.0);
      checks.push_back(
          check("glued FE quotient vs closed form", fem, cert.rayleigh, 1e-6,
                res.pass));
      break;
    }
    case 15: {
      res.name = "property suite";
      // Galerkin p-monotonicity of lambda1 on three geometries.
      auto monotone = [&](std::function<double(int)> lam,
                          const std::vector<int>& ps, const char* what) {
        double prev = 1e300;
        bool ok = true;
        std::vector<double> vals;
        for (int p : ps) {
          double v = lam(p);
          vals.push_back(v);
          ok = ok && v <= prev + 1e-12 * std::abs(prev);
          prev = v;
        }
        res.pass = res.pass && ok;
        checks.push_back(Json{{"what", what}, {"values", vals}, {"pass", ok}});
      };
      monotone(
          [&](int p) {
            Discretization d;
            d.p = p;
            return ReferenceGuide(d).solve(2.0, true).values[0];
          },
          {6, 8, 10}, "p-monotonicity, broken guide");
      monotone(
          [&](int p) {
            Discretization d;
            d.p = p;
            return dirichlet_mixed_pair(
                       Geometry2D::make(Guide2D::Rounded, 2.0, true), 2.0, d)
                .second.values[0];
          },
          {4, 6, 8}, "p-monotonicity, rounded guide");
      monotone(
          [&](int p) {
            Mesh m = build_square_mesh(0.0, 1.0, 2);
            FeSpace s = make_space(m, p);
            BCMap bc{{"xmin", BC::Dirichlet},
                     {"ymin", BC::Dirichlet},
                     {"xmax", BC::Neumann},
                     {"ymax", BC::Neumann}};
            AssembledSystem sys = assemble(s, bc);
            return smallest_eigenpairs(sys, 1).values[0];
          },
          {2, 3, 4}, "p-monotonicity, mixed square");

      // Mesh measure identities.
      auto measure = [&](const Mesh& m, double expect, const char* what) {
        FeSpace s = make_space(m, 4);
        BCMap bc;  // pure Neumann: no constrained dofs needed for mass
        for (const auto& f : m.facets) bc[f.tag] = BC::Neumann;
        AssembledSystem sys = assemble(s, bc);
        double area = Eigen::VectorXd::Ones(sys.nfree)
                          .dot(sys.M * Eigen::VectorXd::Ones(sys.nfree));
        bool ok = rel_close(area, expect, 1e-10);
        res.pass = res.pass && ok;
        checks.push_back(Json{{"what", what},
                              {"computed", area},
                              {"reference", expect},
                              {"pass", ok}});
      };
      GradingSpec grading{4, 0.1};
      measure(build_guide_mesh(Geometry2D::make(Guide2D::Broken, 3.0, true),
                               grading, 1),
              2 * 3.0 + 1, "area of the broken guide");
      measure(build_rounded_guide_mesh(3.0, grading, 1), M_PI / 4 + 2 * 3.0,
              "area of the rounded guide");
      measure(build_layer_grid(Geometry3D::make(Layer3D::Fichera, 4.0, 1, true)),
              std::pow(5.0, 3) - std::pow(4.0, 3), "volume of the 3D layer");

      // Bit-reproducibility of an eigensolve rerun.
      {
        Discretization d;
        d.p = 8;
        ReferenceGuide g1(d), g2(d);
        EigenResult a = g1.solve(3.0, true, 2), b = g2.solve(3.0, true, 2);
        bool ok = (a.values.array() == b.values.array()).all() &&
                  (a.vectors.array() == b.vectors.array()).all();
        res.pass = res.pass && ok;
        checks.push_back(
            Json{{"what", "bitwise identical rerun"}, {"pass", ok}});
      }
      // Weighted reference form vs direct meshing of the stretched guide.
      {
        Discretization d;
        d.p = 12;
        double wref = ReferenceGuide(d).solve(2.0, true).values[0];
        Geometry2D geom = Geometry2D::make(Guide2D::Broken, 2.0, true);
        Mesh m = build_guide_mesh(geom, d.grading, d.base);
        FeSpace s = make_space(m, d.p);
        AssembledSystem sys = assemble(s, geom.bc_map);
        double direct = smallest_eigenpairs(sys, 1, d.tol, d.seed).values[0];
        checks.push_back(
            check("weighted vs direct lambda1", wref, direct, 1e-8, res.pass));
      }
      break;
    }
    default:
      throw std::invalid_argument("criterion id must be 1..15");
  }
  res.details = checks;
  return res;
}

inline const int kNumCriteria = 15;

}  // namespace fichera
