#pragma once

// Post-processing: exponential convergence-rate fits of Dirichlet/mixed
// eigenvalue gaps, limit extrapolation, spectral-gap and Agmon-rate reports,
// the lower/upper sandwich check, and p-ladder extrapolation.

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

namespace fichera {

struct SweepPoint {
  double R = 0;
  double dir = 0;  // lambda_1 with Dirichlet truncation faces
  double mix = 0;  // lambda_1 with Neumann truncation faces
};

struct FitResult {
  double slope = 0;
  double intercept = 0;
  double window_lo = 0, window_hi = 0;
  double max_abs_residual = 0;
  // Local slope between consecutive samples, reported at the midpoint.
  std::vector<std::pair<double, double>> local_slopes;
};

inline double default_fit_window(double R_max, int dim) {
  return dim == 3 ? R_max - 4.0 : R_max - 6.0;
}

// Least-squares line through (R, log(dir - mix)) over the window.
inline FitResult fit_exponential(const std::vector<SweepPoint>& series,
                                 double window_lo, double window_hi) {
  std::vector<double> xs, ys;
  FitResult out;
  out.window_lo = window_lo;
  out.window_hi = window_hi;
  for (const auto& s : series) {
    if (s.R < window_lo - 1e-12 || s.R > window_hi + 1e-12) continue;
    double d = s.dir - s.mix;
    if (!(d > 0))
      throw std::runtime_error(
          "nonpositive eigenvalue difference in the fit window "
          "(discretization floor reached)");
    xs.push_back(s.R);
    ys.push_back(std::log(d));
  }
  if (xs.size() < 2) throw std::invalid_argument("fit window holds < 2 samples");
  size_t n = xs.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < n; ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  out.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  out.intercept = (sy - out.slope * sx) / n;
  for (size_t i = 0; i < n; ++i)
    out.max_abs_residual = std::max(
        out.max_abs_residual, std::abs(ys[i] - out.slope * xs[i] - out.intercept));
  for (size_t i = 1; i < n; ++i)
    out.local_slopes.emplace_back(0.5 * (xs[i - 1] + xs[i]),
                                  (ys[i] - ys[i - 1]) / (xs[i] - xs[i - 1]));
  return out;
}

// Mean and half-gap of the bracketing pair at the largest truncation.
inline std::pair<double, double> extrapolate_lambda_inf(double dir, double mix) {
  if (dir < mix) throw std::invalid_argument("bracket inverted (dir < mix)");
  return {0.5 * (dir + mix), 0.5 * (dir - mix)};
}

struct GapReport {
  double lambda_ess = 0;  // essential-spectrum threshold (2D guide limit)
  double lambda_1 = 0;    // bound-state estimate
  double bracket = 0;     // half-gap error bar on lambda_1
  double gap = 0;         // (lambda_ess - lambda_1) / lambda_1
  double agmon_gamma = 0; // sqrt(lambda_ess - lambda_1), 0 if no bound state
  double fitted_beta = 0; // observed decay slope of the 3D bracket width
  bool bound_state = false;
};

inline GapReport gap_report(double lambda_ess,
                            const std::vector<SweepPoint>& layer_series) {
  if (layer_series.empty()) throw std::invalid_argument("empty layer series");
  GapReport rep;
  rep.lambda_ess = lambda_ess;
  const SweepPoint* last = &layer_series.front();
  for (const auto& s : layer_series)
    if (s.R > last->R) last = &s;
  auto [mean, half] = extrapolate_lambda_inf(last->dir, last->mix);
  rep.lambda_1 = mean;
  rep.bracket = half;
  rep.bound_state = rep.lambda_1 < lambda_ess;
  rep.gap = rep.bound_state ? (lambda_ess - rep.lambda_1) / rep.lambda_1 : 0.0;
  rep.agmon_gamma = rep.bound_state ? std::sqrt(lambda_ess - rep.lambda_1) : 0.0;
  if (layer_series.size() >= 2) {
    try {
      FitResult fit = fit_exponential(
          layer_series, default_fit_window(last->R, 3), last->R);
      rep.fitted_beta = -fit.slope;
    } catch (const std::exception&) {
      rep.fitted_beta = 0;  // gap at the discretization floor; no rate
    }
  }
  return rep;
}

struct SandwichResult {
  bool pass = false;
  double lower_margin = 0;  // lambda_1 - mu_star
  double upper_margin = 0;  // lambda_inf - lambda_1
};

// mu_star <= lambda_1 <= lambda_inf with a relative discretization slack.
inline SandwichResult lower_upper_sandwich(double mu_star, double lambda_inf,
                                           double lambda_1,
                                           double slack = 1e-3) {
  SandwichResult out;
  out.lower_margin = lambda_1 - mu_star;
  out.upper_margin = lambda_inf - lambda_1;
  out.pass = (mu_star <= lambda_1 * (1 + slack)) &&
             (lambda_1 <= lambda_inf * (1 + slack));
  return out;
}

// Aitken delta-squared extrapolation of the last three ladder values;
// exact for a geometric approach lambda_p = limit + A * rho^p.
inline double aitken_extrapolate(const std::vector<double>& ladder) {
  if (ladder.size() < 3)
    throw std::invalid_argument("need >= 3 ladder values");
  size_t n = ladder.size();
  double d1 = ladder[n - 2] - ladder[n - 3];
  double d2 = ladder[n - 1] - ladder[n - 2];
  double denom = d2 - d1;
  if (denom == 0) return ladder[n - 1];
  return ladder[n - 1] - d2 * d2 / denom;
}

// Bracket for the converged value: [extrapolated limit, last computed value]
// for a monotonically decreasing (Galerkin-from-above) ladder.
inline std::pair<double, double> p_ladder_bracket(const std::vector<double>& ladder) {
  double ex = aitken_extrapolate(ladder);
  return {std::min(ex, ladder.back()), std::max(ex, ladder.back())};
}

}  // namespace fichera
