#pragma once

// The transverse-mode curve x3 -> lambda(x3): closed form on (-1,0],
// FEM samples on (0,inf) with a monotone piecewise-cubic interpolant and
// an exponential tail beyond the last sample.

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace fichera {

// Monotonicity-preserving piecewise cubic Hermite interpolant
// (Fritsch-Carlson limited slopes).
class Pchip {
 public:
  static Pchip fit(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
      throw std::invalid_argument("pchip needs >= 2 samples");
    for (size_t i = 0; i + 1 < x.size(); ++i)
      if (!(x[i] < x[i + 1])) throw std::invalid_argument("pchip abscissae not increasing");
    Pchip p;
    p.x_ = x;
    p.y_ = y;
    const size_t n = x.size();
    std::vector<double> h(n - 1), delta(n - 1);
    for (size_t i = 0; i + 1 < n; ++i) {
      h[i] = x[i + 1] - x[i];
      delta[i] = (y[i + 1] - y[i]) / h[i];
    }
    p.d_.assign(n, 0.0);
    for (size_t i = 1; i + 1 < n; ++i) {
      if (delta[i - 1] * delta[i] <= 0) {
        p.d_[i] = 0;
      } else {
        double w1 = 2 * h[i] + h[i - 1], w2 = h[i] + 2 * h[i - 1];
        p.d_[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
      }
    }
    auto end_slope = [](double d_edge, double delta0, double delta1, double h0,
                        double h1) {
      double d = ((2 * h0 + h1) * delta0 - h0 * delta1) / (h0 + h1);
      if (d * delta0 <= 0) d = 0;
      else if (delta0 * delta1 <= 0 && std::abs(d) > 3 * std::abs(delta0))
        d = 3 * delta0;
      (void)d_edge;
      return d;
    };
    if (n == 2) {
      p.d_[0] = p.d_[1] = delta[0];
    } else {
      p.d_[0] = end_slope(0, delta[0], delta[1], h[0], h[1]);
      p.d_[n - 1] = end_slope(0, delta[n - 2], delta[n - 3], h[n - 2], h[n - 3]);
    }
    return p;
  }

  double operator()(double t) const {
    size_t i = interval(t);
    double h = x_[i + 1] - x_[i], s = (t - x_[i]) / h;
    double h00 = (1 + 2 * s) * (1 - s) * (1 - s), h10 = s * (1 - s) * (1 - s);
    double h01 = s * s * (3 - 2 * s), h11 = s * s * (s - 1);
    return h00 * y_[i] + h * h10 * d_[i] + h01 * y_[i + 1] + h * h11 * d_[i + 1];
  }

  double xmin() const { return x_.front(); }
  double xmax() const { return x_.back(); }

 private:
  size_t interval(double t) const {
    if (t <= x_.front()) return 0;
    if (t >= x_.back()) return x_.size() - 2;
    size_t lo = 0, hi = x_.size() - 1;
    while (hi - lo > 1) {
      size_t mid = (lo + hi) / 2;
      (t < x_[mid] ? hi : lo) = mid;
    }
    return lo;
  }

  std::vector<double> x_, y_, d_;
};

struct LambdaSample {
  double x3 = 0;
  double lambda = 0;
  int p = 0;
  std::string mesh_id;
};

struct LambdaCurve {
  std::vector<LambdaSample> samples;  // x3 > 0, ascending
  Pchip interp;                       // anchored at (0, pi^2/2)
  double lambda_inf = 0, halfgap = 0, omega = 0;

  static double closed_form(double x3) {
    if (x3 <= -1) throw std::invalid_argument("x3 must exceed -1");
    if (x3 > 0) throw std::invalid_argument("closed form valid on (-1,0] only");
    double s = 1.0 + x3;
    return 0.5 * M_PI * M_PI / (s * s);
  }

  double value(double x3) const {
    if (x3 <= 0) return closed_form(x3);
    if (samples.empty()) throw std::logic_error("curve has no sampled branch");
    double xl = samples.back().x3;
    if (x3 >= xl) {
      // Exponential approach to lambda_inf at the Agmon-type rate.
      double yl = samples.back().lambda;
      return lambda_inf - (lambda_inf - yl) * std::exp(-2 * omega * (x3 - xl));
    }
    return interp(x3);
  }

  // Fill interpolant/limit fields from the samples and a (dir, mix) pair
  // at the largest abscissa.
  void finalize(double dir_at_last, double mix_at_last) {
    if (samples.empty()) throw std::logic_error("no samples");
    lambda_inf = 0.5 * (dir_at_last + mix_at_last);
    halfgap = 0.5 * (dir_at_last - mix_at_last);
    omega = std::sqrt(M_PI * M_PI - lambda_inf);
    std::vector<double> xs{0.0}, ys{0.5 * M_PI * M_PI};
    for (const auto& s : samples) {
      xs.push_back(s.x3);
      ys.push_back(s.lambda);
    }
    interp = Pchip::fit(xs, ys);
    // Invariants of the sampled branch.
    double prev = ys.front() - 1e-9;
    for (const auto& s : samples) {
      if (s.lambda < prev - 1e-9 * std::abs(prev))
        throw std::runtime_error("sampled branch is not nondecreasing");
      if (s.lambda > lambda_inf + 1e-6 * lambda_inf)
        throw std::runtime_error("sample exceeds the extrapolated limit");
      if (s.lambda < 0.5 * M_PI * M_PI * (1 - 1e-9))
        throw std::runtime_error("sample below the x3=0 limit");
      prev = s.lambda;
    }
  }
};

}  // namespace fichera
