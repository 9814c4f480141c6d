// Copyright 2026 The qexcite Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Numerical lower envelope of g2 at fixed population over a two-parameter
// family (pump, ratio), e.g. (Omega, gamma_a / gamma_sigma).
//
// A coarse log-spaced table of the model is computed once; each query reads
// the best row off the table by interpolation, then refines with a golden
// section over log(ratio) whose objective solves n_a(pump) = target exactly in
// a pump window around the coarse crossing.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

namespace qexcite {

struct EnvelopeSearch {
  double ratio_min = 1e-3, ratio_max = 1e3;
  int ratio_points = 31;
  double pump_min = 1e-3, pump_max = 1e3;
  int pump_points = 61;
  int golden_iterations = 24;
  int window_points = 9;      // pump samples in the refinement window
  double window_halfwidth = 3;  // in coarse pump-grid steps
};

struct EnvelopePoint {
  double g2 = std::numeric_limits<double>::infinity();
  double pump = std::numeric_limits<double>::quiet_NaN();
  double ratio = std::numeric_limits<double>::quiet_NaN();
  bool found() const { return std::isfinite(g2); }
};

/// Observables of one model evaluation; NaN marks a failed evaluation.
struct ChartPoint {
  double n_a = std::numeric_limits<double>::quiet_NaN();
  double g2 = std::numeric_limits<double>::quiet_NaN();
};

using ChartModel = std::function<ChartPoint(double pump, double ratio)>;

inline std::vector<double> log_grid(double lo, double hi, int count) {
  std::vector<double> g(static_cast<std::size_t>(count));
  // Base 10 keeps decade points such as 0.1, 1, 10 exact.
  const double a = std::log10(lo), b = std::log10(hi);
  for (int k = 0; k < count; ++k)
    g[static_cast<std::size_t>(k)] = std::pow(10.0, a + (b - a) * k / std::max(1, count - 1));
  if (count > 0) g.front() = lo;
  if (count > 1) g.back() = hi;
  return g;
}

inline std::vector<double> linear_grid(double lo, double hi, int count) {
  std::vector<double> g(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k)
    g[static_cast<std::size_t>(k)] = lo + (hi - lo) * k / std::max(1, count - 1);
  if (count > 1) g.back() = hi;
  return g;
}

class EnvelopeExtractor {
 public:
  EnvelopeExtractor(ChartModel model, EnvelopeSearch opt) : model_(std::move(model)), opt_(opt) {
    ratios_ = log_grid(opt_.ratio_min, opt_.ratio_max, opt_.ratio_points);
    pumps_ = log_grid(opt_.pump_min, opt_.pump_max, opt_.pump_points);
    table_.reserve(ratios_.size());
    for (const double r : ratios_) {
      std::vector<ChartPoint> row;
      row.reserve(pumps_.size());
      for (const double p : pumps_) row.push_back(model_(p, r));
      table_.push_back(std::move(row));
    }
  }

  const std::vector<double>& ratios() const { return ratios_; }
  const std::vector<double>& pumps() const { return pumps_; }
  const std::vector<std::vector<ChartPoint>>& table() const { return table_; }

  /// Minimum g2 reachable at population n_target.
  EnvelopePoint min_g2(double n_target) const {
    // Coarse: interpolate each row at its crossings.
    std::size_t best_row = ratios_.size();
    double best_coarse = std::numeric_limits<double>::infinity();
    double best_pump = 0.0;
    for (std::size_t i = 0; i < ratios_.size(); ++i) {
      for (const auto& [g2, pump] : row_crossings(table_[i], n_target)) {
        if (g2 < best_coarse) {
          best_coarse = g2;
          best_row = i;
          best_pump = pump;
        }
      }
    }
    if (best_row == ratios_.size()) return {};

    const double step = std::log(pumps_[1] / pumps_[0]);
    double centre = std::log(best_pump);
    EnvelopePoint best;
    auto objective = [&](double log_r) {
      const EnvelopePoint e = refine_at(std::exp(log_r), n_target, centre, step);
      if (e.found() && e.g2 < best.g2) {
        best = e;
        centre = std::log(e.pump);
      }
      return e.found() ? e.g2 : std::numeric_limits<double>::infinity();
    };

    const double lo = std::log(ratios_[best_row == 0 ? 0 : best_row - 1]);
    const double hi = std::log(ratios_[std::min(best_row + 1, ratios_.size() - 1)]);
    objective(std::log(ratios_[best_row]));
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo, b = hi;
    double c = b - phi * (b - a), d = a + phi * (b - a);
    double fc = objective(c), fd = objective(d);
    for (int it = 0; it < opt_.golden_iterations; ++it) {
      if (fc < fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - phi * (b - a);
        fc = objective(c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + phi * (b - a);
        fd = objective(d);
      }
    }
    if (!best.found()) best = {best_coarse, best_pump, ratios_[best_row]};
    return best;
  }

 private:
  /// (g2, pump) at every sign change of n_a - target along a row.
  std::vector<std::pair<double, double>> row_crossings(const std::vector<ChartPoint>& row,
                                                       double target) const {
    std::vector<std::pair<double, double>> out;
    for (std::size_t k = 0; k + 1 < row.size(); ++k) {
      const ChartPoint& u = row[k];
      const ChartPoint& v = row[k + 1];
      if (!std::isfinite(u.n_a) || !std::isfinite(v.n_a) || !std::isfinite(u.g2) ||
          !std::isfinite(v.g2))
        continue;
      const double du = u.n_a - target, dv = v.n_a - target;
      if (du == 0.0) {
        out.emplace_back(u.g2, pumps_[k]);
        continue;
      }
      if (du * dv >= 0.0) continue;
      const double t = du / (du - dv);
      const double lp = std::log(pumps_[k]) + t * std::log(pumps_[k + 1] / pumps_[k]);
      out.emplace_back(u.g2 + t * (v.g2 - u.g2), std::exp(lp));
    }
    return out;
  }

  /// Exact crossing(s) n_a(pump) = target near exp(centre) at a given ratio.
  EnvelopePoint refine_at(double ratio, double target, double centre, double step) const {
    const int n = std::max(3, opt_.window_points);
    const double lo = centre - opt_.window_halfwidth * step;
    const double hi = centre + opt_.window_halfwidth * step;
    std::vector<double> lp(static_cast<std::size_t>(n));
    std::vector<ChartPoint> pts(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
      lp[static_cast<std::size_t>(k)] = lo + (hi - lo) * k / (n - 1);
      pts[static_cast<std::size_t>(k)] = model_(std::exp(lp[static_cast<std::size_t>(k)]), ratio);
    }
    EnvelopePoint best;
    auto try_bracket = [&](double a, double b, double fa, double fb) {
      if (!std::isfinite(fa) || !std::isfinite(fb) || fa * fb > 0.0) return;
      const auto root = illinois(ratio, target, a, b, fa, fb);
      if (root && std::isfinite(root->g2) && root->g2 < best.g2) best = *root;
    };
    bool crossed = false;
    for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
      const double fa = pts[k].n_a - target, fb = pts[k + 1].n_a - target;
      crossed = crossed || (std::isfinite(fa) && std::isfinite(fb) && fa * fb <= 0.0);
      try_bracket(lp[k], lp[k + 1], fa, fb);
    }
    if (crossed) return best;
    // Near a turning point both roots can fall between two samples. Locate
    // the extremum of n_a closest to the target and bracket from there.
    std::size_t k_near = pts.size();
    for (std::size_t k = 1; k + 1 < pts.size(); ++k) {
      if (!std::isfinite(pts[k].n_a)) continue;
      if (k_near == pts.size() ||
          std::abs(pts[k].n_a - target) < std::abs(pts[k_near].n_a - target))
        k_near = k;
    }
    if (k_near == pts.size()) return best;
    const double sign = pts[k_near].n_a < target ? 1.0 : -1.0;  // maximise or minimise
    auto f = [&](double x) {
      const double v = model_(std::exp(x), ratio).n_a;
      return std::isfinite(v) ? sign * (v - target) : -std::numeric_limits<double>::infinity();
    };
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lp[k_near - 1], b = lp[k_near + 1];
    double c = b - phi * (b - a), d = a + phi * (b - a);
    double fc = f(c), fd = f(d);
    for (int it = 0; it < 60 && fc < 0.0 && fd < 0.0; ++it) {
      if (fc > fd) {
        b = d, d = c, fd = fc, c = b - phi * (b - a), fc = f(c);
      } else {
        a = c, c = d, fc = fd, d = a + phi * (b - a), fd = f(d);
      }
    }
    const double x = fc >= fd ? c : d;
    const double fx = std::max(fc, fd);
    if (fx < 0.0) return best;
    const std::size_t lo_k = k_near - 1, hi_k = k_near + 1;
    try_bracket(lp[lo_k], x, pts[lo_k].n_a - target, sign * fx);
    try_bracket(x, lp[hi_k], sign * fx, pts[hi_k].n_a - target);
    return best;
  }

  std::optional<EnvelopePoint> illinois(double ratio, double target, double a, double b,
                                        double fa, double fb) const {
    if (fa == 0.0) return EnvelopePoint{model_(std::exp(a), ratio).g2, std::exp(a), ratio};
    if (fb == 0.0) return EnvelopePoint{model_(std::exp(b), ratio).g2, std::exp(b), ratio};
    int side = 0;
    ChartPoint last;
    double x = a;
    for (int it = 0; it < 60; ++it) {
      x = (a * fb - b * fa) / (fb - fa);
      last = model_(std::exp(x), ratio);
      const double fx = last.n_a - target;
      if (!std::isfinite(fx)) return std::nullopt;
      if (std::abs(fx) <= 1e-11 * std::max(1.0, target) || std::abs(b - a) < 1e-13) break;
      if (fx * fb > 0.0) {
        b = x;
        fb = fx;
        if (side == -1) fa *= 0.5;
        side = -1;
      } else {
        a = x;
        fa = fx;
        if (side == 1) fb *= 0.5;
        side = 1;
      }
    }
    return EnvelopePoint{last.g2, std::exp(x), ratio};
  }

  ChartModel model_;
  EnvelopeSearch opt_;
  std::vector<double> ratios_, pumps_;
  std::vector<std::vector<ChartPoint>> table_;
};

}  // namespace qexcite
