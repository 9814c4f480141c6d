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

// Charting the oscillator's Hilbert space by (population, g(n)).
//
// Fock formula note: for a Fock state |m> the correlator is
// g(n) = m! / ((m - n)! m^n); the frontier below reduces to it at integer n_a.

#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "qexcite/error.hpp"
#include "qexcite/hilbert.hpp"
#include "qexcite/observables.hpp"

namespace qexcite::chart {

namespace detail {

/// m (m - 1) ... (m - k + 1); zero whenever 0 <= m < k.
inline double falling(double m, int k) {
  double r = 1.0;
  for (int j = 0; j < k; ++j) r *= m - j;
  return r;
}

inline void require_positive(double n_a) {
  if (!(n_a > 0.0) || !std::isfinite(n_a))
    throw Infeasible("population must be positive and finite, got " + std::to_string(n_a));
}

}  // namespace detail

/// Lowest reachable g2 at population n_a: floor(n)(2 n - floor(n) - 1) / n^2.
inline double boundary_g2(double n_a) {
  detail::require_positive(n_a);
  const double f = std::floor(n_a);
  return f * (2.0 * n_a - f - 1.0) / (n_a * n_a);
}

/// Lowest reachable g(n), regularized so that 1/(negative integer)! = 0:
/// [f!/(f-n)! + n (n_a - f) f!/(f+1-n)!] / n_a^n with f = floor(n_a).
inline double boundary_gn(int n, double n_a) {
  if (n < 2) throw Infeasible("frontier order must be >= 2");
  detail::require_positive(n_a);
  const double f = std::floor(n_a);
  return (detail::falling(f, n) + n * (n_a - f) * detail::falling(f, n - 1)) / std::pow(n_a, n);
}

/// sqrt(p)|n> + sqrt(1-p) e^{i theta} |n+1>.
struct DuoState {
  int n_floor = 0;
  double weight = 1.0;  // p(n_floor)
  double phase = 0.0;

  double population() const { return n_floor + (1.0 - weight); }
};

inline DuoState duo_parameters(double n_a, double theta = 0.0) {
  detail::require_positive(n_a);
  const double f = std::floor(n_a);
  return {static_cast<int>(f), f - n_a + 1.0, std::fmod(theta, 2.0 * std::numbers::pi)};
}

/// The Fock duo of population n_a as a pure oscillator state. The space holds
/// Fock states up to max(floor(n_a) + 1, n_max).
inline StateVector fock_duo(double n_a, double theta = 0.0, int n_max = 0) {
  const DuoState duo = duo_parameters(n_a, theta);
  const HilbertSpec spec = HilbertSpec::oscillator(std::max(duo.n_floor + 1, n_max));
  Vector v = Vector::Zero(spec.dim());
  v(duo.n_floor) = std::sqrt(duo.weight);
  v(duo.n_floor + 1) = std::sqrt(1.0 - duo.weight) * std::polar(1.0, duo.phase);
  v.normalize();
  return {spec, std::move(v)};
}

/// A diagonal state on {0, floor(n_a), k} (or {0, 1, k} when n_a < 1) with the
/// exact population n_a and correlator g2_target >= boundary_g2(n_a). k is the
/// smallest integer above max(n_a g2, floor(n_a)) giving valid probabilities.
inline std::vector<double> prop2_state(double n_a, double g2_target) {
  detail::require_positive(n_a);
  const double bound = boundary_g2(n_a);
  if (!(g2_target >= bound - 1e-12))
    throw Infeasible("g2 = " + std::to_string(g2_target) + " lies below the frontier " +
                     std::to_string(bound) + " at n_a = " + std::to_string(n_a));
  const double g2 = std::max(g2_target, bound);
  const double f = std::floor(n_a);
  const double g = n_a * n_a * g2;  // second factorial moment
  constexpr double slack = 1e-12;
  auto valid = [](double x) { return x >= -slack && x <= 1.0 + slack; };

  const double floor_k = std::max({n_a * g2, f, f == 0.0 ? 1.0 : 0.0});
  const long k_start = static_cast<long>(std::floor(floor_k)) + 1;
  for (long k = k_start; k < k_start + 1'000'000; ++k) {
    const double kd = static_cast<double>(k);
    double p0, pf, pk;
    long mid;
    if (f >= 1.0) {
      mid = static_cast<long>(f);
      pf = n_a * (kd - 1.0 - n_a * g2) / (f * (kd - f));
      p0 = (kd - n_a) / kd - pf * (kd - f) / kd;
      pk = 1.0 - p0 - pf;
    } else {
      mid = 1;
      p0 = (g + kd * (1.0 - n_a)) / kd;
      pf = (kd * (1.0 - p0) - n_a) / (kd - 1.0);
      pk = 1.0 - p0 - pf;
    }
    if (!(valid(p0) && valid(pf) && valid(pk))) continue;
    std::vector<double> p(static_cast<std::size_t>(k + 1), 0.0);
    p[0] += std::clamp(p0, 0.0, 1.0);
    p[static_cast<std::size_t>(mid)] += std::clamp(pf, 0.0, 1.0);
    p[static_cast<std::size_t>(k)] += std::clamp(pk, 0.0, 1.0);
    return p;
  }
  throw Infeasible("no three-point state found for the requested (n_a, g2)");
}

struct BruteForceResult {
  double value = std::numeric_limits<double>::infinity();
  std::vector<double> argmin;  // distribution on {0..m_max}
};

/// Minimum of g(order) over every Fock distribution on {0..m_max} with mean n_a.
///
/// With the mean fixed, n_a^order g(order) is linear in p, so the minimum over
/// the feasible polytope sits at a vertex. The vertices are the one- and
/// two-point distributions {i, j} with i <= n_a <= j; all of them are
/// enumerated (no adjacency of i and j is assumed).
inline BruteForceResult bruteforce_min_gn(int order, double n_a, int m_max) {
  detail::require_positive(n_a);
  if (n_a > m_max) throw Infeasible("population exceeds the support {0..m_max}");
  BruteForceResult best;
  const double scale = std::pow(n_a, order);
  auto consider = [&](std::vector<double> p) {
    double moment = 0.0;
    for (std::size_t m = 0; m < p.size(); ++m) moment += detail::falling(static_cast<double>(m), order) * p[m];
    const double v = moment / scale;
    if (v < best.value) {
      best.value = v;
      best.argmin = std::move(p);
    }
  };
  const std::size_t size = static_cast<std::size_t>(m_max + 1);
  for (int i = 0; i <= m_max; ++i) {
    if (i == n_a) {
      std::vector<double> p(size, 0.0);
      p[static_cast<std::size_t>(i)] = 1.0;
      consider(std::move(p));
      continue;
    }
    if (i > n_a) continue;
    for (int j = i + 1; j <= m_max; ++j) {
      if (j < n_a) continue;
      std::vector<double> p(size, 0.0);
      const double w = (j - n_a) / (j - i);  // weight on i
      p[static_cast<std::size_t>(i)] += w;
      p[static_cast<std::size_t>(j)] += 1.0 - w;
      consider(std::move(p));
    }
  }
  return best;
}

inline BruteForceResult bruteforce_min_g2(double n_a, int m_max) {
  return bruteforce_min_gn(2, n_a, m_max);
}

}  // namespace qexcite::chart
