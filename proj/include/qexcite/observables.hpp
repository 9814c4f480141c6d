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

#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qexcite/config.hpp"
#include "qexcite/dynamics.hpp"
#include "qexcite/error.hpp"
#include "qexcite/hilbert.hpp"

namespace qexcite {

enum class Mode { target, source };
enum class Subsystem { target, source };

/// Populations below this make normalized correlators undefined.
inline constexpr double kMinPopulation = 1e-12;

/// <a^+a> (target) or <s^+s> (source).
inline double population(const DensityMatrix& rho, Mode mode) {
  const Operator c =
      mode == Mode::target ? fock_annihilation(rho.spec()) : tls_lowering(rho.spec());
  return expectation(rho, c.dagger() * c).real();
}

/// g(n) = <a^+^n a^n> / <a^+a>^n of the target, from the operator products.
inline double gn_equal_time(const DensityMatrix& rho, int n) {
  if (n < 1) throw InvalidConfig("correlator order must be >= 1");
  const Operator a = fock_annihilation(rho.spec());
  const double na = expectation(rho, a.dagger() * a).real();
  if (!(na > kMinPopulation))
    throw UndefinedCorrelator("g(" + std::to_string(n) + ") undefined for population " +
                              std::to_string(na));
  const Operator an = a.pow(n);
  return expectation(rho, an.dagger() * an).real() / std::pow(na, n);
}

/// g(n) from a Fock distribution: sum m!/(m-n)! p(m) / (sum m p(m))^n.
inline double diagonal_gn(std::span<const double> p, int n) {
  if (n < 1) throw InvalidConfig("correlator order must be >= 1");
  double norm = 0.0, mean = 0.0, moment = 0.0;
  for (std::size_t m = 0; m < p.size(); ++m) {
    norm += p[m];
    mean += static_cast<double>(m) * p[m];
    double falling = 1.0;
    for (int k = 0; k < n; ++k) falling *= static_cast<double>(m) - k;
    moment += falling * p[m];
  }
  if (std::abs(norm - 1.0) > 1e-12) throw InvalidState("distribution does not sum to one");
  if (!(mean > 0.0)) throw UndefinedCorrelator("distribution has zero mean");
  return moment / std::pow(mean, n);
}

/// Partial trace onto one subsystem of a composite state.
inline DensityMatrix reduced_density_matrix(const DensityMatrix& rho, Subsystem keep) {
  const HilbertSpec& sp = rho.spec();
  if (sp.space != Space::composite) throw DimensionMismatch("partial trace needs a composite state");
  const int levels = sp.n_max + 1;
  const Matrix& m = rho.matrix();
  if (keep == Subsystem::target) {
    Matrix r = m.block(0, 0, levels, levels) + m.block(levels, levels, levels, levels);
    return {HilbertSpec::oscillator(sp.n_max), std::move(r)};
  }
  Matrix r(2, 2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r(i, j) = m.block(i * levels, j * levels, levels, levels).trace();
  return {HilbertSpec::source(), std::move(r)};
}

namespace detail {

/// Generalized Laguerre polynomial L_n^{(k)}(x) by its three-term recurrence.
inline double laguerre(int n, int k, double x) {
  if (n == 0) return 1.0;
  double prev = 1.0, cur = 1.0 + k - x;
  for (int j = 1; j < n; ++j) {
    const double next = ((2.0 * j + 1.0 + k - x) * cur - (j + k) * prev) / (j + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

/// <row| D(beta) |col> for the displacement operator of an untruncated oscillator.
inline cplx displacement_element(int row, int col, cplx beta) {
  const double x = std::norm(beta);
  const double gauss = std::exp(-0.5 * x);
  if (row >= col) {
    const int k = row - col;
    const double pref = std::exp(0.5 * (std::lgamma(col + 1.0) - std::lgamma(row + 1.0)));
    return pref * std::pow(beta, k) * gauss * laguerre(col, k, x);
  }
  const int k = col - row;
  const double pref = std::exp(0.5 * (std::lgamma(row + 1.0) - std::lgamma(col + 1.0)));
  return pref * std::pow(-std::conj(beta), k) * gauss * laguerre(row, k, x);
}

}  // namespace detail

/// Wigner function at phase-space point alpha = x + i p:
/// W = (2/pi) Tr[rho D(alpha) Pi D^+(alpha)] = (2/pi) Tr[rho D(2 alpha) Pi],
/// with Pi the parity. Vacuum gives W(0) = 2/pi and the norm is
/// int W dx dp = 1. Matrix elements of D(2 alpha) are exact (Laguerre form),
/// not truncated.
inline double wigner_at(const DensityMatrix& rho_osc, cplx alpha) {
  if (rho_osc.spec().space != Space::oscillator)
    throw DimensionMismatch("Wigner function needs an oscillator-only state");
  const int levels = rho_osc.spec().n_max + 1;
  const cplx beta = 2.0 * alpha;
  cplx w = 0.0;
  for (int m = 0; m < levels; ++m)
    for (int n = 0; n < levels; ++n) {
      const cplx r = rho_osc(m, n);
      if (r == cplx(0.0)) continue;
      // Tr[rho D Pi] = sum_{m,n} rho_{mn} <n| D |m> (-1)^m
      w += r * detail::displacement_element(n, m, beta) * ((m % 2 == 0) ? 1.0 : -1.0);
    }
  return 2.0 / M_PI * w.real();
}

struct WignerField {
  std::vector<double> x, p;
  Eigen::MatrixXd values;  // values(i, j) = W(x[i] + i p[j])
  double norm = 0.0;       // trapezoid estimate of int W dx dp
};

/// Wigner function on a rectangular grid. Throws GridTooSmall when the grid
/// does not hold the norm within 1e-3.
inline WignerField wigner(const DensityMatrix& rho_osc, std::span<const double> x_grid,
                          std::span<const double> p_grid) {
  if (x_grid.size() < 2 || p_grid.size() < 2) throw GridTooSmall("Wigner grid needs >= 2 points per axis");
  WignerField f;
  f.x.assign(x_grid.begin(), x_grid.end());
  f.p.assign(p_grid.begin(), p_grid.end());
  f.values.resize(static_cast<Eigen::Index>(x_grid.size()), static_cast<Eigen::Index>(p_grid.size()));
  for (std::size_t i = 0; i < x_grid.size(); ++i)
    for (std::size_t j = 0; j < p_grid.size(); ++j)
      f.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          wigner_at(rho_osc, cplx(x_grid[i], p_grid[j]));
  auto weights = [](std::span<const double> g) {
    std::vector<double> w(g.size(), 0.0);
    for (std::size_t k = 0; k + 1 < g.size(); ++k) {
      const double h = 0.5 * (g[k + 1] - g[k]);
      w[k] += h;
      w[k + 1] += h;
    }
    return w;
  };
  const auto wx = weights(x_grid), wp = weights(p_grid);
  for (std::size_t i = 0; i < x_grid.size(); ++i)
    for (std::size_t j = 0; j < p_grid.size(); ++j)
      f.norm += wx[i] * wp[j] * f.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  if (std::abs(f.norm - 1.0) > 1e-3)
    throw GridTooSmall("Wigner grid holds norm " + std::to_string(f.norm) + ", widen or refine it");
  return f;
}

/// Fock populations rho_11, rho_22, rho_33 of the target satisfy
/// rho_22 > max(rho_11 / 2, rho_33).
inline bool two_photon_dominance(const std::vector<double>& p) {
  if (p.size() < 4) return false;
  return p[2] > std::max(p[1] / 2.0, p[3]);
}

/// One sweep point.
struct ObservableRecord {
  SystemConfig config;
  double param1 = 0.0;
  std::optional<double> param2;
  double n_a = 0.0;
  std::optional<double> g2, g3;  // empty when undefined
  double n_sigma = 0.0;
  bool rho22_check = false;
  int n_max = 0;
  double tail_mass = 0.0;
  std::string status = "ok";
};

/// Record of a solved steady state; correlators are left undefined below
/// kMinPopulation.
inline ObservableRecord make_record(const SteadyState& ss) {
  ObservableRecord r;
  r.config = ss.config;
  r.n_a = population(ss.rho, Mode::target);
  r.n_sigma = population(ss.rho, Mode::source);
  if (r.n_a > kMinPopulation) {
    r.g2 = gn_equal_time(ss.rho, 2);
    r.g3 = gn_equal_time(ss.rho, 3);
  }
  r.rho22_check = two_photon_dominance(fock_distribution(ss.rho));
  r.n_max = ss.n_max;
  r.tail_mass = ss.tail_mass;
  return r;
}

}  // namespace qexcite
