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

// Closed-form results for a two-level source exciting an oscillator, used as
// references for the numerics and to draw envelopes and fixed points.
// Rates default to units of gamma_sigma.

#include <cmath>
#include <complex>
#include <optional>
#include <vector>

#include "qexcite/envelope.hpp"
#include "qexcite/error.hpp"

namespace qexcite::analytic {

/// gamma_{i~j} = i gamma_a + j gamma_sigma.
struct RateCombo {
  double gamma_a;
  double gamma_sigma;
  double operator()(int i, int j) const { return i * gamma_a + j * gamma_sigma; }
};

/// Laser amplitude seen by the source through the first input channel.
inline double omega0(double omega, double epsilon_1) { return std::sqrt(epsilon_1) * omega; }

struct TargetStats {
  double n_a;
  double g2;
};

// ---------------------------------------------------------------- sources

struct IncoherentSource {
  double n_sigma;
  double linewidth;  // Lorentzian FWHM
  double decay;      // gamma_sigma + P
  double g2(double tau) const { return 1.0 - std::exp(-decay * tau); }
};

inline IncoherentSource incoherent_source_stats(double pump, double gamma_sigma = 1.0) {
  const double total = gamma_sigma + pump;
  return {total > 0.0 ? pump / total : 0.0, total, total};
}

/// Source population under coherent drive of amplitude omega (any strength).
inline double coherent_source_population(double omega, double gamma_sigma = 1.0) {
  return 4.0 * omega * omega / (gamma_sigma * gamma_sigma + 8.0 * omega * omega);
}

/// Low-drive limit 4 omega^2 / gamma^2.
inline double coherent_source_population_weak(double omega, double gamma_sigma = 1.0) {
  return 4.0 * omega * omega / (gamma_sigma * gamma_sigma);
}

/// Gamma = sqrt(gamma^2 - 64 omega^2), imaginary in the Mollow regime.
inline std::complex<double> mollow_gamma(double omega, double gamma_sigma = 1.0) {
  return std::sqrt(std::complex<double>(gamma_sigma * gamma_sigma - 64.0 * omega * omega, 0.0));
}

/// g2(tau) of a coherently driven two-level system (drive amplitude omega on
/// s^+ + s): 1 - e^{-3 g tau/4}[cosh(G tau/4) + (3 g / G) sinh(G tau/4)].
inline double coherent_source_g2(double tau, double omega, double gamma_sigma = 1.0) {
  const std::complex<double> big = mollow_gamma(omega, gamma_sigma);
  const double decay = std::exp(-0.75 * gamma_sigma * tau);
  if (std::abs(big) < 1e-12 * gamma_sigma) {
    // G -> 0: sinh(G x)/G -> x
    return 1.0 - decay * (1.0 + 0.75 * gamma_sigma * tau);
  }
  const std::complex<double> x = big * tau / 4.0;
  const std::complex<double> bracket = std::cosh(x) + 3.0 * gamma_sigma / big * std::sinh(x);
  return 1.0 - decay * bracket.real();
}

/// Weak-drive limit (1 - e^{-g tau/2})^2.
inline double coherent_source_g2_weak(double tau, double gamma_sigma = 1.0) {
  const double u = 1.0 - std::exp(-0.5 * gamma_sigma * tau);
  return u * u;
}

// ------------------------------------------------- incoherent SPS -> target

inline TargetStats incoherent_target_stats(double pump, double gamma_sigma, double gamma_a) {
  if (gamma_sigma + pump + gamma_a <= 0.0) throw InvalidConfig("all rates vanish");
  const double s = gamma_sigma + pump;
  const double n_a = s > 0.0 ? 4.0 * pump * gamma_sigma / (s * (s + gamma_a)) : 0.0;
  return {n_a, 2.0 * s / (s + 3.0 * gamma_a)};
}

/// Pumps giving target population n_a at ratio r (gamma_sigma = 1): the
/// positive roots of n_a s^2 + (n_a r - 4) s + 4 = 0 with s = 1 + P.
inline std::vector<double> incoherent_pumps_for_population(double n_a, double r) {
  const double a = n_a, b = n_a * r - 4.0, c = 4.0;
  const double disc = b * b - 4.0 * a * c;
  std::vector<double> out;
  if (disc < 0.0 || a <= 0.0) return out;
  const double sq = std::sqrt(disc);
  for (const double s : {(-b - sq) / (2.0 * a), (-b + sq) / (2.0 * a)})
    if (s - 1.0 > 0.0) out.push_back(s - 1.0);
  if (out.size() == 2 && out[0] == out[1]) out.pop_back();
  return out;
}

struct IncoherentGeometry {
  double ratio;
  TargetStats start;    // P -> 0
  TargetStats turning;  // maximum population
  double turning_pump;  // sqrt(gamma_sigma (gamma_a + gamma_sigma))
  double optimum_pump;  // gamma_sigma
  TargetStats quench;   // P -> infinity

  /// Population along the trajectory as a function of its g2, obtained by
  /// eliminating the pump: (2/3)(2 - g2)(3 g2 r - (2 - g2)) / (g2 (1 + g2) r^2).
  double trajectory(double g2) const {
    const double r = ratio;
    return 2.0 / 3.0 * (2.0 - g2) * (3.0 * g2 * r - (2.0 - g2)) / (g2 * (1.0 + g2) * r * r);
  }
};

inline IncoherentGeometry incoherent_geometry(double r) {
  if (!(r > 0.0)) throw InvalidConfig("ratio gamma_a / gamma_sigma must be positive");
  const double root = std::sqrt(1.0 + r);
  return {r,
          {0.0, 2.0 / (1.0 + 3.0 * r)},
          // 4 (2 + r - 2 root) / r^2, written without cancellation at small r
          {4.0 / ((root + 1.0) * (root + 1.0)), 2.0 / (3.0 * root - 2.0)},
          root,
          1.0,
          {0.0, 2.0}};
}

/// Best g2 reachable at population n_a with an incoherent source.
inline double incoherent_envelope(double n_a) { return 2.0 * n_a / (3.0 - 2.0 * n_a); }

// --------------------------------------------------- coherent SPS -> target

/// Resonant two-channel drive; Omega0 = sqrt(epsilon_1) Omega.
inline TargetStats coherent_target_stats(double omega, double epsilon_1, double gamma_sigma,
                                         double gamma_a) {
  const RateCombo g{gamma_a, gamma_sigma};
  const double w = omega0(omega, epsilon_1);
  const double w2 = w * w, w4 = w2 * w2;
  const double eps2 = 1.0 - epsilon_1;
  const double g10 = g(1, 0), g01 = g(0, 1), g11 = g(1, 1), g12 = g(1, 2), g21 = g(2, 1),
               g31 = g(3, 1), g32 = g(3, 2);

  const double n_num = 16.0 * eps2 * g01 * w2 * (g11 * g11 * g12 + 8.0 * g10 * w2);
  const double n_den = g10 * g11 * (g01 * g01 + 8.0 * w2) * (g11 * g12 + 16.0 * w2);

  const double poly = 17.0 * g10 * g10 * g10 + 29.0 * g10 * g10 * g01 + 18.0 * g10 * g01 * g01 +
                      4.0 * g01 * g01 * g01;
  const double inner = g11 * g21 * g21 * g31 * g31 * g12 * g32 + 8.0 * g10 * g31 * poly * w2 +
                       192.0 * g10 * g10 * g21 * w4;
  const double lead = g11 * g11 * g12 + 8.0 * g10 * w2;
  const double g_num = g11 * (g01 * g01 + 8.0 * w2) * (g11 * g12 + 16.0 * w2) * inner;
  const double g_den = g21 * g31 * (g11 * g21 + 8.0 * w2) * (g31 * g32 + 16.0 * w2) * lead * lead;
  return {n_num / n_den, g_num / g_den};
}

/// Omega -> 0 end point (0, 1/(1+r)^2).
inline TargetStats coherent_start(double r) { return {0.0, 1.0 / ((1.0 + r) * (1.0 + r))}; }

/// Omega -> infinity quench point ((1-eps1)/(1+r), 3(1+r)/(1+3r)).
inline TargetStats coherent_quench(double r, double epsilon_1) {
  return {(1.0 - epsilon_1) / (1.0 + r), 3.0 * (1.0 + r) / (1.0 + 3.0 * r)};
}

struct CoherentGeometry {
  double epsilon_1;
  /// Locus of quench points: g2 = 3 eps2 / (3 eps2 - 2 n_a).
  double quench_curve(double n_a) const {
    const double e2 = 1.0 - epsilon_1;
    return 3.0 * e2 / (3.0 * e2 - 2.0 * n_a);
  }
  static double envelope_small(double n_a) { return 5.0 * n_a * n_a; }
  static double envelope_large(double n_a) { return 1.0 - 1.0 / (3.0 * (n_a + 5.0)); }
};

inline CoherentGeometry coherent_geometry(double epsilon_1) {
  if (!(epsilon_1 >= 0.0 && epsilon_1 <= 1.0)) throw InvalidConfig("epsilon_1 must lie in [0, 1]");
  return {epsilon_1};
}

/// Closed-form chart model (pump = Omega, ratio = gamma_a / gamma_sigma).
inline ChartModel coherent_chart_model(double epsilon_1) {
  return [epsilon_1](double omega, double r) {
    const TargetStats s = coherent_target_stats(omega, epsilon_1, 1.0, r);
    return ChartPoint{s.n_a, s.g2};
  };
}

inline EnvelopeSearch coherent_envelope_search() {
  EnvelopeSearch s;
  s.ratio_min = 1e-5;
  s.ratio_max = 1e3;
  s.ratio_points = 81;
  s.pump_min = 1e-4;
  s.pump_max = 1e3;
  s.pump_points = 141;
  s.golden_iterations = 40;
  s.window_points = 13;
  return s;
}

/// Numerically extracted lower envelope of the resonant coherent source,
/// minimized over (Omega, gamma_a / gamma_sigma).
class CoherentEnvelope {
 public:
  explicit CoherentEnvelope(double epsilon_1 = 0.5)
      : extractor_(coherent_chart_model(epsilon_1), coherent_envelope_search()) {}
  EnvelopePoint at(double n_a) const { return extractor_.min_g2(n_a); }

 private:
  EnvelopeExtractor extractor_;
};

// ------------------------------------------------------ (g2, g3) monomials

struct MonomialFit {
  double coefficient;
  double exponent;
  double operator()(double g2) const { return coefficient * std::pow(g2, exponent); }
};

struct G2G3Fits {
  MonomialFit low_pump;   // g3 ~ 0.2 g2^2
  MonomialFit high_pump;  // g3 ~ 4.5 g2
};

inline G2G3Fits g2g3_fits() { return {{0.2, 2.0}, {4.5, 1.0}}; }

}  // namespace qexcite::analytic
