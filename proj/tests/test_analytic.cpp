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

#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "qexcite/analytic.hpp"
#include "qexcite/dynamics.hpp"
#include "qexcite/envelope.hpp"
#include "qexcite/observables.hpp"

namespace qexcite::analytic {
namespace {

/// Minimum of f over [lo, hi] by a dense scan followed by golden section.
template <class F>
double minimize(F f, double lo, double hi, int scan = 400) {
  double best_x = lo, best = f(lo);
  const double step = (hi - lo) / scan;
  for (int k = 1; k <= scan; ++k) {
    const double x = lo + k * step;
    if (const double v = f(x); v < best) best = v, best_x = x;
  }
  double a = std::max(lo, best_x - step), b = std::min(hi, best_x + step);
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int it = 0; it < 100; ++it) {
    const double c = b - phi * (b - a), d = a + phi * (b - a);
    if (f(c) < f(d))
      b = d;
    else
      a = c;
  }
  return std::min(best, f(0.5 * (a + b)));
}

SystemConfig incoherent_config(double pump, double r) {
  SystemConfig c;
  c.drive = Drive::incoherent;
  c.P_sigma = pump;
  c.gamma_a = r;
  c.tail_tol = 1e-13;
  return c;
}

// ---------------------------------------------------------------- helpers

TEST(RateCombo, IsLinear) {
  const RateCombo g{0.3, 2.0};
  EXPECT_EQ(g(1, 0), 0.3);
  EXPECT_EQ(g(0, 1), 2.0);
  EXPECT_NEAR(g(3, 2), 3 * 0.3 + 2 * 2.0, 1e-15);
  EXPECT_NEAR(g(2, 1) + g(1, 1), g(3, 2), 1e-15);
  EXPECT_NEAR(omega0(2.0, 0.5), std::sqrt(2.0), 1e-15);
}

// ----------------------------------------------------------------- sources

TEST(IncoherentSource, TableValues) {
  const IncoherentSource s = incoherent_source_stats(1.0);
  EXPECT_EQ(s.n_sigma, 0.5);
  EXPECT_EQ(s.linewidth, 2.0);
  EXPECT_EQ(incoherent_source_stats(0.0).n_sigma, 0.0);
  for (const double p : {0.0, 0.3, 7.0}) EXPECT_EQ(incoherent_source_stats(p).g2(0.0), 0.0);
  EXPECT_NEAR(s.g2(0.5), 1.0 - std::exp(-1.0), 1e-15);
}

TEST(CoherentSource, Populations) {
  EXPECT_NEAR(coherent_source_population(0.5), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(coherent_source_population(1e3), 0.5, 1e-6);
  EXPECT_NEAR(coherent_source_population(1e-4) / coherent_source_population_weak(1e-4), 1.0, 1e-7);
}

TEST(CoherentSource, G2StartsAtZero) {
  for (const double w : {1e-3, 0.1, 0.125, 0.5, 3.0}) EXPECT_NEAR(coherent_source_g2(0.0, w), 0.0, 1e-14) << w;
  EXPECT_EQ(coherent_source_g2_weak(0.0), 0.0);
}

TEST(CoherentSource, WeakDriveLimit) {
  for (double tau = 0.0; tau <= 10.0; tau += 0.25)
    EXPECT_NEAR(coherent_source_g2(tau, 1e-4), coherent_source_g2_weak(tau), 1e-6) << tau;
}

TEST(CoherentSource, ContinuousThroughCriticalDrive) {
  // G vanishes at omega = 1/8 and turns imaginary above it.
  EXPECT_NEAR(std::abs(mollow_gamma(0.125)), 0.0, 1e-15);
  EXPECT_GT(mollow_gamma(0.2).imag(), 0.0);
  for (const double tau : {0.5, 2.0, 6.0})
    EXPECT_NEAR(coherent_source_g2(tau, 0.125 - 1e-7), coherent_source_g2(tau, 0.125 + 1e-7), 1e-6);
}

TEST(CoherentSource, MatchesRegressionNumerics) {
  const double w = 3.0;
  SystemConfig c;
  c.Omega_sigma = w / std::sqrt(c.epsilon_1);
  const Liouvillian l = build_liouvillian(c, HilbertSpec::source());
  const DensityMatrix ss = steady_state(l);
  std::vector<double> tau;
  for (int k = 0; k <= 200; ++k) tau.push_back(0.03 * k);
  OdeOptions opt;
  opt.rtol = 1e-11;
  const auto g2 = two_time_g2(l, ss, tls_lowering(l.spec), tau, opt);
  for (std::size_t k = 0; k < tau.size(); ++k) EXPECT_NEAR(g2[k], coherent_source_g2(tau[k], w), 1e-4);
  EXPECT_NEAR(ss(1, 1).real(), coherent_source_population(w), 1e-12);
}

// -------------------------------------------------------- incoherent target

TEST(IncoherentTarget, EqualRates) {
  const TargetStats s = incoherent_target_stats(1.0, 1.0, 1.0);
  EXPECT_NEAR(s.n_a, 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(s.g2, 0.8, 1e-15);
}

TEST(IncoherentTarget, StrongPumpLimit) {
  const TargetStats s = incoherent_target_stats(1e9, 1.0, 1.0);
  EXPECT_NEAR(s.n_a, 0.0, 1e-8);
  EXPECT_NEAR(s.g2, 2.0, 1e-8);
  EXPECT_THROW(incoherent_target_stats(0.0, 0.0, 0.0), InvalidConfig);
}

TEST(IncoherentTarget, MatchesMasterEquation) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 20; ++k) {
    const double pump = std::exp(std::log(0.01) + u(rng) * std::log(1e4));
    const double r = std::exp(std::log(0.01) + u(rng) * std::log(1e4));
    const SteadyState ss = solve_steady(incoherent_config(pump, r));
    const TargetStats s = incoherent_target_stats(pump, 1.0, r);
    EXPECT_NEAR(population(ss.rho, Mode::target), s.n_a, 1e-8) << pump << " " << r;
    EXPECT_NEAR(gn_equal_time(ss.rho, 2), s.g2, 1e-8 * std::max(1.0, s.g2)) << pump << " " << r;
  }
}

TEST(IncoherentTarget, TwoPumpsPerPopulation) {
  for (const double r : {0.01, 0.3, 1.0, 5.0, 80.0}) {
    const IncoherentGeometry geo = incoherent_geometry(r);
    const double top = geo.turning.n_a;
    for (const double frac : {0.05, 0.3, 0.7, 0.99}) {
      const double n = frac * top;
      const auto roots = incoherent_pumps_for_population(n, r);
      ASSERT_EQ(roots.size(), 2u) << r << " " << n;
      EXPECT_LT(roots[0], geo.turning_pump);
      EXPECT_GT(roots[1], geo.turning_pump);
      for (const double p : roots) EXPECT_NEAR(incoherent_target_stats(p, 1.0, r).n_a, n, 1e-12 * std::max(1.0, 1.0 / n));
    }
    EXPECT_TRUE(incoherent_pumps_for_population(1.01 * top, r).empty());
  }
}

// ------------------------------------------------------ incoherent geometry

TEST(IncoherentGeometry, StartThresholdAtOneThird) {
  EXPECT_NEAR(incoherent_geometry(1.0 / 3.0).start.g2, 1.0, 1e-15);
  EXPECT_LT(incoherent_geometry(0.34).start.g2, 1.0);
  EXPECT_NEAR(incoherent_target_stats(1e-9, 1.0, 2.0).g2, incoherent_geometry(2.0).start.g2, 1e-8);
  EXPECT_THROW(incoherent_geometry(0.0), InvalidConfig);
}

TEST(IncoherentGeometry, TurningPointIsPopulationMaximum) {
  for (const double r : {0.05, 0.5, 1.0, 4.0, 30.0}) {
    const IncoherentGeometry geo = incoherent_geometry(r);
    const double best = -minimize([&](double lp) { return -incoherent_target_stats(std::exp(lp), 1.0, r).n_a; },
                                  std::log(1e-3), std::log(1e3));
    EXPECT_NEAR(geo.turning.n_a, best, 1e-10) << r;
    const TargetStats at = incoherent_target_stats(geo.turning_pump, 1.0, r);
    EXPECT_NEAR(at.n_a, geo.turning.n_a, 1e-11) << r;
    EXPECT_NEAR(at.g2, geo.turning.g2, 1e-12) << r;
  }
}

TEST(IncoherentGeometry, FastTargetCollapsesTurningPoint) {
  const IncoherentGeometry geo = incoherent_geometry(1e8);
  EXPECT_LT(geo.turning.n_a, 1e-7);
  EXPECT_LT(geo.turning.g2, 1e-3);
}

TEST(IncoherentGeometry, TrajectoryEquation) {
  for (const double r : {0.4, 1.0, 7.0})
    for (const double p : {0.01, 0.3, 1.0, 4.0, 100.0}) {
      const TargetStats s = incoherent_target_stats(p, 1.0, r);
      EXPECT_NEAR(incoherent_geometry(r).trajectory(s.g2), s.n_a, 1e-12) << r << " " << p;
    }
}

TEST(IncoherentGeometry, PopulationStaysBelowOne) {
  double last = 0.0;
  for (const double r : {10.0, 1.0, 0.1, 1e-2, 1e-4, 1e-6}) {
    const double top = incoherent_geometry(r).turning.n_a;
    EXPECT_LT(top, 1.0) << r;
    EXPECT_GT(top, last) << r;
    last = top;
  }
  EXPECT_GT(last, 0.99);
}

TEST(IncoherentEnvelope, TangentToTrajectories) {
  // Independent of the extractor: minimize g2 over r along both pump roots.
  for (double n = 0.05; n < 0.96; n += 0.1) {
    auto g2_at = [n](double log_r) {
      const double r = std::exp(log_r);
      double best = std::numeric_limits<double>::infinity();
      for (const double p : incoherent_pumps_for_population(n, r))
        best = std::min(best, incoherent_target_stats(p, 1.0, r).g2);
      return best;
    };
    EXPECT_NEAR(minimize(g2_at, std::log(1e-4), std::log(1e2), 2000), incoherent_envelope(n), 1e-6) << n;
  }
}

TEST(IncoherentEnvelope, ExtractorFindsIt) {
  EnvelopeSearch s;
  s.ratio_min = 1e-4;
  s.ratio_max = 1e2;
  s.ratio_points = 25;
  s.golden_iterations = 40;
  const EnvelopeExtractor ex(
      [](double p, double r) {
        const TargetStats t = incoherent_target_stats(p, 1.0, r);
        return ChartPoint{t.n_a, t.g2};
      },
      s);
  for (const double n : {0.05, 0.3, 0.6, 0.9}) {
    const EnvelopePoint e = ex.min_g2(n);
    ASSERT_TRUE(e.found()) << n;
    EXPECT_NEAR(e.g2, incoherent_envelope(n), 1e-6) << n;
    EXPECT_NEAR(incoherent_target_stats(e.pump, 1.0, e.ratio).n_a, n, 1e-9) << n;
  }
  EXPECT_FALSE(ex.min_g2(1.2).found());
}

// ---------------------------------------------------------- coherent target

TEST(CoherentTarget, WeakDriveStart) {
  for (const double r : {0.1, 1.0, 6.0}) {
    const TargetStats s = coherent_target_stats(1e-6, 0.5, 1.0, r);
    EXPECT_NEAR(s.g2, coherent_start(r).g2, 1e-9) << r;
    EXPECT_NEAR(s.n_a, 0.0, 1e-10);
  }
  EXPECT_EQ(coherent_start(1.0).g2, 0.25);
}

TEST(CoherentTarget, StrongDriveQuench) {
  for (const double eps1 : {0.2, 0.5, 0.9})
    for (const double r : {0.1, 1.0, 6.0}) {
      const TargetStats s = coherent_target_stats(1e7, eps1, 1.0, r);
      const TargetStats q = coherent_quench(r, eps1);
      EXPECT_NEAR(s.n_a, q.n_a, 1e-8) << eps1 << " " << r;
      EXPECT_NEAR(s.g2, q.g2, 1e-8) << eps1 << " " << r;
    }
}

TEST(CoherentTarget, QuenchCurveAtHalf) {
  const TargetStats q = coherent_quench(1.0, 0.5);
  EXPECT_EQ(q.n_a, 0.25);
  EXPECT_EQ(q.g2, 1.5);
  EXPECT_NEAR(coherent_geometry(0.5).quench_curve(0.25), 1.5, 1e-15);
  for (const double r : {0.2, 3.0, 40.0}) {
    const TargetStats p = coherent_quench(r, 0.3);
    EXPECT_NEAR(coherent_geometry(0.3).quench_curve(p.n_a), p.g2, 1e-14) << r;
  }
  EXPECT_THROW(coherent_geometry(1.2), InvalidConfig);
}

TEST(CoherentTarget, ScaleInvariant) {
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> u(0.05, 5.0);
  for (int k = 0; k < 20; ++k) {
    const double w = u(rng), gs = u(rng), ga = u(rng), lam = u(rng);
    const TargetStats a = coherent_target_stats(w, 0.5, gs, ga);
    const TargetStats b = coherent_target_stats(lam * w, 0.5, lam * gs, lam * ga);
    EXPECT_NEAR(a.g2, b.g2, 1e-12 * a.g2);
    EXPECT_NEAR(a.n_a, b.n_a, 1e-12 * a.n_a);
  }
}

TEST(CoherentTarget, MatchesMasterEquation) {
  std::mt19937_64 rng(47);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 20; ++k) {
    SystemConfig c;
    c.epsilon_1 = k % 4 == 0 ? 0.3 : 0.5;
    c.Omega_sigma = std::exp(std::log(0.05) + u(rng) * std::log(100.0));
    c.gamma_a = std::exp(std::log(0.05) + u(rng) * std::log(400.0));
    c.tail_tol = 1e-12;
    const SteadyState ss = solve_steady(c);
    const TargetStats s = coherent_target_stats(c.Omega_sigma, c.epsilon_1, 1.0, c.gamma_a);
    EXPECT_NEAR(population(ss.rho, Mode::target), s.n_a, 1e-6 * std::max(1e-3, s.n_a))
        << c.Omega_sigma << " " << c.gamma_a;
    EXPECT_NEAR(gn_equal_time(ss.rho, 2), s.g2, 1e-6 * std::max(1.0, s.g2)) << c.Omega_sigma << " " << c.gamma_a;
  }
}

TEST(CoherentEnvelope, BelowEveryScannedCrossing) {
  const CoherentEnvelope env(0.5);
  // Brute-force scan on a grid unrelated to the extractor's.
  std::vector<double> rs, ws;
  for (int k = 0; k < 97; ++k) rs.push_back(std::pow(10.0, -4.3 + 7.0 * k / 96));
  for (int k = 0; k < 2001; ++k) ws.push_back(std::pow(10.0, -3.7 + 6.0 * k / 2000));
  for (const double n : {0.05, 0.25, 1.0}) {
    const EnvelopePoint e = env.at(n);
    ASSERT_TRUE(e.found());
    const TargetStats at = coherent_target_stats(e.pump, 0.5, 1.0, e.ratio);
    EXPECT_NEAR(at.n_a, n, 1e-9 * std::max(1.0, n));
    EXPECT_NEAR(at.g2, e.g2, 1e-12);
    double scan = std::numeric_limits<double>::infinity();
    for (const double r : rs)
      for (std::size_t k = 0; k + 1 < ws.size(); ++k) {
        const TargetStats a = coherent_target_stats(ws[k], 0.5, 1.0, r);
        const TargetStats b = coherent_target_stats(ws[k + 1], 0.5, 1.0, r);
        if ((a.n_a - n) * (b.n_a - n) > 0.0) continue;
        const double t = (n - a.n_a) / (b.n_a - a.n_a);
        scan = std::min(scan, a.g2 + t * (b.g2 - a.g2));
      }
    EXPECT_LE(e.g2, scan + 1e-6) << n;
    EXPECT_GT(e.g2, scan - 1e-2 * scan) << n;
  }
}

// -------------------------------------------------------------------- fits

TEST(G2G3Fits, Arithmetic) {
  const G2G3Fits f = g2g3_fits();
  EXPECT_NEAR(f.low_pump(0.1), 0.002, 1e-15);
  EXPECT_NEAR(f.high_pump(10.0), 45.0, 1e-12);
}

}  // namespace
}  // namespace qexcite::analytic
