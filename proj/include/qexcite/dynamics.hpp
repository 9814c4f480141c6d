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

// Master-equation generators, steady states, time propagation and two-time
// correlators of the source/target system.
//
// Density matrices are vectorized column-major: element (i, j) of rho sits at
// i + j * dim, so vec(A rho B) = (B^T (x) A) vec(rho).

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "qexcite/config.hpp"
#include "qexcite/error.hpp"
#include "qexcite/hilbert.hpp"

namespace qexcite {

using SparseMatrix = Eigen::SparseMatrix<cplx, Eigen::ColMajor, int>;
using Triplet = Eigen::Triplet<cplx, int>;

struct Liouvillian {
  HilbertSpec spec;
  SparseMatrix matrix;  // dim^2 x dim^2

  int size() const { return static_cast<int>(matrix.rows()); }
  Matrix dense() const { return Matrix(matrix); }
  Vector apply(const Vector& v) const { return matrix * v; }
};

namespace detail {

struct Entry {
  int row, col;
  cplx value;
};

inline std::vector<Entry> nonzeros(const Matrix& m) {
  std::vector<Entry> out;
  for (int j = 0; j < m.cols(); ++j)
    for (int i = 0; i < m.rows(); ++i)
      if (m(i, j) != cplx(0.0)) out.push_back({i, j, m(i, j)});
  return out;
}

/// Appends scale * (a (x) b) to the triplet list.
inline void add_kron(std::vector<Triplet>& out, const Matrix& a, const Matrix& b, cplx scale) {
  if (scale == cplx(0.0)) return;
  const auto na = nonzeros(a);
  const auto nb = nonzeros(b);
  const int br = static_cast<int>(b.rows());
  const int bc = static_cast<int>(b.cols());
  for (const auto& x : na)
    for (const auto& y : nb)
      out.emplace_back(x.row * br + y.row, x.col * bc + y.col, scale * x.value * y.value);
}

/// (rate / 2) (2 c rho c^dag - c^dag c rho - rho c^dag c)
inline void add_dissipator(std::vector<Triplet>& out, const Matrix& c, double rate) {
  if (rate == 0.0) return;
  const auto d = c.rows();
  const Matrix id = Matrix::Identity(d, d);
  const Matrix cdc = c.adjoint() * c;
  add_kron(out, c.conjugate(), c, rate);
  add_kron(out, id, cdc, -0.5 * rate);
  add_kron(out, cdc.transpose(), id, -0.5 * rate);
}

inline double max_abs(const SparseMatrix& m) {
  double r = 0.0;
  for (int k = 0; k < m.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(m, k); it; ++it) r = std::max(r, std::abs(it.value()));
  return r;
}

inline Matrix unvec(const Vector& v, int dim) {
  return Eigen::Map<const Matrix>(v.data(), dim, dim);
}

inline Vector vec(const Matrix& m) { return Eigen::Map<const Vector>(m.data(), m.size()); }

/// L with row 0 replaced by the trace functional, the system used for
/// stationary and resolvent solves pinned by a trace condition.
inline SparseMatrix trace_pinned(const SparseMatrix& l, int dim) {
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(l.nonZeros()) + static_cast<std::size_t>(dim));
  for (int k = 0; k < l.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(l, k); it; ++it)
      if (it.row() != 0) t.emplace_back(it.row(), it.col(), it.value());
  for (int i = 0; i < dim; ++i) t.emplace_back(0, i + i * dim, cplx(1.0));
  SparseMatrix a(l.rows(), l.cols());
  a.setFromTriplets(t.begin(), t.end());
  return a;
}

inline HilbertSpec default_spec(const SystemConfig& c) {
  return HilbertSpec::composite(c.n_max > 0 ? c.n_max : 8);
}

}  // namespace detail

/// Hamiltonian in the frame rotating at the laser frequency.
///
///   hamiltonian schemes: D_s s^+s + D_a a^+a + g (a^+ s + s^+ a) + drive on s
///   cascaded, two-channel: D_s s^+s + D_a a^+a + sqrt(eps1) Omega (s^+ + s)
///   cascaded, single-channel: detunings - i sqrt(g_x) E (x^+ - x) for x = s, a
///
/// with g = N sqrt(gamma_a gamma_sigma) / 2 and E = Omega / sqrt(gamma_sigma).
/// On a source-only space the oscillator terms are dropped.
inline Operator build_hamiltonian(const SystemConfig& c, const HilbertSpec& spec) {
  validate(c);
  if (!c.rotating_frame && c.drive != Drive::incoherent)
    throw UnsupportedRequest("time-dependent (lab-frame) drives are not supported; use the rotating frame");
  const cplx i(0.0, 1.0);
  const Operator s = tls_lowering(spec);
  Operator h = c.delta_sigma * (s.dagger() * s);
  const bool with_target = spec.has_oscillator();
  std::optional<Operator> a;
  if (with_target) {
    a = fock_annihilation(spec);
    h = h + c.delta_a * (a->dagger() * *a);
  }

  switch (c.drive) {
    case Drive::incoherent:
      break;
    case Drive::coherent_two_channel:
      h = h + c.effective_drive() * (s.dagger() + s);
      break;
    case Drive::coherent_single_channel: {
      const double field = c.Omega_sigma > 0.0 ? c.Omega_sigma / std::sqrt(c.gamma_sigma) : 0.0;
      h = h - i * std::sqrt(c.gamma_sigma) * field * (s.dagger() - s);
      if (with_target) h = h - i * std::sqrt(c.gamma_a) * field * (a->dagger() - *a);
      break;
    }
  }

  if (with_target && c.scheme != CouplingScheme::cascaded)
    h = h + c.hamiltonian_coupling() * (a->dagger() * s + s.dagger() * *a);
  return h;
}

inline Operator build_hamiltonian(const SystemConfig& c) {
  return build_hamiltonian(c, detail::default_spec(c));
}

/// Generator L with d vec(rho)/dt = L vec(rho).
inline Liouvillian build_liouvillian(const SystemConfig& c, const HilbertSpec& spec) {
  validate(c);
  if (spec.space == Space::oscillator)
    throw DimensionMismatch("the generator needs the source two-level system");
  const int d = spec.dim();
  const cplx i(0.0, 1.0);
  const Matrix id = Matrix::Identity(d, d);
  const Matrix h = build_hamiltonian(c, spec).matrix();
  const Matrix s = tls_lowering(spec).matrix();

  std::vector<Triplet> t;
  detail::add_kron(t, id, h, -i);
  detail::add_kron(t, h.transpose(), id, i);

  if (c.scheme != CouplingScheme::hamiltonian_no_source_decay)
    detail::add_dissipator(t, s, c.gamma_sigma);
  if (c.drive == Drive::incoherent) detail::add_dissipator(t, s.adjoint(), c.P_sigma);
  detail::add_dissipator(t, s, c.gamma_sigma_star);
  detail::add_dissipator(t, s.adjoint() * s, c.gamma_phi);

  if (spec.has_oscillator()) {
    const Matrix a = fock_annihilation(spec).matrix();
    detail::add_dissipator(t, a, c.gamma_a);
    if (c.scheme == CouplingScheme::cascaded) {
      // -k ([a^+, s rho] + [rho s^+, a])
      const double k = c.cascaded_coupling();
      detail::add_kron(t, id, a.adjoint() * s, -k);
      detail::add_kron(t, a.conjugate(), s, k);
      detail::add_kron(t, (s.adjoint() * a).transpose(), id, -k);
      detail::add_kron(t, s.conjugate(), a, k);
    }
  }

  SparseMatrix m(d * d, d * d);
  m.setFromTriplets(t.begin(), t.end());
  m.prune(cplx(0.0));
  return {spec, std::move(m)};
}

inline Liouvillian build_liouvillian(const SystemConfig& c) {
  return build_liouvillian(c, detail::default_spec(c));
}

/// Unique stationary state: one row of L is replaced by the trace condition
/// and the system is solved by sparse LU; the result is Hermitized.
inline DensityMatrix steady_state(const Liouvillian& l) {
  const int d = l.spec.dim();
  const SparseMatrix a = detail::trace_pinned(l.matrix, d);
  Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;
  lu.analyzePattern(a);
  lu.factorize(a);
  if (lu.info() != Eigen::Success)
    throw NonUniqueSteadyState("non-unique steady state (singular pinned generator: " +
                               lu.lastErrorMessage() + ")");
  Vector b = Vector::Zero(a.rows());
  b(0) = 1.0;
  const Vector x = lu.solve(b);
  if (lu.info() != Eigen::Success || !x.allFinite())
    throw NonUniqueSteadyState("non-unique steady state (solve failed)");
  if (x.cwiseAbs().maxCoeff() > 1.0 + 1e-6)
    throw NonUniqueSteadyState("non-unique steady state (unbounded solution of the pinned system)");
  const double residual = (l.matrix * x).cwiseAbs().maxCoeff();
  if (residual > 1e-8 * std::max(1.0, detail::max_abs(l.matrix)))
    throw ConvergenceError("steady-state residual " + std::to_string(residual) + " too large");
  Matrix rho = detail::unvec(x, d);
  rho = 0.5 * (rho + rho.adjoint()).eval();
  try {
    return {l.spec, std::move(rho)};
  } catch (const InvalidState& e) {
    throw ConvergenceError(std::string("steady state is not a density matrix: ") + e.what());
  }
}

/// Oscillator Fock distribution p(n) of a composite or oscillator state.
inline std::vector<double> fock_distribution(const DensityMatrix& rho) {
  const HilbertSpec& sp = rho.spec();
  if (!sp.has_oscillator()) throw DimensionMismatch("state has no oscillator");
  std::vector<double> p(static_cast<std::size_t>(sp.n_max + 1), 0.0);
  const int tls = sp.has_tls() ? 2 : 1;
  for (int s = 0; s < tls; ++s)
    for (int n = 0; n <= sp.n_max; ++n) {
      const int k = s * (sp.n_max + 1) + n;
      p[static_cast<std::size_t>(n)] += rho(k, k).real();
    }
  return p;
}

/// Steady state together with the truncation actually used.
struct SteadyState {
  SystemConfig config;
  DensityMatrix rho;
  int n_max;
  double tail_mass;  // p(n_max)
};

/// Steady state with the oscillator truncation grown until p(n_max) < tail_tol.
/// Undriven configurations return the dark state |g,0><g,0| directly.
inline SteadyState solve_steady(const SystemConfig& c, int n_cap = 160) {
  validate(c);
  int n = c.n_max > 0 ? c.n_max : 8;
  if (!c.is_driven()) {
    const HilbertSpec spec = HilbertSpec::composite(std::max(n, 1));
    Matrix rho = Matrix::Zero(spec.dim(), spec.dim());
    rho(0, 0) = 1.0;
    return {c, DensityMatrix(spec, std::move(rho)), spec.n_max, 0.0};
  }
  for (;;) {
    const HilbertSpec spec = HilbertSpec::composite(n);
    DensityMatrix rho = steady_state(build_liouvillian(c, spec));
    const double tail = std::abs(fock_distribution(rho).back());
    if (tail < c.tail_tol) return {c, std::move(rho), n, tail};
    if (n >= n_cap)
      throw ConvergenceError("truncation did not converge: p(" + std::to_string(n) +
                             ") = " + std::to_string(tail));
    n = std::min(n_cap, n + std::max(4, n / 2));
  }
}

struct OdeOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  double h_min = 1e-13;
};

/// Adaptive Dormand-Prince 5(4) integration of dy/dt = L y, reporting y at each
/// requested time (times increasing, the first one >= 0; integration starts at 0).
inline std::vector<Vector> propagate(const SparseMatrix& l, Vector y, std::span<const double> times,
                                     const OdeOptions& opt = {}) {
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (times[k] < 0.0 || (k > 0 && times[k] <= times[k - 1]))
      throw InvalidConfig("time grid must be increasing and start at t >= 0");
  }
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                          a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                          a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                          e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  std::vector<Vector> out;
  out.reserve(times.size());
  double t = 0.0;
  const double scale = std::max(detail::max_abs(l), 1e-12);
  double h_prop = 0.1 / scale;
  Vector k1 = l * y;
  for (const double target : times) {
    while (t < target) {
      const bool clipped = t + h_prop >= target;
      const double h = clipped ? target - t : h_prop;
      const Vector k2 = l * (y + h * a21 * k1);
      const Vector k3 = l * (y + h * (a31 * k1 + a32 * k2));
      const Vector k4 = l * (y + h * (a41 * k1 + a42 * k2 + a43 * k3));
      const Vector k5 = l * (y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
      const Vector k6 = l * (y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
      Vector y_new = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
      Vector k7 = l * y_new;
      const Vector err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
      double norm = 0.0;
      for (Eigen::Index q = 0; q < y.size(); ++q) {
        const double sc = opt.atol + opt.rtol * std::max(std::abs(y(q)), std::abs(y_new(q)));
        norm = std::max(norm, std::abs(err(q)) / sc);
      }
      const double factor =
          norm == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(norm, -0.2), 0.2, 5.0);
      if (norm <= 1.0) {
        t = clipped ? target : t + h;
        y = std::move(y_new);
        k1 = std::move(k7);
        // A short clipped step says nothing about the stable step size.
        if (!clipped) h_prop = h * factor;
      } else {
        h_prop = h * factor;
        if (h_prop < opt.h_min) throw ConvergenceError("step-size underflow in time propagation");
      }
    }
    out.push_back(y);
  }
  return out;
}

/// rho(t) on the requested grid.
inline std::vector<DensityMatrix> evolve(const Liouvillian& l, const DensityMatrix& rho0,
                                         std::span<const double> t_grid, const OdeOptions& opt = {}) {
  require_same(l.spec, rho0.spec(), "evolve");
  const int d = l.spec.dim();
  const auto states = propagate(l.matrix, detail::vec(rho0.matrix()), t_grid, opt);
  std::vector<DensityMatrix> out;
  out.reserve(states.size());
  for (const auto& v : states) {
    Matrix m = detail::unvec(v, d);
    m = 0.5 * (m + m.adjoint()).eval();
    out.emplace_back(l.spec, std::move(m));
  }
  return out;
}

/// g2(tau) = Tr[c^+c e^{L tau}(c rho c^+)] / <c^+c>^2 (quantum regression).
inline std::vector<double> two_time_g2(const Liouvillian& l, const DensityMatrix& rho_ss,
                                       const Operator& c, std::span<const double> tau_grid,
                                       const OdeOptions& opt = {}) {
  require_same(l.spec, rho_ss.spec(), "two_time_g2");
  require_same(l.spec, c.spec(), "two_time_g2");
  const Matrix& cm = c.matrix();
  const Matrix number = cm.adjoint() * cm;
  const double n = (rho_ss.matrix() * number).trace().real();
  if (!(n > 1e-12)) throw UndefinedCorrelator("g2(tau) undefined: <c^+c> = " + std::to_string(n));
  const int d = l.spec.dim();
  // The conditional matrix is normalized to unit trace; its propagation is linear.
  Matrix cond = cm * rho_ss.matrix() * cm.adjoint();
  const double w = cond.trace().real();
  std::vector<double> g2(tau_grid.size(), 0.0);
  if (w <= 0.0) return g2;
  cond /= w;
  const auto states = propagate(l.matrix, detail::vec(cond), tau_grid, opt);
  for (std::size_t k = 0; k < states.size(); ++k) {
    const Matrix x = detail::unvec(states[k], d);
    g2[k] = (number * x).trace().real() * w / (n * n);
  }
  return g2;
}

/// Stationary emission spectrum of mode c.
struct Spectrum {
  std::vector<double> omega;
  /// Incoherent part S(w) = (1/pi) Re int_0^inf <dc^+(0) dc(tau)> e^{i w tau} dtau.
  std::vector<double> density;
  /// |<c>|^2, the weight of the coherent delta peak at the laser frequency.
  double coherent_weight = 0.0;
  /// <c^+c> = coherent_weight + integral of density.
  double population = 0.0;
};

/// Emission spectrum by the regression theorem, evaluated exactly with the
/// resolvent: int_0^inf e^{(L + i w) tau} X dtau = -(L + i w)^{-1} X for the
/// fluctuation X = rho c^+ - <c^+> rho (traceless, so w = 0 is solved with the
/// trace-pinned system).
inline Spectrum emission_spectrum(const Liouvillian& l, const DensityMatrix& rho_ss,
                                  const Operator& c, std::span<const double> omega_grid) {
  require_same(l.spec, rho_ss.spec(), "emission_spectrum");
  require_same(l.spec, c.spec(), "emission_spectrum");
  const int d = l.spec.dim();
  const Matrix& cm = c.matrix();
  const Matrix& rho = rho_ss.matrix();
  const double n = (rho * cm.adjoint() * cm).trace().real();
  if (!(n > 1e-12)) throw UndefinedCorrelator("spectrum undefined: <c^+c> = " + std::to_string(n));
  const cplx mean = (rho * cm).trace();  // <c>
  const Matrix fluct = rho * cm.adjoint() - std::conj(mean) * rho;
  const Vector x = detail::vec(fluct);

  Spectrum out;
  out.omega.assign(omega_grid.begin(), omega_grid.end());
  out.coherent_weight = std::norm(mean);
  out.population = n;
  out.density.reserve(omega_grid.size());

  SparseMatrix shifted(l.matrix.rows(), l.matrix.cols());
  {
    std::vector<Triplet> t;
    t.reserve(static_cast<std::size_t>(l.matrix.nonZeros() + l.matrix.rows()));
    for (int k = 0; k < l.matrix.outerSize(); ++k)
      for (SparseMatrix::InnerIterator it(l.matrix, k); it; ++it)
        t.emplace_back(it.row(), it.col(), it.value());
    for (int q = 0; q < l.matrix.rows(); ++q) t.emplace_back(q, q, cplx(0.0));
    shifted.setFromTriplets(t.begin(), t.end());
  }
  const SparseMatrix pinned = detail::trace_pinned(l.matrix, d);
  Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;
  lu.analyzePattern(shifted);
  const double zero_tol = 1e-12 * std::max(1.0, detail::max_abs(l.matrix));

  for (const double w : omega_grid) {
    Vector y;
    if (std::abs(w) < zero_tol) {
      Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu0;
      lu0.compute(pinned);
      Vector rhs = -x;
      rhs(0) = 0.0;
      y = lu0.solve(rhs);
    } else {
      SparseMatrix a = shifted;
      for (int q = 0; q < a.rows(); ++q) a.coeffRef(q, q) += cplx(0.0, w);
      lu.factorize(a);
      if (lu.info() != Eigen::Success) throw ConvergenceError("resolvent factorization failed");
      y = lu.solve(Vector(-x));
    }
    const double s = (cm * detail::unvec(y, d)).trace().real() / M_PI;
    out.density.push_back(s);
  }
  return out;
}

}  // namespace qexcite
