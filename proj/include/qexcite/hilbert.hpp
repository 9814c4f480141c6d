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

// Operator algebra on the (two-level system) x (truncated oscillator) space.
//
// Subsystem order is fixed: the two-level system is the slow index, the
// oscillator the fast one, so the composite basis state |s, n> sits at row
// s * (n_max + 1) + n. Two-level basis: index 0 = ground, 1 = excited.

#include <cmath>
#include <complex>
#include <string>

#include <Eigen/Dense>

#include "qexcite/error.hpp"

namespace qexcite {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

enum class Space { composite, oscillator, source };

struct HilbertSpec {
  Space space = Space::composite;
  int n_max = 1;

  static HilbertSpec composite(int n_max) {
    if (n_max < 1) throw InvalidConfig("n_max must be >= 1, got " + std::to_string(n_max));
    return {Space::composite, n_max};
  }
  static HilbertSpec oscillator(int n_max) {
    if (n_max < 1) throw InvalidConfig("n_max must be >= 1, got " + std::to_string(n_max));
    return {Space::oscillator, n_max};
  }
  /// The two-level source on its own.
  static HilbertSpec source() { return {Space::source, 0}; }

  bool has_tls() const { return space != Space::oscillator; }
  bool has_oscillator() const { return space != Space::source; }
  int levels() const { return has_oscillator() ? n_max + 1 : 1; }
  int dim() const { return (has_tls() ? 2 : 1) * levels(); }

  bool operator==(const HilbertSpec&) const = default;
};

inline void require_same(const HilbertSpec& a, const HilbertSpec& b, const char* where) {
  if (!(a == b)) throw DimensionMismatch(std::string(where) + ": operands live on different spaces");
}

class Operator {
 public:
  Operator(HilbertSpec spec, Matrix entries) : spec_(spec), m_(std::move(entries)) {
    if (m_.rows() != spec_.dim() || m_.cols() != spec_.dim())
      throw DimensionMismatch("operator shape " + std::to_string(m_.rows()) + "x" +
                              std::to_string(m_.cols()) + " does not match dim " +
                              std::to_string(spec_.dim()));
  }

  static Operator identity(HilbertSpec spec) {
    return {spec, Matrix::Identity(spec.dim(), spec.dim())};
  }
  static Operator zero(HilbertSpec spec) { return {spec, Matrix::Zero(spec.dim(), spec.dim())}; }

  const HilbertSpec& spec() const { return spec_; }
  const Matrix& matrix() const { return m_; }
  cplx operator()(int r, int c) const { return m_(r, c); }

  Operator dagger() const { return {spec_, m_.adjoint()}; }

  Operator operator+(const Operator& o) const {
    require_same(spec_, o.spec_, "operator+");
    return {spec_, m_ + o.m_};
  }
  Operator operator-(const Operator& o) const {
    require_same(spec_, o.spec_, "operator-");
    return {spec_, m_ - o.m_};
  }
  Operator operator*(const Operator& o) const {
    require_same(spec_, o.spec_, "operator*");
    return {spec_, m_ * o.m_};
  }
  Operator operator*(cplx s) const { return {spec_, m_ * s}; }
  friend Operator operator*(cplx s, const Operator& a) { return a * s; }

  /// A^k for k >= 0.
  Operator pow(int k) const {
    Matrix r = Matrix::Identity(m_.rows(), m_.cols());
    for (int i = 0; i < k; ++i) r = r * m_;
    return {spec_, std::move(r)};
  }

 private:
  HilbertSpec spec_;
  Matrix m_;
};

inline Operator commutator(const Operator& a, const Operator& b) { return a * b - b * a; }

/// Normalized pure state.
class StateVector {
 public:
  StateVector(HilbertSpec spec, Vector amplitudes) : spec_(spec), v_(std::move(amplitudes)) {
    if (v_.size() != spec_.dim()) throw DimensionMismatch("state vector length does not match dim");
    if (std::abs(v_.squaredNorm() - 1.0) > 1e-12)
      throw InvalidState("state vector is not normalized (|psi|^2 = " +
                         std::to_string(v_.squaredNorm()) + ")");
  }

  const HilbertSpec& spec() const { return spec_; }
  const Vector& amplitudes() const { return v_; }

 private:
  HilbertSpec spec_;
  Vector v_;
};

/// Hermitian, unit-trace, positive semidefinite matrix (checked on construction).
class DensityMatrix {
 public:
  DensityMatrix(HilbertSpec spec, Matrix entries) : spec_(spec), m_(std::move(entries)) {
    if (m_.rows() != spec_.dim() || m_.cols() != spec_.dim())
      throw DimensionMismatch("density matrix shape does not match dim");
    const double herm = (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
    if (herm > 1e-10) throw InvalidState("density matrix not Hermitian (" + std::to_string(herm) + ")");
    const cplx tr = m_.trace();
    if (std::abs(tr - 1.0) > 1e-10)
      throw InvalidState("density matrix trace " + std::to_string(tr.real()) + " != 1");
    Eigen::SelfAdjointEigenSolver<Matrix> es(m_, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-8)
      throw InvalidState("density matrix has negative eigenvalue " +
                         std::to_string(es.eigenvalues().minCoeff()));
  }

  static DensityMatrix pure(const StateVector& psi) {
    return {psi.spec(), psi.amplitudes() * psi.amplitudes().adjoint()};
  }

  const HilbertSpec& spec() const { return spec_; }
  const Matrix& matrix() const { return m_; }
  cplx operator()(int r, int c) const { return m_(r, c); }
  double purity() const { return (m_ * m_).trace().real(); }

 private:
  HilbertSpec spec_;
  Matrix m_;
};

namespace detail {

inline Matrix ladder_block(int n_max) {
  Matrix a = Matrix::Zero(n_max + 1, n_max + 1);
  for (int n = 1; n <= n_max; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

inline Matrix lowering_block() {
  Matrix s = Matrix::Zero(2, 2);
  s(0, 1) = 1.0;
  return s;
}

}  // namespace detail

/// Kronecker product tls_block (x) osc_block on the composite space.
inline Operator tensor(const Matrix& tls_block, const Matrix& osc_block) {
  if (tls_block.rows() != 2 || tls_block.cols() != 2)
    throw DimensionMismatch("two-level block must be 2x2");
  if (osc_block.rows() != osc_block.cols() || osc_block.rows() < 2)
    throw DimensionMismatch("oscillator block must be square with at least two levels");
  const auto levels = osc_block.rows();
  Matrix out(2 * levels, 2 * levels);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      out.block(i * levels, j * levels, levels, levels) = tls_block(i, j) * osc_block;
  return {HilbertSpec::composite(static_cast<int>(levels) - 1), std::move(out)};
}

/// Oscillator annihilation operator a, with <n-1|a|n> = sqrt(n).
inline Operator fock_annihilation(const HilbertSpec& spec) {
  switch (spec.space) {
    case Space::oscillator:
      return {spec, detail::ladder_block(spec.n_max)};
    case Space::composite:
      return tensor(Matrix::Identity(2, 2), detail::ladder_block(spec.n_max));
    case Space::source:
      break;
  }
  throw DimensionMismatch("source-only space has no oscillator");
}

/// Two-level lowering operator sigma = |g><e|.
inline Operator tls_lowering(const HilbertSpec& spec) {
  switch (spec.space) {
    case Space::source:
      return {spec, detail::lowering_block()};
    case Space::composite:
      return tensor(detail::lowering_block(), Matrix::Identity(spec.n_max + 1, spec.n_max + 1));
    case Space::oscillator:
      break;
  }
  throw DimensionMismatch("oscillator-only space has no two-level system");
}

/// Fock state |n> of an oscillator-only space.
inline StateVector fock_state(const HilbertSpec& spec, int n) {
  if (spec.space != Space::oscillator || n < 0 || n > spec.n_max)
    throw DimensionMismatch("fock_state needs an oscillator space holding |n>");
  Vector v = Vector::Zero(spec.dim());
  v(n) = 1.0;
  return {spec, std::move(v)};
}

/// Composite basis index of |s, n>, s = 0 (ground) or 1 (excited).
inline int composite_index(const HilbertSpec& spec, int s, int n) { return s * (spec.n_max + 1) + n; }

/// Tr(rho A).
inline cplx expectation(const DensityMatrix& rho, const Operator& a) {
  require_same(rho.spec(), a.spec(), "expectation");
  return (rho.matrix().transpose().cwiseProduct(a.matrix())).sum();
}

}  // namespace qexcite
