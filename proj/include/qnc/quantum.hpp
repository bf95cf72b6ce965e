// Copyright 2026 The qncsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "qnc/rng.hpp"

namespace qnc {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

/// Dense representation caps out at 8 qubits (dimension 256).
inline constexpr int kMaxQubits = 8;

/// Tolerance for structural invariants (norms, traces, hermiticity, PSD).
inline constexpr double kStructuralTol = 1e-9;

/// Tolerance for pure arithmetic identities on small matrices.
inline constexpr double kArithmeticTol = 1e-12;

namespace detail {

[[noreturn]] inline void fail(const std::string& msg) {
  throw std::invalid_argument(msg);
}

inline std::size_t dim_of(int n_qubits) {
  return std::size_t{1} << n_qubits;
}

inline void check_qubit_count(int n_qubits) {
  if (n_qubits < 1 || n_qubits > kMaxQubits) {
    fail("qubit count must be in 1.." + std::to_string(kMaxQubits) + ", got " +
         std::to_string(n_qubits));
  }
}

inline void check_targets(int n_qubits, const std::vector<int>& targets) {
  if (targets.empty()) {
    fail("target qubit list is empty");
  }
  for (int t : targets) {
    if (t < 0 || t >= n_qubits) {
      fail("qubit index " + std::to_string(t) + " out of range for " +
           std::to_string(n_qubits) + "-qubit register");
    }
  }
  for (std::size_t i = 0; i < targets.size(); ++i) {
    for (std::size_t j = i + 1; j < targets.size(); ++j) {
      if (targets[i] == targets[j]) {
        fail("duplicate target qubit " + std::to_string(targets[i]));
      }
    }
  }
}

inline bool is_hermitian(const Matrix& m, double tol) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

inline bool is_unitary_matrix(const Matrix& m, double tol) {
  Matrix prod = m.adjoint() * m;
  prod -= Matrix::Identity(m.rows(), m.cols());
  return prod.cwiseAbs().maxCoeff() <= tol;
}

// Applies the 2^k x 2^k matrix m to the index axes selected by `targets` of a
// length-2^n coefficient array reached through get/set. Operator qubit j is
// routed to register qubit targets[j]; qubit 0 is the least significant axis.
template <typename GetFn, typename SetFn>
void apply_matrix_indexed(int n_qubits, const Matrix& m,
                          const std::vector<int>& targets,
                          bool conjugate_entries, GetFn get, SetFn set) {
  const int k = static_cast<int>(targets.size());
  const std::size_t dk = std::size_t{1} << k;

  std::vector<int> rest;
  rest.reserve(static_cast<std::size_t>(n_qubits - k));
  for (int q = 0; q < n_qubits; ++q) {
    if (std::find(targets.begin(), targets.end(), q) == targets.end()) {
      rest.push_back(q);
    }
  }

  std::vector<std::size_t> offset(dk);
  for (std::size_t s = 0; s < dk; ++s) {
    std::size_t o = 0;
    for (int j = 0; j < k; ++j) {
      if ((s >> j) & 1) o |= std::size_t{1} << targets[static_cast<std::size_t>(j)];
    }
    offset[s] = o;
  }

  const std::size_t n_rest = std::size_t{1} << rest.size();
  std::vector<Complex> in(dk);
  std::vector<Complex> out(dk);
  for (std::size_t r = 0; r < n_rest; ++r) {
    std::size_t base = 0;
    for (std::size_t i = 0; i < rest.size(); ++i) {
      if ((r >> i) & 1) base |= std::size_t{1} << rest[i];
    }
    for (std::size_t s = 0; s < dk; ++s) in[s] = get(base | offset[s]);
    for (std::size_t a = 0; a < dk; ++a) {
      Complex acc{0.0, 0.0};
      for (std::size_t b = 0; b < dk; ++b) {
        const Complex c = m(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
        acc += (conjugate_entries ? std::conj(c) : c) * in[b];
      }
      out[a] = acc;
    }
    for (std::size_t s = 0; s < dk; ++s) set(base | offset[s], out[s]);
  }
}

inline void apply_to_vector(Vector& v, const Matrix& m,
                            const std::vector<int>& targets, int n_qubits) {
  apply_matrix_indexed(
      n_qubits, m, targets, false,
      [&](std::size_t i) { return v(static_cast<Eigen::Index>(i)); },
      [&](std::size_t i, Complex c) { v(static_cast<Eigen::Index>(i)) = c; });
}

// rho -> M rho M^dagger restricted to the selected axes. M need not be
// unitary (measurement collapse reuses this), so no normalization here.
inline void conjugate_density(Matrix& rho, const Matrix& m,
                              const std::vector<int>& targets, int n_qubits) {
  const Eigen::Index d = rho.rows();
  for (Eigen::Index col = 0; col < d; ++col) {
    apply_matrix_indexed(
        n_qubits, m, targets, false,
        [&](std::size_t i) { return rho(static_cast<Eigen::Index>(i), col); },
        [&](std::size_t i, Complex c) { rho(static_cast<Eigen::Index>(i), col) = c; });
  }
  for (Eigen::Index row = 0; row < d; ++row) {
    apply_matrix_indexed(
        n_qubits, m, targets, true,
        [&](std::size_t j) { return rho(row, static_cast<Eigen::Index>(j)); },
        [&](std::size_t j, Complex c) { rho(row, static_cast<Eigen::Index>(j)) = c; });
  }
}

// Reduced matrix over `keep`, result qubit j = original keep[j].
inline Matrix partial_trace_matrix(const Matrix& rho,
                                   const std::vector<int>& keep, int n_qubits) {
  const int k = static_cast<int>(keep.size());
  const std::size_t dk = std::size_t{1} << k;

  std::vector<int> rest;
  rest.reserve(static_cast<std::size_t>(n_qubits - k));
  for (int q = 0; q < n_qubits; ++q) {
    if (std::find(keep.begin(), keep.end(), q) == keep.end()) rest.push_back(q);
  }
  const std::size_t n_rest = std::size_t{1} << rest.size();

  auto spread = [](std::size_t bits, const std::vector<int>& positions) {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < positions.size(); ++i) {
      if ((bits >> i) & 1) idx |= std::size_t{1} << positions[i];
    }
    return idx;
  };

  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(dk), static_cast<Eigen::Index>(dk));
  for (std::size_t a = 0; a < dk; ++a) {
    const std::size_t ia = spread(a, keep);
    for (std::size_t b = 0; b < dk; ++b) {
      const std::size_t ib = spread(b, keep);
      Complex acc{0.0, 0.0};
      for (std::size_t r = 0; r < n_rest; ++r) {
        const std::size_t ir = spread(r, rest);
        acc += rho(static_cast<Eigen::Index>(ia | ir), static_cast<Eigen::Index>(ib | ir));
      }
      out(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = acc;
    }
  }
  return out;
}

// Expands a 2^k x 2^k matrix to the full register, identity elsewhere.
inline Matrix embed_matrix(const Matrix& m, const std::vector<int>& targets,
                           int n_qubits) {
  const int k = static_cast<int>(targets.size());
  const std::size_t dk = std::size_t{1} << k;
  const std::size_t d = dim_of(n_qubits);

  std::vector<int> rest;
  rest.reserve(static_cast<std::size_t>(n_qubits - k));
  for (int q = 0; q < n_qubits; ++q) {
    if (std::find(targets.begin(), targets.end(), q) == targets.end()) rest.push_back(q);
  }
  auto spread = [](std::size_t bits, const std::vector<int>& positions) {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < positions.size(); ++i) {
      if ((bits >> i) & 1) idx |= std::size_t{1} << positions[i];
    }
    return idx;
  };

  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  const std::size_t n_rest = std::size_t{1} << rest.size();
  for (std::size_t a = 0; a < dk; ++a) {
    const std::size_t ia = spread(a, targets);
    for (std::size_t b = 0; b < dk; ++b) {
      const std::size_t ib = spread(b, targets);
      const Complex c = m(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
      if (c == Complex{0.0, 0.0}) continue;
      for (std::size_t r = 0; r < n_rest; ++r) {
        const std::size_t ir = spread(r, rest);
        out(static_cast<Eigen::Index>(ia | ir), static_cast<Eigen::Index>(ib | ir)) = c;
      }
    }
  }
  return out;
}

inline double min_eigenvalue(const Matrix& hermitian) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

}  // namespace detail

/// Normalized n-qubit state vector. |H> maps to basis vector 0, |V> to basis
/// vector 1, and qubit 0 is the least significant index axis.
class PureState {
 public:
  PureState(int n_qubits, Vector amplitudes)
      : n_qubits_(n_qubits), amplitudes_(std::move(amplitudes)) {
    detail::check_qubit_count(n_qubits_);
    if (static_cast<std::size_t>(amplitudes_.size()) != detail::dim_of(n_qubits_)) {
      detail::fail("amplitude vector has length " + std::to_string(amplitudes_.size()) +
                   ", expected " + std::to_string(detail::dim_of(n_qubits_)));
    }
    if (std::abs(amplitudes_.norm() - 1.0) > kStructuralTol) {
      detail::fail("state vector is not normalized");
    }
  }

  static PureState basis(int n_qubits, std::size_t index) {
    detail::check_qubit_count(n_qubits);
    Vector v = Vector::Zero(static_cast<Eigen::Index>(detail::dim_of(n_qubits)));
    v(static_cast<Eigen::Index>(index)) = Complex{1.0, 0.0};
    return PureState(n_qubits, std::move(v));
  }

  int n_qubits() const { return n_qubits_; }
  std::size_t dim() const { return detail::dim_of(n_qubits_); }
  const Vector& amplitudes() const { return amplitudes_; }
  Complex amplitude(std::size_t i) const { return amplitudes_(static_cast<Eigen::Index>(i)); }

 private:
  int n_qubits_;
  Vector amplitudes_;
};

/// Hermitian, unit-trace, positive-semidefinite matrix on up to 8 qubits.
/// All three invariants are checked at construction (tolerance 1e-9).
class DensityMatrix {
 public:
  DensityMatrix(int n_qubits, Matrix entries)
      : n_qubits_(n_qubits), entries_(std::move(entries)) {
    detail::check_qubit_count(n_qubits_);
    const auto d = static_cast<Eigen::Index>(detail::dim_of(n_qubits_));
    if (entries_.rows() != d || entries_.cols() != d) {
      detail::fail("density matrix has wrong dimensions for " +
                   std::to_string(n_qubits_) + " qubits");
    }
    if (!detail::is_hermitian(entries_, kStructuralTol)) {
      detail::fail("density matrix is not Hermitian");
    }
    if (std::abs(entries_.trace().real() - 1.0) > kStructuralTol ||
        std::abs(entries_.trace().imag()) > kStructuralTol) {
      detail::fail("density matrix trace is not 1");
    }
    if (detail::min_eigenvalue(entries_) < -kStructuralTol) {
      detail::fail("density matrix is not positive semidefinite");
    }
  }

  int n_qubits() const { return n_qubits_; }
  std::size_t dim() const { return detail::dim_of(n_qubits_); }
  const Matrix& entries() const { return entries_; }

  /// Tr(rho^2); in [2^-n, 1] for a valid state.
  double purity() const { return (entries_ * entries_).trace().real(); }

 private:
  int n_qubits_;
  Matrix entries_;
};

inline DensityMatrix to_density(const PureState& psi) {
  Matrix rho = psi.amplitudes() * psi.amplitudes().adjoint();
  return DensityMatrix(psi.n_qubits(), std::move(rho));
}

/// A square matrix tagged as unitary (U^dagger U = I) or observable
/// (Hermitian); the tagged property is validated at construction.
class Operator {
 public:
  enum class Kind { Unitary, Observable };

  static Operator unitary(int n_qubits, Matrix entries) {
    return Operator(n_qubits, std::move(entries), Kind::Unitary);
  }

  static Operator observable(int n_qubits, Matrix entries) {
    return Operator(n_qubits, std::move(entries), Kind::Observable);
  }

  static Operator identity(int n_qubits) {
    detail::check_qubit_count(n_qubits);
    const auto d = static_cast<Eigen::Index>(detail::dim_of(n_qubits));
    return unitary(n_qubits, Matrix::Identity(d, d));
  }

  int n_qubits() const { return n_qubits_; }
  std::size_t dim() const { return detail::dim_of(n_qubits_); }
  const Matrix& entries() const { return entries_; }
  Kind kind() const { return kind_; }

 private:
  Operator(int n_qubits, Matrix entries, Kind kind)
      : n_qubits_(n_qubits), entries_(std::move(entries)), kind_(kind) {
    detail::check_qubit_count(n_qubits_);
    const auto d = static_cast<Eigen::Index>(detail::dim_of(n_qubits_));
    if (entries_.rows() != d || entries_.cols() != d) {
      detail::fail("operator has wrong dimensions for " + std::to_string(n_qubits_) +
                   " qubits");
    }
    if (kind_ == Kind::Unitary && !detail::is_unitary_matrix(entries_, kStructuralTol)) {
      detail::fail("operator tagged unitary is not unitary");
    }
    if (kind_ == Kind::Observable && !detail::is_hermitian(entries_, kStructuralTol)) {
      detail::fail("operator tagged observable is not Hermitian");
    }
  }

  int n_qubits_;
  Matrix entries_;
  Kind kind_;
};

inline const Matrix& pauli_x() {
  static const Matrix m = (Matrix(2, 2) << 0, 1, 1, 0).finished();
  return m;
}

inline const Matrix& pauli_y() {
  static const Matrix m =
      (Matrix(2, 2) << Complex{0, 0}, Complex{0, -1}, Complex{0, 1}, Complex{0, 0}).finished();
  return m;
}

inline const Matrix& pauli_z() {
  static const Matrix m = (Matrix(2, 2) << 1, 0, 0, -1).finished();
  return m;
}

inline const Matrix& identity2() {
  static const Matrix m = Matrix::Identity(2, 2);
  return m;
}

// ---------------------------------------------------------------------------
// Composition
// ---------------------------------------------------------------------------

/// Kronecker product with a's qubits occupying the lower index bits.
inline PureState tensor(const PureState& a, const PureState& b) {
  const int n = a.n_qubits() + b.n_qubits();
  if (n > kMaxQubits) {
    detail::fail("tensor product exceeds the " + std::to_string(kMaxQubits) +
                 "-qubit register capacity");
  }
  Vector out(static_cast<Eigen::Index>(detail::dim_of(n)));
  const std::size_t da = a.dim();
  for (std::size_t ib = 0; ib < b.dim(); ++ib) {
    for (std::size_t ia = 0; ia < da; ++ia) {
      out(static_cast<Eigen::Index>((ib << a.n_qubits()) | ia)) =
          b.amplitude(ib) * a.amplitude(ia);
    }
  }
  return PureState(n, std::move(out));
}

namespace detail {
inline Matrix kron_low_first(const Matrix& a, const Matrix& b, int n_qubits_a) {
  const std::size_t da = static_cast<std::size_t>(a.rows());
  const std::size_t db = static_cast<std::size_t>(b.rows());
  Matrix out(static_cast<Eigen::Index>(da * db), static_cast<Eigen::Index>(da * db));
  for (std::size_t ib = 0; ib < db; ++ib) {
    for (std::size_t jb = 0; jb < db; ++jb) {
      for (std::size_t ia = 0; ia < da; ++ia) {
        for (std::size_t ja = 0; ja < da; ++ja) {
          out(static_cast<Eigen::Index>((ib << n_qubits_a) | ia),
              static_cast<Eigen::Index>((jb << n_qubits_a) | ja)) =
              b(static_cast<Eigen::Index>(ib), static_cast<Eigen::Index>(jb)) *
              a(static_cast<Eigen::Index>(ia), static_cast<Eigen::Index>(ja));
        }
      }
    }
  }
  return out;
}
}  // namespace detail

inline DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  const int n = a.n_qubits() + b.n_qubits();
  if (n > kMaxQubits) {
    detail::fail("tensor product exceeds the " + std::to_string(kMaxQubits) +
                 "-qubit register capacity");
  }
  return DensityMatrix(n, detail::kron_low_first(a.entries(), b.entries(), a.n_qubits()));
}

inline Operator tensor(const Operator& a, const Operator& b) {
  if (a.kind() != b.kind()) {
    detail::fail("tensor product of operators with different kinds");
  }
  const int n = a.n_qubits() + b.n_qubits();
  if (n > kMaxQubits) {
    detail::fail("tensor product exceeds the " + std::to_string(kMaxQubits) +
                 "-qubit register capacity");
  }
  Matrix m = detail::kron_low_first(a.entries(), b.entries(), a.n_qubits());
  return a.kind() == Operator::Kind::Unitary ? Operator::unitary(n, std::move(m))
                                             : Operator::observable(n, std::move(m));
}

/// Expands op to the full register with identity on all other qubits;
/// operator qubit j lands on register qubit targets[j].
inline Operator embed(const Operator& op, const std::vector<int>& targets, int n_qubits) {
  detail::check_qubit_count(n_qubits);
  detail::check_targets(n_qubits, targets);
  if (static_cast<int>(targets.size()) != op.n_qubits()) {
    detail::fail("target count does not match operator arity");
  }
  Matrix m = detail::embed_matrix(op.entries(), targets, n_qubits);
  return op.kind() == Operator::Kind::Unitary ? Operator::unitary(n_qubits, std::move(m))
                                              : Operator::observable(n_qubits, std::move(m));
}

// ---------------------------------------------------------------------------
// Evolution and reduction
// ---------------------------------------------------------------------------

inline PureState apply_unitary(const PureState& state, const Operator& u,
                               const std::vector<int>& targets) {
  if (u.kind() != Operator::Kind::Unitary) {
    detail::fail("apply_unitary requires a unitary-kind operator");
  }
  detail::check_targets(state.n_qubits(), targets);
  if (static_cast<int>(targets.size()) != u.n_qubits()) {
    detail::fail("target count does not match operator arity");
  }
  Vector v = state.amplitudes();
  detail::apply_to_vector(v, u.entries(), targets, state.n_qubits());
  return PureState(state.n_qubits(), std::move(v));
}

inline DensityMatrix apply_unitary(const DensityMatrix& state, const Operator& u,
                                   const std::vector<int>& targets) {
  if (u.kind() != Operator::Kind::Unitary) {
    detail::fail("apply_unitary requires a unitary-kind operator");
  }
  detail::check_targets(state.n_qubits(), targets);
  if (static_cast<int>(targets.size()) != u.n_qubits()) {
    detail::fail("target count does not match operator arity");
  }
  Matrix rho = state.entries();
  detail::conjugate_density(rho, u.entries(), targets, state.n_qubits());
  return DensityMatrix(state.n_qubits(), std::move(rho));
}

inline DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep) {
  detail::check_targets(rho.n_qubits(), keep);
  return DensityMatrix(static_cast<int>(keep.size()),
                       detail::partial_trace_matrix(rho.entries(), keep, rho.n_qubits()));
}

// ---------------------------------------------------------------------------
// Measurement
// ---------------------------------------------------------------------------

template <typename StateT>
struct MeasurementResult {
  int outcome;
  StateT post_state;
  double probability;
};

namespace detail {

inline void check_complete_projectors(const std::vector<Operator>& projectors,
                                      std::size_t dim) {
  if (projectors.empty()) fail("projector set is empty");
  Matrix sum = Matrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (const Operator& p : projectors) {
    if (p.dim() != dim) fail("projector dimension mismatch");
    sum += p.entries();
  }
  sum -= Matrix::Identity(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  if (sum.cwiseAbs().maxCoeff() > kStructuralTol) {
    fail("projector set is incomplete (does not sum to identity)");
  }
  for (std::size_t i = 0; i < projectors.size(); ++i) {
    for (std::size_t j = i + 1; j < projectors.size(); ++j) {
      Matrix prod = projectors[i].entries() * projectors[j].entries();
      if (prod.cwiseAbs().maxCoeff() > kStructuralTol) {
        fail("projector set is not orthogonal");
      }
    }
  }
}

inline int sample_index(const std::vector<double>& probabilities, Rng& rng) {
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  const double u = dist(rng);
  double cumulative = 0.0;
  for (std::size_t i = 0; i < probabilities.size(); ++i) {
    cumulative += std::max(probabilities[i], 0.0);
    if (u < cumulative) return static_cast<int>(i);
  }
  return static_cast<int>(probabilities.size()) - 1;
}

}  // namespace detail

/// Born-rule sampling over a complete orthogonal projector set.
inline MeasurementResult<PureState> projective_measure(const PureState& state,
                                                       const std::vector<Operator>& projectors,
                                                       Rng& rng) {
  detail::check_complete_projectors(projectors, state.dim());
  std::vector<double> probs(projectors.size());
  for (std::size_t i = 0; i < projectors.size(); ++i) {
    probs[i] = (state.amplitudes().adjoint() * projectors[i].entries() * state.amplitudes())(0).real();
  }
  const int outcome = detail::sample_index(probs, rng);
  Vector collapsed = projectors[static_cast<std::size_t>(outcome)].entries() * state.amplitudes();
  collapsed /= collapsed.norm();
  return {outcome, PureState(state.n_qubits(), std::move(collapsed)),
          probs[static_cast<std::size_t>(outcome)]};
}

inline MeasurementResult<DensityMatrix> projective_measure(const DensityMatrix& state,
                                                           const std::vector<Operator>& projectors,
                                                           Rng& rng) {
  detail::check_complete_projectors(projectors, state.dim());
  std::vector<double> probs(projectors.size());
  for (std::size_t i = 0; i < projectors.size(); ++i) {
    probs[i] = (projectors[i].entries() * state.entries()).trace().real();
  }
  const int outcome = detail::sample_index(probs, rng);
  const Matrix& p = projectors[static_cast<std::size_t>(outcome)].entries();
  Matrix collapsed = p * state.entries() * p.adjoint();
  collapsed /= collapsed.trace().real();
  return {outcome, DensityMatrix(state.n_qubits(), std::move(collapsed)),
          probs[static_cast<std::size_t>(outcome)]};
}

// ---------------------------------------------------------------------------
// Scalar functionals
// ---------------------------------------------------------------------------

/// |<a|b>|^2 for pure states.
inline double fidelity(const PureState& a, const PureState& b) {
  if (a.n_qubits() != b.n_qubits()) detail::fail("fidelity dimension mismatch");
  const Complex overlap = (b.amplitudes().adjoint() * a.amplitudes())(0);
  return std::norm(overlap);
}

/// <b|rho|b> for a mixed state against a pure reference.
inline double fidelity(const DensityMatrix& a, const PureState& b) {
  if (a.n_qubits() != b.n_qubits()) detail::fail("fidelity dimension mismatch");
  return (b.amplitudes().adjoint() * a.entries() * b.amplitudes())(0).real();
}

/// Tr(rho O) for a Hermitian observable; the imaginary residue is checked
/// against 1e-9 and discarded.
inline double expectation(const DensityMatrix& rho, const Operator& obs) {
  if (rho.n_qubits() != obs.n_qubits()) detail::fail("expectation dimension mismatch");
  if (!detail::is_hermitian(obs.entries(), kStructuralTol)) {
    detail::fail("expectation requires a Hermitian observable");
  }
  const Complex tr = (rho.entries() * obs.entries()).trace();
  if (std::abs(tr.imag()) > kStructuralTol) {
    detail::fail("expectation value has a non-negligible imaginary part");
  }
  return tr.real();
}

/// Half-wave plate at angle theta (degrees, fast axis from vertical):
/// [[cos 2t, sin 2t], [sin 2t, -cos 2t]]. Hermitian and its own inverse.
inline Operator hwp_unitary(double theta_degrees) {
  const double t = 2.0 * theta_degrees * std::acos(-1.0) / 180.0;
  Matrix m(2, 2);
  m << std::cos(t), std::sin(t), std::sin(t), -std::cos(t);
  return Operator::unitary(1, std::move(m));
}

}  // namespace qnc
