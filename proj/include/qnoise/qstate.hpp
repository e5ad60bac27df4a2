#pragma once

// Dense multi-qubit linear algebra.
//
// Qubits are numbered from 1 and qubit 1 is the most significant bit of the
// basis index, so on three qubits |101> is index 5. All matrices are stored
// densely; registers are capped at kMaxQubits.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qnoise/errors.hpp"
#include "qnoise/tolerances.hpp"

namespace qnoise {

using complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

namespace detail {

inline int qubits_for_dimension(Eigen::Index dim) {
  require(dim >= 2, "dimension must be at least 2");
  int n = 0;
  Eigen::Index d = 1;
  while (d < dim) {
    d <<= 1;
    ++n;
  }
  require(d == dim, "dimension " + std::to_string(dim) + " is not a power of two");
  require(n <= kMaxQubits, "register exceeds " + std::to_string(kMaxQubits) + " qubits");
  return n;
}

inline double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

/// Bit position inside a basis index of (1-based) qubit q on n qubits.
inline int bit_of(int n, int q) { return n - q; }

inline void check_qubit(int n, int q) {
  require(q >= 1 && q <= n, "qubit " + std::to_string(q) + " out of range 1.." + std::to_string(n));
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

struct TrustedTag {};

}  // namespace detail

// ---------------------------------------------------------------------------
// Domain types
// ---------------------------------------------------------------------------

class PureState {
 public:
  /// Validates the length (power of two) and the normalization.
  static PureState from_amplitudes(Vector amplitudes) {
    const int n = detail::qubits_for_dimension(amplitudes.size());
    detail::require(std::abs(amplitudes.squaredNorm() - 1.0) <= Tolerances::normalization,
                    "amplitudes are not normalized");
    return PureState(detail::TrustedTag{}, n, std::move(amplitudes));
  }

  PureState(detail::TrustedTag, int n, Vector amplitudes) : n_(n), amplitudes_(std::move(amplitudes)) {}

  int qubits() const { return n_; }
  Eigen::Index dimension() const { return amplitudes_.size(); }
  const Vector& amplitudes() const { return amplitudes_; }
  complex operator[](Eigen::Index i) const { return amplitudes_(i); }

 private:
  int n_;
  Vector amplitudes_;
};

class Unitary {
 public:
  /// Validates U U^dagger = I.
  static Unitary from_matrix(Matrix m) {
    detail::require(m.rows() == m.cols(), "unitary must be square");
    const int k = detail::qubits_for_dimension(m.rows());
    const Matrix defect = m * m.adjoint() - Matrix::Identity(m.rows(), m.cols());
    detail::require(detail::max_abs(defect) <= Tolerances::unitarity, "matrix is not unitary");
    return Unitary(detail::TrustedTag{}, k, std::move(m));
  }

  Unitary(detail::TrustedTag, int k, Matrix m) : k_(k), m_(std::move(m)) {}

  int qubits() const { return k_; }
  Eigen::Index dimension() const { return m_.rows(); }
  const Matrix& matrix() const { return m_; }
  Unitary adjoint() const { return Unitary(detail::TrustedTag{}, k_, m_.adjoint()); }

 private:
  int k_;
  Matrix m_;
};

/// Hermitian eigenvalues (ascending) of the explicitly symmetrized (m + m^dagger)/2.
inline RealVector hermitian_eigenvalues(const Matrix& m) {
  detail::require(m.rows() == m.cols(), "eigenvalues need a square matrix");
  const Matrix sym = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericError("Hermitian eigen-solver did not converge");
  return solver.eigenvalues();
}

struct InvariantCheck {
  double hermiticity_defect = 0;
  double trace_defect = 0;
  double min_eigenvalue = 0;

  bool ok() const {
    return hermiticity_defect <= Tolerances::hermiticity && trace_defect <= Tolerances::normalization &&
           min_eigenvalue >= Tolerances::psd_floor;
  }
};

class DensityMatrix {
 public:
  /// Validates Hermiticity, unit trace and positivity.
  static DensityMatrix from_matrix(Matrix m) {
    detail::require(m.rows() == m.cols(), "density matrix must be square");
    const int n = detail::qubits_for_dimension(m.rows());
    DensityMatrix rho(detail::TrustedTag{}, n, std::move(m));
    const InvariantCheck c = rho.check();
    detail::require(c.hermiticity_defect <= Tolerances::hermiticity, "density matrix is not Hermitian");
    detail::require(c.trace_defect <= Tolerances::normalization, "density matrix trace differs from 1");
    detail::require(c.min_eigenvalue >= Tolerances::psd_floor, "density matrix is not positive semidefinite");
    return rho;
  }

  static DensityMatrix from_pure(const PureState& psi) {
    const Vector& a = psi.amplitudes();
    return DensityMatrix(detail::TrustedTag{}, psi.qubits(), a * a.adjoint());
  }

  static DensityMatrix maximally_mixed(int n) {
    detail::require(n >= 1 && n <= kMaxQubits, "qubit count out of range");
    const Eigen::Index d = Eigen::Index{1} << n;
    return DensityMatrix(detail::TrustedTag{}, n, Matrix::Identity(d, d) / static_cast<double>(d));
  }

  /// Unchecked construction for operations that preserve the invariants by
  /// construction (unitary conjugation, renormalized projections, traces).
  DensityMatrix(detail::TrustedTag, int n, Matrix m) : n_(n), m_(std::move(m)) {}

  int qubits() const { return n_; }
  Eigen::Index dimension() const { return m_.rows(); }
  const Matrix& matrix() const { return m_; }
  complex operator()(Eigen::Index r, Eigen::Index c) const { return m_(r, c); }
  double trace() const { return m_.trace().real(); }
  double purity() const { return (m_ * m_).trace().real(); }
  RealVector eigenvalues() const { return hermitian_eigenvalues(m_); }

  InvariantCheck check() const {
    InvariantCheck c;
    c.hermiticity_defect = detail::max_abs(m_ - m_.adjoint());
    c.trace_defect = std::abs(m_.trace() - complex(1.0, 0.0));
    c.min_eigenvalue = eigenvalues().minCoeff();
    return c;
  }

 private:
  int n_;
  Matrix m_;
};

/// Two disjoint non-empty qubit sets covering 1..n.
class Bipartition {
 public:
  Bipartition(int n, std::vector<int> left, std::vector<int> right) : n_(n), left_(std::move(left)), right_(std::move(right)) {
    std::sort(left_.begin(), left_.end());
    std::sort(right_.begin(), right_.end());
    detail::require(!left_.empty() && !right_.empty(), "bipartition sides must be non-empty");
    std::vector<int> all;
    all.insert(all.end(), left_.begin(), left_.end());
    all.insert(all.end(), right_.begin(), right_.end());
    std::sort(all.begin(), all.end());
    detail::require(std::adjacent_find(all.begin(), all.end()) == all.end(), "bipartition sides overlap");
    detail::require(static_cast<int>(all.size()) == n && all.front() == 1 && all.back() == n,
                    "bipartition does not cover qubits 1..n");
  }

  /// {q} | rest.
  static Bipartition single(int n, int q) {
    detail::check_qubit(n, q);
    std::vector<int> rest;
    for (int i = 1; i <= n; ++i)
      if (i != q) rest.push_back(i);
    return Bipartition(n, {q}, std::move(rest));
  }

  int qubits() const { return n_; }
  const std::vector<int>& left() const { return left_; }
  const std::vector<int>& right() const { return right_; }

  /// Compact label such as "1|23".
  std::string label() const {
    std::string s;
    for (int q : left_) s += std::to_string(q);
    s += '|';
    for (int q : right_) s += std::to_string(q);
    return s;
  }

 private:
  int n_;
  std::vector<int> left_;
  std::vector<int> right_;
};

// ---------------------------------------------------------------------------
// Gates
// ---------------------------------------------------------------------------

namespace gates {

inline Unitary hadamard() {
  Matrix h(2, 2);
  const double s = 1.0 / std::numbers::sqrt2;
  h << s, s, s, -s;
  return Unitary(detail::TrustedTag{}, 1, std::move(h));
}

inline Unitary pauli_x() {
  Matrix x(2, 2);
  x << 0, 1, 1, 0;
  return Unitary(detail::TrustedTag{}, 1, std::move(x));
}

/// e^{i alpha}|0><0| + |1><1|.
inline Unitary phase_shift(double alpha) {
  Matrix r = Matrix::Zero(2, 2);
  r(0, 0) = std::polar(1.0, alpha);
  r(1, 1) = 1.0;
  return Unitary(detail::TrustedTag{}, 1, std::move(r));
}

/// Control is the first target, in the {|00>,|01>,|10>,|11>} ordering.
inline Unitary cnot() {
  Matrix c = Matrix::Zero(4, 4);
  c(0, 0) = c(1, 1) = c(2, 3) = c(3, 2) = 1.0;
  return Unitary(detail::TrustedTag{}, 2, std::move(c));
}

inline Unitary identity(int k) {
  detail::require(k >= 1 && k <= kMaxQubits, "identity qubit count out of range");
  const Eigen::Index d = Eigen::Index{1} << k;
  return Unitary(detail::TrustedTag{}, k, Matrix::Identity(d, d));
}

}  // namespace gates

// ---------------------------------------------------------------------------
// Construction
// ---------------------------------------------------------------------------

inline PureState basis_state(int n, std::uint64_t index) {
  detail::require(n >= 1 && n <= kMaxQubits, "qubit count out of range");
  const std::uint64_t dim = std::uint64_t{1} << n;
  detail::require(index < dim, "basis index " + std::to_string(index) + " out of range");
  Vector a = Vector::Zero(static_cast<Eigen::Index>(dim));
  a(static_cast<Eigen::Index>(index)) = 1.0;
  return PureState(detail::TrustedTag{}, n, std::move(a));
}

inline PureState tensor(const PureState& a, const PureState& b) {
  detail::require(a.qubits() + b.qubits() <= kMaxQubits, "tensor product exceeds qubit cap");
  const Vector& x = a.amplitudes();
  const Vector& y = b.amplitudes();
  Vector out(x.size() * y.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) out.segment(i * y.size(), y.size()) = x(i) * y;
  return PureState(detail::TrustedTag{}, a.qubits() + b.qubits(), std::move(out));
}

inline DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  detail::require(a.qubits() + b.qubits() <= kMaxQubits, "tensor product exceeds qubit cap");
  return DensityMatrix(detail::TrustedTag{}, a.qubits() + b.qubits(), detail::kron(a.matrix(), b.matrix()));
}

inline Unitary tensor(const Unitary& a, const Unitary& b) {
  detail::require(a.qubits() + b.qubits() <= kMaxQubits, "tensor product exceeds qubit cap");
  return Unitary(detail::TrustedTag{}, a.qubits() + b.qubits(), detail::kron(a.matrix(), b.matrix()));
}

/// U^{(x) k}.
inline Unitary tensor_power(const Unitary& u, int k) {
  detail::require(k >= 1, "tensor power must be positive");
  Unitary out = u;
  for (int i = 1; i < k; ++i) out = tensor(out, u);
  return out;
}

// ---------------------------------------------------------------------------
// Local gate application
// ---------------------------------------------------------------------------

namespace detail {

/// Basis indices grouped by the configuration of the non-target qubits.
/// Entry [r * 2^k + t] is the full index whose target bits spell t (first
/// target most significant) and whose remaining bits spell r.
inline std::vector<Eigen::Index> local_index_table(int n, std::span<const int> targets) {
  const int k = static_cast<int>(targets.size());
  std::vector<int> rest;
  for (int q = 1; q <= n; ++q)
    if (std::find(targets.begin(), targets.end(), q) == targets.end()) rest.push_back(q);
  const Eigen::Index sub = Eigen::Index{1} << k;
  const Eigen::Index outer = Eigen::Index{1} << rest.size();
  std::vector<Eigen::Index> table(static_cast<std::size_t>(sub * outer));
  for (Eigen::Index r = 0; r < outer; ++r) {
    Eigen::Index base = 0;
    for (std::size_t i = 0; i < rest.size(); ++i)
      if ((r >> (rest.size() - 1 - i)) & 1) base |= Eigen::Index{1} << bit_of(n, rest[i]);
    for (Eigen::Index t = 0; t < sub; ++t) {
      Eigen::Index idx = base;
      for (int i = 0; i < k; ++i)
        if ((t >> (k - 1 - i)) & 1) idx |= Eigen::Index{1} << bit_of(n, targets[static_cast<std::size_t>(i)]);
      table[static_cast<std::size_t>(r * sub + t)] = idx;
    }
  }
  return table;
}

inline void check_targets(int n, const Unitary& gate, std::span<const int> targets) {
  require(static_cast<int>(targets.size()) == gate.qubits(),
          "gate acts on " + std::to_string(gate.qubits()) + " qubits but " + std::to_string(targets.size()) +
              " targets given");
  for (std::size_t i = 0; i < targets.size(); ++i) {
    check_qubit(n, targets[i]);
    for (std::size_t j = 0; j < i; ++j) require(targets[i] != targets[j], "gate targets must be distinct");
  }
}

/// Replaces m by (I (x) U (x) I) m, operating column by column.
inline void left_multiply(Matrix& m, const Matrix& u, const std::vector<Eigen::Index>& table, Eigen::Index sub) {
  const Eigen::Index groups = static_cast<Eigen::Index>(table.size()) / sub;
  Vector in(sub), out(sub);
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    for (Eigen::Index g = 0; g < groups; ++g) {
      const Eigen::Index* idx = &table[static_cast<std::size_t>(g * sub)];
      for (Eigen::Index t = 0; t < sub; ++t) in(t) = m(idx[t], c);
      out.noalias() = u * in;
      for (Eigen::Index t = 0; t < sub; ++t) m(idx[t], c) = out(t);
    }
  }
}

}  // namespace detail

inline PureState apply_local(const PureState& psi, const Unitary& gate, std::span<const int> targets) {
  detail::check_targets(psi.qubits(), gate, targets);
  const auto table = detail::local_index_table(psi.qubits(), targets);
  Matrix m = psi.amplitudes();
  detail::left_multiply(m, gate.matrix(), table, gate.dimension());
  return PureState(detail::TrustedTag{}, psi.qubits(), m.col(0));
}

/// rho -> (I (x) U (x) I) rho (I (x) U (x) I)^dagger with U embedded on `targets`.
inline DensityMatrix apply_local(const DensityMatrix& rho, const Unitary& gate, std::span<const int> targets) {
  detail::check_targets(rho.qubits(), gate, targets);
  const auto table = detail::local_index_table(rho.qubits(), targets);
  Matrix m = rho.matrix();
  detail::left_multiply(m, gate.matrix(), table, gate.dimension());
  // (U m U^dagger) = (U (U m)^dagger)^dagger
  Matrix t = m.adjoint();
  detail::left_multiply(t, gate.matrix(), table, gate.dimension());
  return DensityMatrix(detail::TrustedTag{}, rho.qubits(), t.adjoint());
}

inline PureState apply_local(const PureState& psi, const Unitary& gate, std::initializer_list<int> targets) {
  return apply_local(psi, gate, std::span<const int>(targets.begin(), targets.size()));
}

inline DensityMatrix apply_local(const DensityMatrix& rho, const Unitary& gate, std::initializer_list<int> targets) {
  return apply_local(rho, gate, std::span<const int>(targets.begin(), targets.size()));
}

/// Full-register unitary, U rho U^dagger.
inline DensityMatrix apply_global(const DensityMatrix& rho, const Unitary& u) {
  detail::require(u.qubits() == rho.qubits(), "global unitary dimension mismatch");
  return DensityMatrix(detail::TrustedTag{}, rho.qubits(), u.matrix() * rho.matrix() * u.matrix().adjoint());
}

// ---------------------------------------------------------------------------
// Partial operations
// ---------------------------------------------------------------------------

/// Reduced state on `keep`; the kept qubits appear in ascending order.
inline DensityMatrix partial_trace(const DensityMatrix& rho, std::vector<int> keep) {
  const int n = rho.qubits();
  std::sort(keep.begin(), keep.end());
  keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
  detail::require(!keep.empty(), "partial trace must keep at least one qubit");
  detail::require(static_cast<int>(keep.size()) < n, "partial trace must remove at least one qubit");
  for (int q : keep) detail::check_qubit(n, q);

  const auto table = detail::local_index_table(n, keep);
  const Eigen::Index sub = Eigen::Index{1} << keep.size();
  const Eigen::Index groups = static_cast<Eigen::Index>(table.size()) / sub;
  Matrix out = Matrix::Zero(sub, sub);
  const Matrix& m = rho.matrix();
  for (Eigen::Index g = 0; g < groups; ++g) {
    const Eigen::Index* idx = &table[static_cast<std::size_t>(g * sub)];
    for (Eigen::Index i = 0; i < sub; ++i)
      for (Eigen::Index j = 0; j < sub; ++j) out(i, j) += m(idx[i], idx[j]);
  }
  return DensityMatrix(detail::TrustedTag{}, static_cast<int>(keep.size()), std::move(out));
}

/// Transpose on the qubits of `part.right()` only.
inline Matrix partial_transpose(const DensityMatrix& rho, const Bipartition& part) {
  detail::require(part.qubits() == rho.qubits(), "bipartition qubit count does not match the state");
  const int n = rho.qubits();
  Eigen::Index mask = 0;
  for (int q : part.right()) mask |= Eigen::Index{1} << detail::bit_of(n, q);
  const Eigen::Index d = rho.dimension();
  const Matrix& m = rho.matrix();
  Matrix out(d, d);
  for (Eigen::Index r = 0; r < d; ++r)
    for (Eigen::Index c = 0; c < d; ++c) {
      // swap the masked bits between row and column
      const Eigen::Index r2 = (r & ~mask) | (c & mask);
      const Eigen::Index c2 = (c & ~mask) | (r & mask);
      out(r2, c2) = m(r, c);
    }
  return out;
}

/// Sum of |negative eigenvalues| of the partial transpose. Zero means PPT.
inline double negativity(const DensityMatrix& rho, const Bipartition& part) {
  const RealVector ev = hermitian_eigenvalues(partial_transpose(rho, part));
  double sum = 0;
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (ev(i) < 0) sum -= ev(i);
  return sum;
}

// ---------------------------------------------------------------------------
// Measurement and overlaps
// ---------------------------------------------------------------------------

enum class Basis { z, x };

struct MeasurementBranch {
  int outcome;         // 0 or 1; in the x basis 0 is |+>, 1 is |->
  double probability;  // Tr(P rho)
  DensityMatrix state; // renormalized post-measurement register
};

struct MeasurementResult {
  std::vector<MeasurementBranch> branches;
  std::vector<int> omitted;  // outcomes whose probability fell below Tolerances::branch_cutoff
};

/// Projective measurement of one qubit. The x basis is realised as a Hadamard
/// followed by a z measurement, so x-basis post-measurement states carry the
/// measured qubit in |0> or |1>.
inline MeasurementResult measure_projective(const DensityMatrix& rho, int qubit, Basis basis) {
  const int n = rho.qubits();
  detail::check_qubit(n, qubit);
  const DensityMatrix rotated = basis == Basis::x ? apply_local(rho, gates::hadamard(), {qubit}) : rho;
  const Matrix& m = rotated.matrix();
  const Eigen::Index d = rotated.dimension();
  const Eigen::Index bit = Eigen::Index{1} << detail::bit_of(n, qubit);

  MeasurementResult result;
  for (int outcome = 0; outcome < 2; ++outcome) {
    const auto on_branch = [&](Eigen::Index i) { return ((i & bit) != 0) == (outcome == 1); };
    double p = 0;
    for (Eigen::Index i = 0; i < d; ++i)
      if (on_branch(i)) p += m(i, i).real();
    if (p < Tolerances::branch_cutoff) {
      result.omitted.push_back(outcome);
      continue;
    }
    Matrix post = Matrix::Zero(d, d);
    for (Eigen::Index r = 0; r < d; ++r) {
      if (!on_branch(r)) continue;
      for (Eigen::Index c = 0; c < d; ++c)
        if (on_branch(c)) post(r, c) = m(r, c) / p;
    }
    result.branches.push_back({outcome, p, DensityMatrix(detail::TrustedTag{}, n, std::move(post))});
  }
  return result;
}

/// <psi| rho |psi>.
inline double fidelity_with_pure(const DensityMatrix& rho, const PureState& psi) {
  detail::require(rho.qubits() == psi.qubits(), "fidelity operands have different qubit counts");
  const Vector& a = psi.amplitudes();
  return (a.adjoint() * rho.matrix() * a)(0, 0).real();
}

}  // namespace qnoise
