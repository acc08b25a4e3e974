#pragma once

// Truncated Fock-space linear algebra: states, operators, tensor products and
// the standard oscillator constructions everything else is built from.
//
// Multi-mode amplitudes are stored row-major with mode 1 slowest; this
// ordering is a wire-format commitment shared with the serialization layer.

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <unsupported/Eigen/KroneckerProduct>

#include <cmath>
#include <complex>
#include <numeric>
#include <vector>

#include "qbm/errors.hpp"

namespace qbm {

using Complex = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;
using SpMat = Eigen::SparseMatrix<Complex>;

inline constexpr Complex kI{0.0, 1.0};

// Photon-number truncation for one mode: basis |0..n_max>, dimension n_max+1.
struct FockCutoff {
  int n_max = 1;

  explicit FockCutoff(int n) : n_max(n) {
    if (n_max < 1) throw TruncationError("FockCutoff requires n_max >= 1");
  }
  int dim() const { return n_max + 1; }
};

// Default truncation rule: n_max = ceil(|alpha|^2 + 6|alpha| + 10).
inline int adequate_n_max(double alpha_abs) {
  return static_cast<int>(std::ceil(alpha_abs * alpha_abs + 6.0 * alpha_abs + 10.0));
}

inline void require_adequate(Complex alpha, const FockCutoff& cutoff, const char* where) {
  if (cutoff.n_max < std::abs(alpha) * std::abs(alpha) + 6.0 * std::abs(alpha) + 10.0)
    throw TruncationError(std::string(where) + ": cutoff n_max=" + std::to_string(cutoff.n_max) +
                          " inadequate for |alpha|=" + std::to_string(std::abs(alpha)));
}

inline int total_dim(const std::vector<int>& dims) {
  int d = 1;
  for (int x : dims) {
    if (x < 2) throw DimensionMismatch("mode dimension must be >= 2");
    d *= x;
  }
  return d;
}

// Normalized state over a truncated multi-mode basis.
struct StateVector {
  std::vector<int> dims;
  Vec amplitudes;

  StateVector() = default;
  StateVector(std::vector<int> d, Vec a, bool normalize = true)
      : dims(std::move(d)), amplitudes(std::move(a)) {
    if (amplitudes.size() != total_dim(dims))
      throw DimensionMismatch("StateVector length does not match mode dimensions");
    if (normalize) {
      double n = amplitudes.norm();
      if (n == 0.0) throw DimensionMismatch("cannot normalize a zero state");
      amplitudes /= n;
    }
  }

  int dim() const { return static_cast<int>(amplitudes.size()); }
  int n_modes() const { return static_cast<int>(dims.size()); }
};

// Hermitian, unit-trace density matrix over the same basis.
struct DensityMatrix {
  std::vector<int> dims;
  Mat elements;

  DensityMatrix() = default;
  DensityMatrix(std::vector<int> d, Mat m, bool validate = true)
      : dims(std::move(d)), elements(std::move(m)) {
    const int n = total_dim(dims);
    if (elements.rows() != n || elements.cols() != n)
      throw DimensionMismatch("DensityMatrix shape does not match mode dimensions");
    if (validate) {
      if ((elements - elements.adjoint()).cwiseAbs().maxCoeff() > 1e-9)
        throw DimensionMismatch("DensityMatrix is not Hermitian");
      if (std::abs(elements.trace() - Complex(1.0, 0.0)) > 1e-9)
        throw DimensionMismatch("DensityMatrix trace is not 1");
    }
  }

  int dim() const { return static_cast<int>(elements.rows()); }
  int n_modes() const { return static_cast<int>(dims.size()); }

  static DensityMatrix from_state(const StateVector& psi) {
    return DensityMatrix(psi.dims, psi.amplitudes * psi.amplitudes.adjoint(), false);
  }

  // Most negative eigenvalue; spec allows down to -1e-8 on constructed states.
  double min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Mat> es(elements, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
  }
};

// Square operator on a truncated basis.  Dense storage for one or two modes,
// sparse for three or more; the semantics are identical.
class Operator {
 public:
  Operator() = default;

  static Operator dense(std::vector<int> dims, Mat m) {
    Operator op;
    op.dims_ = std::move(dims);
    op.check_shape(m.rows(), m.cols());
    op.dense_ = std::move(m);
    op.sparse_storage_ = false;
    return op;
  }

  static Operator sparse(std::vector<int> dims, SpMat m) {
    Operator op;
    op.dims_ = std::move(dims);
    op.check_shape(m.rows(), m.cols());
    m.makeCompressed();
    op.sp_ = std::move(m);
    op.sparse_storage_ = true;
    return op;
  }

  const std::vector<int>& dims() const { return dims_; }
  int dim() const { return total_dim(dims_); }
  bool is_sparse() const { return sparse_storage_; }

  const Mat& dense_ref() const {
    if (sparse_storage_) throw DimensionMismatch("operator is stored sparse");
    return dense_;
  }
  const SpMat& sparse_ref() const {
    if (!sparse_storage_) throw DimensionMismatch("operator is stored dense");
    return sp_;
  }

  Mat to_dense() const { return sparse_storage_ ? Mat(sp_) : dense_; }
  SpMat to_sparse() const { return sparse_storage_ ? sp_ : SpMat(dense_.sparseView()); }

  Vec apply(const Vec& x) const {
    if (x.size() != dim()) throw DimensionMismatch("operator/vector dimension mismatch");
    return sparse_storage_ ? Vec(sp_ * x) : Vec(dense_ * x);
  }

  Mat apply_left(const Mat& rho) const {  // op * rho
    return sparse_storage_ ? Mat(sp_ * rho) : Mat(dense_ * rho);
  }
  Mat apply_right(const Mat& rho) const {  // rho * op
    return sparse_storage_ ? Mat(rho * sp_) : Mat(rho * dense_);
  }

  Operator adjoint() const {
    if (sparse_storage_) return sparse(dims_, SpMat(sp_.adjoint()));
    return dense(dims_, dense_.adjoint());
  }

  friend Operator operator*(Complex c, const Operator& a) {
    if (a.sparse_storage_) return sparse(a.dims_, SpMat(c * a.sp_));
    return dense(a.dims_, c * a.dense_);
  }
  friend Operator operator*(double c, const Operator& a) { return Complex(c, 0.0) * a; }

  friend Operator operator+(const Operator& a, const Operator& b) {
    a.check_same(b);
    if (!a.sparse_storage_ && !b.sparse_storage_) return dense(a.dims_, a.dense_ + b.dense_);
    return sparse(a.dims_, SpMat(a.to_sparse() + b.to_sparse()));
  }
  friend Operator operator-(const Operator& a, const Operator& b) {
    a.check_same(b);
    if (!a.sparse_storage_ && !b.sparse_storage_) return dense(a.dims_, a.dense_ - b.dense_);
    return sparse(a.dims_, SpMat(a.to_sparse() - b.to_sparse()));
  }
  friend Operator operator*(const Operator& a, const Operator& b) {
    a.check_same(b);
    if (!a.sparse_storage_ && !b.sparse_storage_) return dense(a.dims_, a.dense_ * b.dense_);
    return sparse(a.dims_, SpMat(a.to_sparse() * b.to_sparse()));
  }

 private:
  void check_shape(Eigen::Index r, Eigen::Index c) const {
    if (r != c || r != total_dim(dims_))
      throw DimensionMismatch("operator shape does not match mode dimensions");
  }
  void check_same(const Operator& other) const {
    if (dims_ != other.dims_) throw DimensionMismatch("operator mode dimensions differ");
  }

  std::vector<int> dims_;
  bool sparse_storage_ = false;
  Mat dense_;
  SpMat sp_;
};

inline bool use_sparse(const std::vector<int>& dims) { return dims.size() >= 3; }

// ---------------------------------------------------------------------------
// Single-mode constructions.

// <n-1| a |n> = sqrt(n).
inline Operator annihilation(const FockCutoff& cutoff) {
  const int d = cutoff.dim();
  Mat a = Mat::Zero(d, d);
  for (int n = 1; n < d; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return Operator::dense({d}, std::move(a));
}

inline Operator creation(const FockCutoff& cutoff) { return annihilation(cutoff).adjoint(); }

inline Operator number_operator(const FockCutoff& cutoff) {
  const int d = cutoff.dim();
  Mat n = Mat::Zero(d, d);
  for (int k = 0; k < d; ++k) n(k, k) = static_cast<double>(k);
  return Operator::dense({d}, std::move(n));
}

inline Operator identity_op(const std::vector<int>& dims) {
  const int d = total_dim(dims);
  if (use_sparse(dims)) {
    SpMat id(d, d);
    id.setIdentity();
    return Operator::sparse(dims, std::move(id));
  }
  return Operator::dense(dims, Mat::Identity(d, d));
}

// P = exp(i pi a^dag a), diagonal with entries (-1)^n.
inline Operator parity(const FockCutoff& cutoff) {
  const int d = cutoff.dim();
  Mat p = Mat::Zero(d, d);
  for (int n = 0; n < d; ++n) p(n, n) = (n % 2 == 0) ? 1.0 : -1.0;
  return Operator::dense({d}, std::move(p));
}

// Coherent amplitudes alpha^n / sqrt(n!), renormalized on the truncated basis.
inline StateVector coherent_state(Complex alpha, const FockCutoff& cutoff) {
  require_adequate(alpha, cutoff, "coherent_state");
  const int d = cutoff.dim();
  Vec amps(d);
  Complex c{1.0, 0.0};
  amps[0] = c;
  for (int n = 1; n < d; ++n) {
    c *= alpha / std::sqrt(static_cast<double>(n));
    amps[n] = c;
  }
  return StateVector({d}, std::move(amps), true);
}

inline StateVector fock_state(int n, const FockCutoff& cutoff) {
  if (n < 0 || n > cutoff.n_max) throw DimensionMismatch("Fock level outside cutoff");
  Vec amps = Vec::Zero(cutoff.dim());
  amps[n] = 1.0;
  return StateVector({cutoff.dim()}, std::move(amps), false);
}

// (|alpha> + sign |-alpha>)/norm; sign +1 for the even cat, -1 for the odd.
inline StateVector cat_state(double alpha, int parity_sign, const FockCutoff& cutoff) {
  Vec plus = coherent_state(Complex(alpha, 0.0), cutoff).amplitudes;
  Vec minus = coherent_state(Complex(-alpha, 0.0), cutoff).amplitudes;
  Vec amps = plus + static_cast<double>(parity_sign) * minus;
  return StateVector({cutoff.dim()}, std::move(amps), true);
}

// exp(i s H) for Hermitian H, via eigendecomposition.  Used for displacement
// operators built as exponentials of the truncated generator.
inline Mat exp_i_hermitian(const Mat& h, double s) {
  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  if (es.info() != Eigen::Success) throw StepFailure("eigendecomposition failed");
  Vec phases(h.rows());
  for (Eigen::Index k = 0; k < h.rows(); ++k)
    phases[k] = std::exp(kI * (s * es.eigenvalues()[k]));
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

// D(alpha) = exp(alpha a^dag - alpha^* a) on the truncated basis.
inline Operator displacement(Complex alpha, const FockCutoff& cutoff) {
  require_adequate(alpha, cutoff, "displacement");
  const int d = cutoff.dim();
  Mat a = annihilation(cutoff).dense_ref();
  Mat gen = alpha * a.adjoint() - std::conj(alpha) * a;  // anti-Hermitian
  Mat herm = -kI * gen;
  return Operator::dense({d}, exp_i_hermitian(herm, 1.0));
}

// ---------------------------------------------------------------------------
// Multi-mode composition.  Kronecker order matches the declared mode order.

inline StateVector tensor_state(const std::vector<StateVector>& parts) {
  if (parts.empty()) throw DimensionMismatch("tensor_state needs at least one part");
  std::vector<int> dims;
  Vec amps = parts[0].amplitudes;
  dims = parts[0].dims;
  for (size_t k = 1; k < parts.size(); ++k) {
    Vec next(amps.size() * parts[k].amplitudes.size());
    Eigen::Index idx = 0;
    for (Eigen::Index i = 0; i < amps.size(); ++i)
      for (Eigen::Index j = 0; j < parts[k].amplitudes.size(); ++j)
        next[idx++] = amps[i] * parts[k].amplitudes[j];
    amps = std::move(next);
    dims.insert(dims.end(), parts[k].dims.begin(), parts[k].dims.end());
  }
  return StateVector(std::move(dims), std::move(amps), false);
}

inline Operator tensor_op(const std::vector<Operator>& parts) {
  if (parts.empty()) throw DimensionMismatch("tensor_op needs at least one part");
  std::vector<int> dims = parts[0].dims();
  bool any_sparse = parts[0].is_sparse();
  for (size_t k = 1; k < parts.size(); ++k) {
    for (int d : parts[k].dims()) dims.push_back(d);
    any_sparse = any_sparse || parts[k].is_sparse();
  }
  if (any_sparse || use_sparse(dims)) {
    SpMat acc = parts[0].to_sparse();
    for (size_t k = 1; k < parts.size(); ++k)
      acc = Eigen::kroneckerProduct(acc, parts[k].to_sparse()).eval();
    return Operator::sparse(std::move(dims), std::move(acc));
  }
  Mat acc = parts[0].to_dense();
  for (size_t k = 1; k < parts.size(); ++k)
    acc = Eigen::kroneckerProduct(acc, parts[k].to_dense()).eval();
  return Operator::dense(std::move(dims), std::move(acc));
}

// Single-mode op placed at `mode`, identities elsewhere.
inline Operator lift(const Operator& op, int mode, const std::vector<int>& dims) {
  if (op.dim() != dims.at(mode)) throw DimensionMismatch("lift: block does not fit mode");
  std::vector<Operator> parts;
  parts.reserve(dims.size());
  for (size_t m = 0; m < dims.size(); ++m) {
    if (static_cast<int>(m) == mode)
      parts.push_back(op);
    else
      parts.push_back(identity_op({dims[m]}));
  }
  return tensor_op(parts);
}

// ---------------------------------------------------------------------------
// Expectation values.

inline Complex expectation(const Operator& op, const StateVector& psi) {
  if (op.dims() != psi.dims) throw DimensionMismatch("expectation: dims differ");
  return psi.amplitudes.dot(op.apply(psi.amplitudes));
}

inline Complex expectation(const Operator& op, const DensityMatrix& rho) {
  if (op.dims() != rho.dims) throw DimensionMismatch("expectation: dims differ");
  return op.apply_right(rho.elements).trace();
}

// ---------------------------------------------------------------------------
// Mode-indexed raw-vector helpers (hot paths; no Operator materialization).

inline std::vector<Eigen::Index> mode_strides(const std::vector<int>& dims) {
  std::vector<Eigen::Index> s(dims.size());
  Eigen::Index acc = 1;
  for (int m = static_cast<int>(dims.size()) - 1; m >= 0; --m) {
    s[m] = acc;
    acc *= dims[m];
  }
  return s;
}

// Population of a single Fock level of one mode, traced over the others.
inline double mode_level_population(const Vec& amps, const std::vector<int>& dims, int mode,
                                    int level) {
  const auto strides = mode_strides(dims);
  const Eigen::Index stride = strides[mode];
  const int d = dims[mode];
  const Eigen::Index block = stride * d;
  double acc = 0.0;
  for (Eigen::Index base = 0; base < amps.size(); base += block)
    for (Eigen::Index i = 0; i < stride; ++i) acc += std::norm(amps[base + level * stride + i]);
  return acc;
}

inline double mode_top2_population(const Vec& amps, const std::vector<int>& dims, int mode) {
  const int d = dims[mode];
  return mode_level_population(amps, dims, mode, d - 1) +
         mode_level_population(amps, dims, mode, d - 2);
}

// y <- (block acting on `mode`) x, with the d x d dense block.
inline void apply_mode_op(const Mat& block, int mode, const std::vector<int>& dims, const Vec& x,
                          Vec& y) {
  const auto strides = mode_strides(dims);
  const Eigen::Index stride = strides[mode];
  const int d = dims[mode];
  const Eigen::Index blocksz = stride * d;
  y.resize(x.size());
  for (Eigen::Index base = 0; base < x.size(); base += blocksz) {
    for (Eigen::Index i = 0; i < stride; ++i) {
      for (int r = 0; r < d; ++r) {
        Complex acc{0.0, 0.0};
        for (int c = 0; c < d; ++c) acc += block(r, c) * x[base + c * stride + i];
        y[base + r * stride + i] = acc;
      }
    }
  }
}

}  // namespace qbm
