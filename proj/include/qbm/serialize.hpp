#pragma once

// Binary container for states and operators.
//
// Layout (little-endian):
//   magic   8 bytes  "QBMBIN01"
//   kind    u8       0 = state vector, 1 = dense operator, 2 = sparse operator
//   layout  u8       0 = row-major amplitudes, mode 1 slowest
//   pad     u16      zero
//   ndims   u32
//   dims    u32 * ndims
//   state:  count u64, then count * (re f64, im f64)
//   dense:  rows u64, cols u64, then rows*cols * (re, im) row-major
//   sparse: nnz u64, then nnz * (row u32, col u32, re f64, im f64)

#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "qbm/fock.hpp"

namespace qbm {

namespace detail {

inline void put_bytes(std::ostream& os, const void* p, size_t n) {
  os.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
}

inline void get_bytes(std::istream& is, void* p, size_t n) {
  is.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
  if (!is) throw Error("container truncated");
}

template <typename T>
void put(std::ostream& os, T v) {
  put_bytes(os, &v, sizeof(T));
}

template <typename T>
T get(std::istream& is) {
  T v;
  get_bytes(is, &v, sizeof(T));
  return v;
}

inline void write_header(std::ostream& os, uint8_t kind, const std::vector<int>& dims) {
  os.write("QBMBIN01", 8);
  put<uint8_t>(os, kind);
  put<uint8_t>(os, 0);  // layout: row-major, mode 1 slowest
  put<uint16_t>(os, 0);
  put<uint32_t>(os, static_cast<uint32_t>(dims.size()));
  for (int d : dims) put<uint32_t>(os, static_cast<uint32_t>(d));
}

inline std::vector<int> read_header(std::istream& is, uint8_t expected_kind) {
  char magic[8];
  get_bytes(is, magic, 8);
  if (std::memcmp(magic, "QBMBIN01", 8) != 0) throw Error("bad container magic");
  const uint8_t kind = get<uint8_t>(is);
  if (kind != expected_kind) throw Error("container holds a different object kind");
  if (get<uint8_t>(is) != 0) throw Error("unknown layout tag");
  get<uint16_t>(is);
  const uint32_t ndims = get<uint32_t>(is);
  std::vector<int> dims(ndims);
  for (auto& d : dims) d = static_cast<int>(get<uint32_t>(is));
  return dims;
}

}  // namespace detail

inline void save_state(const StateVector& psi, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open " + path);
  detail::write_header(os, 0, psi.dims);
  detail::put<uint64_t>(os, static_cast<uint64_t>(psi.amplitudes.size()));
  for (Eigen::Index i = 0; i < psi.amplitudes.size(); ++i) {
    detail::put<double>(os, psi.amplitudes[i].real());
    detail::put<double>(os, psi.amplitudes[i].imag());
  }
}

inline StateVector load_state(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot open " + path);
  auto dims = detail::read_header(is, 0);
  const uint64_t count = detail::get<uint64_t>(is);
  Vec amps(static_cast<Eigen::Index>(count));
  for (uint64_t i = 0; i < count; ++i) {
    const double re = detail::get<double>(is);
    const double im = detail::get<double>(is);
    amps[static_cast<Eigen::Index>(i)] = Complex(re, im);
  }
  return StateVector(std::move(dims), std::move(amps), false);
}

inline void save_density(const DensityMatrix& rho, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open " + path);
  detail::write_header(os, 1, rho.dims);
  detail::put<uint64_t>(os, static_cast<uint64_t>(rho.elements.rows()));
  detail::put<uint64_t>(os, static_cast<uint64_t>(rho.elements.cols()));
  for (Eigen::Index r = 0; r < rho.elements.rows(); ++r)
    for (Eigen::Index c = 0; c < rho.elements.cols(); ++c) {
      detail::put<double>(os, rho.elements(r, c).real());
      detail::put<double>(os, rho.elements(r, c).imag());
    }
}

inline DensityMatrix load_density(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot open " + path);
  auto dims = detail::read_header(is, 1);
  const auto rows = static_cast<Eigen::Index>(detail::get<uint64_t>(is));
  const auto cols = static_cast<Eigen::Index>(detail::get<uint64_t>(is));
  Mat m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) {
      const double re = detail::get<double>(is);
      const double im = detail::get<double>(is);
      m(r, c) = Complex(re, im);
    }
  return DensityMatrix(std::move(dims), std::move(m), false);
}

inline void save_operator(const Operator& op, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open " + path);
  if (op.is_sparse()) {
    detail::write_header(os, 2, op.dims());
    const SpMat& m = op.sparse_ref();
    detail::put<uint64_t>(os, static_cast<uint64_t>(m.nonZeros()));
    for (int k = 0; k < m.outerSize(); ++k)
      for (SpMat::InnerIterator it(m, k); it; ++it) {
        detail::put<uint32_t>(os, static_cast<uint32_t>(it.row()));
        detail::put<uint32_t>(os, static_cast<uint32_t>(it.col()));
        detail::put<double>(os, it.value().real());
        detail::put<double>(os, it.value().imag());
      }
  } else {
    detail::write_header(os, 1, op.dims());
    const Mat& m = op.dense_ref();
    detail::put<uint64_t>(os, static_cast<uint64_t>(m.rows()));
    detail::put<uint64_t>(os, static_cast<uint64_t>(m.cols()));
    for (Eigen::Index r = 0; r < m.rows(); ++r)
      for (Eigen::Index c = 0; c < m.cols(); ++c) {
        detail::put<double>(os, m(r, c).real());
        detail::put<double>(os, m(r, c).imag());
      }
  }
}

inline Operator load_operator(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot open " + path);
  char magic[8];
  detail::get_bytes(is, magic, 8);
  if (std::memcmp(magic, "QBMBIN01", 8) != 0) throw Error("bad container magic");
  const uint8_t kind = detail::get<uint8_t>(is);
  if (detail::get<uint8_t>(is) != 0) throw Error("unknown layout tag");
  detail::get<uint16_t>(is);
  const uint32_t ndims = detail::get<uint32_t>(is);
  std::vector<int> dims(ndims);
  for (auto& d : dims) d = static_cast<int>(detail::get<uint32_t>(is));

  if (kind == 1) {
    const auto rows = static_cast<Eigen::Index>(detail::get<uint64_t>(is));
    const auto cols = static_cast<Eigen::Index>(detail::get<uint64_t>(is));
    Mat m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r)
      for (Eigen::Index c = 0; c < cols; ++c) {
        const double re = detail::get<double>(is);
        const double im = detail::get<double>(is);
        m(r, c) = Complex(re, im);
      }
    return Operator::dense(std::move(dims), std::move(m));
  }
  if (kind == 2) {
    const uint64_t nnz = detail::get<uint64_t>(is);
    std::vector<Eigen::Triplet<Complex>> trips;
    trips.reserve(nnz);
    for (uint64_t k = 0; k < nnz; ++k) {
      const auto r = static_cast<int>(detail::get<uint32_t>(is));
      const auto c = static_cast<int>(detail::get<uint32_t>(is));
      const double re = detail::get<double>(is);
      const double im = detail::get<double>(is);
      trips.emplace_back(r, c, Complex(re, im));
    }
    const int n = total_dim(dims);
    SpMat m(n, n);
    m.setFromTriplets(trips.begin(), trips.end());
    return Operator::sparse(std::move(dims), std::move(m));
  }
  throw Error("container holds a different object kind");
}

}  // namespace qbm
