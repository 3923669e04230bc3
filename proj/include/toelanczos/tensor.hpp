#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "toelanczos/error.hpp"

namespace toel {

using cd = std::complex<double>;
using MatM = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

/// Per-slice structure metadata. `lower` promises exact zeros strictly above the diagonal.
enum class SliceKind : std::uint8_t { zero = 0, lower = 1, dense = 2 };
enum class Orientation : std::uint8_t { right = 0, dual = 1 };
enum class Side { left, right };

/// Exact-zero scan of an m×m matrix.
SliceKind classify(const MatM& x);
SliceKind classify_slice(const cd* s, std::size_t m);

/**
 * Four-mode tensor n1 × n2 × m × m.
 *
 * Slice (i1,i2) is a contiguous row-major m×m block at offset ((i2*n1)+i1)*m*m.
 */
class Tensor4 {
 public:
  Tensor4() = default;
  Tensor4(std::size_t n1, std::size_t n2, std::size_t m);

  std::size_t n1() const { return n1_; }
  std::size_t n2() const { return n2_; }
  std::size_t m() const { return m_; }
  std::size_t slice_size() const { return m_ * m_; }

  cd* slice(std::size_t i1, std::size_t i2) { return data_.data() + offset(i1, i2); }
  const cd* slice(std::size_t i1, std::size_t i2) const { return data_.data() + offset(i1, i2); }

  cd& operator()(std::size_t i1, std::size_t i2, std::size_t j1, std::size_t j2) {
    return data_[offset(i1, i2) + j1 * m_ + j2];
  }
  const cd& operator()(std::size_t i1, std::size_t i2, std::size_t j1, std::size_t j2) const {
    return data_[offset(i1, i2) + j1 * m_ + j2];
  }
  /// Bounds-checked access.
  const cd& at(std::size_t i1, std::size_t i2, std::size_t j1, std::size_t j2) const;

  SliceKind kind(std::size_t i1, std::size_t i2) const { return kinds_[i2 * n1_ + i1]; }
  void set_kind(std::size_t i1, std::size_t i2, SliceKind k) { kinds_[i2 * n1_ + i1] = k; }

  MatM slice_matrix(std::size_t i1, std::size_t i2) const;
  /// Copies x into the slice; the kind is detected from exact zeros.
  void set_slice(std::size_t i1, std::size_t i2, const MatM& x);
  void set_slice(std::size_t i1, std::size_t i2, const MatM& x, SliceKind k);

  /// Recomputes every slice kind from the stored entries.
  void detect_kinds();
  /// Throws if a slice violates its kind.
  void check_kinds() const;

  std::vector<cd>& data() { return data_; }
  const std::vector<cd>& data() const { return data_; }
  const std::vector<SliceKind>& kinds() const { return kinds_; }

  std::size_t nnz() const;

 private:
  std::size_t offset(std::size_t i1, std::size_t i2) const { return ((i2 * n1_) + i1) * m_ * m_; }

  std::size_t n1_ = 0, n2_ = 0, m_ = 0;
  std::vector<cd> data_;
  std::vector<SliceKind> kinds_;
};

/// Three-mode tensor n × m × m with an orientation tag.
class HyperVec {
 public:
  HyperVec() = default;
  HyperVec(std::size_t n, std::size_t m, Orientation o);

  std::size_t n() const { return n_; }
  std::size_t m() const { return m_; }
  Orientation orientation() const { return orient_; }
  bool is_dual() const { return orient_ == Orientation::dual; }

  cd* slice(std::size_t i) { return data_.data() + i * m_ * m_; }
  const cd* slice(std::size_t i) const { return data_.data() + i * m_ * m_; }
  cd& operator()(std::size_t i, std::size_t j1, std::size_t j2) { return data_[(i * m_ + j1) * m_ + j2]; }
  const cd& operator()(std::size_t i, std::size_t j1, std::size_t j2) const {
    return data_[(i * m_ + j1) * m_ + j2];
  }

  SliceKind kind(std::size_t i) const { return kinds_[i]; }
  void set_kind(std::size_t i, SliceKind k) { kinds_[i] = k; }

  MatM slice_matrix(std::size_t i) const;
  void set_slice(std::size_t i, const MatM& x);
  void detect_kinds();

  std::vector<cd>& data() { return data_; }
  const std::vector<cd>& data() const { return data_; }
  const std::vector<SliceKind>& kinds() const { return kinds_; }

 private:
  std::size_t n_ = 0, m_ = 0;
  Orientation orient_ = Orientation::right;
  std::vector<cd> data_;
  std::vector<SliceKind> kinds_;
};

// Products. OpenMP over output rows; every entry is summed in ascending outer index,
// then ascending inner index.
Tensor4 star_mul_tt(const Tensor4& a, const Tensor4& b);
HyperVec star_mul_tv(const Tensor4& a, const HyperVec& v);
HyperVec star_mul_vt(const HyperVec& w, const Tensor4& a);
MatM star_inner(const HyperVec& w, const HyperVec& v);
Tensor4 scale_t(const Tensor4& a, const MatM& x, Side side);
HyperVec scale_v(const HyperVec& v, const MatM& x, Side side);

/// x -= y scaled by s on the given side; x and y must share shape and orientation.
void sub_scaled(HyperVec& x, const HyperVec& y, const MatM& s, Side side);
HyperVec add(const HyperVec& x, const HyperVec& y);
HyperVec sub(const HyperVec& x, const HyperVec& y);
Tensor4 add(const Tensor4& x, const Tensor4& y);
Tensor4 sub(const Tensor4& x, const Tensor4& y);

HyperVec lift(const CVec& a, std::size_t m);
HyperVec lift_dual(const CVec& a, std::size_t m);
Tensor4 star_identity(std::size_t n, std::size_t m);
Tensor4 star_pow(const Tensor4& a, int k);

double frobenius(const Tensor4& x);
double frobenius(const HyperVec& x);
double frobenius(const MatM& x);

/// Flattening oracle: block (i1,i2) of the result is slice (i1,i2).
Eigen::MatrixXcd to_block_matrix(const Tensor4& a);
Tensor4 from_block_matrix(const Eigen::MatrixXcd& x, std::size_t n1, std::size_t n2, std::size_t m);
/// Right hypervectors flatten to a column of blocks, dual ones to a row of blocks.
Eigen::MatrixXcd to_block_matrix(const HyperVec& v);
HyperVec from_block_matrix(const Eigen::MatrixXcd& x, std::size_t n, std::size_t m, Orientation o);

/// Stacks hypervectors into a tensor: right ones as columns (N×n), dual ones as rows (n×N).
Tensor4 stack(const std::vector<HyperVec>& vs);

namespace serial {
// Reference versions: plain dense loops, no structure skipping, no threads.
Tensor4 star_mul_tt(const Tensor4& a, const Tensor4& b);
HyperVec star_mul_tv(const Tensor4& a, const HyperVec& v);
HyperVec star_mul_vt(const HyperVec& w, const Tensor4& a);
MatM star_inner(const HyperVec& w, const HyperVec& v);
}  // namespace serial

// T4F binary format: "T4F1", n1, n2, m, flags as u64 little-endian, then (if flags bit 0)
// n1*n2 slice-kind bytes in slice order, then interleaved (re, im) doubles in storage order.
void write_t4f(std::ostream& os, const Tensor4& a);
Tensor4 read_t4f(std::istream& is);
void write_t4f(const std::string& path, const Tensor4& a);
Tensor4 read_t4f(const std::string& path);

}  // namespace toel
