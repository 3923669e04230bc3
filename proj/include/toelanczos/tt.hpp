#pragma once

#include <array>
#include <string>
#include <vector>

#include "toelanczos/tensor.hpp"

namespace toel {

/**
 * Tensor train over the modes (n1, n2, m, m).
 * Core k is stored column-major as (r_{k-1}, n_k, r_k): entry (a, i, b) sits at a + r_{k-1}(i + n_k b).
 */
struct TTTensor {
  std::array<std::size_t, 4> modes{};
  std::array<std::size_t, 5> ranks{1, 1, 1, 1, 1};
  std::array<std::vector<cd>, 4> cores;
  double tol_used = 0.0;
  /// Relative Frobenius error implied by the discarded singular values.
  double error_estimate = 0.0;

  /// G_k(i) as an r_{k-1} x r_k matrix; k is zero-based.
  MatM core_slice(std::size_t k, std::size_t i) const;
  std::size_t params() const;
};

/// Sequential truncated SVD with per-step threshold tol * |a|_F / sqrt(3).
TTTensor tt_svd(const Tensor4& a, double tol);
Tensor4 tt_reconstruct(const TTTensor& t);
/// |a - reconstruct(t)|_F / |a|_F, evaluated slice by slice without forming the full reconstruction.
double tt_relative_error(const TTTensor& t, const Tensor4& a);

double compression_factor(std::size_t params, std::size_t nnz);
double compression_factor(const TTTensor& t, const Tensor4& a);

/// r_k <= min(prod_{j<=k} n_j, prod_{j>k} n_j) for k = 1..3.
bool ranks_within_bounds(const TTTensor& t);

// TTF1 binary: "TTF1", then u64 LE d = 4, the four mode sizes, the five ranks, f64 tol,
// then the cores in order as interleaved (re, im) doubles.
void write_ttf(const std::string& path, const TTTensor& t);
TTTensor read_ttf(const std::string& path);

/// M,tol,nnz,r0,r1,r2,r3,r4,params,cf
std::string tt_rank_csv_header();
std::string tt_rank_csv_row(std::size_t M, double tol, std::size_t nnz, const TTTensor& t);

}  // namespace toel
