#pragma once

// Independent reference computations shared by the tests and the acceptance binary.
// Everything here goes through dense block matrices or plain loops, never through the ⋆ kernels.

#include <cmath>
#include <random>

#include <unsupported/Eigen/MatrixFunctions>

#include "toelanczos/discretize.hpp"
#include "toelanczos/problem.hpp"
#include "toelanczos/tensor.hpp"

namespace oracle {

using toel::cd;
using toel::CVec;
using toel::HyperVec;
using toel::MatM;
using toel::Orientation;
using toel::SliceKind;
using toel::Tensor4;
using Rng = std::mt19937_64;

inline cd rand_cd(Rng& g) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double re = u(g);
  return {re, u(g)};
}

inline MatM random_matrix(std::size_t m, Rng& g, bool lower = false) {
  MatM x = MatM::Zero(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      if (!lower || j <= i) x(i, j) = rand_cd(g);
  return x;
}

inline CVec random_vector(std::size_t n, Rng& g) {
  CVec v(n);
  for (std::size_t i = 0; i < n; ++i) v(i) = rand_cd(g);
  return v;
}

/// Slices drawn as zero, lower or dense with the given weights.
inline Tensor4 random_tensor(std::size_t n1, std::size_t n2, std::size_t m, Rng& g, double p_zero = 0.0,
                             double p_lower = 0.0) {
  Tensor4 t(n1, n2, m);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::size_t i2 = 0; i2 < n2; ++i2)
    for (std::size_t i1 = 0; i1 < n1; ++i1) {
      const double r = u(g);
      if (r < p_zero) continue;
      const bool lower = r < p_zero + p_lower;
      t.set_slice(i1, i2, random_matrix(m, g, lower), lower ? SliceKind::lower : SliceKind::dense);
    }
  return t;
}

inline HyperVec random_hypervec(std::size_t n, std::size_t m, Orientation o, Rng& g, double p_zero = 0.0,
                                double p_lower = 0.0) {
  HyperVec v(n, m, o);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = u(g);
    if (r < p_zero) continue;
    const bool lower = r < p_zero + p_lower;
    v.set_slice(i, random_matrix(m, g, lower));
    v.set_kind(i, lower ? SliceKind::lower : SliceKind::dense);
  }
  return v;
}

inline double rel(const MatM& x, const MatM& ref) {
  const double d = (x - ref).norm(), r = ref.norm();
  return r == 0.0 ? d : d / r;
}

inline double rel(const Tensor4& x, const Tensor4& ref) { return rel(to_block_matrix(x), to_block_matrix(ref)); }
inline double rel(const HyperVec& x, const HyperVec& ref) { return rel(to_block_matrix(x), to_block_matrix(ref)); }

inline bool bitwise_equal(const std::vector<cd>& x, const std::vector<cd>& y) {
  if (x.size() != y.size()) return false;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] != y[i]) return false;
  return true;
}

/// Block (i1,i2) of the N*M x N*M matrix, filled by explicit loops.
inline MatM blocks(const Tensor4& a) {
  const std::size_t m = a.m();
  MatM x(a.n1() * m, a.n2() * m);
  for (std::size_t i1 = 0; i1 < a.n1(); ++i1)
    for (std::size_t i2 = 0; i2 < a.n2(); ++i2)
      for (std::size_t j1 = 0; j1 < m; ++j1)
        for (std::size_t j2 = 0; j2 < m; ++j2) x(i1 * m + j1, i2 * m + j2) = a(i1, i2, j1, j2);
  return x;
}

inline MatM column_blocks(const CVec& v, std::size_t m) {
  MatM x = MatM::Zero(v.size() * m, m);
  for (Eigen::Index i = 0; i < v.size(); ++i) x.block(i * m, 0, m, m) = v(i) * MatM::Identity(m, m);
  return x;
}

/// Row of blocks conj(w_i) I, the dual lift.
inline MatM row_blocks(const CVec& w, std::size_t m) {
  MatM x = MatM::Zero(m, w.size() * m);
  for (Eigen::Index i = 0; i < w.size(); ++i) x.block(0, i * m, m, m) = std::conj(w(i)) * MatM::Identity(m, m);
  return x;
}

/// Running sum of the first column, i.e. (1/h) theta r e_1.
inline CVec running_first_column(const MatM& r) {
  CVec s(r.rows());
  cd acc = 0.0;
  for (Eigen::Index i = 0; i < r.rows(); ++i) s(i) = acc += r(i, 0);
  return s;
}

/// W^D * (I - A)^{-1} * V by a dense LU solve of the full block system.
inline MatM resolvent_direct(const Tensor4& a, const CVec& v, const CVec& w) {
  const std::size_t m = a.m();
  const MatM big = blocks(a);
  const MatM id = MatM::Identity(big.rows(), big.cols());
  return row_blocks(w, m) * (id - big).partialPivLu().solve(column_blocks(v, m));
}

/**
 * W^D * sum_k A^k * V, truncated after max_terms or once a term falls below 1e-16 of the running norm.
 * Hypervector iteration X_k = A X_{k-1} on block columns.
 */
inline MatM resolvent_neumann(const Tensor4& a, const CVec& v, const CVec& w, std::size_t max_terms) {
  const std::size_t m = a.m();
  const MatM big = blocks(a);
  const MatM wd = row_blocks(w, m);
  MatM x = column_blocks(v, m);
  MatM acc = wd * x;
  for (std::size_t k = 1; k < max_terms; ++k) {
    x = big * x;
    const MatM term = wd * x;
    acc += term;
    if (x.norm() <= 1e-16 * acc.norm() && term.norm() <= 1e-16 * acc.norm()) break;
  }
  return acc;
}

/// exp(A t) for a constant matrix.
inline MatM expm(const MatM& a, double t) { return MatM(a * t).exp(); }

/// Random problem on [0, 1]. Every entry has a constant term plus one random term.
inline toel::Problem random_problem(std::size_t n, Rng& g) {
  toel::Problem p;
  p.id = "random";
  p.n = n;
  p.a = 0.0;
  p.b = 1.0;
  p.v = random_vector(n, g);
  p.w = random_vector(n, g);
  std::uniform_int_distribution<int> pick(0, 2);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t l = 0; l < n; ++l) {
      p.add_term(k, l, toel::Term{rand_cd(g), 0, toel::Trig::none, 0.0});
      toel::Term t;
      t.coeff = rand_cd(g);
      t.power = pick(g);
      t.trig = static_cast<toel::Trig>(pick(g));
      t.omega = 1.0 + pick(g);
      p.add_term(k, l, t);
    }
  return p;
}

}  // namespace oracle
