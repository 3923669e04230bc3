#include "toelanczos/tt.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <functional>

#include "format.hpp"

namespace toel {

namespace {

using Eigen::Index;
using Mat = Eigen::MatrixXcd;

/// Fills out (rows x (c1 - c0)) with columns c0..c1 of an unfolding.
using Fetch = std::function<void(Index c0, Index c1, Mat& out)>;

struct Factor {
  Mat u;      // rows x r, orthonormal columns
  Mat c;      // r x cols, u^H A
  double tail = 0.0;  // discarded energy
};

Factor left_factor(Index rows, Index cols, const Fetch& fetch, double delta) {
  Mat u;
  Eigen::VectorXd sigma;
  const Index blk = std::max<Index>(4 * rows, (Index{1} << 18) / std::max<Index>(rows, 1));
  Mat b;
  if (rows <= cols) {
    // R factor of A^H from a sequence of stacked QR updates; A = R^H Q^H keeps the left singular vectors.
    Mat r(0, rows);
    for (Index c0 = 0; c0 < cols; c0 += blk) {
      const Index c1 = std::min(cols, c0 + blk);
      fetch(c0, c1, b);
      std::vector<Index> keep;
      for (Index j = 0; j < b.cols(); ++j)
        if (!b.col(j).isZero(0.0)) keep.push_back(j);
      if (keep.empty()) continue;
      Mat s(r.rows() + static_cast<Index>(keep.size()), rows);
      s.topRows(r.rows()) = r;
      for (std::size_t j = 0; j < keep.size(); ++j) s.row(r.rows() + static_cast<Index>(j)) = b.col(keep[j]).adjoint();
      Eigen::HouseholderQR<Mat> qr(s);
      const Index k = std::min(s.rows(), rows);
      r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
    }
    if (r.rows() == 0) {
      u = Mat::Zero(rows, 1);
      u(0, 0) = 1.0;
      sigma = Eigen::VectorXd::Zero(1);
    } else {
      Eigen::BDCSVD<Mat> svd(r.adjoint(), Eigen::ComputeThinU);
      u = svd.matrixU();
      sigma = svd.singularValues();
    }
  } else {
    fetch(0, cols, b);
    Eigen::BDCSVD<Mat> svd(b, Eigen::ComputeThinU);
    u = svd.matrixU();
    sigma = svd.singularValues();
  }

  Index rank = sigma.size();
  double tail = 0.0;
  while (rank > 1 && tail + sigma(rank - 1) * sigma(rank - 1) <= delta * delta) {
    tail += sigma(rank - 1) * sigma(rank - 1);
    --rank;
  }
  Factor f;
  f.u = u.leftCols(rank);
  f.tail = tail;
  f.c.resize(rank, cols);
  for (Index c0 = 0; c0 < cols; c0 += blk) {
    const Index c1 = std::min(cols, c0 + blk);
    fetch(c0, c1, b);
    f.c.middleCols(c0, c1 - c0).noalias() = f.u.adjoint() * b;
  }
  return f;
}

std::vector<cd> to_vec(const Mat& x) { return std::vector<cd>(x.data(), x.data() + x.size()); }

}  // namespace

MatM TTTensor::core_slice(std::size_t k, std::size_t i) const {
  if (k >= 4 || i >= modes[k]) shape_error("TTTensor::core_slice: index out of range");
  const std::size_t r0 = ranks[k], r1 = ranks[k + 1], n = modes[k];
  MatM x(r0, r1);
  for (std::size_t b = 0; b < r1; ++b)
    for (std::size_t a = 0; a < r0; ++a) x(a, b) = cores[k][a + r0 * (i + n * b)];
  return x;
}

std::size_t TTTensor::params() const {
  std::size_t p = 0;
  for (std::size_t k = 0; k < 4; ++k) p += ranks[k] * modes[k] * ranks[k + 1];
  return p;
}

TTTensor tt_svd(const Tensor4& a, double tol) {
  if (!(tol > 0.0)) throw Error(ErrorCode::input, "tt_svd: tol must be positive");
  const std::size_t n1 = a.n1(), n2 = a.n2(), m = a.m();
  TTTensor t;
  t.modes = {n1, n2, m, m};
  t.tol_used = tol;
  const double norm = frobenius(a);
  const double delta = tol * norm / std::sqrt(3.0);
  double tail = 0.0;

  // Mode order (i1, i2, j1, j2) with i1 fastest; column c of the first unfolding is i2 + n2 (j1 + m j2).
  const Fetch from_tensor = [&a, n1, n2, m](Index c0, Index c1, Mat& out) {
    out.resize(static_cast<Index>(n1), c1 - c0);
    for (Index c = c0; c < c1; ++c) {
      const auto cu = static_cast<std::size_t>(c);
      const std::size_t i2 = cu % n2, j1 = (cu / n2) % m, j2 = cu / (n2 * m);
      for (std::size_t i1 = 0; i1 < n1; ++i1)
        out(static_cast<Index>(i1), c - c0) = a.kind(i1, i2) == SliceKind::zero ? cd(0.0) : a(i1, i2, j1, j2);
    }
  };
  Factor f = left_factor(static_cast<Index>(n1), static_cast<Index>(n2 * m * m), from_tensor, delta);
  tail += f.tail;
  t.ranks[1] = static_cast<std::size_t>(f.u.cols());
  t.cores[0] = to_vec(f.u);
  Mat c = std::move(f.c);

  for (std::size_t k = 1; k <= 2; ++k) {
    const Index rows = static_cast<Index>(t.ranks[k] * t.modes[k]);
    const Index cols = c.size() / rows;
    const Eigen::Map<const Mat> view(c.data(), rows, cols);
    const Fetch from_matrix = [&view](Index c0, Index c1, Mat& out) { out = view.middleCols(c0, c1 - c0); };
    f = left_factor(rows, cols, from_matrix, delta);
    tail += f.tail;
    t.ranks[k + 1] = static_cast<std::size_t>(f.u.cols());
    t.cores[k] = to_vec(f.u);
    c = std::move(f.c);
  }
  t.cores[3] = to_vec(c);
  t.error_estimate = norm == 0.0 ? 0.0 : std::sqrt(tail) / norm;
  return t;
}

namespace {

/// Slice (i1,i2) of the reconstruction, row-major m x m.
void reconstruct_slice(const TTTensor& t, const std::array<std::vector<MatM>, 4>& g, std::size_t i1, std::size_t i2,
                       Eigen::Matrix<cd, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>& out) {
  const std::size_t m = t.modes[2];
  const MatM head = g[0][i1] * g[1][i2];  // 1 x r2
  MatM p(m, t.ranks[3]);
  for (std::size_t j = 0; j < m; ++j) p.row(j) = head * g[2][j];
  MatM q(t.ranks[3], m);
  for (std::size_t j = 0; j < m; ++j) q.col(j) = g[3][j];
  out.noalias() = p * q;
}

std::array<std::vector<MatM>, 4> all_slices(const TTTensor& t) {
  std::array<std::vector<MatM>, 4> g;
  for (std::size_t k = 0; k < 4; ++k)
    for (std::size_t i = 0; i < t.modes[k]; ++i) g[k].push_back(t.core_slice(k, i));
  return g;
}

}  // namespace

Tensor4 tt_reconstruct(const TTTensor& t) {
  const std::size_t n1 = t.modes[0], n2 = t.modes[1], m = t.modes[2];
  if (t.modes[3] != m) shape_error("tt_reconstruct: inner modes differ");
  const auto g = all_slices(t);
  Tensor4 a(n1, n2, m);
  const long total = static_cast<long>(n1 * n2);
#pragma omp parallel
  {
    Eigen::Matrix<cd, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> s;
#pragma omp for schedule(dynamic)
    for (long idx = 0; idx < total; ++idx) {
      const std::size_t i1 = static_cast<std::size_t>(idx) % n1, i2 = static_cast<std::size_t>(idx) / n1;
      reconstruct_slice(t, g, i1, i2, s);
      std::memcpy(static_cast<void*>(a.slice(i1, i2)), s.data(), m * m * sizeof(cd));
    }
  }
  a.detect_kinds();
  return a;
}

double tt_relative_error(const TTTensor& t, const Tensor4& a) {
  const std::size_t n1 = t.modes[0], n2 = t.modes[1], m = t.modes[2];
  if (a.n1() != n1 || a.n2() != n2 || a.m() != m) shape_error("tt_relative_error: shape mismatch");
  const auto g = all_slices(t);
  std::vector<double> err(n1 * n2, 0.0);
  const long total = static_cast<long>(n1 * n2);
#pragma omp parallel
  {
    Eigen::Matrix<cd, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> s;
#pragma omp for schedule(dynamic)
    for (long idx = 0; idx < total; ++idx) {
      const std::size_t i1 = static_cast<std::size_t>(idx) % n1, i2 = static_cast<std::size_t>(idx) / n1;
      reconstruct_slice(t, g, i1, i2, s);
      const cd* x = a.slice(i1, i2);
      double e = 0.0;
      for (std::size_t j = 0; j < m * m; ++j) e += std::norm(x[j] - s.data()[j]);
      err[static_cast<std::size_t>(idx)] = e;
    }
  }
  double sum = 0.0;
  for (double e : err) sum += e;
  const double norm = frobenius(a);
  return norm == 0.0 ? std::sqrt(sum) : std::sqrt(sum) / norm;
}

double compression_factor(std::size_t params, std::size_t nnz) {
  if (nnz == 0) throw Error(ErrorCode::input, "compression_factor: tensor has no nonzeros");
  return static_cast<double>(params) / static_cast<double>(nnz);
}

double compression_factor(const TTTensor& t, const Tensor4& a) { return compression_factor(t.params(), a.nnz()); }

bool ranks_within_bounds(const TTTensor& t) {
  if (t.ranks[0] != 1 || t.ranks[4] != 1) return false;
  for (std::size_t k = 1; k <= 3; ++k) {
    std::size_t left = 1, right = 1;
    for (std::size_t j = 0; j < k; ++j) left *= t.modes[j];
    for (std::size_t j = k; j < 4; ++j) right *= t.modes[j];
    if (t.ranks[k] < 1 || t.ranks[k] > std::min(left, right)) return false;
  }
  return true;
}

namespace {

constexpr char kTTFMagic[4] = {'T', 'T', 'F', '1'};

template <class T>
void put_le(std::ostream& os, T v) {
  unsigned char b[sizeof(T)];
  std::memcpy(b, &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
  os.write(reinterpret_cast<const char*>(b), sizeof(T));
}

template <class T>
T get_le(std::istream& is) {
  unsigned char b[sizeof(T)];
  if (!is.read(reinterpret_cast<char*>(b), sizeof(T))) throw Error(ErrorCode::io, "TTF: truncated file");
  if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
  T v;
  std::memcpy(&v, b, sizeof(T));
  return v;
}

}  // namespace

void write_ttf(const std::string& path, const TTTensor& t) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(ErrorCode::io, "cannot open " + path + " for writing");
  os.write(kTTFMagic, 4);
  put_le<std::uint64_t>(os, 4);
  for (auto n : t.modes) put_le<std::uint64_t>(os, n);
  for (auto r : t.ranks) put_le<std::uint64_t>(os, r);
  put_le<double>(os, t.tol_used);
  for (const auto& core : t.cores)
    for (const auto& x : core) {
      put_le<double>(os, x.real());
      put_le<double>(os, x.imag());
    }
  if (!os) throw Error(ErrorCode::io, "write failed: " + path);
}

TTTensor read_ttf(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(ErrorCode::io, "cannot open " + path);
  char magic[4];
  if (!is.read(magic, 4) || std::memcmp(magic, kTTFMagic, 4) != 0) throw Error(ErrorCode::io, "TTF: bad magic");
  if (get_le<std::uint64_t>(is) != 4) throw Error(ErrorCode::io, "TTF: only 4-mode trains are supported");
  TTTensor t;
  for (auto& n : t.modes) n = get_le<std::uint64_t>(is);
  for (auto& r : t.ranks) r = get_le<std::uint64_t>(is);
  t.tol_used = get_le<double>(is);
  for (std::size_t k = 0; k < 4; ++k) {
    const std::size_t count = t.ranks[k] * t.modes[k] * t.ranks[k + 1];
    if (count > (std::size_t{1} << 32)) throw Error(ErrorCode::io, "TTF: implausible core size");
    t.cores[k].resize(count);
    for (auto& x : t.cores[k]) {
      const double re = get_le<double>(is);
      const double im = get_le<double>(is);
      x = cd(re, im);
    }
  }
  return t;
}

std::string tt_rank_csv_header() { return "M,tol,nnz,r0,r1,r2,r3,r4,params,cf"; }

std::string tt_rank_csv_row(std::size_t M, double tol, std::size_t nnz, const TTTensor& t) {
  std::string row = std::to_string(M) + "," + fmt_g(tol) + "," + std::to_string(nnz);
  for (auto r : t.ranks) row += "," + std::to_string(r);
  row += "," + std::to_string(t.params()) + "," + fmt_g(compression_factor(t.params(), nnz));
  return row;
}

}  // namespace toel
