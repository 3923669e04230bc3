#include "toelanczos/tensor.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

#include "kernels.hpp"

namespace toel {

const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::input: return "input";
    case ErrorCode::shape: return "shape";
    case ErrorCode::breakdown_lucky: return "breakdown_lucky";
    case ErrorCode::breakdown_serious: return "breakdown_serious";
    case ErrorCode::resolvent_singular: return "resolvent_singular";
    case ErrorCode::io: return "io";
    case ErrorCode::stiffness: return "stiffness";
  }
  return "unknown";
}

SliceKind classify_slice(const cd* s, std::size_t m) {
  bool any = false;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      if (s[i * m + j] == cd(0.0)) continue;
      if (j > i) return SliceKind::dense;
      any = true;
    }
  return any ? SliceKind::lower : SliceKind::zero;
}

SliceKind classify(const MatM& x) {
  if (x.rows() != x.cols()) shape_error("classify: matrix not square");
  auto r = detail::row_major(x);
  return classify_slice(r.data(), static_cast<std::size_t>(x.rows()));
}

namespace detail {

std::vector<cd> row_major(const MatM& x) {
  const auto r = static_cast<std::size_t>(x.rows()), c = static_cast<std::size_t>(x.cols());
  std::vector<cd> out(r * c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) out[i * c + j] = x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  return out;
}

void run_jobs(const std::vector<SliceJob>& jobs, std::size_t m) {
  const long total = static_cast<long>(jobs.size() * m);
#pragma omp parallel for schedule(dynamic, 8)
  for (long t = 0; t < total; ++t) {
    const auto& job = jobs[static_cast<std::size_t>(t) / m];
    const std::size_t i = static_cast<std::size_t>(t) % m;
    for (const auto& term : job.terms) row_acc(job.c + i * m, term.a + i * m, term.ka, term.b, term.kb, m, i);
  }
}

}  // namespace detail

using detail::product_kind;
using detail::SliceJob;
using detail::sum_kind;
using detail::Term;

// ---- Tensor4 ----

Tensor4::Tensor4(std::size_t n1, std::size_t n2, std::size_t m)
    : n1_(n1), n2_(n2), m_(m), data_(n1 * n2 * m * m), kinds_(n1 * n2, SliceKind::zero) {
  if (n1 == 0 || n2 == 0 || m == 0) shape_error("Tensor4: zero mode size");
}

const cd& Tensor4::at(std::size_t i1, std::size_t i2, std::size_t j1, std::size_t j2) const {
  if (i1 >= n1_ || i2 >= n2_ || j1 >= m_ || j2 >= m_) shape_error("Tensor4: index out of bounds");
  return (*this)(i1, i2, j1, j2);
}

MatM Tensor4::slice_matrix(std::size_t i1, std::size_t i2) const {
  const cd* s = slice(i1, i2);
  MatM x(m_, m_);
  for (std::size_t i = 0; i < m_; ++i)
    for (std::size_t j = 0; j < m_; ++j) x(i, j) = s[i * m_ + j];
  return x;
}

void Tensor4::set_slice(std::size_t i1, std::size_t i2, const MatM& x) { set_slice(i1, i2, x, classify(x)); }

void Tensor4::set_slice(std::size_t i1, std::size_t i2, const MatM& x, SliceKind k) {
  if (static_cast<std::size_t>(x.rows()) != m_ || static_cast<std::size_t>(x.cols()) != m_)
    shape_error("Tensor4::set_slice: size mismatch");
  if (i1 >= n1_ || i2 >= n2_) shape_error("Tensor4::set_slice: index out of bounds");
  cd* s = slice(i1, i2);
  for (std::size_t i = 0; i < m_; ++i)
    for (std::size_t j = 0; j < m_; ++j) s[i * m_ + j] = x(i, j);
  set_kind(i1, i2, k);
}

void Tensor4::detect_kinds() {
  for (std::size_t i2 = 0; i2 < n2_; ++i2)
    for (std::size_t i1 = 0; i1 < n1_; ++i1) set_kind(i1, i2, classify_slice(slice(i1, i2), m_));
}

void Tensor4::check_kinds() const {
  for (std::size_t i2 = 0; i2 < n2_; ++i2)
    for (std::size_t i1 = 0; i1 < n1_; ++i1) {
      const SliceKind actual = classify_slice(slice(i1, i2), m_);
      if (actual > kind(i1, i2))
        throw Error(ErrorCode::input, "Tensor4: slice (" + std::to_string(i1) + "," + std::to_string(i2) +
                                          ") violates its structure flag");
    }
}

std::size_t Tensor4::nnz() const {
  std::size_t c = 0;
  for (const auto& x : data_) c += x != cd(0.0);
  return c;
}

// ---- HyperVec ----

HyperVec::HyperVec(std::size_t n, std::size_t m, Orientation o)
    : n_(n), m_(m), orient_(o), data_(n * m * m), kinds_(n, SliceKind::zero) {
  if (n == 0 || m == 0) shape_error("HyperVec: zero mode size");
}

MatM HyperVec::slice_matrix(std::size_t i) const {
  const cd* s = slice(i);
  MatM x(m_, m_);
  for (std::size_t r = 0; r < m_; ++r)
    for (std::size_t c = 0; c < m_; ++c) x(r, c) = s[r * m_ + c];
  return x;
}

void HyperVec::set_slice(std::size_t i, const MatM& x) {
  if (static_cast<std::size_t>(x.rows()) != m_ || static_cast<std::size_t>(x.cols()) != m_)
    shape_error("HyperVec::set_slice: size mismatch");
  cd* s = slice(i);
  for (std::size_t r = 0; r < m_; ++r)
    for (std::size_t c = 0; c < m_; ++c) s[r * m_ + c] = x(r, c);
  kinds_[i] = classify(x);
}

void HyperVec::detect_kinds() {
  for (std::size_t i = 0; i < n_; ++i) kinds_[i] = classify_slice(slice(i), m_);
}

// ---- products ----

namespace {

void need_orient(const HyperVec& v, Orientation o, const char* op) {
  if (v.orientation() != o)
    throw Error(ErrorCode::shape, std::string(op) + ": hypervector has the wrong orientation");
}

}  // namespace

Tensor4 star_mul_tt(const Tensor4& a, const Tensor4& b) {
  if (a.n2() != b.n1() || a.m() != b.m()) shape_error("star_mul_tt: dimension mismatch");
  const std::size_t m = a.m();
  Tensor4 c(a.n1(), b.n2(), m);
  std::vector<SliceJob> jobs;
  for (std::size_t i2 = 0; i2 < b.n2(); ++i2)
    for (std::size_t i1 = 0; i1 < a.n1(); ++i1) {
      SliceJob job{c.slice(i1, i2), {}};
      SliceKind kc = SliceKind::zero;
      for (std::size_t k = 0; k < a.n2(); ++k) {
        const SliceKind pk = product_kind(a.kind(i1, k), b.kind(k, i2));
        if (pk == SliceKind::zero) continue;
        job.terms.push_back({a.slice(i1, k), a.kind(i1, k), b.slice(k, i2), b.kind(k, i2)});
        kc = sum_kind(kc, pk);
      }
      c.set_kind(i1, i2, kc);
      if (!job.terms.empty()) jobs.push_back(std::move(job));
    }
  detail::run_jobs(jobs, m);
  return c;
}

HyperVec star_mul_tv(const Tensor4& a, const HyperVec& v) {
  need_orient(v, Orientation::right, "star_mul_tv");
  if (a.n2() != v.n() || a.m() != v.m()) shape_error("star_mul_tv: dimension mismatch");
  const std::size_t m = a.m();
  HyperVec out(a.n1(), m, Orientation::right);
  std::vector<SliceJob> jobs;
  for (std::size_t i = 0; i < a.n1(); ++i) {
    SliceJob job{out.slice(i), {}};
    SliceKind kc = SliceKind::zero;
    for (std::size_t k = 0; k < a.n2(); ++k) {
      const SliceKind pk = product_kind(a.kind(i, k), v.kind(k));
      if (pk == SliceKind::zero) continue;
      job.terms.push_back({a.slice(i, k), a.kind(i, k), v.slice(k), v.kind(k)});
      kc = sum_kind(kc, pk);
    }
    out.set_kind(i, kc);
    if (!job.terms.empty()) jobs.push_back(std::move(job));
  }
  detail::run_jobs(jobs, m);
  return out;
}

HyperVec star_mul_vt(const HyperVec& w, const Tensor4& a) {
  need_orient(w, Orientation::dual, "star_mul_vt");
  if (a.n1() != w.n() || a.m() != w.m()) shape_error("star_mul_vt: dimension mismatch");
  const std::size_t m = a.m();
  HyperVec out(a.n2(), m, Orientation::dual);
  std::vector<SliceJob> jobs;
  for (std::size_t i = 0; i < a.n2(); ++i) {
    SliceJob job{out.slice(i), {}};
    SliceKind kc = SliceKind::zero;
    for (std::size_t k = 0; k < a.n1(); ++k) {
      const SliceKind pk = product_kind(w.kind(k), a.kind(k, i));
      if (pk == SliceKind::zero) continue;
      job.terms.push_back({w.slice(k), w.kind(k), a.slice(k, i), a.kind(k, i)});
      kc = sum_kind(kc, pk);
    }
    out.set_kind(i, kc);
    if (!job.terms.empty()) jobs.push_back(std::move(job));
  }
  detail::run_jobs(jobs, m);
  return out;
}

MatM star_inner(const HyperVec& w, const HyperVec& v) {
  need_orient(w, Orientation::dual, "star_inner");
  need_orient(v, Orientation::right, "star_inner");
  if (w.n() != v.n() || w.m() != v.m()) shape_error("star_inner: dimension mismatch");
  const std::size_t m = v.m();
  std::vector<cd> buf(m * m);
  SliceJob job{buf.data(), {}};
  for (std::size_t k = 0; k < v.n(); ++k) {
    if (product_kind(w.kind(k), v.kind(k)) == SliceKind::zero) continue;
    job.terms.push_back({w.slice(k), w.kind(k), v.slice(k), v.kind(k)});
  }
  detail::run_jobs({job}, m);
  MatM out(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) out(i, j) = buf[i * m + j];
  return out;
}

Tensor4 scale_t(const Tensor4& a, const MatM& x, Side side) {
  if (static_cast<std::size_t>(x.rows()) != a.m() || static_cast<std::size_t>(x.cols()) != a.m())
    shape_error("scale_t: matrix size mismatch");
  const std::size_t m = a.m();
  const auto xb = detail::row_major(x);
  const SliceKind kx = classify_slice(xb.data(), m);
  Tensor4 c(a.n1(), a.n2(), m);
  std::vector<SliceJob> jobs;
  for (std::size_t i2 = 0; i2 < a.n2(); ++i2)
    for (std::size_t i1 = 0; i1 < a.n1(); ++i1) {
      const SliceKind ka = a.kind(i1, i2);
      const SliceKind pk = product_kind(ka, kx);
      c.set_kind(i1, i2, pk);
      if (pk == SliceKind::zero) continue;
      if (side == Side::right)
        jobs.push_back({c.slice(i1, i2), {{a.slice(i1, i2), ka, xb.data(), kx}}});
      else
        jobs.push_back({c.slice(i1, i2), {{xb.data(), kx, a.slice(i1, i2), ka}}});
    }
  detail::run_jobs(jobs, m);
  return c;
}

HyperVec scale_v(const HyperVec& v, const MatM& x, Side side) {
  if (static_cast<std::size_t>(x.rows()) != v.m() || static_cast<std::size_t>(x.cols()) != v.m())
    shape_error("scale_v: matrix size mismatch");
  const std::size_t m = v.m();
  const auto xb = detail::row_major(x);
  const SliceKind kx = classify_slice(xb.data(), m);
  HyperVec c(v.n(), m, v.orientation());
  std::vector<SliceJob> jobs;
  for (std::size_t i = 0; i < v.n(); ++i) {
    const SliceKind kv = v.kind(i);
    const SliceKind pk = product_kind(kv, kx);
    c.set_kind(i, pk);
    if (pk == SliceKind::zero) continue;
    if (side == Side::right)
      jobs.push_back({c.slice(i), {{v.slice(i), kv, xb.data(), kx}}});
    else
      jobs.push_back({c.slice(i), {{xb.data(), kx, v.slice(i), kv}}});
  }
  detail::run_jobs(jobs, m);
  return c;
}

namespace {

void same_shape(const HyperVec& x, const HyperVec& y, const char* op) {
  if (x.n() != y.n() || x.m() != y.m() || x.orientation() != y.orientation())
    shape_error(std::string(op) + ": operand mismatch");
}

void same_shape(const Tensor4& x, const Tensor4& y, const char* op) {
  if (x.n1() != y.n1() || x.n2() != y.n2() || x.m() != y.m()) shape_error(std::string(op) + ": operand mismatch");
}

template <class T>
void axpy_data(std::vector<cd>& x, const std::vector<cd>& y, double sign) {
  const long n = static_cast<long>(x.size());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i) x[i] += sign * y[i];
}

}  // namespace

void sub_scaled(HyperVec& x, const HyperVec& y, const MatM& s, Side side) {
  same_shape(x, y, "sub_scaled");
  const HyperVec p = scale_v(y, s, side);
  auto& xd = x.data();
  const auto& pd = p.data();
  const long total = static_cast<long>(xd.size());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < total; ++i) xd[i] -= pd[i];
  for (std::size_t i = 0; i < x.n(); ++i) x.set_kind(i, sum_kind(x.kind(i), p.kind(i)));
}

HyperVec add(const HyperVec& x, const HyperVec& y) {
  same_shape(x, y, "add");
  HyperVec z = x;
  axpy_data<HyperVec>(z.data(), y.data(), 1.0);
  for (std::size_t i = 0; i < z.n(); ++i) z.set_kind(i, sum_kind(x.kind(i), y.kind(i)));
  return z;
}

HyperVec sub(const HyperVec& x, const HyperVec& y) {
  same_shape(x, y, "sub");
  HyperVec z = x;
  axpy_data<HyperVec>(z.data(), y.data(), -1.0);
  for (std::size_t i = 0; i < z.n(); ++i) z.set_kind(i, sum_kind(x.kind(i), y.kind(i)));
  return z;
}

Tensor4 add(const Tensor4& x, const Tensor4& y) {
  same_shape(x, y, "add");
  Tensor4 z = x;
  axpy_data<Tensor4>(z.data(), y.data(), 1.0);
  for (std::size_t i2 = 0; i2 < z.n2(); ++i2)
    for (std::size_t i1 = 0; i1 < z.n1(); ++i1) z.set_kind(i1, i2, sum_kind(x.kind(i1, i2), y.kind(i1, i2)));
  return z;
}

Tensor4 sub(const Tensor4& x, const Tensor4& y) {
  same_shape(x, y, "sub");
  Tensor4 z = x;
  axpy_data<Tensor4>(z.data(), y.data(), -1.0);
  for (std::size_t i2 = 0; i2 < z.n2(); ++i2)
    for (std::size_t i1 = 0; i1 < z.n1(); ++i1) z.set_kind(i1, i2, sum_kind(x.kind(i1, i2), y.kind(i1, i2)));
  return z;
}

namespace {

HyperVec lift_impl(const CVec& a, std::size_t m, Orientation o) {
  if (a.size() == 0) shape_error("lift: empty vector");
  if (m == 0) shape_error("lift: m must be positive");
  const auto n = static_cast<std::size_t>(a.size());
  HyperVec v(n, m, o);
  for (std::size_t i = 0; i < n; ++i) {
    const cd ai = o == Orientation::dual ? std::conj(a(static_cast<Eigen::Index>(i))) : a(static_cast<Eigen::Index>(i));
    if (ai == cd(0.0)) continue;
    for (std::size_t j = 0; j < m; ++j) v(i, j, j) = ai;
    v.set_kind(i, SliceKind::lower);
  }
  return v;
}

}  // namespace

HyperVec lift(const CVec& a, std::size_t m) { return lift_impl(a, m, Orientation::right); }
HyperVec lift_dual(const CVec& a, std::size_t m) { return lift_impl(a, m, Orientation::dual); }

Tensor4 star_identity(std::size_t n, std::size_t m) {
  Tensor4 t(n, n, m);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) t(i, i, j, j) = 1.0;
    t.set_kind(i, i, SliceKind::lower);
  }
  return t;
}

Tensor4 star_pow(const Tensor4& a, int k) {
  if (a.n1() != a.n2()) shape_error("star_pow: outer modes not square");
  if (k < 0) shape_error("star_pow: negative exponent");
  if (k == 0) return star_identity(a.n1(), a.m());
  Tensor4 r = a;
  for (int i = 1; i < k; ++i) r = star_mul_tt(r, a);
  return r;
}

namespace {

double norm_of(const std::vector<cd>& d) {
  double s = 0.0;
  for (const auto& x : d) s += std::norm(x);
  return std::sqrt(s);
}

}  // namespace

double frobenius(const Tensor4& x) { return norm_of(x.data()); }
double frobenius(const HyperVec& x) { return norm_of(x.data()); }
double frobenius(const MatM& x) {
  double s = 0.0;
  for (Eigen::Index j = 0; j < x.cols(); ++j)
    for (Eigen::Index i = 0; i < x.rows(); ++i) s += std::norm(x(i, j));
  return std::sqrt(s);
}

Eigen::MatrixXcd to_block_matrix(const Tensor4& a) {
  const std::size_t m = a.m();
  Eigen::MatrixXcd x(a.n1() * m, a.n2() * m);
  for (std::size_t i2 = 0; i2 < a.n2(); ++i2)
    for (std::size_t i1 = 0; i1 < a.n1(); ++i1)
      for (std::size_t r = 0; r < m; ++r)
        for (std::size_t c = 0; c < m; ++c) x(i1 * m + r, i2 * m + c) = a(i1, i2, r, c);
  return x;
}

Tensor4 from_block_matrix(const Eigen::MatrixXcd& x, std::size_t n1, std::size_t n2, std::size_t m) {
  if (static_cast<std::size_t>(x.rows()) != n1 * m || static_cast<std::size_t>(x.cols()) != n2 * m)
    shape_error("from_block_matrix: size mismatch");
  Tensor4 a(n1, n2, m);
  for (std::size_t i2 = 0; i2 < n2; ++i2)
    for (std::size_t i1 = 0; i1 < n1; ++i1)
      for (std::size_t r = 0; r < m; ++r)
        for (std::size_t c = 0; c < m; ++c) a(i1, i2, r, c) = x(i1 * m + r, i2 * m + c);
  a.detect_kinds();
  return a;
}

Eigen::MatrixXcd to_block_matrix(const HyperVec& v) {
  const std::size_t m = v.m();
  const bool dual = v.is_dual();
  Eigen::MatrixXcd x(dual ? m : v.n() * m, dual ? v.n() * m : m);
  for (std::size_t i = 0; i < v.n(); ++i)
    for (std::size_t r = 0; r < m; ++r)
      for (std::size_t c = 0; c < m; ++c) {
        if (dual)
          x(r, i * m + c) = v(i, r, c);
        else
          x(i * m + r, c) = v(i, r, c);
      }
  return x;
}

HyperVec from_block_matrix(const Eigen::MatrixXcd& x, std::size_t n, std::size_t m, Orientation o) {
  const bool dual = o == Orientation::dual;
  const std::size_t rows = dual ? m : n * m, cols = dual ? n * m : m;
  if (static_cast<std::size_t>(x.rows()) != rows || static_cast<std::size_t>(x.cols()) != cols)
    shape_error("from_block_matrix: size mismatch");
  HyperVec v(n, m, o);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t r = 0; r < m; ++r)
      for (std::size_t c = 0; c < m; ++c) v(i, r, c) = dual ? x(r, i * m + c) : x(i * m + r, c);
  v.detect_kinds();
  return v;
}

Tensor4 stack(const std::vector<HyperVec>& vs) {
  if (vs.empty()) shape_error("stack: no hypervectors");
  const std::size_t n = vs.size(), big = vs[0].n(), m = vs[0].m();
  const bool dual = vs[0].is_dual();
  Tensor4 t(dual ? n : big, dual ? big : n, m);
  for (std::size_t k = 0; k < n; ++k) {
    if (vs[k].n() != big || vs[k].m() != m || vs[k].is_dual() != dual) shape_error("stack: operand mismatch");
    for (std::size_t i = 0; i < big; ++i) {
      const std::size_t i1 = dual ? k : i, i2 = dual ? i : k;
      std::memcpy(static_cast<void*>(t.slice(i1, i2)), vs[k].slice(i), m * m * sizeof(cd));
      t.set_kind(i1, i2, vs[k].kind(i));
    }
  }
  return t;
}

// ---- serial reference ----

namespace serial {

namespace {

void naive_acc(cd* c, const cd* a, const cd* b, std::size_t m) {
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t l = 0; l < m; ++l)
      for (std::size_t j = 0; j < m; ++j) c[i * m + j] += a[i * m + l] * b[l * m + j];
}

}  // namespace

Tensor4 star_mul_tt(const Tensor4& a, const Tensor4& b) {
  if (a.n2() != b.n1() || a.m() != b.m()) shape_error("star_mul_tt: dimension mismatch");
  Tensor4 c(a.n1(), b.n2(), a.m());
  for (std::size_t i2 = 0; i2 < b.n2(); ++i2)
    for (std::size_t i1 = 0; i1 < a.n1(); ++i1) {
      SliceKind kc = SliceKind::zero;
      for (std::size_t k = 0; k < a.n2(); ++k) {
        naive_acc(c.slice(i1, i2), a.slice(i1, k), b.slice(k, i2), a.m());
        kc = sum_kind(kc, product_kind(a.kind(i1, k), b.kind(k, i2)));
      }
      c.set_kind(i1, i2, kc);
    }
  return c;
}

HyperVec star_mul_tv(const Tensor4& a, const HyperVec& v) {
  need_orient(v, Orientation::right, "star_mul_tv");
  if (a.n2() != v.n() || a.m() != v.m()) shape_error("star_mul_tv: dimension mismatch");
  HyperVec out(a.n1(), a.m(), Orientation::right);
  for (std::size_t i = 0; i < a.n1(); ++i) {
    SliceKind kc = SliceKind::zero;
    for (std::size_t k = 0; k < a.n2(); ++k) {
      naive_acc(out.slice(i), a.slice(i, k), v.slice(k), a.m());
      kc = sum_kind(kc, product_kind(a.kind(i, k), v.kind(k)));
    }
    out.set_kind(i, kc);
  }
  return out;
}

HyperVec star_mul_vt(const HyperVec& w, const Tensor4& a) {
  need_orient(w, Orientation::dual, "star_mul_vt");
  if (a.n1() != w.n() || a.m() != w.m()) shape_error("star_mul_vt: dimension mismatch");
  HyperVec out(a.n2(), a.m(), Orientation::dual);
  for (std::size_t i = 0; i < a.n2(); ++i) {
    SliceKind kc = SliceKind::zero;
    for (std::size_t k = 0; k < a.n1(); ++k) {
      naive_acc(out.slice(i), w.slice(k), a.slice(k, i), a.m());
      kc = sum_kind(kc, product_kind(w.kind(k), a.kind(k, i)));
    }
    out.set_kind(i, kc);
  }
  return out;
}

MatM star_inner(const HyperVec& w, const HyperVec& v) {
  need_orient(w, Orientation::dual, "star_inner");
  need_orient(v, Orientation::right, "star_inner");
  if (w.n() != v.n() || w.m() != v.m()) shape_error("star_inner: dimension mismatch");
  const std::size_t m = v.m();
  std::vector<cd> buf(m * m);
  for (std::size_t k = 0; k < v.n(); ++k) naive_acc(buf.data(), w.slice(k), v.slice(k), m);
  MatM out(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) out(i, j) = buf[i * m + j];
  return out;
}

}  // namespace serial

// ---- T4F ----

namespace {

constexpr char kT4FMagic[4] = {'T', '4', 'F', '1'};
constexpr std::uint64_t kFlagKinds = 1;

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
  if (!is.read(reinterpret_cast<char*>(b), sizeof(T))) throw Error(ErrorCode::io, "T4F: truncated file");
  if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
  T v;
  std::memcpy(&v, b, sizeof(T));
  return v;
}

}  // namespace

void write_t4f(std::ostream& os, const Tensor4& a) {
  os.write(kT4FMagic, 4);
  put_le<std::uint64_t>(os, a.n1());
  put_le<std::uint64_t>(os, a.n2());
  put_le<std::uint64_t>(os, a.m());
  put_le<std::uint64_t>(os, kFlagKinds);
  for (auto k : a.kinds()) os.put(static_cast<char>(k));
  for (const auto& x : a.data()) {
    put_le<double>(os, x.real());
    put_le<double>(os, x.imag());
  }
  if (!os) throw Error(ErrorCode::io, "T4F: write failed");
}

Tensor4 read_t4f(std::istream& is) {
  char magic[4];
  if (!is.read(magic, 4) || std::memcmp(magic, kT4FMagic, 4) != 0) throw Error(ErrorCode::io, "T4F: bad magic");
  const auto n1 = get_le<std::uint64_t>(is), n2 = get_le<std::uint64_t>(is), m = get_le<std::uint64_t>(is);
  const auto flags = get_le<std::uint64_t>(is);
  if (n1 == 0 || n2 == 0 || m == 0 || n1 * n2 * m * m > (std::uint64_t{1} << 34))
    throw Error(ErrorCode::io, "T4F: implausible header");
  Tensor4 a(n1, n2, m);
  std::vector<SliceKind> kinds;
  if (flags & kFlagKinds) {
    for (std::size_t i = 0; i < n1 * n2; ++i) {
      const int c = is.get();
      if (c < 0 || c > 2) throw Error(ErrorCode::io, "T4F: bad slice kind");
      kinds.push_back(static_cast<SliceKind>(c));
    }
  }
  for (auto& x : a.data()) {
    const double re = get_le<double>(is);
    const double im = get_le<double>(is);
    x = cd(re, im);
  }
  if (kinds.empty()) {
    a.detect_kinds();
  } else {
    for (std::size_t i2 = 0; i2 < n2; ++i2)
      for (std::size_t i1 = 0; i1 < n1; ++i1) a.set_kind(i1, i2, kinds[i2 * n1 + i1]);
    try {
      a.check_kinds();
    } catch (const Error& e) {
      throw Error(ErrorCode::io, std::string("T4F: ") + e.what());
    }
  }
  return a;
}

void write_t4f(const std::string& path, const Tensor4& a) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(ErrorCode::io, "cannot open " + path + " for writing");
  write_t4f(os, a);
}

Tensor4 read_t4f(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(ErrorCode::io, "cannot open " + path);
  return read_t4f(is);
}

}  // namespace toel
