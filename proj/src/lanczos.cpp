#include "toelanczos/lanczos.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace toel {

namespace {

using RowMat = Eigen::Matrix<cd, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using RowMap = Eigen::Map<RowMat>;
using ConstRowMap = Eigen::Map<const RowMat>;

bool is_identity(const MatM& x) { return x.isIdentity(0.0); }

void zero_upper(cd* s, std::size_t m) {
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) s[i * m + j] = 0.0;
}

}  // namespace

TriTensor TriTensor::prefix(std::size_t k) const {
  if (k > n()) shape_error("TriTensor::prefix: longer than the tensor");
  TriTensor t;
  t.m = m;
  t.alphas.assign(alphas.begin(), alphas.begin() + static_cast<long>(k));
  const std::size_t off = k == 0 ? 0 : k - 1;
  t.betas.assign(betas.begin(), betas.begin() + static_cast<long>(off));
  t.gammas.assign(gammas.begin(), gammas.begin() + static_cast<long>(off));
  return t;
}

Tensor4 assemble_tridiag(const TriTensor& tri) {
  const std::size_t n = tri.n();
  if (n == 0) shape_error("assemble_tridiag: empty");
  if (tri.betas.size() != n - 1 || tri.gammas.size() != n - 1) shape_error("assemble_tridiag: inconsistent lengths");
  Tensor4 t(n, n, tri.m);
  for (std::size_t i = 0; i < n; ++i) {
    t.set_slice(i, i, tri.alphas[i]);
    if (i + 1 < n) {
      t.set_slice(i, i + 1, tri.gammas[i]);
      t.set_slice(i + 1, i, tri.betas[i]);
    }
  }
  return t;
}

double condition_number(const MatM& x) {
  Eigen::BDCSVD<MatM> svd(x);
  const auto& s = svd.singularValues();
  if (s.size() == 0) return 1.0;
  const double smax = s(0), smin = s(s.size() - 1);
  if (!(smin > 0.0)) return std::numeric_limits<double>::infinity();
  return smax / smin;
}

BreakdownCheck classify_breakdown(const HyperVec& v_hat, const HyperVec& w_hat, double v_prev_norm,
                                  double w_prev_norm, const MatM& beta, double eps_lucky, double eps_serious) {
  BreakdownCheck c;
  if (frobenius(v_hat) < eps_lucky * v_prev_norm) {
    c.kind = BreakdownKind::lucky;
    c.side = BreakSide::v;
    return c;
  }
  if (frobenius(w_hat) < eps_lucky * w_prev_norm) {
    c.kind = BreakdownKind::lucky;
    c.side = BreakSide::w;
    return c;
  }
  c.condition = condition_number(beta);
  if (!(c.condition <= eps_serious)) c.kind = BreakdownKind::serious;
  return c;
}

std::string LanczosStatus::describe() const {
  std::ostringstream os;
  switch (kind) {
    case StatusKind::completed: os << "completed"; break;
    case StatusKind::lucky_breakdown:
      os << "lucky_breakdown(k=" << k << ", side=" << (side == BreakSide::v ? "v" : "w") << ")";
      break;
    case StatusKind::serious_breakdown: os << "serious_breakdown(k=" << k << ", cond=" << condition << ")"; break;
  }
  return os.str();
}

HyperVec solve_right(const HyperVec& x, const MatM& beta) {
  const std::size_t m = x.m();
  if (static_cast<std::size_t>(beta.rows()) != m || static_cast<std::size_t>(beta.cols()) != m)
    shape_error("solve_right: size mismatch");
  const bool lower = classify(beta) == SliceKind::lower;
  Eigen::PartialPivLU<MatM> lu;
  if (!lower) lu.compute(beta.transpose());
  HyperVec y(x.n(), m, x.orientation());
  const long n = static_cast<long>(x.n());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    if (x.kind(k) == SliceKind::zero) continue;
    ConstRowMap xs(x.slice(k), m, m);
    RowMap ys(y.slice(k), m, m);
    if (lower) {
      ys = beta.triangularView<Eigen::Lower>().solve<Eigen::OnTheRight>(xs);
    } else {
      ys = lu.solve(xs.transpose()).transpose();
    }
  }
  for (std::size_t k = 0; k < x.n(); ++k) {
    SliceKind kk = SliceKind::zero;
    if (x.kind(k) != SliceKind::zero) kk = (lower && x.kind(k) == SliceKind::lower) ? SliceKind::lower : SliceKind::dense;
    if (kk == SliceKind::lower) zero_upper(y.slice(k), m);
    y.set_kind(k, kk);
  }
  return y;
}

HyperVec solve_left(const MatM& gamma, const HyperVec& x) {
  const std::size_t m = x.m();
  if (static_cast<std::size_t>(gamma.rows()) != m || static_cast<std::size_t>(gamma.cols()) != m)
    shape_error("solve_left: size mismatch");
  const bool lower = classify(gamma) == SliceKind::lower;
  Eigen::PartialPivLU<MatM> lu;
  if (!lower) lu.compute(gamma);
  HyperVec y(x.n(), m, x.orientation());
  const long n = static_cast<long>(x.n());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    if (x.kind(k) == SliceKind::zero) continue;
    ConstRowMap xs(x.slice(k), m, m);
    RowMap ys(y.slice(k), m, m);
    if (lower)
      ys = gamma.triangularView<Eigen::Lower>().solve(xs);
    else
      ys = lu.solve(xs);
  }
  for (std::size_t k = 0; k < x.n(); ++k) {
    SliceKind kk = SliceKind::zero;
    if (x.kind(k) != SliceKind::zero) kk = (lower && x.kind(k) == SliceKind::lower) ? SliceKind::lower : SliceKind::dense;
    if (kk == SliceKind::lower) zero_upper(y.slice(k), m);
    y.set_kind(k, kk);
  }
  return y;
}

LanczosResult tensor_lanczos(const Tensor4& a, const CVec& v, const CVec& w, std::size_t n,
                             const LanczosOptions& opts) {
  if (a.n1() != a.n2()) shape_error("tensor_lanczos: tensor not square in the outer modes");
  if (static_cast<std::size_t>(v.size()) != a.n1() || static_cast<std::size_t>(w.size()) != a.n1())
    shape_error("tensor_lanczos: vector length does not match the tensor");
  if (n == 0) throw Error(ErrorCode::input, "tensor_lanczos: n must be at least 1");
  const cd c = w.dot(v);  // conjugates w
  if (c == cd(0.0)) throw Error(ErrorCode::input, "tensor_lanczos: w^H v = 0");
  const std::size_t m = a.m();

  LanczosResult r;
  r.normalization = c;
  r.tri.m = m;
  r.gamma_identity = !opts.gamma_rule;
  const CVec vn = v / c;
  r.v_basis.push_back(lift(vn, m));
  r.w_basis.push_back(lift_dual(w, m));

  for (std::size_t k = 1; k <= n; ++k) {
    const HyperVec& vk = r.v_basis[k - 1];
    const HyperVec& wk = r.w_basis[k - 1];
    HyperVec v_hat = star_mul_tv(a, vk);
    HyperVec w_hat = star_mul_vt(wk, a);
    MatM alpha = star_inner(wk, v_hat);
    sub_scaled(v_hat, vk, alpha, Side::right);
    sub_scaled(w_hat, wk, alpha, Side::left);
    if (k > 1) {
      sub_scaled(v_hat, r.v_basis[k - 2], r.tri.gammas[k - 2], Side::right);
      sub_scaled(w_hat, r.w_basis[k - 2], r.tri.betas[k - 2], Side::left);
    }
    r.tri.alphas.push_back(std::move(alpha));

    if (k == n) {
      r.residual_v = std::move(v_hat);
      r.residual_w = std::move(w_hat);
      r.status = {StatusKind::completed, k, BreakSide::v, 0.0};
      break;
    }

    const MatM wv = star_inner(w_hat, v_hat);
    MatM gamma, beta;
    if (opts.gamma_rule) {
      gamma = opts.gamma_rule(k, wv);
      if (gamma.rows() != static_cast<Eigen::Index>(m) || gamma.cols() != static_cast<Eigen::Index>(m))
        shape_error("gamma rule returned a matrix of the wrong size");
      beta = is_identity(gamma) ? wv : MatM(gamma.partialPivLu().solve(wv));
    } else {
      gamma = MatM::Identity(m, m);
      beta = wv;
    }

    const BreakdownCheck chk = classify_breakdown(v_hat, w_hat, frobenius(vk), frobenius(wk), beta,
                                                  opts.eps_lucky, opts.eps_serious);
    if (chk.kind != BreakdownKind::none) {
      r.residual_v = std::move(v_hat);
      r.residual_w = std::move(w_hat);
      r.status = {chk.kind == BreakdownKind::lucky ? StatusKind::lucky_breakdown : StatusKind::serious_breakdown, k,
                  chk.side, chk.condition};
      break;
    }
    r.beta_condition.push_back(chk.condition);

    r.v_basis.push_back(solve_right(v_hat, beta));
    r.w_basis.push_back(is_identity(gamma) ? std::move(w_hat) : solve_left(gamma, w_hat));
    r.tri.betas.push_back(std::move(beta));
    r.tri.gammas.push_back(std::move(gamma));
  }
  return r;
}

std::array<VectorPair, 2> split_unit_vectors(std::size_t i, std::size_t j, std::size_t n) {
  if (i >= n || j >= n) shape_error("split_unit_vectors: index out of range");
  const CVec e = CVec::Ones(static_cast<Eigen::Index>(n));
  CVec ej = CVec::Zero(static_cast<Eigen::Index>(n));
  ej(static_cast<Eigen::Index>(j)) = 1.0;
  CVec w1 = e;
  w1(static_cast<Eigen::Index>(i)) += 1.0;
  return {VectorPair{w1, ej}, VectorPair{e, ej}};
}

}  // namespace toel
