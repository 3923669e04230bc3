#include "toelanczos/diagnostics.hpp"

#include <cmath>

#include "format.hpp"

namespace toel {

using nlohmann::json;

namespace {

double sq(double x) { return x * x; }

double ratio(double num, double den) { return den == 0.0 ? (num == 0.0 ? 0.0 : num) : num / den; }

}  // namespace

double err_biorth(const LanczosResult& r) {
  const std::size_t n = r.v_basis.size();
  const auto m = static_cast<Eigen::Index>(r.tri.m);
  double num = 0.0, nv = 0.0, nw = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      MatM x = star_inner(r.w_basis[i], r.v_basis[j]);
      if (i == j) x -= MatM::Identity(m, m);
      num += sq(frobenius(x));
    }
    nv += sq(frobenius(r.v_basis[i]));
    nw += sq(frobenius(r.w_basis[i]));
  }
  return ratio(std::sqrt(num), std::sqrt(std::max(nv, nw)));
}

std::pair<double, double> err_recurrences(const LanczosResult& r, const Tensor4& a) {
  const std::size_t n = r.v_basis.size();
  double num_v = 0.0, av = 0.0, vt = 0.0;
  double num_w = 0.0, wa = 0.0, tw = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const bool last = k + 1 == n;
    // V side: column k of A*V_n - V_n*T_n - residual.
    const HyperVec x = star_mul_tv(a, r.v_basis[k]);
    HyperVec res = x;
    HyperVec p = scale_v(r.v_basis[k], r.tri.alphas[k], Side::right);
    sub_scaled(res, r.v_basis[k], r.tri.alphas[k], Side::right);
    if (k > 0) {
      sub_scaled(res, r.v_basis[k - 1], r.tri.gammas[k - 1], Side::right);
      p = add(p, scale_v(r.v_basis[k - 1], r.tri.gammas[k - 1], Side::right));
    }
    if (last) {
      res = sub(res, r.residual_v);
      p = add(p, r.residual_v);
    } else {
      sub_scaled(res, r.v_basis[k + 1], r.tri.betas[k], Side::right);
      p = add(p, scale_v(r.v_basis[k + 1], r.tri.betas[k], Side::right));
    }
    num_v += sq(frobenius(res));
    av += sq(frobenius(x));
    vt += sq(frobenius(p));

    // W side: row k of W_n*A - T_n*W_n - residual.
    const HyperVec y = star_mul_vt(r.w_basis[k], a);
    HyperVec rw = y;
    HyperVec q = scale_v(r.w_basis[k], r.tri.alphas[k], Side::left);
    sub_scaled(rw, r.w_basis[k], r.tri.alphas[k], Side::left);
    if (k > 0) {
      sub_scaled(rw, r.w_basis[k - 1], r.tri.betas[k - 1], Side::left);
      q = add(q, scale_v(r.w_basis[k - 1], r.tri.betas[k - 1], Side::left));
    }
    if (last) {
      rw = sub(rw, r.residual_w);
      q = add(q, r.residual_w);
    } else if (r.gamma_identity) {
      rw = sub(rw, r.w_basis[k + 1]);
      q = add(q, r.w_basis[k + 1]);
    } else {
      sub_scaled(rw, r.w_basis[k + 1], r.tri.gammas[k], Side::left);
      q = add(q, scale_v(r.w_basis[k + 1], r.tri.gammas[k], Side::left));
    }
    num_w += sq(frobenius(rw));
    wa += sq(frobenius(y));
    tw += sq(frobenius(q));
  }
  return {ratio(std::sqrt(num_v), std::sqrt(std::max(av, vt))), ratio(std::sqrt(num_w), std::sqrt(std::max(wa, tw)))};
}

namespace {

std::vector<double> moments_impl(const LanczosResult& r, const Tensor4& a, const HyperVec& v1, const HyperVec& w1,
                                 std::size_t k_max) {
  const std::size_t n = r.tri.n();
  const Tensor4 t = assemble_tridiag(r.tri);
  CVec e1 = CVec::Zero(static_cast<Eigen::Index>(n));
  e1(0) = 1.0;
  const HyperVec e1d = lift_dual(e1, r.tri.m);
  HyperVec x = v1;
  HyperVec y = lift(e1, r.tri.m);
  std::vector<double> out;
  for (std::size_t k = 0; k <= k_max; ++k) {
    if (k > 0) {
      x = star_mul_tv(a, x);
      y = star_mul_tv(t, y);
    }
    const MatM lhs = star_inner(w1, x);
    const MatM rhs = star_inner(e1d, y);
    out.push_back(ratio(frobenius(MatM(lhs - rhs)), std::max(frobenius(lhs), frobenius(rhs))));
  }
  return out;
}

}  // namespace

std::vector<double> err_moments(const LanczosResult& r, const Tensor4& a, std::size_t k_max) {
  return moments_impl(r, a, r.v_basis.front(), r.w_basis.front(), k_max);
}

std::vector<double> err_moments(const LanczosResult& r, const Tensor4& a, const CVec& v, const CVec& w,
                                std::size_t k_max) {
  const cd c = w.dot(v);
  if (c == cd(0.0)) throw Error(ErrorCode::input, "err_moments: w^H v = 0");
  return moments_impl(r, a, lift(v / c, a.m()), lift_dual(w, a.m()), k_max);
}

double err_solution(const CVec& s_hat, const CVec& s) {
  if (s_hat.size() != s.size()) shape_error("err_solution: length mismatch");
  return ratio((s_hat - s).norm(), s_hat.norm());
}

double convergence_slope(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 2) throw Error(ErrorCode::input, "convergence_slope: need at least two points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [m, e] : points) {
    if (!(m > 0 && e > 0)) throw Error(ErrorCode::input, "convergence_slope: values must be positive");
    const double x = std::log(m), y = std::log(e);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double k = static_cast<double>(points.size());
  const double den = k * sxx - sx * sx;
  if (den == 0.0) throw Error(ErrorCode::input, "convergence_slope: all M equal");
  return (k * sxy - sx * sy) / den;
}

ErrorReport make_report(const LanczosResult& r, const Tensor4& a, bool with_moments) {
  ErrorReport rep;
  rep.M = a.m();
  rep.n = r.tri.n();
  rep.status = r.status.describe();
  rep.err_o = err_biorth(r);
  std::tie(rep.err_v, rep.err_w) = err_recurrences(r, a);
  if (with_moments) rep.err_m = err_moments(r, a, 2 * rep.n - 1);
  return rep;
}

json report_json(const ErrorReport& r) {
  json j{{"problem", r.problem_id}, {"mesh", r.mesh},   {"M", r.M},         {"n", r.n},
         {"status", r.status},      {"err_o", r.err_o}, {"err_v", r.err_v}, {"err_w", r.err_w},
         {"err_m", r.err_m},        {"reference", r.reference}};
  j["err_sol"] = r.err_sol ? json(*r.err_sol) : json(nullptr);
  return j;
}

std::string report_csv_header() { return "problem,mesh,M,n,status,err_o,err_v,err_w,err_m_max,err_sol"; }

std::string report_csv_row(const ErrorReport& r) {
  double mmax = 0.0;
  for (double e : r.err_m) mmax = std::max(mmax, e);
  std::string status = r.status;
  for (auto& c : status)
    if (c == ',') c = ';';
  return r.problem_id + "," + r.mesh + "," + std::to_string(r.M) + "," + std::to_string(r.n) + "," + status + "," +
         fmt_g(r.err_o) + "," + fmt_g(r.err_v) + "," + fmt_g(r.err_w) + "," +
         (r.err_m.empty() ? std::string() : fmt_g(mmax)) + "," + (r.err_sol ? fmt_g(*r.err_sol) : std::string());
}

}  // namespace toel
