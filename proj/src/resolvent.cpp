#include "toelanczos/resolvent.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include "format.hpp"

namespace toel {

namespace {

constexpr double kMinRcond = std::numeric_limits<double>::epsilon();

Eigen::PartialPivLU<MatM> factor_level(const MatM& s, int depth, std::vector<double>& rcond) {
  Eigen::PartialPivLU<MatM> lu(s);
  const double rc = lu.rcond();
  rcond.push_back(rc);
  if (!(rc >= kMinRcond)) throw ResolventSingular(depth, rc);
  return lu;
}

}  // namespace

ResolventInfo star_resolvent(const TriTensor& tri) {
  const std::size_t n = tri.n();
  if (n == 0) shape_error("star_resolvent: empty tridiagonal tensor");
  if (tri.betas.size() + 1 != n || tri.gammas.size() + 1 != n) shape_error("star_resolvent: inconsistent lengths");
  const auto m = static_cast<Eigen::Index>(tri.m);
  const MatM eye = MatM::Identity(m, m);
  ResolventInfo info;
  MatM s = eye - tri.alphas[n - 1];
  for (std::size_t i = n - 1; i >= 1; --i) {
    auto lu = factor_level(s, static_cast<int>(i + 1), info.rcond);
    const MatM x = lu.solve(tri.betas[i - 1]);
    s = (eye - tri.alphas[i - 1]) - tri.gammas[i - 1] * x;
  }
  auto lu = factor_level(s, 1, info.rcond);
  info.r11 = lu.solve(eye);
  return info;
}

MatM star_resolvent_11(const TriTensor& tri) { return star_resolvent(tri).r11; }

SolutionVec approx_solution(const TriTensor& tri, const Mesh& mesh, cd normalization) {
  if (tri.m != mesh.m) shape_error("approx_solution: mesh size does not match the coefficients");
  const MatM r = star_resolvent_11(tri);
  SolutionVec out;
  out.tau = mesh.nodes;
  out.n_used = tri.n();
  out.normalization = normalization;
  out.values.resize(static_cast<Eigen::Index>(mesh.m));
  cd acc = 0.0;
  for (Eigen::Index i = 0; i < r.rows(); ++i) {
    acc += r(i, 0);
    out.values(i) = normalization * acc;
  }
  return out;
}

std::string solution_csv(const SolutionVec& s) {
  std::string out = "tau,re_s,im_s\n";
  for (std::size_t i = 0; i < s.tau.size(); ++i) {
    const cd z = s.values(static_cast<Eigen::Index>(i));
    out += fmt_g(s.tau[i]) + "," + fmt_g(z.real()) + "," + fmt_g(z.imag()) + "\n";
  }
  return out;
}

void write_solution_csv(const std::string& path, const SolutionVec& s) { write_text_atomic(path, solution_csv(s)); }

}  // namespace toel
