#include <doctest.h>

#include <limits>

#include "oracles.hpp"
#include "toelanczos/diagnostics.hpp"
#include "toelanczos/problems.hpp"
#include "toelanczos/resolvent.hpp"

using namespace toel;

TEST_CASE("nodal mesh endpoints and spacing") {
  const Mesh m = build_mesh(0.0, 1.0, 10);
  CHECK(m.h == doctest::Approx(1.0 / 9.0));
  CHECK(m.tau.front() == 0.0);
  CHECK(m.tau.back() == 1.0);
  const Mesh two = build_mesh(1e-4, 1.0, 2);
  CHECK(two.tau[0] == 1e-4);
  CHECK(two.tau[1] == 1.0);
  const Mesh odd = build_mesh(0.0, 1.0, 101);
  CHECK(odd.tau[50] == doctest::Approx(0.5).epsilon(1e-15));
  for (std::size_t i = 1; i < odd.m; ++i) {
    CHECK(odd.tau[i] > odd.tau[i - 1]);
    CHECK(odd.tau[i] - odd.tau[i - 1] == doctest::Approx(odd.h).epsilon(1e-12));
  }
  CHECK(odd.nodes == odd.tau);
}

TEST_CASE("step mesh samples left points and reports right points") {
  const Mesh m = build_mesh(0.0, 1.0, 4, MeshKind::step);
  CHECK(m.h == 0.25);
  CHECK(m.tau == std::vector<double>{0.0, 0.25, 0.5, 0.75});
  CHECK(m.nodes == std::vector<double>{0.25, 0.5, 0.75, 1.0});
}

TEST_CASE("mesh argument errors") {
  CHECK_THROWS_AS(build_mesh(0.0, 1.0, 1), Error);
  CHECK_THROWS_AS(build_mesh(1.0, 1.0, 5), Error);
  CHECK_THROWS_AS(build_mesh(0.0, std::nan(""), 5), Error);
  CHECK(parse_mesh_kind("step") == MeshKind::step);
  CHECK(std::string(mesh_kind_name(MeshKind::nodal)) == "nodal");
  CHECK_THROWS_AS(parse_mesh_kind("midpoint"), Error);
}

TEST_CASE("theta matrix") {
  Mesh m = build_mesh(0.0, 1.0, 2);
  MatM two(2, 2);
  two << 1, 0, 1, 1;
  CHECK(theta_matrix(m) == two);
  m = build_mesh(0.0, 1.0, 3);
  MatM three(3, 3);
  three << .5, 0, 0, .5, .5, 0, .5, .5, .5;
  CHECK(theta_matrix(m) == three);
  const CVec e1 = CVec::Unit(3, 0);
  CHECK(theta_matrix(m) * e1 == CVec::Constant(3, 0.5));
}

TEST_CASE("constant entries discretize to c times theta") {
  const Problem p = builtin("const3");
  const Mesh mesh = build_mesh(0.0, 1.0, 7);
  const Tensor4 a = discretize_problem(p, mesh);
  const MatM th = theta_matrix(mesh);
  CHECK(a.slice_matrix(0, 1) == th);
  CHECK(a.slice_matrix(0, 0) == MatM(-th));
  CHECK(a.slice_matrix(1, 1) == MatM::Zero(7, 7));
  CHECK(a.kind(1, 1) == SliceKind::zero);
  CHECK(a.kind(0, 1) == SliceKind::lower);
  CHECK_NOTHROW(a.check_kinds());
}

TEST_CASE("entry t on a three-point mesh") {
  Problem p;
  p.id = "t";
  p.n = 1;
  p.v = p.w = CVec::Ones(1);
  p.add_term(0, 0, Term{1.0, 1, Trig::none, 0.0});
  const Tensor4 a = discretize_problem(p, build_mesh(0.0, 1.0, 3));
  MatM expect(3, 3);
  expect << 0, 0, 0, .25, .25, 0, .5, .5, .5;
  CHECK(a.slice_matrix(0, 0) == expect);
}

TEST_CASE("rows are constant below the diagonal") {
  const Problem p = builtin("timedep5");
  const Tensor4 a = discretize_problem(p, build_mesh(p.a, p.b, 13, MeshKind::step));
  for (std::size_t k = 0; k < 5; ++k)
    for (std::size_t l = 0; l < 5; ++l) {
      const MatM s = a.slice_matrix(k, l);
      for (Eigen::Index i = 0; i < 13; ++i)
        for (Eigen::Index j = 0; j <= i; ++j) CHECK(s(i, j) == s(i, 0));
    }
  // (2,1) has no terms and stays structurally zero
  CHECK(a.kind(1, 0) == SliceKind::zero);
}

TEST_CASE("non-finite samples name the entry") {
  Problem p;
  p.id = "bad";
  p.n = 2;
  p.a = 0.0;
  p.v = p.w = CVec::Ones(2);
  p.add_term(1, 0, Term{cd(std::numeric_limits<double>::infinity()), 0, Trig::none, 0.0});
  try {
    discretize_problem(p, build_mesh(0.0, 1.0, 4));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::input);
    CHECK(std::string(e.what()).find("A(2,1)") != std::string::npos);
    CHECK(std::string(e.what()).find("t = 0") != std::string::npos);
  }
}

TEST_CASE("scalar cos converges at first order") {
  const Problem p = builtin("scalar_cos");
  std::vector<std::pair<double, double>> pts;
  for (std::size_t M : {10, 40, 160}) {
    const Mesh mesh = build_mesh(p.a, p.b, M, MeshKind::step);
    const Tensor4 a = discretize_problem(p, mesh);
    const LanczosResult r = tensor_lanczos(a, p.v, p.w, 1);
    const SolutionVec s = approx_solution(r.tri, mesh, r.normalization);
    pts.emplace_back(double(M), err_solution(analytic_reference(p, mesh).values, s.values));
  }
  const double slope = convergence_slope(pts);
  CHECK(slope == doctest::Approx(-1.0).epsilon(0.15));
}
