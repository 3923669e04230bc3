#include "toelanczos/discretize.hpp"

#include <cmath>
#include <sstream>

namespace toel {

Mesh build_mesh(double a, double b, std::size_t m, MeshKind kind) {
  if (!(std::isfinite(a) && std::isfinite(b)) || !(b > a))
    throw Error(ErrorCode::input, "build_mesh: degenerate interval");
  if (m < 2) throw Error(ErrorCode::input, "build_mesh: need at least 2 points");
  Mesh mesh;
  mesh.a = a;
  mesh.b = b;
  mesh.m = m;
  mesh.kind = kind;
  mesh.tau.resize(m);
  mesh.nodes.resize(m);
  if (kind == MeshKind::nodal) {
    mesh.h = (b - a) / static_cast<double>(m - 1);
    for (std::size_t i = 0; i < m; ++i) mesh.tau[i] = a + mesh.h * static_cast<double>(i);
    mesh.tau[m - 1] = b;
    mesh.nodes = mesh.tau;
  } else {
    mesh.h = (b - a) / static_cast<double>(m);
    for (std::size_t i = 0; i < m; ++i) {
      mesh.tau[i] = a + mesh.h * static_cast<double>(i);
      mesh.nodes[i] = a + mesh.h * static_cast<double>(i + 1);
    }
    mesh.nodes[m - 1] = b;
  }
  return mesh;
}

const char* mesh_kind_name(MeshKind k) { return k == MeshKind::nodal ? "nodal" : "step"; }

MeshKind parse_mesh_kind(const std::string& s) {
  if (s == "nodal") return MeshKind::nodal;
  if (s == "step") return MeshKind::step;
  throw Error(ErrorCode::input, "unknown mesh kind '" + s + "'");
}

Tensor4 discretize_problem(const Problem& p, const Mesh& mesh) {
  p.validate();
  const std::size_t m = mesh.m;
  Tensor4 t(p.n, p.n, m);
  std::vector<std::pair<std::size_t, std::size_t>> keys;
  for (const auto& [key, terms] : p.entries)
    if (!terms.empty()) keys.push_back(key);

  std::string failure;
  const long nk = static_cast<long>(keys.size());
#pragma omp parallel for schedule(dynamic)
  for (long e = 0; e < nk; ++e) {
    const auto [k, l] = keys[static_cast<std::size_t>(e)];
    cd* s = t.slice(k, l);
    for (std::size_t i = 0; i < m; ++i) {
      const cd f = p.eval(k, l, mesh.tau[i]) * mesh.h;
      if (!std::isfinite(f.real()) || !std::isfinite(f.imag())) {
#pragma omp critical
        {
          std::ostringstream os;
          os << "non-finite sample of A(" << k + 1 << "," << l + 1 << ") at t = " << mesh.tau[i];
          if (failure.empty()) failure = os.str();
        }
        break;
      }
      for (std::size_t j = 0; j <= i; ++j) s[i * m + j] = f;
    }
  }
  if (!failure.empty()) throw Error(ErrorCode::input, failure);
  for (const auto& [k, l] : keys) t.set_kind(k, l, SliceKind::lower);
  return t;
}

MatM theta_matrix(const Mesh& mesh) {
  MatM th = MatM::Zero(mesh.m, mesh.m);
  for (std::size_t i = 0; i < mesh.m; ++i)
    for (std::size_t j = 0; j <= i; ++j) th(i, j) = mesh.h;
  return th;
}

}  // namespace toel
