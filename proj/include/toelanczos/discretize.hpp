#pragma once

#include <vector>

#include "toelanczos/problem.hpp"
#include "toelanczos/tensor.hpp"

namespace toel {

/**
 * Equispaced mesh on [a,b].
 *
 * nodal: h = (b-a)/(M-1), samples tau_i = a + (i-1)h, and s_i approximates the solution at tau_i.
 * step:  h = (b-a)/M, samples at the left points tau_i = a + (i-1)h, and s_i approximates the
 *        solution at the right point a + i*h. This is the layout that reproduces the published tables.
 */
enum class MeshKind : std::uint8_t { nodal, step };

struct Mesh {
  double a = 0.0, b = 1.0;
  std::size_t m = 0;
  double h = 0.0;
  MeshKind kind = MeshKind::nodal;
  std::vector<double> tau;    // sample points of A(t)
  std::vector<double> nodes;  // points where s_n approximates w^H U(t) v
};

Mesh build_mesh(double a, double b, std::size_t m, MeshKind kind = MeshKind::nodal);

const char* mesh_kind_name(MeshKind k);
MeshKind parse_mesh_kind(const std::string& s);

/// Slice (k,l) is lower triangular with row i equal to A_kl(tau_i) * h on and below the diagonal.
Tensor4 discretize_problem(const Problem& p, const Mesh& mesh);

/// h times the lower-triangular ones matrix.
MatM theta_matrix(const Mesh& mesh);

}  // namespace toel
