#pragma once

#include <string>
#include <vector>

#include "toelanczos/discretize.hpp"
#include "toelanczos/lanczos.hpp"

namespace toel {

struct ResolventInfo {
  MatM r11;
  /// Reciprocal condition estimate of each factored level, innermost (level n) first.
  std::vector<double> rcond;
};

/**
 * (1,1) block of (I - T)^{-1} by the continued fraction
 *   S_n = I - alpha_n,  S_i = (I - alpha_i) - gamma_{i+1} S_{i+1}^{-1} beta_{i+1},  R11 = S_1^{-1},
 * evaluated with LU solves. Throws ResolventSingular naming the failing level.
 */
ResolventInfo star_resolvent(const TriTensor& tri);
MatM star_resolvent_11(const TriTensor& tri);

struct SolutionVec {
  std::vector<double> tau;  // mesh nodes
  CVec values;
  std::size_t n_used = 0;
  cd normalization{1.0};
};

/// s = c (1/h) theta R11 e_1, i.e. c times the running sum of the first column of R11.
SolutionVec approx_solution(const TriTensor& tri, const Mesh& mesh, cd normalization);

/// Columns tau,re_s,im_s.
std::string solution_csv(const SolutionVec& s);
void write_solution_csv(const std::string& path, const SolutionVec& s);

}  // namespace toel
