#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "toelanczos/discretize.hpp"
#include "toelanczos/problem.hpp"

namespace toel {

enum class ReferenceKind : std::uint8_t { analytic, rk45, none };

const char* reference_kind_name(ReferenceKind k);
ReferenceKind parse_reference_kind(const std::string& s);

/// Sampled w^H U(t) v at the mesh nodes.
struct Reference {
  ReferenceKind kind = ReferenceKind::none;
  std::vector<double> tau;
  CVec values;
  double rtol = 0.0;
  double atol = 0.0;
};

/**
 * Built-in problems:
 *   zero1       N=1, A = 0 on [0,1]
 *   scalar_one  N=1, A = 1 on [0,1]
 *   scalar_cos  N=1, A = cos t on [0,1]
 *   const3      constant 3x3 symmetric matrix on [0,1], v = w = e1
 *   timedep5    5x5 polynomial/cosine matrix on [1e-4,1], v = w = e1
 *   cycle3      constant 3x3 cyclic permutation on [0,1], v = w = e1 (breaks down seriously)
 *   nmr1..nmr3  NMR generators with the default seed
 */
Problem builtin(const std::string& id);
std::vector<std::string> builtin_ids();

inline constexpr std::uint64_t kDefaultSeed = 1;

struct NmrOverrides {
  std::optional<double> nu;
  std::optional<double> t_end;
  std::optional<std::vector<double>> alpha;
  std::optional<std::vector<double>> beta;
  std::optional<std::vector<double>> gamma;
  std::optional<CVec> v;
  std::optional<CVec> w;
};

/**
 * Coefficients of H(t) for the three NMR experiments, N = 16, A(t) = -2 pi i H(t).
 *
 * kind 1: H = diag(alpha_k + beta_k cos(2 pi nu t) + gamma_k cos(4 pi nu t)).
 * kind 2: H = diag(alpha) + B cos(2 pi nu t) + C cos(4 pi nu t); B, C real symmetric on the
 *         flip-flop pattern of four spins plus the diagonal.
 * kind 3: H = diag(alpha) + B (0.5 + cos 4t + sin 10t - 0.4 sin 16t) + C (sin 4t + cos 8t + 2 sin 12t);
 *         B real symmetric, C complex Hermitian, both on the single-spin-flip pattern.
 */
struct NmrModel {
  int kind = 1;
  std::uint64_t seed = kDefaultSeed;
  double nu = 1e4;
  double a = 0.0, b = 0.0;
  std::vector<double> alpha, beta, gamma;
  MatM B, C;
  CVec v, w;
};

NmrModel nmr_model(int kind, std::uint64_t seed = kDefaultSeed, const NmrOverrides& overrides = {});
Problem nmr_problem(const NmrModel& model);
Problem nmr_generate(int kind, std::uint64_t seed = kDefaultSeed, const NmrOverrides& overrides = {});

/// Evaluates p.exact at the mesh nodes; throws ErrorCode::input when the problem has no closed form.
Reference analytic_reference(const Problem& p, const Mesh& mesh);
/// (exp(A t))_{11} for const3.
Reference analytic_const3(const Mesh& mesh);
/// w^H U(t) v for a kind-1 model, using the exact phase integral.
Reference analytic_nmr1(const Mesh& mesh, const NmrModel& model);

/// Dormand-Prince 5(4) with dense output, u(a) = v, sampled at the mesh nodes.
Reference rk45_reference(const Problem& p, const Mesh& mesh, double rtol = 1e-10, double atol = 1e-12);

}  // namespace toel
