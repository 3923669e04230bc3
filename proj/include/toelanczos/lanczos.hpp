#pragma once

#include <array>
#include <functional>
#include <vector>

#include "toelanczos/tensor.hpp"

namespace toel {

/// Block-tridiagonal coefficients. betas[i] and gammas[i] hold beta_{i+2} and gamma_{i+2}.
struct TriTensor {
  std::size_t m = 0;
  std::vector<MatM> alphas;
  std::vector<MatM> betas;
  std::vector<MatM> gammas;

  std::size_t n() const { return alphas.size(); }
  /// Leading k x k part.
  TriTensor prefix(std::size_t k) const;
};

/// Slice (i,i) = alpha_i, (i,i+1) = gamma_{i+1}, (i+1,i) = beta_{i+1}.
Tensor4 assemble_tridiag(const TriTensor& tri);

enum class BreakSide : std::uint8_t { v, w };
enum class BreakdownKind : std::uint8_t { none, lucky, serious };

struct BreakdownCheck {
  BreakdownKind kind = BreakdownKind::none;
  BreakSide side = BreakSide::v;
  double condition = 1.0;
};

BreakdownCheck classify_breakdown(const HyperVec& v_hat, const HyperVec& w_hat, double v_prev_norm,
                                  double w_prev_norm, const MatM& beta, double eps_lucky, double eps_serious);

/// sigma_max / sigma_min; infinity for an exactly singular matrix.
double condition_number(const MatM& x);

enum class StatusKind : std::uint8_t { completed, lucky_breakdown, serious_breakdown };

struct LanczosStatus {
  StatusKind kind = StatusKind::completed;
  std::size_t k = 0;  // iterations completed when the run stopped
  BreakSide side = BreakSide::v;
  double condition = 0.0;

  std::string describe() const;
};

/// Chooses gamma_{k+1} from k and the product W_hat * V_hat. Empty means gamma = I.
using GammaRule = std::function<MatM(std::size_t k, const MatM& wv)>;

struct LanczosOptions {
  double eps_lucky = 1e-13;
  double eps_serious = 1e13;
  GammaRule gamma_rule;
};

struct LanczosResult {
  TriTensor tri;
  std::vector<HyperVec> v_basis;
  std::vector<HyperVec> w_basis;
  HyperVec residual_v;  // V_{n+1} beta_{n+1}
  HyperVec residual_w;  // gamma_{n+1} W_{n+1}
  LanczosStatus status;
  cd normalization{1.0};  // w^H v of the caller's vectors; v was divided by it
  bool gamma_identity = true;
  std::vector<double> beta_condition;  // sigma ratio of each accepted beta

  bool completed() const { return status.kind == StatusKind::completed; }
};

/// Runs n steps. Breakdowns stop the iteration and are reported in `status` together with the
/// completed prefix; callers decide whether that is an error.
LanczosResult tensor_lanczos(const Tensor4& a, const CVec& v, const CVec& w, std::size_t n,
                             const LanczosOptions& opts = {});

struct VectorPair {
  CVec w;
  CVec v;
};

/// e_i^H U e_j = (e+e_i)^H U e_j - e^H U e_j with e the all-ones vector. Indices are zero-based.
std::array<VectorPair, 2> split_unit_vectors(std::size_t i, std::size_t j, std::size_t n);

/// x * beta^{-1} slice-wise. Lower-triangular beta uses a triangular solve.
HyperVec solve_right(const HyperVec& x, const MatM& beta);
/// gamma^{-1} * x slice-wise.
HyperVec solve_left(const MatM& gamma, const HyperVec& x);

}  // namespace toel
