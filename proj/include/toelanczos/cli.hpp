#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "toelanczos/diagnostics.hpp"
#include "toelanczos/discretize.hpp"
#include "toelanczos/problems.hpp"
#include "toelanczos/resolvent.hpp"

namespace toel::cli {

enum class Format : std::uint8_t { csv, json };

struct RunConfig {
  std::string problem = "const3";
  std::string problem_file;
  std::vector<std::size_t> M{10};
  std::size_t n = 0;  // 0: problem default (N, or 3/4/4 for nmr1..3)
  ReferenceKind reference = ReferenceKind::none;
  std::string gamma_rule = "identity";
  double rtol = 1e-10;
  double atol = 1e-12;
  double eps_lucky = 1e-13;
  double eps_serious = 1e13;
  std::vector<double> tol_tt{1e-10};
  std::uint64_t seed = kDefaultSeed;
  std::string output = ".";
  Format format = Format::csv;
  bool allow_large = false;
  MeshKind mesh = MeshKind::step;
  bool moments = true;
  bool save_tensor = false;
  bool save_tt = false;
};

/// Work units for one run; runs above kWorkBudget need allow_large.
inline constexpr double kWorkBudget = 1e10;
double work_estimate(std::size_t M, std::size_t N, std::size_t n);

Problem resolve_problem(const RunConfig& cfg);
std::size_t default_n(const RunConfig& cfg, const Problem& p);
LanczosOptions lanczos_options(const RunConfig& cfg);

struct RunResult {
  ErrorReport report;
  std::optional<SolutionVec> solution;
  std::optional<Reference> reference;
  int exit_code = 0;
};

/// One pipeline pass for a single M. Breakdowns are returned, not thrown.
RunResult run_pipeline(const RunConfig& cfg, const Problem& p, std::size_t M);

/// Writes <output>/solution.csv (when a solution exists) and <output>/report.json.
int cmd_run(const RunConfig& cfg);
/// Writes convergence.csv and slope.csv, or convergence.json.
int cmd_convergence(const RunConfig& cfg);
/// Writes ttranks.csv or ttranks.json.
int cmd_ttranks(const RunConfig& cfg);

/// Applies TOELANCZOS_THREADS when set.
void apply_thread_env();

int main(int argc, char** argv);

}  // namespace toel::cli
