#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "toelanczos/lanczos.hpp"

namespace toel {

struct ErrorReport {
  double err_o = 0.0;
  double err_v = 0.0;
  double err_w = 0.0;
  std::vector<double> err_m;  // k = 0..2n-1
  std::optional<double> err_sol;
  std::size_t M = 0;
  std::size_t n = 0;
  std::string problem_id;
  std::string mesh = "step";
  std::string reference = "none";
  std::string status = "completed";
};

/// |W_n * V_n - I| / max(|V_n|, |W_n|).
double err_biorth(const LanczosResult& r);

/**
 * Recurrence residuals for the V and W sides. Each block row is formed in recurrence order,
 * ((A V_k - V_k alpha_k) - V_{k-1} gamma_k) - V_{k+1} beta_{k+1}, so with gamma = I the W side
 * reproduces its own update and vanishes exactly.
 */
std::pair<double, double> err_recurrences(const LanczosResult& r, const Tensor4& a);

/// err_M(k) for k = 0..k_max, comparing W^D * A^k * V with E1^D * T^k * E1.
std::vector<double> err_moments(const LanczosResult& r, const Tensor4& a, std::size_t k_max);
/// Same, from the caller's starting vectors (normalised internally).
std::vector<double> err_moments(const LanczosResult& r, const Tensor4& a, const CVec& v, const CVec& w,
                                std::size_t k_max);

/// |s_hat - s| / |s_hat| in the Euclidean norm.
double err_solution(const CVec& s_hat, const CVec& s);

/// Least-squares slope of log(err) against log(M).
double convergence_slope(const std::vector<std::pair<double, double>>& points);

ErrorReport make_report(const LanczosResult& r, const Tensor4& a, bool with_moments = true);

nlohmann::json report_json(const ErrorReport& r);
/// problem,mesh,M,n,status,err_o,err_v,err_w,err_m_max,err_sol
std::string report_csv_header();
std::string report_csv_row(const ErrorReport& r);

}  // namespace toel
