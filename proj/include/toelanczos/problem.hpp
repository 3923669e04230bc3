#pragma once

#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "toelanczos/tensor.hpp"

namespace toel {

enum class Trig : std::uint8_t { none, cos, sin };

/// coeff * t^power * trig(omega * t)
struct Term {
  cd coeff{0.0};
  int power = 0;
  Trig trig = Trig::none;
  double omega = 0.0;

  cd eval(double t) const;
  bool operator==(const Term&) const = default;
};

/**
 * Symbolic matrix-valued function A(t) on [a,b] with starting vectors v, w.
 * Entry keys are zero-based (row, column); a missing key is an identically zero entry.
 */
struct Problem {
  std::string id;
  std::size_t n = 0;
  double a = 0.0, b = 1.0;
  CVec v, w;
  std::map<std::pair<std::size_t, std::size_t>, std::vector<Term>> entries;
  /// Closed form of w^H U(t) v when known.
  std::function<cd(double)> exact;

  const std::vector<Term>& terms(std::size_t k, std::size_t l) const;
  void add_term(std::size_t k, std::size_t l, Term t);
  cd eval(std::size_t k, std::size_t l, double t) const;
  MatM matrix(double t) const;
  /// Throws ErrorCode::input on out-of-range keys, vector size mismatch or a bad interval.
  void validate() const;
};

nlohmann::json problem_to_json(const Problem& p);
/// Entry indices in the JSON form are one-based, matching matrix notation.
Problem problem_from_json(const nlohmann::json& j);
Problem load_problem(const std::string& path);
void save_problem(const std::string& path, const Problem& p);

}  // namespace toel
