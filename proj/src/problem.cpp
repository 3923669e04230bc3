#include "toelanczos/problem.hpp"

#include <cmath>
#include <fstream>

namespace toel {

using nlohmann::json;

cd Term::eval(double t) const {
  double f = 1.0;
  for (int p = 0; p < power; ++p) f *= t;
  switch (trig) {
    case Trig::none: break;
    case Trig::cos: f *= std::cos(omega * t); break;
    case Trig::sin: f *= std::sin(omega * t); break;
  }
  return coeff * f;
}

const std::vector<Term>& Problem::terms(std::size_t k, std::size_t l) const {
  static const std::vector<Term> empty;
  auto it = entries.find({k, l});
  return it == entries.end() ? empty : it->second;
}

void Problem::add_term(std::size_t k, std::size_t l, Term t) { entries[{k, l}].push_back(t); }

cd Problem::eval(std::size_t k, std::size_t l, double t) const {
  cd s = 0.0;
  for (const auto& term : terms(k, l)) s += term.eval(t);
  return s;
}

MatM Problem::matrix(double t) const {
  MatM x = MatM::Zero(n, n);
  for (const auto& [key, terms] : entries)
    for (const auto& term : terms) x(key.first, key.second) += term.eval(t);
  return x;
}

void Problem::validate() const {
  if (n == 0) throw Error(ErrorCode::input, "problem '" + id + "': n must be positive");
  if (!(std::isfinite(a) && std::isfinite(b) && b > a))
    throw Error(ErrorCode::input, "problem '" + id + "': bad interval");
  if (static_cast<std::size_t>(v.size()) != n || static_cast<std::size_t>(w.size()) != n)
    throw Error(ErrorCode::input, "problem '" + id + "': v and w must have length n");
  for (const auto& [key, terms] : entries) {
    if (key.first >= n || key.second >= n)
      throw Error(ErrorCode::input, "problem '" + id + "': entry index out of range");
    for (const auto& t : terms)
      if (t.power < 0) throw Error(ErrorCode::input, "problem '" + id + "': negative power");
  }
}

namespace {

const char* trig_name(Trig t) {
  switch (t) {
    case Trig::none: return "none";
    case Trig::cos: return "cos";
    case Trig::sin: return "sin";
  }
  return "none";
}

Trig parse_trig(const std::string& s) {
  if (s == "none") return Trig::none;
  if (s == "cos") return Trig::cos;
  if (s == "sin") return Trig::sin;
  throw Error(ErrorCode::input, "unknown trig '" + s + "'");
}

json complex_json(cd z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

cd complex_from(const json& j) {
  if (j.is_number()) return cd(j.get<double>(), 0.0);
  return cd(j.at("re").get<double>(), j.value("im", 0.0));
}

json vec_json(const CVec& x) {
  json a = json::array();
  for (Eigen::Index i = 0; i < x.size(); ++i) a.push_back(complex_json(x(i)));
  return a;
}

CVec vec_from(const json& j) {
  CVec x(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) x(static_cast<Eigen::Index>(i)) = complex_from(j[i]);
  return x;
}

}  // namespace

json problem_to_json(const Problem& p) {
  json entries = json::array();
  for (const auto& [key, terms] : p.entries) {
    json ts = json::array();
    for (const auto& t : terms)
      ts.push_back({{"re", t.coeff.real()},
                    {"im", t.coeff.imag()},
                    {"power", t.power},
                    {"trig", trig_name(t.trig)},
                    {"omega", t.omega}});
    entries.push_back({{"k", key.first + 1}, {"l", key.second + 1}, {"terms", ts}});
  }
  return json{{"id", p.id},       {"n", p.n},           {"interval", {p.a, p.b}},
              {"v", vec_json(p.v)}, {"w", vec_json(p.w)}, {"entries", entries}};
}

Problem problem_from_json(const json& j) {
  Problem p;
  try {
    p.id = j.value("id", std::string("custom"));
    p.n = j.at("n").get<std::size_t>();
    const auto& iv = j.at("interval");
    if (!iv.is_array() || iv.size() != 2) throw Error(ErrorCode::input, "interval must be [a, b]");
    p.a = iv[0].get<double>();
    p.b = iv[1].get<double>();
    p.v = vec_from(j.at("v"));
    p.w = vec_from(j.at("w"));
    for (const auto& e : j.at("entries")) {
      const auto k = e.at("k").get<std::size_t>(), l = e.at("l").get<std::size_t>();
      if (k == 0 || l == 0) throw Error(ErrorCode::input, "entry indices are one-based");
      auto& list = p.entries[{k - 1, l - 1}];
      for (const auto& t : e.at("terms")) {
        Term term;
        term.coeff = cd(t.value("re", 0.0), t.value("im", 0.0));
        term.power = t.value("power", 0);
        term.trig = parse_trig(t.value("trig", std::string("none")));
        term.omega = t.value("omega", 0.0);
        list.push_back(term);
      }
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::input, std::string("problem JSON: ") + e.what());
  }
  p.validate();
  return p;
}

Problem load_problem(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorCode::io, "cannot open " + path);
  json j;
  try {
    is >> j;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::input, path + ": " + e.what());
  }
  return problem_from_json(j);
}

void save_problem(const std::string& path, const Problem& p) {
  std::ofstream os(path);
  if (!os) throw Error(ErrorCode::io, "cannot open " + path + " for writing");
  os << problem_to_json(p).dump(2) << "\n";
}

}  // namespace toel
