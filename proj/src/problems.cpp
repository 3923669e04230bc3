#include "toelanczos/problems.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <random>

#include <boost/numeric/odeint.hpp>

namespace toel {

namespace {

constexpr double kPi = std::numbers::pi;

Term constant(cd c) { return Term{c, 0, Trig::none, 0.0}; }
Term linear(cd c) { return Term{c, 1, Trig::none, 0.0}; }
Term cosine(cd c, double omega) { return Term{c, 0, Trig::cos, omega}; }
Term sine(cd c, double omega) { return Term{c, 0, Trig::sin, omega}; }

CVec unit(std::size_t n, std::size_t i) {
  CVec e = CVec::Zero(static_cast<Eigen::Index>(n));
  e(static_cast<Eigen::Index>(i)) = 1.0;
  return e;
}

Problem scalar(const std::string& id) {
  Problem p;
  p.id = id;
  p.n = 1;
  p.a = 0.0;
  p.b = 1.0;
  p.v = CVec::Ones(1);
  p.w = CVec::Ones(1);
  return p;
}

Problem make_const3() {
  Problem p;
  p.id = "const3";
  p.n = 3;
  p.a = 0.0;
  p.b = 1.0;
  p.v = unit(3, 0);
  p.w = unit(3, 0);
  const double a[3][3] = {{-1, 1, 1}, {1, 0, 1}, {1, 1, -1}};
  for (std::size_t k = 0; k < 3; ++k)
    for (std::size_t l = 0; l < 3; ++l)
      if (a[k][l] != 0.0) p.add_term(k, l, constant(a[k][l]));
  p.exact = [](double t) {
    return cd(-0.5 * std::sinh(2 * t) + 0.5 * std::cosh(2 * t) + 0.5 * std::cosh(std::sqrt(2.0) * t), 0.0);
  };
  return p;
}

Problem make_timedep5() {
  Problem p;
  p.id = "timedep5";
  p.n = 5;
  p.a = 1e-4;
  p.b = 1.0;
  p.v = unit(5, 0);
  p.w = unit(5, 0);
  auto add = [&p](std::size_t k, std::size_t l, std::initializer_list<Term> ts) {
    for (const auto& t : ts) p.add_term(k - 1, l - 1, t);
  };
  add(1, 1, {cosine(1, 1)});
  add(1, 3, {constant(1)});
  add(1, 4, {constant(2)});
  add(1, 5, {constant(1)});
  add(2, 2, {cosine(1, 1), linear(-1)});
  add(2, 3, {constant(1), linear(-3)});
  add(2, 4, {linear(1)});
  add(3, 2, {linear(1)});
  add(3, 3, {linear(2), cosine(1, 1)});
  add(4, 2, {constant(1)});
  add(4, 3, {linear(2), constant(1)});
  add(4, 4, {linear(1), cosine(1, 1)});
  add(4, 5, {linear(1)});
  add(5, 1, {linear(1)});
  add(5, 2, {linear(-1), constant(-1)});
  add(5, 3, {linear(-6), constant(-1)});
  add(5, 4, {constant(1), linear(-2)});
  add(5, 5, {cosine(1, 1), linear(-2)});
  return p;
}

Problem make_cycle3() {
  Problem p;
  p.id = "cycle3";
  p.n = 3;
  p.a = 0.0;
  p.b = 1.0;
  p.v = unit(3, 0);
  p.w = unit(3, 0);
  p.add_term(1, 0, constant(1));
  p.add_term(2, 1, constant(1));
  p.add_term(0, 2, constant(1));
  p.exact = [](double t) {
    return cd((std::exp(t) + 2.0 * std::exp(-0.5 * t) * std::cos(std::sqrt(3.0) * 0.5 * t)) / 3.0, 0.0);
  };
  return p;
}

// Uniform doubles from the raw 64-bit stream.
class Uniform {
 public:
  explicit Uniform(std::uint64_t seed) : gen_(seed) {}
  double operator()(double lo, double hi) {
    const double u = static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
  }

 private:
  std::mt19937_64 gen_;
};

constexpr std::size_t kSpins = 4;
constexpr std::size_t kStates = 1u << kSpins;

bool flip_flop(std::size_t i, std::size_t j) {
  const std::size_t d = i ^ j;
  if (std::popcount(d) != 2) return false;
  // the two differing spins must be anti-parallel in i
  const std::size_t lo = d & (~d + 1), hi = d ^ lo;
  return ((i & lo) != 0) != ((i & hi) != 0);
}

bool single_flip(std::size_t i, std::size_t j) { return std::popcount(i ^ j) == 1; }

CVec pattern_011() {
  CVec x(kStates);
  for (std::size_t i = 0; i < kStates; ++i) x(static_cast<Eigen::Index>(i)) = i % 3 == 0 ? 0.0 : 1.0;
  return x;
}

template <class Pattern>
MatM symmetric_on(Pattern pattern, Uniform& rnd, double lo, double hi, bool diagonal) {
  MatM x = MatM::Zero(kStates, kStates);
  for (std::size_t i = 0; i < kStates; ++i)
    for (std::size_t j = i; j < kStates; ++j) {
      if (i == j ? !diagonal : !pattern(i, j)) continue;
      const double val = rnd(lo, hi);
      x(i, j) = val;
      x(j, i) = val;
    }
  return x;
}

template <class Pattern>
MatM hermitian_on(Pattern pattern, Uniform& rnd, double lo, double hi) {
  MatM x = MatM::Zero(kStates, kStates);
  for (std::size_t i = 0; i < kStates; ++i)
    for (std::size_t j = i + 1; j < kStates; ++j) {
      if (!pattern(i, j)) continue;
      const double re = rnd(lo, hi);
      const double im = rnd(lo, hi);
      x(i, j) = cd(re, im);
      x(j, i) = cd(re, -im);
    }
  return x;
}

std::vector<double> draws(Uniform& rnd, double lo, double hi) {
  std::vector<double> x(kStates);
  for (auto& e : x) e = rnd(lo, hi);
  return x;
}

// phase of U_kk for kind 1: 2 pi times the integral of f_k from 0 to t
double nmr1_phase(const NmrModel& md, std::size_t k, double t) {
  const double w1 = 2 * kPi * md.nu, w2 = 4 * kPi * md.nu;
  return 2 * kPi * (md.alpha[k] * t + md.beta[k] * std::sin(w1 * t) / w1 + md.gamma[k] * std::sin(w2 * t) / w2);
}

cd nmr1_exact(const NmrModel& md, double t) {
  cd s = 0.0;
  for (std::size_t k = 0; k < kStates; ++k) {
    const auto ki = static_cast<Eigen::Index>(k);
    const cd wv = std::conj(md.w(ki)) * md.v(ki);
    if (wv == cd(0.0)) continue;
    s += wv * std::polar(1.0, -(nmr1_phase(md, k, t) - nmr1_phase(md, k, md.a)));
  }
  return s;
}

}  // namespace

const char* reference_kind_name(ReferenceKind k) {
  switch (k) {
    case ReferenceKind::analytic: return "analytic";
    case ReferenceKind::rk45: return "rk45";
    case ReferenceKind::none: return "none";
  }
  return "none";
}

ReferenceKind parse_reference_kind(const std::string& s) {
  if (s == "analytic") return ReferenceKind::analytic;
  if (s == "rk45") return ReferenceKind::rk45;
  if (s == "none") return ReferenceKind::none;
  throw Error(ErrorCode::input, "unknown reference kind '" + s + "'");
}

NmrModel nmr_model(int kind, std::uint64_t seed, const NmrOverrides& ov) {
  if (kind < 1 || kind > 3) throw Error(ErrorCode::input, "nmr kind must be 1, 2 or 3");
  NmrModel md;
  md.kind = kind;
  md.seed = seed;
  md.nu = ov.nu.value_or(1e4);
  Uniform rnd(seed);
  md.B = MatM::Zero(kStates, kStates);
  md.C = MatM::Zero(kStates, kStates);
  switch (kind) {
    case 1:
      md.b = 5e-5;
      md.alpha = draws(rnd, 4e3, 6e3);
      md.beta = draws(rnd, -1e3, 1e3);
      md.gamma = draws(rnd, -5e2, 5e2);
      md.v = md.w = pattern_011();
      break;
    case 2:
      md.b = 5e-6;
      md.alpha = draws(rnd, 3.5e4, 4.5e4);
      md.B = symmetric_on(flip_flop, rnd, -4e3, 4e3, true);
      md.C = symmetric_on(flip_flop, rnd, -2e3, 2e3, true);
      md.v = md.w = pattern_011();
      break;
    case 3:
      md.b = 1e-3;
      md.alpha = draws(rnd, 150.0, 250.0);
      md.B = symmetric_on(single_flip, rnd, -40.0, 40.0, false);
      md.C = hermitian_on(single_flip, rnd, -25.0, 25.0);
      md.v = md.w = CVec::Ones(kStates);
      break;
  }
  if (ov.t_end) md.b = *ov.t_end;
  auto take = [](std::vector<double>& dst, const std::optional<std::vector<double>>& src, const char* what) {
    if (!src) return;
    if (src->size() != kStates) throw Error(ErrorCode::input, std::string("nmr override ") + what + " needs 16 values");
    dst = *src;
  };
  take(md.alpha, ov.alpha, "alpha");
  if (kind == 1) {
    take(md.beta, ov.beta, "beta");
    take(md.gamma, ov.gamma, "gamma");
  }
  if (ov.v) md.v = *ov.v;
  if (ov.w) md.w = *ov.w;
  if (md.v.size() != static_cast<Eigen::Index>(kStates) || md.w.size() != static_cast<Eigen::Index>(kStates))
    throw Error(ErrorCode::input, "nmr override vectors need 16 entries");
  if (!(md.b > md.a)) throw Error(ErrorCode::input, "nmr interval is empty");
  return md;
}

Problem nmr_problem(const NmrModel& md) {
  Problem p;
  p.id = "nmr" + std::to_string(md.kind);
  p.n = kStates;
  p.a = md.a;
  p.b = md.b;
  p.v = md.v;
  p.w = md.w;
  const cd s(0.0, -2 * kPi);  // A = -2 pi i H
  const double w1 = 2 * kPi * md.nu, w2 = 4 * kPi * md.nu;
  for (std::size_t k = 0; k < kStates; ++k)
    for (std::size_t l = 0; l < kStates; ++l) {
      const auto ki = static_cast<Eigen::Index>(k), li = static_cast<Eigen::Index>(l);
      const cd bkl = md.B(ki, li), ckl = md.C(ki, li);
      if (k == l) p.add_term(k, l, constant(s * md.alpha[k]));
      switch (md.kind) {
        case 1:
          if (k == l) {
            p.add_term(k, l, cosine(s * md.beta[k], w1));
            p.add_term(k, l, cosine(s * md.gamma[k], w2));
          }
          break;
        case 2:
          if (bkl != cd(0.0)) p.add_term(k, l, cosine(s * bkl, w1));
          if (ckl != cd(0.0)) p.add_term(k, l, cosine(s * ckl, w2));
          break;
        case 3:
          if (bkl != cd(0.0)) {
            p.add_term(k, l, constant(s * bkl * 0.5));
            p.add_term(k, l, cosine(s * bkl, 4.0));
            p.add_term(k, l, sine(s * bkl, 10.0));
            p.add_term(k, l, sine(s * bkl * -0.4, 16.0));
          }
          if (ckl != cd(0.0)) {
            p.add_term(k, l, sine(s * ckl, 4.0));
            p.add_term(k, l, cosine(s * ckl, 8.0));
            p.add_term(k, l, sine(s * ckl * 2.0, 12.0));
          }
          break;
      }
    }
  if (md.kind == 1) p.exact = [md](double t) { return nmr1_exact(md, t); };
  return p;
}

Problem nmr_generate(int kind, std::uint64_t seed, const NmrOverrides& overrides) {
  return nmr_problem(nmr_model(kind, seed, overrides));
}

Problem builtin(const std::string& id) {
  if (id == "zero1") {
    Problem p = scalar(id);
    p.exact = [](double) { return cd(1.0); };
    return p;
  }
  if (id == "scalar_one") {
    Problem p = scalar(id);
    p.add_term(0, 0, constant(1));
    p.exact = [](double t) { return cd(std::exp(t)); };
    return p;
  }
  if (id == "scalar_cos") {
    Problem p = scalar(id);
    p.add_term(0, 0, cosine(1, 1));
    p.exact = [](double t) { return cd(std::exp(std::sin(t))); };
    return p;
  }
  if (id == "const3") return make_const3();
  if (id == "timedep5") return make_timedep5();
  if (id == "cycle3") return make_cycle3();
  if (id == "nmr1") return nmr_generate(1);
  if (id == "nmr2") return nmr_generate(2);
  if (id == "nmr3") return nmr_generate(3);
  throw Error(ErrorCode::input, "unknown builtin problem '" + id + "'");
}

std::vector<std::string> builtin_ids() {
  return {"zero1", "scalar_one", "scalar_cos", "const3", "timedep5", "cycle3", "nmr1", "nmr2", "nmr3"};
}

Reference analytic_reference(const Problem& p, const Mesh& mesh) {
  if (!p.exact) throw Error(ErrorCode::input, "problem '" + p.id + "' has no analytic solution");
  Reference r;
  r.kind = ReferenceKind::analytic;
  r.tau = mesh.nodes;
  r.values.resize(static_cast<Eigen::Index>(mesh.m));
  for (std::size_t i = 0; i < mesh.m; ++i) r.values(static_cast<Eigen::Index>(i)) = p.exact(mesh.nodes[i]);
  return r;
}

Reference analytic_const3(const Mesh& mesh) { return analytic_reference(make_const3(), mesh); }

Reference analytic_nmr1(const Mesh& mesh, const NmrModel& model) {
  if (model.kind != 1) throw Error(ErrorCode::input, "analytic_nmr1 needs a kind-1 model");
  return analytic_reference(nmr_problem(model), mesh);
}

Reference rk45_reference(const Problem& p, const Mesh& mesh, double rtol, double atol) {
  namespace odeint = boost::numeric::odeint;
  if (!(rtol > 0.0 && atol > 0.0)) throw Error(ErrorCode::input, "rk45: tolerances must be positive");
  p.validate();
  using State = std::vector<cd>;

  struct Entry {
    std::size_t k, l;
    const std::vector<Term>* terms;
  };
  std::vector<Entry> entries;
  for (const auto& [key, terms] : p.entries)
    if (!terms.empty()) entries.push_back({key.first, key.second, &terms});

  auto rhs = [&entries](const State& u, State& du, double t) {
    std::fill(du.begin(), du.end(), cd(0.0));
    for (const auto& e : entries) {
      cd a = 0.0;
      for (const auto& term : *e.terms) a += term.eval(t);
      du[e.k] += a * u[e.l];
    }
  };

  State u(p.n);
  for (std::size_t i = 0; i < p.n; ++i) u[i] = p.v(static_cast<Eigen::Index>(i));

  std::vector<double> times;
  const bool prepend = mesh.nodes.front() > p.a;
  if (prepend) times.push_back(p.a);
  times.insert(times.end(), mesh.nodes.begin(), mesh.nodes.end());

  Reference r;
  r.kind = ReferenceKind::rk45;
  r.tau = mesh.nodes;
  r.rtol = rtol;
  r.atol = atol;
  r.values.resize(static_cast<Eigen::Index>(mesh.m));
  std::size_t idx = 0;
  double last_t = p.a;
  auto observe = [&](const State& x, double t) {
    last_t = t;
    const std::size_t slot = idx++;
    if (prepend && slot == 0) return;
    cd s = 0.0;
    for (std::size_t i = 0; i < p.n; ++i) s += std::conj(p.w(static_cast<Eigen::Index>(i))) * x[i];
    r.values(static_cast<Eigen::Index>(slot - (prepend ? 1 : 0))) = s;
  };
  auto stepper = odeint::make_dense_output(atol, rtol, odeint::runge_kutta_dopri5<State>());
  const double dt0 = (times.back() - p.a) * 1e-4;
  try {
    odeint::integrate_times(stepper, rhs, u, times.begin(), times.end(), dt0, observe,
                            odeint::max_step_checker(1000000));
  } catch (const std::runtime_error& e) {
    throw Error(ErrorCode::stiffness, "rk45 failed near t = " + std::to_string(last_t) + ": " + e.what());
  }
  if (idx != times.size()) throw Error(ErrorCode::stiffness, "rk45 stopped early near t = " + std::to_string(last_t));
  return r;
}

}  // namespace toel
