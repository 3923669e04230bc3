#include "toelanczos/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "format.hpp"
#include "toelanczos/tt.hpp"

namespace toel::cli {

namespace fs = std::filesystem;
using nlohmann::json;

double work_estimate(std::size_t M, std::size_t N, std::size_t n) {
  const double m = static_cast<double>(M), nn = static_cast<double>(N);
  return m * m * m * nn * nn * static_cast<double>(n);
}

Problem resolve_problem(const RunConfig& cfg) {
  if (!cfg.problem_file.empty()) return load_problem(cfg.problem_file);
  if (cfg.problem.size() == 4 && cfg.problem.starts_with("nmr") && cfg.problem[3] >= '1' && cfg.problem[3] <= '3')
    return nmr_generate(cfg.problem[3] - '0', cfg.seed);
  const auto ids = builtin_ids();
  if (std::find(ids.begin(), ids.end(), cfg.problem) != ids.end()) return builtin(cfg.problem);
  if (fs::exists(cfg.problem)) return load_problem(cfg.problem);
  throw Error(ErrorCode::input, "unknown problem '" + cfg.problem + "'");
}

std::size_t default_n(const RunConfig& cfg, const Problem& p) {
  if (cfg.n != 0) return cfg.n;
  if (p.id == "nmr1") return 3;
  if (p.id == "nmr2" || p.id == "nmr3") return 4;
  return p.n;
}

LanczosOptions lanczos_options(const RunConfig& cfg) {
  LanczosOptions o;
  o.eps_lucky = cfg.eps_lucky;
  o.eps_serious = cfg.eps_serious;
  if (cfg.gamma_rule == "identity") return o;
  throw Error(ErrorCode::input, "unknown gamma rule '" + cfg.gamma_rule + "' (only identity is available)");
}

namespace {

void check_config(const RunConfig& cfg) {
  if (cfg.M.empty()) throw Error(ErrorCode::input, "no mesh size given");
  for (std::size_t M : cfg.M)
    if (M < 2) throw Error(ErrorCode::input, "mesh size must be at least 2");
  if (!(cfg.rtol > 0.0) || !(cfg.atol > 0.0)) throw Error(ErrorCode::input, "rtol and atol must be positive");
}

void check_budget(const RunConfig& cfg, std::size_t M, std::size_t N, std::size_t n) {
  const double w = work_estimate(M, N, n);
  if (w > kWorkBudget && !cfg.allow_large)
    throw Error(ErrorCode::input, "M^3 N^2 n = " + fmt_g(w) + " exceeds the work budget " + fmt_g(kWorkBudget) +
                                      "; pass --allow-large to run it");
}

Reference make_reference(const RunConfig& cfg, const Problem& p, const Mesh& mesh) {
  if (cfg.reference == ReferenceKind::analytic) return analytic_reference(p, mesh);
  return rk45_reference(p, mesh, cfg.rtol, cfg.atol);
}

int code_of(StatusKind k) {
  switch (k) {
    case StatusKind::completed: return 0;
    case StatusKind::lucky_breakdown: return static_cast<int>(ErrorCode::breakdown_lucky);
    case StatusKind::serious_breakdown: return static_cast<int>(ErrorCode::breakdown_serious);
  }
  return 0;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::io, "cannot create " + dir + ": " + ec.message());
}

std::string join(const std::string& dir, const std::string& name) { return (fs::path(dir) / name).string(); }

std::string tol_tag(double tol) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.0e", tol);
  return buf;
}

}  // namespace

RunResult run_pipeline(const RunConfig& cfg, const Problem& p, std::size_t M) {
  const std::size_t n = default_n(cfg, p);
  if (n < 1) throw Error(ErrorCode::input, "n must be at least 1");
  check_budget(cfg, M, p.n, n);
  const Mesh mesh = build_mesh(p.a, p.b, M, cfg.mesh);
  const Tensor4 a = discretize_problem(p, mesh);
  if (cfg.save_tensor) {
    ensure_dir(cfg.output);
    write_t4f(join(cfg.output, p.id + "_M" + std::to_string(M) + ".t4f"), a);
  }
  const LanczosResult lz = tensor_lanczos(a, p.v, p.w, n, lanczos_options(cfg));

  RunResult out;
  out.report = make_report(lz, a, cfg.moments);
  out.report.problem_id = p.id;
  out.report.mesh = mesh_kind_name(cfg.mesh);
  out.report.reference = reference_kind_name(cfg.reference);
  out.exit_code = code_of(lz.status.kind);
  if (lz.status.kind == StatusKind::serious_breakdown) return out;

  try {
    out.solution = approx_solution(lz.tri, mesh, lz.normalization);
  } catch (const ResolventSingular& e) {
    out.report.status = e.what();
    out.exit_code = static_cast<int>(ErrorCode::resolvent_singular);
    return out;
  }
  if (cfg.reference != ReferenceKind::none) {
    out.reference = make_reference(cfg, p, mesh);
    out.report.err_sol = err_solution(out.reference->values, out.solution->values);
  }
  return out;
}

int cmd_run(const RunConfig& cfg) {
  check_config(cfg);
  if (cfg.M.size() != 1) throw Error(ErrorCode::input, "run takes a single mesh size; use convergence for sweeps");
  const Problem p = resolve_problem(cfg);
  const RunResult r = run_pipeline(cfg, p, cfg.M.front());
  ensure_dir(cfg.output);
  if (r.solution) write_solution_csv(join(cfg.output, "solution.csv"), *r.solution);
  json j = report_json(r.report);
  j["exit_code"] = r.exit_code;
  write_text_atomic(join(cfg.output, "report.json"), dump(j));
  return r.exit_code;
}

int cmd_convergence(const RunConfig& cfg) {
  check_config(cfg);
  const Problem p = resolve_problem(cfg);
  std::vector<ErrorReport> rows;
  std::vector<std::pair<double, double>> points;
  int code = 0;
  for (std::size_t M : cfg.M) {
    const RunResult r = run_pipeline(cfg, p, M);
    rows.push_back(r.report);
    if (r.report.err_sol) points.emplace_back(static_cast<double>(M), *r.report.err_sol);
    if (code == 0) code = r.exit_code;
  }
  std::optional<double> slope;
  if (points.size() >= 2 && points.size() == rows.size()) slope = convergence_slope(points);

  ensure_dir(cfg.output);
  if (cfg.format == Format::json) {
    json j{{"problem", p.id}, {"rows", json::array()}};
    for (const auto& r : rows) j["rows"].push_back(report_json(r));
    j["slope"] = slope ? json(*slope) : json(nullptr);
    j["exit_code"] = code;
    write_text_atomic(join(cfg.output, "convergence.json"), dump(j));
  } else {
    std::string text = report_csv_header() + "\n";
    for (const auto& r : rows) text += report_csv_row(r) + "\n";
    write_text_atomic(join(cfg.output, "convergence.csv"), text);
    std::string mlist;
    for (std::size_t i = 0; i < cfg.M.size(); ++i) mlist += (i ? ";" : "") + std::to_string(cfg.M[i]);
    write_text_atomic(join(cfg.output, "slope.csv"),
                      "problem,M_list,slope\n" + p.id + "," + mlist + "," + (slope ? fmt_g(*slope) : "") + "\n");
  }
  return code;
}

int cmd_ttranks(const RunConfig& cfg) {
  check_config(cfg);
  if (cfg.tol_tt.empty()) throw Error(ErrorCode::input, "no TT tolerance given");
  const Problem p = resolve_problem(cfg);
  std::string csv = tt_rank_csv_header() + "\n";
  json rows = json::array();
  for (std::size_t M : cfg.M) {
    check_budget(cfg, M, p.n, 1);
    const Mesh mesh = build_mesh(p.a, p.b, M, cfg.mesh);
    const Tensor4 a = discretize_problem(p, mesh);
    if (cfg.save_tensor) {
      ensure_dir(cfg.output);
      write_t4f(join(cfg.output, p.id + "_M" + std::to_string(M) + ".t4f"), a);
    }
    const std::size_t nnz = a.nnz();
    for (double tol : cfg.tol_tt) {
      const TTTensor t = tt_svd(a, tol);
      csv += tt_rank_csv_row(M, tol, nnz, t) + "\n";
      rows.push_back({{"M", M},
                      {"tol", tol},
                      {"nnz", nnz},
                      {"ranks", t.ranks},
                      {"params", t.params()},
                      {"cf", compression_factor(t.params(), nnz)},
                      {"error_estimate", t.error_estimate}});
      if (cfg.save_tt) {
        ensure_dir(cfg.output);
        write_ttf(join(cfg.output, p.id + "_M" + std::to_string(M) + "_tol" + tol_tag(tol) + ".ttf"), t);
      }
    }
  }
  ensure_dir(cfg.output);
  if (cfg.format == Format::json)
    write_text_atomic(join(cfg.output, "ttranks.json"), dump(json{{"problem", p.id}, {"rows", rows}}));
  else
    write_text_atomic(join(cfg.output, "ttranks.csv"), csv);
  return 0;
}

void apply_thread_env() {
#ifdef _OPENMP
  if (const char* s = std::getenv("TOELANCZOS_THREADS")) {
    char* end = nullptr;
    const long t = std::strtol(s, &end, 10);
    if (end != s && *end == '\0' && t > 0) omp_set_num_threads(static_cast<int>(t));
  }
#endif
}

namespace {

void add_common(CLI::App* sub, RunConfig& cfg) {
  static const std::map<std::string, ReferenceKind> refs{
      {"analytic", ReferenceKind::analytic}, {"rk45", ReferenceKind::rk45}, {"none", ReferenceKind::none}};
  static const std::map<std::string, Format> formats{{"csv", Format::csv}, {"json", Format::json}};
  static const std::map<std::string, MeshKind> meshes{{"step", MeshKind::step}, {"nodal", MeshKind::nodal}};

  auto* prob = sub->add_option("--problem", cfg.problem, "builtin id or problem file");
  sub->add_option("--problem-file", cfg.problem_file, "problem JSON file")->excludes(prob)->check(CLI::ExistingFile);
  sub->add_option("--M", cfg.M, "mesh size, or a comma list")->delimiter(',')->check(CLI::PositiveNumber);
  sub->add_option("--n", cfg.n, "Lanczos iterations (default: problem size)");
  sub->add_option("--reference", cfg.reference, "analytic, rk45 or none")
      ->transform(CLI::CheckedTransformer(refs, CLI::ignore_case).description("{analytic,rk45,none}"));
  sub->add_option("--gamma-rule", cfg.gamma_rule, "gamma rule; only identity is available");
  sub->add_option("--rtol", cfg.rtol, "RK45 relative tolerance");
  sub->add_option("--atol", cfg.atol, "RK45 absolute tolerance");
  sub->add_option("--eps-lucky", cfg.eps_lucky, "lucky breakdown threshold");
  sub->add_option("--eps-serious", cfg.eps_serious, "serious breakdown threshold on the sigma ratio of beta");
  sub->add_option("--tol-tt", cfg.tol_tt, "TT truncation tolerance, or a comma list")->delimiter(',');
  sub->add_option("--seed", cfg.seed, "seed for the nmr generators");
  sub->add_option("--output", cfg.output, "output directory");
  sub->add_option("--format", cfg.format, "csv or json")->transform(CLI::CheckedTransformer(formats, CLI::ignore_case).description("{csv,json}"));
  sub->add_option("--mesh", cfg.mesh, "step or nodal")->transform(CLI::CheckedTransformer(meshes, CLI::ignore_case).description("{step,nodal}"));
  sub->add_flag("--allow-large", cfg.allow_large, "permit runs above the work budget");
  sub->add_flag("!--no-moments", cfg.moments, "skip the moment diagnostics");
  sub->add_flag("--save-tensor", cfg.save_tensor, "write the discretized tensor as T4F");
  sub->add_flag("--save-tt", cfg.save_tt, "write each TT decomposition as TTF1");
}

}  // namespace

int main(int argc, char** argv) {
  apply_thread_env();
  CLI::App app{"Tensor Lanczos approximation of w^H U(t) v"};
  app.require_subcommand(1);
  RunConfig cfg;
  auto* run = app.add_subcommand("run", "single pipeline run");
  auto* conv = app.add_subcommand("convergence", "sweep over M with a convergence slope");
  auto* tt = app.add_subcommand("ttranks", "TT ranks of the discretized tensor");
  app.add_subcommand("list", "list builtin problems");
  for (auto* s : {run, conv, tt}) add_common(s, cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : static_cast<int>(ErrorCode::input);
  }

  try {
    if (app.got_subcommand("list")) {
      for (const auto& id : builtin_ids()) std::cout << id << "\n";
      return 0;
    }
    int rc = 0;
    if (run->parsed()) rc = cmd_run(cfg);
    else if (conv->parsed()) rc = cmd_convergence(cfg);
    else rc = cmd_ttranks(cfg);
    if (rc != 0) std::cerr << "toelanczos: exit " << rc << " (" << error_code_name(static_cast<ErrorCode>(rc)) << ")\n";
    return rc;
  } catch (const Error& e) {
    std::cerr << "toelanczos: " << error_code_name(e.code()) << ": " << e.what() << "\n";
    return static_cast<int>(e.code());
  } catch (const std::exception& e) {
    std::cerr << "toelanczos: " << e.what() << "\n";
    return static_cast<int>(ErrorCode::input);
  }
}

}  // namespace toel::cli
