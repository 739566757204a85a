// vmclab: grid laboratory for sets of finite perimeter and variational mean
// curvature. Subcommands cover exact Massari minimization by min-cut, the
// nested-sweep optimal curvature, the sharp counterexample families, Hölder
// exponent machinery and the nonparametric graph solver.
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "vmclab/barozzi.hpp"
#include "vmclab/counterexamples.hpp"
#include "vmclab/cut.hpp"
#include "vmclab/graph_pmc.hpp"
#include "vmclab/grid.hpp"
#include "vmclab/io.hpp"
#include "vmclab/manifest.hpp"
#include "vmclab/regularity.hpp"

namespace fs = std::filesystem;
using namespace vmclab;
using nlohmann::json;
using Clock = std::chrono::steady_clock;

namespace {

struct CommonState {
  std::string out_dir;
  std::uint64_t seed = 0;
  Clock::time_point t0 = Clock::now();
  RunManifest manifest;

  void note_param(const std::string& key, const std::string& value) {
    manifest.params[key] = value;
  }
  void ensure_out() {
    if (out_dir.empty()) return;
    fs::create_directories(out_dir);
  }
  std::string out_path(const std::string& name) {
    manifest.outputs.push_back(name);
    return (fs::path(out_dir) / name).string();
  }
  void finish() {
    if (out_dir.empty()) return;
    manifest.seed = seed;
    manifest.wall_ms =
        std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
    manifest.save(out_dir);
  }
};

double parse_p(const std::string& text) {
  if (text == "inf" || text == "infinity")
    return std::numeric_limits<double>::infinity();
  try {
    return std::stod(text);
  } catch (const std::exception&) {
    throw ConfigError("--p: expected a number or 'inf', got '" + text + "'");
  }
}

std::vector<double> parse_list(const std::string& text, const std::string& flag) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw ConfigError(flag + ": cannot parse '" + item + "' as a number");
    }
  }
  if (out.empty()) throw ConfigError(flag + ": empty list");
  return out;
}

Vec3 parse_point(const std::string& text, const std::string& flag) {
  const std::vector<double> v = parse_list(text, flag);
  if (v.size() < 2 || v.size() > 3)
    throw ConfigError(flag + ": expected 2 or 3 comma-separated coordinates");
  return {v[0], v[1], v.size() == 3 ? v[2] : 0.0};
}

// Problem bundle: JSON manifest naming the mask/field files and the stencil.
CutProblem load_bundle(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("--problem: cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ConfigError("--problem: malformed JSON in " + path + ": " + e.what());
  }
  const fs::path dir = fs::path(path).parent_path();
  auto resolve = [&](const std::string& f) { return (dir / f).string(); };

  if (!j.contains("datum")) throw ConfigError("--problem: missing field 'datum'");
  if (!j.contains("free")) throw ConfigError("--problem: missing field 'free'");
  BinaryMask datum = load_mask(resolve(j.at("datum")));
  BinaryMask free_cells = load_mask(resolve(j.at("free")));
  const GridDomain d = datum.dom;

  ScalarField curvature(d, 0.0, "1/length");
  if (j.contains("curvature")) {
    if (j["curvature"].is_string())
      curvature = load_field(resolve(j["curvature"]));
    else if (j["curvature"].is_object() && j["curvature"].contains("constant"))
      curvature = ScalarField(d, j["curvature"]["constant"].get<double>(), "1/length");
    else
      throw ConfigError(
          "--problem: 'curvature' must be a file path or {\"constant\": value}");
  }
  const std::string stencil = j.value("weights", "cauchy-crofton");
  return CutProblem{d, std::move(curvature), std::move(datum), std::move(free_cells),
                    PerimeterWeights::by_name(stencil, d.n)};
}

int run_exponent(CommonState& st, int n, const std::string& p_text, double tol) {
  const double p = parse_p(p_text);
  const ExponentIteration r = iterate_exponent({n, p, tol, 200});
  std::cout << "alpha0 = " << r.alpha0 << "\n";
  std::cout << "alpha_star = " << r.fixed_point << "\n";
  std::cout << "iterations = " << r.iterates.size() - 1
            << (r.converged ? " (converged)" : " (not converged)") << "\n";
  if (!st.out_dir.empty()) {
    st.ensure_out();
    std::ofstream csv(st.out_path("iterates.csv"));
    csv.precision(17);
    csv << "k,alpha\n";
    for (std::size_t k = 0; k < r.iterates.size(); ++k)
      csv << k << "," << r.iterates[k] << "\n";
    json summary{{"alpha0", r.alpha0},
                 {"alpha_star", r.fixed_point},
                 {"converged", r.converged},
                 {"iterations", r.iterates.size() - 1}};
    write_text_file(st.out_path("summary.json"), summary.dump(2) + "\n");
    st.finish();
  }
  return 0;
}

int run_counterexample(CommonState& st, const std::string& family, double alpha, int n,
                       const std::string& p_text, bool classify, bool table,
                       int resolution) {
  const bool want_files = !st.out_dir.empty();
  if (want_files) st.ensure_out();

  if (table) {
    if (!want_files) throw ConfigError("--table requires --out");
    std::ofstream csv(st.out_path("thresholds.csv"));
    csv << "n,p,alpha,classification,alpha_opt\n";
    for (int nn : {2, 3})
      for (double pp : {2.5, 3.0, 4.0, 6.0, 10.0})
        for (int k = 1; k <= 19; ++k) {
          const double a = 0.05 * k;
          const bool fin = a > lp_threshold(nn, pp);
          csv << nn << "," << pp << "," << a << ","
              << (fin ? "finite" : "divergent") << "," << lp_threshold(nn, pp)
              << "\n";
        }
  }

  if (family == "cusp2d") {
    if (classify) {
      const double p = parse_p(p_text);
      const LpClassification c = cusp2d_lp_classify(alpha, p);
      std::cout << (c.finite ? "finite" : "divergent") << ", threshold "
                << c.threshold << "\n";
      if (c.finite) std::cout << "integral = " << c.integral << "\n";
    }
    if (want_files && resolution > 0) {
      const GridDomain d = GridDomain::square2d(-1.0, 1.0, resolution);
      save_mask(cusp2d_set(alpha, d), st.out_path("mask.pbm"));
      const ScalarField h = ScalarField::sample(
          d, [&](Vec3 x) { return cusp2d_curvature(alpha, x[0], x[1]); }, "1/length");
      save_field(h, st.out_path("curvature.f64"));
    }
  } else if (family == "cuspnd") {
    if (classify) {
      const double p = parse_p(p_text);
      const CuspNdClassification c = cuspNd_classify(n, alpha, p);
      std::cout << (c.finite ? "finite" : "divergent") << ", threshold "
                << c.threshold << "\n";
      if (c.finite) std::cout << "integral = " << c.integral << "\n";
    }
    if (want_files && resolution > 0) {
      if (n != 3) throw ConfigError("--family cuspnd with files requires --n 3");
      const double extent = std::max(1.0, cuspNd_cap_radius(alpha)) + 0.25;
      const double top = 1.0 + 1.0 / (1.0 + alpha) + cuspNd_cap_radius(alpha) + 0.25;
      const GridDomain d = GridDomain::box(3, {-extent, -extent, -0.25},
                                           {extent, extent, top},
                                           2 * extent / resolution);
      save_mask(cuspNd_set(3, alpha, d), st.out_path("mask.pbm"));
    }
  } else if (family == "log") {
    if (want_files && resolution > 0) {
      const double s = 0.5;
      const GridDomain d = GridDomain::square2d(-s, s, resolution);
      const ScalarField f = ScalarField::sample(d, [&](Vec3 x) {
        return std::hypot(x[0], x[1]) < s ? log_example(s, x[0], x[1]) : 0.0;
      });
      save_field(f, st.out_path("height.f64"));
    }
  } else {
    throw ConfigError("--family: unknown family '" + family +
                      "' (expected cusp2d, cuspnd or log)");
  }
  st.finish();
  return 0;
}

int run_minimize(CommonState& st, const std::string& problem_path) {
  const CutProblem problem = load_bundle(problem_path);
  st.manifest.inputs.push_back(problem_path);
  const CutSolution sol = minimize_massari(problem);
  std::cout << "energy = " << sol.energy << "\n";
  std::cout << "perimeter_part = " << sol.perimeter_part << "\n";
  std::cout << "bulk_part = " << sol.bulk_part << "\n";
  if (!st.out_dir.empty()) {
    st.ensure_out();
    save_mask(sol.minimizer, st.out_path("minimizer.pbm"));
    json rep{{"energy", sol.energy},
             {"perimeter_part", sol.perimeter_part},
             {"bulk_part", sol.bulk_part},
             {"nodes", sol.stats.nodes},
             {"arcs", sol.stats.arcs},
             {"max_flow", sol.stats.max_flow}};
    write_text_file(st.out_path("energy.json"), rep.dump(2) + "\n");
    st.finish();
  }
  return 0;
}

int run_curvature(CommonState& st, const std::string& mask_path, int points,
                  bool coverage_tail, bool with_complement,
                  const std::string& h_field_path) {
  if (st.out_dir.empty()) throw ConfigError("curvature: --out is required");
  const BinaryMask e = load_mask(mask_path);
  st.manifest.inputs.push_back(mask_path);
  const PerimeterWeights w = PerimeterWeights::cauchy_crofton(e.dom.n);

  BarozziOptions opt;
  opt.schedule_points = points;
  opt.coverage_tail = coverage_tail;
  opt.with_complement = with_complement;
  BarozziResult res;
  if (!h_field_path.empty()) {
    // user-supplied weight h_E: run the sweep on E directly
    const ScalarField h_e = load_field(h_field_path);
    st.manifest.inputs.push_back(h_field_path);
    LambdaSchedule sched = LambdaSchedule::default_for(e.dom, points);
    if (coverage_tail) sched = sched.with_coverage_tail(e.dom);
    res.on_set = barozzi_curvature(lambda_sweep(e, h_e, sched, w));
    res.signed_curvature = res.on_set.value;
    res.complement_region = BinaryMask(e.dom, false);
  } else {
    res = barozzi_construct(e, w, opt);
  }

  st.ensure_out();
  save_field(res.signed_curvature, st.out_path("h_signed.f64"));
  save_field(res.on_set.value, st.out_path("h_on_set.f64"));
  save_mask(res.on_set.covered, st.out_path("covered.pbm"));
  const double l1 = lp_norm(res.on_set.value, 1.0, &res.on_set.covered).value;
  const double per = perimeter(e, w);
  json rep{{"l1_norm", l1},
           {"perimeter", per},
           {"uncovered_cells", res.on_set.uncovered},
           {"complement_uncovered", res.on_complement.uncovered},
           {"schedule_points", points}};
  if (res.on_set.uncovered > 0)
    std::cerr << "warning: " << res.on_set.uncovered
              << " cells never covered by the sweep; excluded from norms\n";
  write_text_file(st.out_path("report.json"), rep.dump(2) + "\n");
  std::cout << "L1(H_E) = " << l1 << ", perimeter = " << per << "\n";
  st.finish();
  return 0;
}

int run_psi_fit(CommonState& st, const std::string& mask_path,
                const std::string& center_text, const std::string& radii_text) {
  const BinaryMask e = load_mask(mask_path);
  st.manifest.inputs.push_back(mask_path);
  const Vec3 center = parse_point(center_text, "--center");
  const std::vector<double> radii = parse_list(radii_text, "--radii");
  const PerimeterWeights w = PerimeterWeights::cauchy_crofton(e.dom.n);
  const PsiDecayFit fit = psi_decay_fit(e, center, radii, w);

  if (fit.exact_minimizer)
    std::cout << "exact minimizer: every deviation vanishes\n";
  else if (fit.fit_valid)
    std::cout << "slope = " << fit.slope << ", implied alpha = " << fit.implied_alpha
              << ", R^2 = " << fit.r_squared << "\n";
  else
    std::cout << "fewer than 3 usable radii: no slope\n";

  if (!st.out_dir.empty()) {
    st.ensure_out();
    std::ofstream csv(st.out_path("psi.csv"));
    csv.precision(17);
    csv << "r,psi,log_r,log_psi\n";
    for (std::size_t i = 0; i < fit.radii.size(); ++i) {
      csv << fit.radii[i] << "," << fit.psi[i] << "," << std::log(fit.radii[i]) << ",";
      if (fit.psi[i] > 0)
        csv << std::log(fit.psi[i]);
      else
        csv << "nan";
      csv << "\n";
    }
    json rep{{"slope", fit.slope},
             {"implied_alpha", fit.implied_alpha},
             {"r_squared", fit.r_squared},
             {"exact_minimizer", fit.exact_minimizer},
             {"fit_valid", fit.fit_valid}};
    write_text_file(st.out_path("summary.json"), rep.dump(2) + "\n");
    st.finish();
  }
  return 0;
}

int run_pmc(CommonState& st, const std::string& problem_path, int starts) {
  std::ifstream in(problem_path);
  if (!in) throw ConfigError("--problem: cannot open " + problem_path);
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ConfigError("--problem: malformed JSON: " + std::string(e.what()));
  }
  GraphDomain om;
  om.base_dim = j.value("base_dim", 1);
  om.node_counts = {j.at("nodes")[0], om.base_dim == 2 ? int(j.at("nodes")[1]) : 1};
  om.h = j.at("h");
  om.lo = {j.at("lo")[0], om.base_dim == 2 ? double(j.at("lo")[1]) : 0.0};
  const double vrange = j.at("vrange");

  std::function<double(std::array<double, 2>, double)> H;
  if (!j.contains("curvature"))
    throw ConfigError("--problem: missing field 'curvature'");
  if (j["curvature"].contains("constant")) {
    const double c = j["curvature"]["constant"];
    H = [c](std::array<double, 2>, double) { return c; };
  } else if (j["curvature"].contains("split")) {
    // sign-split in s: value below 0, negated above
    const double c = j["curvature"]["split"];
    H = [c](std::array<double, 2>, double s) { return s < 0 ? c : -c; };
  } else {
    throw ConfigError("--problem: 'curvature' must contain 'constant' or 'split'");
  }

  std::function<double(std::array<double, 2>)> bd;
  if (!j.contains("boundary")) throw ConfigError("--problem: missing field 'boundary'");
  if (j["boundary"].contains("constant")) {
    const double c = j["boundary"]["constant"];
    bd = [c](std::array<double, 2>) { return c; };
  } else if (j["boundary"].contains("affine")) {
    const auto a = j["boundary"]["affine"];
    const double a0 = a[0], a1 = a.size() > 1 ? double(a[1]) : 0.0,
                 a2 = a.size() > 2 ? double(a[2]) : 0.0;
    bd = [=](std::array<double, 2> y) { return a0 + a1 * y[0] + a2 * y[1]; };
  } else {
    throw ConfigError("--problem: 'boundary' must contain 'constant' or 'affine'");
  }

  const GraphProblem p =
      GraphProblem::build(om, vrange, H, bd, nullptr, j.value("samples", 1024));
  const GraphSolution sol = minimize_nonparametric(p, starts, st.seed);
  if (!sol.converged)
    std::cerr << "warning: descent did not meet the residual tolerance\n";
  std::cout << "energy = " << sol.energy << " after " << sol.iterations
            << " iterations\n";

  if (!st.out_dir.empty()) {
    st.ensure_out();
    st.manifest.inputs.push_back(problem_path);
    const std::vector<double> div = discrete_mean_curvature(p, sol.f);
    std::ofstream csv(st.out_path("solution.csv"));
    csv.precision(17);
    csv << (om.base_dim == 1 ? "y,f,fprime,divergence\n" : "y1,y2,f,divergence\n");
    for (int i = 0; i < om.num_nodes(); ++i) {
      const auto y = om.node_pos(i);
      if (om.base_dim == 1) {
        const double fp = i + 1 < om.num_nodes()
                              ? (sol.f[i + 1] - sol.f[i]) / om.h
                              : (sol.f[i] - sol.f[i - 1]) / om.h;
        csv << y[0] << "," << sol.f[i] << "," << fp << "," << div[i] << "\n";
      } else {
        csv << y[0] << "," << y[1] << "," << sol.f[i] << "," << div[i] << "\n";
      }
    }
    json rep{{"energy", sol.energy},
             {"iterations", sol.iterations},
             {"converged", sol.converged},
             {"starts", starts}};
    write_text_file(st.out_path("report.json"), rep.dump(2) + "\n");
    st.finish();
  }
  return 0;
}

int run_verify(CommonState& st, const std::string& problem_path, int perturbations,
               double eps_grid) {
  const CutProblem problem = load_bundle(problem_path);
  st.manifest.inputs.push_back(problem_path);
  if (eps_grid <= 0) eps_grid = 3.0 * problem.dom.face_area();
  const PerturbationReport rep =
      verify_minimality(problem, problem.datum, perturbations, st.seed, eps_grid);
  std::cout << (rep.pass ? "PASS" : "FAIL") << ": max improvement "
            << rep.max_improvement << " over " << rep.tried
            << " perturbations (slack " << rep.eps_grid << ")\n";
  if (!st.out_dir.empty()) {
    st.ensure_out();
    json out{{"pass", rep.pass},
             {"tried", rep.tried},
             {"improving", rep.improving},
             {"max_improvement", rep.max_improvement},
             {"eps_grid", rep.eps_grid}};
    write_text_file(st.out_path("report.json"), out.dump(2) + "\n");
    st.finish();
  }
  return rep.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"vmclab: variational mean curvature laboratory on pixel grids"};
  app.require_subcommand(1);
  app.set_config("--config", "", "flat key=value configuration file");

  CommonState st;
  app.add_option("--seed", st.seed, "seed for all randomized procedures");

  auto* exp_cmd = app.add_subcommand("exponent", "Hölder exponent improvement iteration");
  int exp_n = 2;
  std::string exp_p = "5";
  double exp_tol = 1e-13;
  exp_cmd->add_option("--n", exp_n, "ambient dimension")->required();
  exp_cmd->add_option("--p", exp_p, "integrability exponent (> n) or 'inf'")->required();
  exp_cmd->add_option("--tol", exp_tol, "fixed-point tolerance");
  exp_cmd->add_option("--out", st.out_dir, "output directory");

  auto* cex_cmd = app.add_subcommand("counterexample", "sharp counterexample families");
  std::string cex_family = "cusp2d", cex_p = "3";
  double cex_alpha = 0.5;
  int cex_n = 2, cex_res = 0;
  bool cex_classify = false, cex_table = false;
  cex_cmd->add_option("--family", cex_family, "cusp2d | cuspnd | log")->required();
  cex_cmd->add_option("--alpha", cex_alpha, "Hölder parameter in (0,1)");
  cex_cmd->add_option("--n", cex_n, "ambient dimension (cuspnd)");
  cex_cmd->add_option("--p", cex_p, "integrability exponent");
  cex_cmd->add_flag("--classify", cex_classify, "report L^p finiteness vs the threshold");
  cex_cmd->add_flag("--table", cex_table, "emit the full threshold table CSV");
  cex_cmd->add_option("--resolution", cex_res, "cells per axis for emitted masks/fields");
  cex_cmd->add_option("--out", st.out_dir, "output directory");

  auto* min_cmd = app.add_subcommand("minimize", "exact Massari minimization by min-cut");
  std::string min_problem;
  min_cmd->add_option("--problem", min_problem, "problem bundle JSON")->required();
  min_cmd->add_option("--out", st.out_dir, "output directory");

  auto* cur_cmd = app.add_subcommand("curvature", "optimal curvature by nested sweep");
  std::string cur_mask, cur_hfield;
  int cur_points = 128;
  bool cur_tail = false, cur_nocomp = false;
  cur_cmd->add_option("--mask", cur_mask, "set mask (NetPBM + sidecar)")->required();
  cur_cmd->add_option("--points", cur_points, "schedule points");
  cur_cmd->add_flag("--coverage-tail", cur_tail, "extend the schedule to cover all cells");
  cur_cmd->add_flag("--no-complement", cur_nocomp, "skip the complement construction");
  cur_cmd->add_option("--h-field", cur_hfield, "weight field h_E (defaults to 1)");
  cur_cmd->add_option("--out", st.out_dir, "output directory")->required();

  auto* psi_cmd = app.add_subcommand("psi-fit", "deviation-from-minimality decay fit");
  std::string psi_mask, psi_center, psi_radii;
  psi_cmd->add_option("--mask", psi_mask, "set mask")->required();
  psi_cmd->add_option("--center", psi_center, "ball center, e.g. 0.0,0.0")->required();
  psi_cmd->add_option("--radii", psi_radii, "comma-separated radii")->required();
  psi_cmd->add_option("--out", st.out_dir, "output directory");

  auto* pmc_cmd = app.add_subcommand("pmc", "nonparametric graph minimizer");
  std::string pmc_problem;
  int pmc_starts = 5;
  pmc_cmd->add_option("--problem", pmc_problem, "graph problem JSON")->required();
  pmc_cmd->add_option("--starts", pmc_starts, "multi-start count");
  pmc_cmd->add_option("--out", st.out_dir, "output directory");

  auto* ver_cmd = app.add_subcommand("verify", "perturbation minimality report");
  std::string ver_problem;
  int ver_pert = 1000;
  double ver_eps = 0.0;
  ver_cmd->add_option("--problem", ver_problem, "problem bundle JSON")->required();
  ver_cmd->add_option("--perturbations", ver_pert, "number of random local flips");
  ver_cmd->add_option("--eps-grid", ver_eps, "grid slack (default 3 h^(n-1))");
  ver_cmd->add_option("--out", st.out_dir, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
    app.exit(e);
    return 2;
  }

  st.manifest.command = argc > 1 ? argv[1] : "";
  for (int i = 2; i + 1 < argc; ++i) {
    const std::string arg = argv[i];
    if (arg.rfind("--", 0) == 0 && argv[i + 1][0] != '-')
      st.note_param(arg.substr(2), argv[i + 1]);
  }

  try {
    if (exp_cmd->parsed()) return run_exponent(st, exp_n, exp_p, exp_tol);
    if (cex_cmd->parsed())
      return run_counterexample(st, cex_family, cex_alpha, cex_n, cex_p, cex_classify,
                                cex_table, cex_res);
    if (min_cmd->parsed()) return run_minimize(st, min_problem);
    if (cur_cmd->parsed())
      return run_curvature(st, cur_mask, cur_points, cur_tail, !cur_nocomp, cur_hfield);
    if (psi_cmd->parsed()) return run_psi_fit(st, psi_mask, psi_center, psi_radii);
    if (pmc_cmd->parsed()) return run_pmc(st, pmc_problem, pmc_starts);
    if (ver_cmd->parsed()) return run_verify(st, ver_problem, ver_pert, ver_eps);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
