#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "vmclab/cut.hpp"
#include "vmclab/io.hpp"
#include "vmclab/manifest.hpp"

using namespace vmclab;
namespace fs = std::filesystem;

namespace {

const fs::path kWork = fs::temp_directory_path() / "vmclab_cli_test";

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  return std::string((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
}

int run_cli(const std::string& args, const fs::path& stdout_file = {},
            const fs::path& stderr_file = {}) {
  std::string cmd = std::string(VMCLAB_CLI_PATH) + " " + args;
  if (!stdout_file.empty()) cmd += " > " + stdout_file.string();
  if (!stderr_file.empty()) cmd += " 2> " + stderr_file.string();
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("mask and field files round-trip") {
  fs::create_directories(kWork);
  SUBCASE("2D mask with sidecar") {
    const GridDomain d = GridDomain::square2d(-1.0, 1.0, 37);  // odd width: pad bits
    const BinaryMask m = rasterize_ball(d, {0.2, -0.3, 0}, 0.4);
    const std::string path = (kWork / "m2.pbm").string();
    save_mask(m, path);
    CHECK(load_mask(path) == m);
    CHECK(slurp(path).substr(0, 2) == "P4");
    CHECK(fs::exists(path + ".json"));
  }
  SUBCASE("3D mask stacks slices") {
    const GridDomain d = GridDomain::cube3d(0.0, 1.0, 9);
    const BinaryMask m = rasterize_ball(d, {0.5, 0.5, 0.5}, 0.3);
    const std::string path = (kWork / "m3.pbm").string();
    save_mask(m, path);
    CHECK(load_mask(path) == m);
  }
  SUBCASE("field round-trip preserves bits") {
    const GridDomain d = GridDomain::square2d(0.0, 1.0, 21);
    ScalarField f(d, 0.0, "1/length");
    for (std::int64_t c = 0; c < d.cell_count(); ++c)
      f[c] = std::sin(double(c)) * 1e-7 + double(c);
    const std::string path = (kWork / "f.f64").string();
    save_field(f, path);
    const ScalarField g = load_field(path);
    CHECK(g.unit == "1/length");
    CHECK(g.values == f.values);
  }
  SUBCASE("CSV export") {
    const GridDomain d = GridDomain::square2d(0.0, 1.0, 4);
    const ScalarField f(d, 2.5);
    save_field_csv(f, (kWork / "f.csv").string());
    const std::string text = slurp(kWork / "f.csv");
    CHECK(text.rfind("x,y,value", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 17);  // header + 16 cells
  }
  SUBCASE("missing sidecar is a config error") {
    write_text_file((kWork / "orphan.pbm").string(), "P4\n1 1\n\0");
    CHECK_THROWS_AS((void)load_mask((kWork / "orphan.pbm").string()), ConfigError);
  }
}

TEST_CASE("manifest round-trip") {
  fs::create_directories(kWork / "mani");
  RunManifest m;
  m.command = "minimize";
  m.params = {{"problem", "p.json"}};
  m.inputs = {"p.json"};
  m.outputs = {"minimizer.pbm"};
  m.seed = 42;
  m.wall_ms = 12.5;
  m.save((kWork / "mani").string());
  const RunManifest r = RunManifest::load((kWork / "mani").string());
  CHECK(r.command == m.command);
  CHECK(r.params == m.params);
  CHECK(r.seed == 42);
  CHECK(r.version == std::string(kVersion));
}

TEST_CASE("cli: exponent prints the closed-form values") {
  fs::create_directories(kWork);
  const fs::path out = kWork / "exp_out";
  fs::remove_all(out);
  const int code = run_cli("exponent --n 2 --p 5 --out " + out.string(),
                           kWork / "exp.txt");
  CHECK(code == 0);
  const std::string text = slurp(kWork / "exp.txt");
  CHECK(text.find("alpha0 = 0.15") != std::string::npos);
  CHECK(text.find("alpha_star = 0.5") != std::string::npos);
  CHECK(fs::exists(out / "iterates.csv"));
  CHECK(fs::exists(out / "manifest.json"));
}

TEST_CASE("cli: counterexample classification line") {
  const int code = run_cli(
      "counterexample --family cusp2d --alpha 0.5 --p 3 --classify",
      kWork / "cex.txt");
  CHECK(code == 0);
  const std::string text = slurp(kWork / "cex.txt");
  CHECK(text.find("finite, threshold 0.25") != std::string::npos);

  const int code2 = run_cli(
      "counterexample --family cuspnd --n 3 --alpha 0.1 --p 4 --classify",
      kWork / "cex2.txt");
  CHECK(code2 == 0);
  CHECK(slurp(kWork / "cex2.txt").find("divergent") != std::string::npos);
}

TEST_CASE("cli: minimize on a missing file exits 2 naming the flag") {
  const int code = run_cli("minimize --problem /nonexistent/nowhere.json",
                           kWork / "min.txt", kWork / "min.err");
  CHECK(code == 2);
  const std::string err = slurp(kWork / "min.err");
  CHECK(err.find("--problem") != std::string::npos);
  CHECK(err.find("nowhere.json") != std::string::npos);
}

TEST_CASE("cli: unknown flag exits 2") {
  const int code = run_cli("exponent --n 2 --p 5 --frobnicate 3", kWork / "uk.txt",
                           kWork / "uk.err");
  CHECK(code == 2);
}

TEST_CASE("cli: minimize bundle round-trip matches the library") {
  const fs::path dir = kWork / "bundle";
  fs::create_directories(dir);
  const GridDomain d = GridDomain::square2d(-1.0, 1.0, 48);
  const PerimeterWeights w = PerimeterWeights::cauchy_crofton(2);
  const BinaryMask datum = rasterize_halfspace(d, {0, 1, 0}, 0.1);
  const BinaryMask free_cells = rasterize_ball(d, {0, 0, 0}, 0.5);
  save_mask(datum, (dir / "datum.pbm").string());
  save_mask(free_cells, (dir / "free.pbm").string());
  write_text_file((dir / "problem.json").string(),
                  R"({"datum": "datum.pbm", "free": "free.pbm",
                      "curvature": {"constant": 1.5}, "weights": "cc16"})");

  const fs::path out = dir / "out";
  const int code =
      run_cli("minimize --problem " + (dir / "problem.json").string() + " --out " +
              out.string());
  CHECK(code == 0);

  CutProblem p{d, ScalarField(d, 1.5, "1/length"), datum, free_cells, w};
  const CutSolution expect = minimize_massari(p);
  CHECK(load_mask((out / "minimizer.pbm").string()) == expect.minimizer);
  CHECK(fs::exists(out / "energy.json"));
  CHECK(fs::exists(out / "manifest.json"));
}

TEST_CASE("cli: verify subcommand reports a pass for a solved bundle") {
  const fs::path dir = kWork / "verify";
  fs::create_directories(dir);
  const GridDomain d = GridDomain::square2d(-1.0, 1.0, 32);
  const BinaryMask datum = rasterize_halfspace(d, {0, 1, 0}, 0.0);
  const BinaryMask free_cells = rasterize_ball(d, {0, 0, 0}, 0.5);
  save_mask(datum, (dir / "datum.pbm").string());
  save_mask(free_cells, (dir / "free.pbm").string());
  write_text_file((dir / "problem.json").string(),
                  R"({"datum": "datum.pbm", "free": "free.pbm"})");
  const int code = run_cli("verify --problem " + (dir / "problem.json").string() +
                               " --perturbations 200 --out " + (dir / "out").string(),
                           kWork / "ver.txt");
  CHECK(code == 0);
  CHECK(slurp(kWork / "ver.txt").rfind("PASS", 0) == 0);
}

TEST_CASE("cli: pmc smoke run") {
  const fs::path dir = kWork / "pmc";
  fs::create_directories(dir);
  write_text_file((dir / "problem.json").string(),
                  R"({"base_dim": 1, "nodes": [64, 1], "lo": [-0.5], "h": 0.015873,
                      "vrange": 1.0, "curvature": {"constant": 1.0},
                      "boundary": {"constant": 0.0}})");
  const int code = run_cli("pmc --problem " + (dir / "problem.json").string() +
                               " --out " + (dir / "out").string(),
                           kWork / "pmc.txt");
  CHECK(code == 0);
  CHECK(fs::exists(dir / "out" / "solution.csv"));
  CHECK(fs::exists(dir / "out" / "report.json"));
}

TEST_CASE("cli: replay reproduces artifacts bit-exactly") {
  const fs::path dir = kWork / "replay";
  fs::create_directories(dir);
  const GridDomain d = GridDomain::square2d(-1.0, 1.0, 32);
  save_mask(rasterize_halfspace(d, {0, 1, 0}, 0.0), (dir / "datum.pbm").string());
  save_mask(rasterize_ball(d, {0, 0, 0}, 0.5), (dir / "free.pbm").string());
  write_text_file((dir / "problem.json").string(),
                  R"({"datum": "datum.pbm", "free": "free.pbm",
                      "curvature": {"constant": -0.75}})");
  for (const char* sub : {"a", "b"}) {
    const int code = run_cli("--seed 7 minimize --problem " +
                             (dir / "problem.json").string() + " --out " +
                             (dir / sub).string());
    REQUIRE(code == 0);
  }
  CHECK(slurp(dir / "a" / "minimizer.pbm") == slurp(dir / "b" / "minimizer.pbm"));
  CHECK(slurp(dir / "a" / "energy.json") == slurp(dir / "b" / "energy.json"));
  // exactly one manifest per artifact directory
  int manifests = 0;
  for (const auto& f : fs::directory_iterator(dir / "a"))
    if (f.path().filename() == "manifest.json") ++manifests;
  CHECK(manifests == 1);
}
