#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

std::string g_tool;
fs::path g_dir;

int run_tool(const std::string& args) {
  std::string cmd = g_tool + " " + args + " > " + (g_dir / "stdout.txt").string() + " 2> " +
                    (g_dir / "stderr.txt").string();
  int rc = std::system(cmd.c_str());
  return WEXITSTATUS(rc);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path write_config(const std::string& name, const std::string& body) {
  fs::path p = g_dir / name;
  std::ofstream out(p);
  out << body;
  return p;
}

}  // namespace

TEST_CASE("equilibrium run exits 0 with constant-mass reports") {
  fs::path out = g_dir / "eq";
  fs::path cfg = write_config("eq.json", R"({
    "mode": "reg_nslk",
    "grid": {"dim": 1, "n": 32},
    "params": {"lambda": 1.0, "mu": 1.0, "hbar": 1.0},
    "solver": {"dt": 0.01, "t_end": 0.1},
    "initial_data": {"recipe": "equilibrium"},
    "output_dir": ")" + out.string() + R"("
  })");
  CHECK(run_tool("run --config " + cfg.string()) == 0);
  CHECK(fs::exists(out / "reports.csv"));
  CHECK(fs::exists(out / "run.json"));
  CHECK(fs::exists(out / "snapshots/t_0.qfld"));

  std::ifstream in(out / "reports.csv");
  std::string line;
  std::getline(in, line);  // header
  std::string first_mass;
  while (std::getline(in, line)) {
    auto a = line.find(','), b = line.find(',', line.find(',') + 1);
    std::string mass = line.substr(a + 1, b - a - 1);
    if (first_mass.empty())
      first_mass = mass;
    else
      CHECK(mass == first_mass);
  }
}

TEST_CASE("report subcommand summarizes a finished run") {
  CHECK(run_tool("report " + (g_dir / "eq").string()) == 0);
  std::string text = slurp(g_dir / "stdout.txt");
  CHECK(text.find("mass") != std::string::npos);
  CHECK(fs::exists(g_dir / "eq" / "plotdata_mass.csv"));
}

TEST_CASE("unknown config keys are rejected with exit 2") {
  fs::path cfg = write_config("bad_key.json", R"({
    "mode": "reg_nslk",
    "grid": {"dim": 1, "n": 32},
    "solvr": {"dt": 0.01}
  })");
  CHECK(run_tool("run --config " + cfg.string()) == 2);
  std::string err = slurp(g_dir / "stderr.txt");
  CHECK(err.find("config_error") != std::string::npos);
  CHECK(err.find("solvr") != std::string::npos);
}

TEST_CASE("negative shifted pressure in augmented mode exits 2") {
  fs::path cfg = write_config("lp.json", R"({
    "mode": "aug_nslk",
    "grid": {"dim": 1, "n": 32},
    "params": {"lambda": 0.05, "mu": 2.0, "nu": 0.1},
    "solver": {"dt": 0.001, "t_end": 0.01},
    "initial_data": {"recipe": "equilibrium"},
    "output_dir": ")" + (g_dir / "lp").string() + R"("
  })");
  CHECK(run_tool("run --config " + cfg.string()) == 2);
  std::string err = slurp(g_dir / "stderr.txt");
  CHECK(err.find("lambda") != std::string::npos);
}

TEST_CASE("report on an empty directory exits 2") {
  fs::create_directories(g_dir / "empty");
  CHECK(run_tool("report " + (g_dir / "empty").string()) == 2);
}

TEST_CASE("oracle comparison prints an L1 discrepancy summary") {
  fs::path cfg = write_config("cmp.json", R"({
    "mode": "oracle_compare",
    "grid": {"dim": 1, "n": 64},
    "params": {"lambda": 1.0, "mu": 1.0, "hbar": 1.0},
    "solver": {"dt": 0.001, "t_end": 0.05},
    "initial_data": {"recipe": "madelung_wave", "a": 0.2},
    "output_dir": ")" + (g_dir / "cmp").string() + R"("
  })");
  CHECK(run_tool("oracle-compare --config " + cfg.string()) == 0);
  std::string text = slurp(g_dir / "stdout.txt");
  CHECK(text.find("L1 density discrepancy") != std::string::npos);
}

TEST_CASE("identical config and seed reproduce reports byte for byte") {
  fs::path cfg = write_config("seeded.json", R"({
    "mode": "reg_nslk",
    "grid": {"dim": 1, "n": 32},
    "solver": {"dt": 0.001, "t_end": 0.02},
    "initial_data": {"recipe": "random_band", "amp": 0.2},
    "seed": 7,
    "output_dir": ")" + (g_dir / "s1").string() + R"("
  })");
  CHECK(run_tool("run --config " + cfg.string()) == 0);
  std::string first = slurp(g_dir / "s1" / "reports.csv");
  // rerun into another directory via the environment override
  setenv("QFLUID_OUT", (g_dir / "s2").c_str(), 1);
  CHECK(run_tool("run --config " + cfg.string()) == 0);
  unsetenv("QFLUID_OUT");
  CHECK(first == slurp(g_dir / "s2" / "reports.csv"));
  CHECK(!first.empty());
}

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: test_cli <path-to-tool> [doctest args]\n");
    return 1;
  }
  g_tool = argv[1];
  g_dir = fs::temp_directory_path() / "qflk_cli_test";
  fs::remove_all(g_dir);
  fs::create_directories(g_dir);
  doctest::Context ctx(argc - 1, argv + 1);
  int rc = ctx.run();
  fs::remove_all(g_dir);
  return rc;
}
