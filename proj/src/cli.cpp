#include "qflk/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "qflk/certify.hpp"
#include "qflk/io.hpp"
#include "qflk/recipes.hpp"
#include "qflk/sl_oracle.hpp"
#include "qflk/solver.hpp"
#include "qflk/spectral.hpp"

namespace qflk::cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + " must be a JSON object");
  for (const auto& [k, v] : obj.items())
    if (!allowed.count(k)) throw ConfigError("unknown key '" + k + "' in " + where);
}

double num(const json& obj, const std::string& key, double fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number()) throw ConfigError("'" + key + "' must be a number");
  return obj[key].get<double>();
}

Params parse_params(const json& j) {
  check_keys(j, {"lambda", "mu", "hbar", "nu", "delta1", "delta2", "eta1", "eta2", "r0", "r1",
                 "alpha", "s", "density_floor"},
             "params");
  Params p;
  p.lambda = num(j, "lambda", p.lambda);
  p.mu = num(j, "mu", p.mu);
  p.hbar = num(j, "hbar", p.hbar);
  p.nu = num(j, "nu", p.nu);
  p.delta1 = num(j, "delta1", p.delta1);
  p.delta2 = num(j, "delta2", p.delta2);
  p.eta1 = num(j, "eta1", p.eta1);
  p.eta2 = num(j, "eta2", p.eta2);
  p.r0 = num(j, "r0", p.r0);
  p.r1 = num(j, "r1", p.r1);
  p.alpha = num(j, "alpha", p.alpha);
  p.s = static_cast<int>(num(j, "s", p.s));
  p.density_floor = num(j, "density_floor", p.density_floor);
  p.validate();
  return p;
}

solver::SolverConfig parse_solver(const json& j) {
  check_keys(j, {"dt", "t_end", "scheme", "dealias", "report_every", "density_floor"}, "solver");
  solver::SolverConfig c;
  c.dt = num(j, "dt", c.dt);
  c.t_end = num(j, "t_end", c.t_end);
  if (j.contains("scheme")) {
    std::string s = j["scheme"].get<std::string>();
    if (s == "rk4")
      c.scheme = solver::Scheme::rk4;
    else if (s == "imex_cn")
      c.scheme = solver::Scheme::imex_cn;
    else
      throw ConfigError("scheme must be rk4 or imex_cn");
  }
  if (j.contains("dealias")) c.dealias = j["dealias"].get<bool>();
  c.report_every = static_cast<int>(num(j, "report_every", c.report_every));
  c.density_floor = num(j, "density_floor", c.density_floor);
  c.validate();
  return c;
}

TorusGrid parse_grid(const json& j) {
  check_keys(j, {"dim", "n"}, "grid");
  if (!j.contains("dim") || !j.contains("n")) throw ConfigError("grid needs dim and n");
  return TorusGrid(j["dim"].get<int>(), j["n"].get<int>());
}

struct InitialSpec {
  std::string recipe;
  std::string snapshot;
  std::map<std::string, double> opts;
};

InitialSpec parse_initial(const json& j) {
  if (!j.is_object()) throw ConfigError("initial_data must be a JSON object");
  InitialSpec spec;
  for (const auto& [k, v] : j.items()) {
    if (k == "recipe") {
      spec.recipe = v.get<std::string>();
    } else if (k == "snapshot") {
      spec.snapshot = v.get<std::string>();
    } else if (v.is_number()) {
      spec.opts[k] = v.get<double>();
    } else {
      throw ConfigError("initial_data option '" + k + "' must be a number");
    }
  }
  if (spec.recipe.empty() == spec.snapshot.empty())
    throw ConfigError("initial_data needs exactly one of 'recipe' or 'snapshot'");
  return spec;
}

FluidState load_fluid(const InitialSpec& spec, const TorusGrid& g, const Params& p,
                      std::uint64_t seed) {
  if (!spec.snapshot.empty()) {
    io::Snapshot snap = io::read_qfld(spec.snapshot);
    if (!(snap.grid == g)) throw ConfigError("snapshot grid does not match the config grid");
    return io::unpack_fluid(snap);
  }
  return recipes::make_fluid(spec.recipe, spec.opts, g, p, seed);
}

certify::USpec parse_uspec(const json& j) {
  check_keys(j, {"u_spec", "amplitude", "mode", "speed", "seed"}, "reference entry");
  if (!j.contains("u_spec")) throw ConfigError("reference entry needs u_spec");
  std::string name = j["u_spec"].get<std::string>();
  certify::USpec u;
  if (name == "zero")
    u = certify::USpec::zero();
  else if (name == "uniform")
    u = certify::USpec::uniform(num(j, "amplitude", 0.1));
  else if (name == "traveling")
    u = certify::USpec::traveling(num(j, "amplitude", 0.1), static_cast<int>(num(j, "mode", 1)),
                                  num(j, "speed", 1.0));
  else if (name == "random_band")
    u = certify::USpec::random_band(static_cast<std::uint64_t>(num(j, "seed", 0)),
                                    num(j, "amplitude", 0.1));
  else
    throw ConfigError("unknown u_spec: " + name);
  return u;
}

struct Config {
  json raw;
  std::string mode;
  TorusGrid grid{1, 8};
  Params params;
  solver::SolverConfig solver_cfg;
  InitialSpec initial;
  json reference;  // object or array, certify/sweep modes
  std::vector<double> nu_list;
  std::string output_dir = "out";
  std::uint64_t seed = 0;
};

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  check_keys(j, {"mode", "grid", "params", "solver", "initial_data", "reference", "nu_list",
                 "output_dir", "seed"},
             "config");
  Config c;
  c.raw = j;
  if (!j.contains("mode")) throw ConfigError("config needs a mode");
  c.mode = j["mode"].get<std::string>();
  static const std::set<std::string> modes{"reg_nslk", "aug_nslk", "elk",          "sl",
                                           "oracle_compare", "certify", "sweep"};
  if (!modes.count(c.mode)) throw ConfigError("unknown mode: " + c.mode);
  if (!j.contains("grid")) throw ConfigError("config needs a grid");
  c.grid = parse_grid(j["grid"]);
  c.params = parse_params(j.value("params", json::object()));
  c.solver_cfg = parse_solver(j.value("solver", json::object()));
  if (j.contains("initial_data")) c.initial = parse_initial(j["initial_data"]);
  if (j.contains("reference")) c.reference = j["reference"];
  if (j.contains("nu_list"))
    for (const auto& v : j["nu_list"]) c.nu_list.push_back(v.get<double>());
  if (j.contains("output_dir")) c.output_dir = j["output_dir"].get<std::string>();
  if (const char* env = std::getenv("QFLUID_OUT")) c.output_dir = env;
  if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
  return c;
}

void write_run_json(const Config& c, const std::string& status, const std::string& reason,
                    const json& extra = json::object()) {
  json out;
  out["config"] = c.raw;
  out["status"] = status;
  if (!reason.empty()) out["reason"] = reason;
  for (const auto& [k, v] : extra.items()) out[k] = v;
  std::ofstream f(c.output_dir + "/run.json");
  f << out.dump(2) << "\n";
}

void prepare_dirs(const Config& c, bool snapshots = true) {
  fs::create_directories(c.output_dir);
  if (snapshots) fs::create_directories(c.output_dir + "/snapshots");
}

int finish_run(const Config& c, const solver::RunResult& rr, const json& extra = json::object()) {
  json x = extra;
  x["final_time"] = rr.final_time;
  x["steps"] = rr.steps_taken;
  write_run_json(c, rr.status, rr.reason, x);
  if (rr.status != "completed") {
    std::cerr << json{{"status", "numerical_error"}, {"reason", rr.reason}}.dump() << "\n";
    return 3;
  }
  std::cout << "run completed: t=" << rr.final_time << " (" << rr.steps_taken << " steps), "
            << rr.reports.size() << " report rows\n";
  return 0;
}

int cmd_run(const Config& c) {
  prepare_dirs(c);
  if (c.initial.recipe.empty() && c.initial.snapshot.empty())
    throw ConfigError("run mode needs initial_data");

  if (c.mode == "sl") {
    WaveFunction psi0 = c.initial.snapshot.empty()
                            ? recipes::make_wave(c.initial.recipe, c.initial.opts, c.grid,
                                                 c.params, c.seed)
                            : [&] {
                                io::Snapshot snap = io::read_qfld(c.initial.snapshot);
                                if (snap.comps != 2)
                                  throw ConfigError("wave snapshots need comps=2");
                                WaveFunction w(snap.grid);
                                for (std::size_t i = 0; i < snap.grid.num_points(); ++i)
                                  w.psi[i] = {snap.data[2 * i], snap.data[2 * i + 1]};
                                return w;
                              }();
    std::vector<EntropyReport> reports;
    auto observer = [&](std::size_t step, const WaveFunction& psi) {
      FluidState fs = madelung(psi, c.params);
      EntropyReport r;
      r.time = psi.time;
      r.mass = fs.mass();
      auto e = functionals::energy_nslk(fs, c.params);
      r.energy_nslk = e.value;
      r.dissipation_nslk = e.dissipation;
      reports.push_back(r);
      io::Snapshot snap(psi.grid, 2);
      for (std::size_t i = 0; i < psi.grid.num_points(); ++i) {
        snap.data[2 * i] = psi.psi[i].real();
        snap.data[2 * i + 1] = psi.psi[i].imag();
      }
      io::write_qfld(c.output_dir + "/snapshots/t_" + std::to_string(step) + ".qfld", snap);
    };
    sl::SLRunResult res =
        sl::run(psi0, c.params, c.solver_cfg.dt, c.solver_cfg.t_end, c.solver_cfg.report_every,
                observer);
    io::write_reports_csv(c.output_dir + "/reports.csv", reports);
    write_run_json(c, "completed", "", {{"mass_drift", res.mass_drift}});
    std::cout << "run completed: t=" << res.final.time << ", mass drift " << res.mass_drift
              << "\n";
    return 0;
  }

  FluidState initial = load_fluid(c.initial, c.grid, c.params, c.seed);

  if (c.mode == "reg_nslk") {
    FluidState state = initial;
    auto observer = [&](std::size_t step, const FluidState& s) {
      io::write_qfld(c.output_dir + "/snapshots/t_" + std::to_string(step) + ".qfld",
                     io::pack_fluid(s));
    };
    solver::RunResult rr = solver::run_reg(state, c.params, c.solver_cfg, observer);
    io::write_reports_csv(c.output_dir + "/reports.csv", rr.reports);
    return finish_run(c, rr);
  }

  // aug_nslk or elk
  Params p = c.params;
  if (c.mode == "elk" && p.nu != 0.0)
    throw ConfigError("elk mode requires nu = 0 (use aug_nslk for viscous runs)");
  p.validate_augmented();
  AugmentedState aug = augment(initial, p);
  auto observer = [&](std::size_t step, const AugmentedState& s) {
    io::write_qfld(c.output_dir + "/snapshots/t_" + std::to_string(step) + ".qfld",
                   io::pack_aug(s));
  };
  solver::RunResult rr = solver::run_aug(aug, p, c.solver_cfg, nullptr, observer);
  io::write_reports_csv(c.output_dir + "/reports.csv", rr.reports);
  return finish_run(c, rr);
}

int cmd_oracle_compare(const Config& c) {
  prepare_dirs(c, false);
  if (c.params.nu != 0.0) throw ConfigError("oracle comparison requires nu = 0");
  FluidState initial = load_fluid(c.initial, c.grid, c.params, c.seed);
  WaveFunction psi0 = inverse_madelung(initial, c.params);

  AugmentedState aug = augment(initial, c.params);
  solver::RunResult rr = solver::run_aug(aug, c.params, c.solver_cfg);
  if (rr.status != "completed") return finish_run(c, rr);
  sl::SLRunResult slr = sl::run(psi0, c.params, c.solver_cfg.dt, c.solver_cfg.t_end);

  ScalarField rho_sl = slr.final.density();
  ScalarField diff = aug.rho - rho_sl;
  double l1 = spectral::integrate(map(diff, [](double v) { return std::fabs(v); }));
  std::cout << "oracle-compare L1 density discrepancy = " << l1 << "\n";
  write_run_json(c, "completed", "", {{"l1_density_discrepancy", l1}});
  return 0;
}

json cert_to_json(const certify::Certificate& cert, double c_struct, double tol) {
  return json{{"u_spec", cert.u_spec_name}, {"C_used", cert.C},   {"c_struct", c_struct},
              {"tol_cert", tol},            {"times", cert.times}, {"lhs", cert.lhs},
              {"rhs", cert.rhs},            {"margin", cert.margin},
              {"verdict", cert.passed ? "pass" : "fail"},
              {"status", cert.status}};
}

int cmd_certify(const Config& c) {
  prepare_dirs(c, false);
  if (c.reference.is_null()) throw ConfigError("certify mode needs a reference");
  json refs = c.reference.is_array() ? c.reference : json::array({c.reference});

  Params p = c.params;
  p.validate_augmented();
  FluidState initial = load_fluid(c.initial, c.grid, p, c.seed);
  auto mode = (p.nu > 0.0) ? functionals::ErrorFieldMode::nslk_nu : functionals::ErrorFieldMode::elk;

  json out = json::array();
  bool all_pass = true;
  for (const auto& entry : refs) {
    json e = entry;
    double c_struct = num(e, "c_struct", 8.0);
    double tol = num(e, "tol_cert", 1e-8);
    double c_override = num(e, "c_override", -1.0);
    e.erase("c_struct");
    if (e.contains("tol_cert")) e.erase("tol_cert");
    if (e.contains("c_override")) e.erase("c_override");
    certify::USpec u = parse_uspec(e);
    certify::Certificate cert =
        certify::certify_run(initial, u, p, c.solver_cfg, mode, tol, c_override);
    if (c_override < 0.0) {
      // re-estimate with the requested structural constant
      auto traj = certify::manufactured_reference(u, initial.rho, p, c.solver_cfg, mode);
      double C = certify::estimate_C(traj, p, c_struct);
      cert = certify::gronwall_certificate(cert.times, cert.lhs, cert.b, C, tol);
      cert.u_spec_name = u.name();
    }
    all_pass = all_pass && cert.passed;
    out.push_back(cert_to_json(cert, c_struct, tol));
    std::cout << "certificate " << cert.u_spec_name << ": "
              << (cert.passed ? "pass" : "fail") << " (C=" << cert.C
              << ", margin=" << cert.margin << ")\n";
  }
  std::ofstream f(c.output_dir + "/certificate.json");
  f << (out.size() == 1 ? out[0] : out).dump(2) << "\n";
  write_run_json(c, "completed", "", {{"all_pass", all_pass}});
  return 0;
}

int cmd_sweep(const Config& c) {
  prepare_dirs(c, false);
  if (c.nu_list.empty()) throw ConfigError("sweep mode needs nu_list");
  FluidState initial = load_fluid(c.initial, c.grid, c.params, c.seed);
  certify::USpec u = c.reference.is_null() ? certify::USpec::zero() : parse_uspec(c.reference);
  certify::SweepResult res = certify::inviscid_sweep(initial, u, c.params, c.nu_list, c.solver_cfg);

  std::ofstream f(c.output_dir + "/sweep.csv");
  f << "nu,relE_ref,relE_oracle,verdict\n";
  f.precision(17);
  for (const auto& row : res.rows)
    f << row.nu << "," << row.rel_entropy_ref << "," << row.rel_entropy_oracle << ","
      << row.status << "\n";
  std::cout << "sweep over " << res.rows.size() << " viscosities, fitted order "
            << res.fitted_order << "\n";
  write_run_json(c, "completed", "", {{"fitted_order", res.fitted_order}});
  return 0;
}

// --- report subcommand -----------------------------------------------------

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

int cmd_report(const std::string& run_dir) {
  std::ifstream in(run_dir + "/reports.csv");
  if (!in) throw MissingDataError("no reports.csv in " + run_dir);
  std::string line;
  if (!std::getline(in, line)) throw MissingDataError("empty reports.csv in " + run_dir);
  std::vector<std::string> names = split(line);
  std::vector<std::vector<double>> times_per_col(names.size());
  std::vector<std::vector<double>> values(names.size());
  std::vector<double> times;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells = split(line);
    if (cells.size() != names.size()) throw MissingDataError("ragged reports.csv in " + run_dir);
    double t = std::stod(cells[0]);
    times.push_back(t);
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (cells[i].empty()) continue;
      values[i].push_back(std::stod(cells[i]));
      times_per_col[i].push_back(t);
    }
  }
  if (times.empty()) throw MissingDataError("no data rows in " + run_dir + "/reports.csv");

  for (std::size_t i = 1; i < names.size(); ++i) {
    if (values[i].empty()) continue;
    double lo = values[i][0], hi = values[i][0];
    for (double v : values[i]) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    std::cout << names[i] << ": min=" << lo << " max=" << hi << " final=" << values[i].back()
              << "\n";
    std::ofstream pf(run_dir + "/plotdata_" + names[i] + ".csv");
    pf << "time," << names[i] << "\n";
    pf.precision(17);
    for (std::size_t r = 0; r < values[i].size(); ++r)
      pf << times_per_col[i][r] << "," << values[i][r] << "\n";
  }

  std::ifstream cf(run_dir + "/certificate.json");
  if (cf) {
    json certs;
    try {
      cf >> certs;
    } catch (const json::exception&) {
      certs = nullptr;
    }
    if (certs.is_object()) certs = json::array({certs});
    if (certs.is_array())
      for (const auto& cert : certs)
        std::cout << "certificate " << cert.value("u_spec", "?") << ": "
                  << cert.value("verdict", "?") << "\n";
  }
  return 0;
}

}  // namespace

int cli_main(int argc, char** argv) {
  CLI::App app{"pseudo-spectral quantum-fluid laboratory"};
  app.require_subcommand(1);

  std::string config_path, run_dir;
  CLI::App* c_run = app.add_subcommand("run", "integrate one configured system");
  c_run->add_option("--config", config_path, "JSON config path")->required();
  CLI::App* c_cert = app.add_subcommand("certify", "evaluate Gronwall certificates");
  c_cert->add_option("--config", config_path, "JSON config path")->required();
  CLI::App* c_sweep = app.add_subcommand("sweep", "viscosity sweep toward the inviscid limit");
  c_sweep->add_option("--config", config_path, "JSON config path")->required();
  CLI::App* c_cmp = app.add_subcommand("oracle-compare",
                                       "fluid solver vs wave-function solver from matched data");
  c_cmp->add_option("--config", config_path, "JSON config path")->required();
  CLI::App* c_rep = app.add_subcommand("report", "summarize a finished run directory");
  c_rep->add_option("run_dir", run_dir, "run directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (c_rep->parsed()) return cmd_report(run_dir);
    Config c = load_config(config_path);
    if (c_run->parsed()) {
      static const std::set<std::string> run_modes{"reg_nslk", "aug_nslk", "elk", "sl"};
      if (!run_modes.count(c.mode)) throw ConfigError("mode '" + c.mode + "' is not a run mode");
      return cmd_run(c);
    }
    if (c_cmp->parsed()) {
      if (c.mode != "oracle_compare") throw ConfigError("expected mode oracle_compare");
      return cmd_oracle_compare(c);
    }
    if (c_cert->parsed()) {
      if (c.mode != "certify") throw ConfigError("expected mode certify");
      return cmd_certify(c);
    }
    if (c_sweep->parsed()) {
      if (c.mode != "sweep") throw ConfigError("expected mode sweep");
      return cmd_sweep(c);
    }
    throw ConfigError("no subcommand");
  } catch (const ConfigError& e) {
    std::cerr << json{{"status", "config_error"}, {"reason", e.what()}}.dump() << "\n";
    return 2;
  } catch (const MissingDataError& e) {
    std::cerr << json{{"status", "config_error"}, {"reason", e.what()}}.dump() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << json{{"status", "numerical_error"}, {"reason", e.what()}}.dump() << "\n";
    return 3;
  }
}

}  // namespace qflk::cli
