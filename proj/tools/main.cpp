#include <fstream>
#include <functional>
#include <iostream>
#include <locale>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cli_support.hpp"
#include "dqa/dqa.h"

using namespace dqa_cli;

namespace {

struct NumericalFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct OracleFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

[[noreturn]] void raise(dqa_status s) {
  switch (s) {
    case DQA_ERR_CONFIG:
    case DQA_ERR_INVALID_ARGUMENT: throw ConfigError(dqa_last_error());
    case DQA_ERR_ORACLE: throw OracleFailure(dqa_last_error());
    default: throw NumericalFailure(dqa_last_error());
  }
}

void check(dqa_status s) {
  if (s != DQA_OK) raise(s);
}

// Flags are parsed into their own storage and applied after the config file,
// so that a flag always wins over the file.
class Overrides {
 public:
  template <class T, class Target>
  CLI::Option* add(CLI::App* app, const std::string& name, Target& target, const std::string& help) {
    auto value = std::make_shared<T>();
    CLI::Option* opt = app->add_option(name, *value, help);
    apply_.push_back([opt, value, &target] {
      if (opt->count() > 0) target = *value;
    });
    return opt;
  }

  CLI::Option* add_flag(CLI::App* app, const std::string& name, bool& target, const std::string& help) {
    CLI::Option* opt = app->add_flag(name, help);
    apply_.push_back([opt, &target] {
      if (opt->count() > 0) target = true;
    });
    return opt;
  }

  void apply() const {
    for (const auto& f : apply_) f();
  }

 private:
  std::vector<std::function<void()>> apply_;
};

struct Options {
  RunConfig cfg;
  std::string config_path;
  std::string kz_window;
  Overrides overrides;
  CLI::Option* bath_opt = nullptr;
  CLI::Option* L_opt = nullptr;
};

void add_common(CLI::App* app, Options& o) {
  app->add_option("--config", o.config_path, "INI file with [chain] [schedule] [bath] [output] [run] sections")
      ->check(CLI::ExistingFile);
  auto& ov = o.overrides;
  auto& c = o.cfg;
  o.L_opt = ov.add<int>(app, "-L,--L", c.L, "chain length (default 1000, 501 for dephasing)");
  ov.add<std::string>(app, "--sector", c.sector, "auto, even or odd");
  ov.add<double>(app, "--dt", c.dt, "integrator step");
  ov.add<double>(app, "--t-in-factor", c.t_in_factor, "Gamma(t_in) = t_in_factor");
  o.bath_opt = ov.add<std::string>(app, "--bath", c.bath, "none, pump, decay, mixed or dephasing");
  ov.add<int>(app, "--workers", c.workers, "worker threads, 0 = all cores");
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e)) return kExitConfig;
  if (dynamic_cast<const OracleFailure*>(&e)) return kExitOracle;
  return kExitNumerical;
}

void finish_config(Options& o) {
  if (!o.config_path.empty()) load_config_file(o.config_path, o.cfg);
  o.overrides.apply();
  if (!o.kz_window.empty()) {
    const auto w = parse_grid(o.kz_window);
    if (w.size() != 2) throw ConfigError("--kz-window must be lo,hi");
    o.cfg.kz_lo = w[0];
    o.cfg.kz_hi = w[1];
  }
}

// Writes to `path`, or to stdout when it is empty.
template <class Fn>
void with_output(const std::string& path, Fn&& fn) {
  if (path.empty()) {
    fn(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open '" + path + "' for writing");
  fn(out);
  if (!out) throw NumericalFailure("write to '" + path + "' failed");
}

int run_command(const RunConfig& cfg) {
  dqa_problem p = cfg.problem();
  dqa_trajectory* raw = nullptr;
  check(dqa_run(&p, &raw));
  std::unique_ptr<dqa_trajectory, decltype(&dqa_trajectory_free)> t(raw, dqa_trajectory_free);
  with_output(cfg.csv_path, [&](std::ostream& os) { write_trajectory_csv(os, t.get()); });
  return kExitOk;
}

int sweep_command(const RunConfig& cfg) {
  if (cfg.tau_grid.empty()) throw ConfigError("sweep needs a tau grid");
  const auto taus = parse_grid(cfg.tau_grid);
  const auto kappas = cfg.kappa_grid.empty() ? std::vector<double>{cfg.kappa} : parse_grid(cfg.kappa_grid);
  const auto etas = cfg.eta_grid.empty() ? std::vector<double>{cfg.eta} : parse_grid(cfg.eta_grid);
  const int bath = cfg.bath_code();

  dqa_problem base = cfg.problem();
  dqa_sweep* raw = nullptr;
  check(dqa_sweep_create(&base, &raw));
  std::unique_ptr<dqa_sweep, decltype(&dqa_sweep_free)> s(raw, dqa_sweep_free);
  for (double tau : taus) check(dqa_sweep_add_tau(s.get(), tau));
  if (cfg.baseline && bath != DQA_BATH_NONE) check(dqa_sweep_add_bath(s.get(), DQA_BATH_NONE, 0.0, 0.0));
  if (bath == DQA_BATH_NONE) {
    check(dqa_sweep_add_bath(s.get(), bath, 0.0, 0.0));
  } else {
    for (double kappa : kappas)
      for (double eta : bath == DQA_BATH_MIXED ? etas : std::vector<double>{0.0})
        check(dqa_sweep_add_bath(s.get(), bath, kappa, eta));
  }

  const dqa_status status = dqa_sweep_run(s.get());
  if (status != DQA_OK && status != DQA_ERR_NUMERICAL) raise(status);
  const SweepTable table = collect_sweep(s.get());
  with_output(cfg.csv_path, [&](std::ostream& os) { write_sweep_csv(os, table); });
  if (!cfg.json_path.empty())
    with_output(cfg.json_path, [&](std::ostream& os) { os << sweep_summary(table, cfg).dump(2) << '\n'; });

  int failed = 0;
  for (const auto& e : table.errors) failed += e.empty() ? 0 : 1;
  if (failed > 0) {
    std::cerr << error_line(kExitNumerical, std::to_string(failed) + " sweep point(s) failed") << '\n';
    return kExitNumerical;
  }
  return kExitOk;
}

std::string describe(const dqa_problem& p) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << dqa_bath_name(p.bath) << " L=" << p.L << " kappa=" << p.kappa;
  if (p.bath == DQA_BATH_MIXED) os << " eta=" << p.eta;
  os << " tau=" << p.tau;
  return os.str();
}

int check_command(const Options& o) {
  const RunConfig& cfg = o.cfg;
  std::vector<dqa_problem> cases;
  if (o.bath_opt->count() > 0 || cfg.bath != "none" || o.L_opt->count() > 0) {
    dqa_problem p = cfg.problem();
    if (!cfg.L) p.L = cfg.bath == "dephasing" ? 5 : 4;
    cases.push_back(p);
  } else {
    for (size_t i = 0; i < dqa_default_case_count(); ++i) {
      dqa_problem p = cfg.problem();
      check(dqa_default_case(i, &p));
      cases.push_back(p);
    }
  }

  int mismatches = 0;
  int failures = 0;
  for (const auto& p : cases) {
    dqa_oracle_result r{};
    const dqa_status s = dqa_check_case(&p, cfg.tolerance, &r);
    if (s == DQA_ERR_CONFIG || s == DQA_ERR_INVALID_ARGUMENT) throw ConfigError(describe(p) + ": " + dqa_last_error());
    if (s == DQA_OK || s == DQA_ERR_ORACLE) {
      std::cout << (s == DQA_OK ? "PASS " : "FAIL ") << describe(p) << " solver=" << dqa_solver_name(r.solver)
                << " max_abs_diff=" << format_double(r.max_abs_diff) << '\n';
      mismatches += s == DQA_OK ? 0 : 1;
    } else {
      std::cout << "ERROR " << describe(p) << " " << dqa_last_error() << '\n';
      ++failures;
    }
  }
  std::cout << cases.size() - mismatches - failures << "/" << cases.size() << " cases within " << cfg.tolerance
            << '\n';
  std::cout.flush();
  if (mismatches > 0) {
    std::cerr << error_line(kExitOracle, std::to_string(mismatches) + " oracle mismatch(es)") << '\n';
    return kExitOracle;
  }
  if (failures > 0) {
    std::cerr << error_line(kExitNumerical, std::to_string(failures) + " case(s) failed to run") << '\n';
    return kExitNumerical;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Annealing of a transverse-field Ising chain coupled to a bath"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(dqa_version()));

  Options run_o, sweep_o, check_o;

  auto* run = app.add_subcommand("run", "single trajectory as CSV");
  add_common(run, run_o);
  run_o.overrides.add<double>(run, "--tau", run_o.cfg.tau, "annealing time");
  run_o.overrides.add<double>(run, "--kappa", run_o.cfg.kappa, "bath rate");
  run_o.overrides.add<double>(run, "--eta", run_o.cfg.eta, "pump/decay ratio for the mixed bath");
  run_o.overrides.add<int>(run, "--stride", run_o.cfg.stride, "sample every N steps");
  run_o.overrides.add<std::string>(run, "--csv", run_o.cfg.csv_path, "output path (default stdout)");

  auto* sweep = app.add_subcommand("sweep", "final excess energy over a tau grid");
  add_common(sweep, sweep_o);
  sweep_o.overrides.add<std::string>(sweep, "--tau-grid", sweep_o.cfg.tau_grid, "start:stop:count[:log|:lin] or list");
  sweep_o.overrides.add<double>(sweep, "--kappa", sweep_o.cfg.kappa, "bath rate");
  sweep_o.overrides.add<std::string>(sweep, "--kappa-grid", sweep_o.cfg.kappa_grid, "grid of bath rates");
  sweep_o.overrides.add<double>(sweep, "--eta", sweep_o.cfg.eta, "pump/decay ratio for the mixed bath");
  sweep_o.overrides.add<std::string>(sweep, "--eta-grid", sweep_o.cfg.eta_grid, "grid of pump/decay ratios");
  sweep_o.overrides.add_flag(sweep, "--baseline", sweep_o.cfg.baseline, "also sweep the closed chain");
  sweep_o.overrides.add<std::string>(sweep, "--csv", sweep_o.cfg.csv_path, "CSV path (default stdout)");
  sweep_o.overrides.add<std::string>(sweep, "--json", sweep_o.cfg.json_path, "fit summary path");
  sweep->add_option("--kz-window", sweep_o.kz_window, "lo,hi tau window of the closed-chain fit");

  auto* chk = app.add_subcommand("check", "fast solvers against the dense oracle");
  add_common(chk, check_o);
  check_o.overrides.add<double>(chk, "--tau", check_o.cfg.tau, "annealing time");
  check_o.overrides.add<double>(chk, "--kappa", check_o.cfg.kappa, "bath rate");
  check_o.overrides.add<double>(chk, "--eta", check_o.cfg.eta, "pump/decay ratio for the mixed bath");
  check_o.overrides.add<double>(chk, "--tolerance", check_o.cfg.tolerance, "max |d epsilon|");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << error_line(kExitConfig, e.what()) << '\n';
    return kExitConfig;
  }

  try {
    if (run->parsed()) {
      finish_config(run_o);
      return run_command(run_o.cfg);
    }
    if (sweep->parsed()) {
      finish_config(sweep_o);
      return sweep_command(sweep_o.cfg);
    }
    finish_config(check_o);
    return check_command(check_o);
  } catch (const std::exception& e) {
    const int code = exit_code_for(e);
    std::cerr << error_line(code, e.what()) << '\n';
    return code;
  }
}
