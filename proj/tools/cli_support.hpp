#pragma once

// Configuration, grids and output formatting for the dqa command line. Only
// the C interface of the library is used here.

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "dqa/dqa.h"

namespace dqa_cli {

enum ExitCode { kExitOk = 0, kExitConfig = 1, kExitNumerical = 2, kExitOracle = 3 };

/// Thrown for invalid configuration; maps to exit code 1.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// "start:stop:count[:log|:lin]", a comma list, or a single number.
std::vector<double> parse_grid(std::string_view spec);

struct RunConfig {
  std::optional<int> L;  // default: 501 for dephasing, 1000 otherwise
  std::string sector = "auto";
  double tau = 10.0;
  std::string tau_grid;
  double dt = 1e-2;
  double t_in_factor = 5.0;
  std::string bath = "none";
  double kappa = 0.0;
  std::string kappa_grid;
  double eta = 0.0;
  std::string eta_grid;
  bool baseline = false;  // sweep: add the kappa = 0 curve
  int stride = 100;
  int workers = 0;
  std::string csv_path;   // empty: stdout
  std::string json_path;  // sweep only; empty: no JSON
  double tolerance = 1e-6;
  double kz_lo = 10.0;
  double kz_hi = 1000.0;

  int resolved_L() const;
  int bath_code() const;
  int sector_code() const;
  dqa_problem problem() const;
};

/// Loads an INI-style file with sections [chain], [schedule], [bath],
/// [output], [run], [analysis]. Unknown keys are rejected.
void load_config_file(const std::string& path, RunConfig& cfg);

/// Shortest-round-trip-safe formatting with 17 significant digits, "." as
/// decimal separator regardless of locale.
std::string format_double(double v);

void write_trajectory_csv(std::ostream& os, const dqa_trajectory* t);

struct SweepTable {
  std::vector<dqa_sweep_point> points;
  std::vector<std::string> errors;  // parallel to points, empty on success
};

SweepTable collect_sweep(const dqa_sweep* s);

/// Header bath,L,kappa,eta,tau,epsilon_final,dt; an error column is added
/// only when some point failed.
void write_sweep_csv(std::ostream& os, const SweepTable& table);

/// Per-curve optimum, overshoot and ansatz values plus power-law fits across
/// curves.
nlohmann::ordered_json sweep_summary(const SweepTable& table, const RunConfig& cfg);

/// One-line machine readable error for stderr.
std::string error_line(int code, std::string_view message);

}  // namespace dqa_cli
