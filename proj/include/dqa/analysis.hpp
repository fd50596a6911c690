#pragma once

// Sweeps over (tau, bath), curve post-processing and the independent-process
// ansatz for defect production.

#include <compare>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dqa/dense_oracle.hpp"
#include "dqa/lattice.hpp"
#include "dqa/mode_liouville.hpp"
#include "dqa/observables.hpp"

namespace dqa {

// ---- solver dispatch -------------------------------------------------------

/// Solver used for a bath on a chain: unitary BdG (no bath, even chain),
/// correlators (dephasing, or no bath on an odd chain), modes otherwise.
/// Throws ConfigError for a bath/sector mismatch.
Solver solver_for(const BathSpec& bath, const ChainSpec& chain);

EnergyTrajectory run_trajectory(const ChainSpec& chain, const Schedule& schedule, const BathSpec& bath,
                                const EvolveOptions& options = {});

/// Excess energy per site at t = 0.
double final_excess(const ChainSpec& chain, const Schedule& schedule, const BathSpec& bath, int workers = 1);

/// Infinitely slow limit eps(inf) at the given field: mode steady states for
/// pump/decay/mixed, the infinite-temperature state for dephasing.
double epsilon_infinity(const BathSpec& bath, const ChainSpec& chain, double gamma = 0.0);

// ---- sweeps ---------------------------------------------------------------

struct SweepPoint {
  BathSpec bath;
  int L = 0;
  double tau = 0.0;
  double dt = 0.0;
  Solver solver = Solver::UnitaryBdg;
  double epsilon_final = std::numeric_limits<double>::quiet_NaN();
  std::string error;  // empty on success

  bool ok() const { return error.empty(); }
};

struct SweepSpec {
  ChainSpec chain;
  Schedule schedule;  // tau is overridden per point
  std::vector<double> taus;
  std::vector<BathSpec> baths;
  int workers = 1;
};

/// One point per (bath, tau), bath-major. Failures are recorded per point.
std::vector<SweepPoint> run_sweep(const SweepSpec& spec);

struct Curve {
  std::vector<double> tau;
  std::vector<double> epsilon;
};

struct CurveKey {
  BathKind kind = BathKind::None;
  double kappa = 0.0;
  double eta = 0.0;
  auto operator<=>(const CurveKey&) const = default;
};

/// Successful points grouped by bath, sorted by tau.
std::map<CurveKey, Curve> group_curves(const std::vector<SweepPoint>& points);

// ---- curve analysis -------------------------------------------------------

struct PowerLawFit {
  double exponent = 0.0;
  double prefactor = 0.0;
  double residual = 0.0;  // RMS in log-log
  double lo = 0.0, hi = 0.0;  // window actually used
  int n = 0;
};

/// Least squares of log y on log x over points with lo <= x <= hi. Needs at
/// least 4 such points, all positive.
PowerLawFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y,
                          double lo = 0.0, double hi = std::numeric_limits<double>::infinity());

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  int n = 0;
};

LinearFit fit_linear(const std::vector<double>& x, const std::vector<double>& y);

struct Optimum {
  double tau = 0.0;
  double epsilon = 0.0;
  std::size_t index = 0;  // grid minimum
};

/// Grid minimum refined by a parabola in (log tau, log eps). Needs >= 5
/// points; a minimum on the grid boundary throws NumericalError.
Optimum find_optimum(const Curve& curve);

struct Overshoot {
  double tau = 0.0;
  double epsilon = 0.0;
  std::size_t index = 0;
};

/// Interior maximum after the curve minimum exceeding epsilon_inf + tolerance.
std::optional<Overshoot> find_overshoot(const Curve& curve, double epsilon_inf, double tolerance = 1e-3);

struct AnsatzPrediction {
  double n_kz = 0.0;
  double n_inc = 0.0;
  double n_total = 0.0;
  double tau_opt = 0.0;
  double n_opt = 0.0;
  double epsilon_opt = 0.0;
};

/// KZ prefactor of the defect density, 1 / (2 pi sqrt 2).
double kz_defect_prefactor();

AnsatzPrediction ansatz_predictions(double kappa, double tau);

/// Per-mode rate of incoherent defect production under pump at field gamma.
/// Undefined at sin k = 0.
double scaling_function(double gamma, double k);

/// kappa tau (1/L) sum over k = +-mode_grid of the integral of
/// scaling_function over [0, gamma_in]; tends to kappa tau / 2 for large L
/// and gamma_in.
double incoherent_defect_density(double kappa, double tau, const ChainSpec& chain,
                                 double gamma_in = std::numeric_limits<double>::infinity());

struct DeltaCurve {
  double kappa = 0.0;
  std::vector<double> tau;
  std::vector<double> delta;            // eps(kappa, tau) - eps(0, tau)
  std::vector<double> delta_over_kappa; // zero for kappa = 0
};

/// Needs the kappa = 0 baseline on the same tau grid.
DeltaCurve delta_collapse(const Curve& curve, double kappa, const Curve& baseline);

struct ThermalFit {
  double beta = 0.0;
  double fidelity = 0.0;
  bool at_lower_edge = false;  // at beta_lo; infinite temperature for the default range
  bool at_upper_edge = false;  // at beta_hi; effectively zero temperature
};

/// (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2.
double uhlmann_fidelity(const Eigen::Matrix4cd& rho, const Eigen::Matrix4cd& sigma);

Eigen::Matrix4cd gibbs_state(const Eigen::Matrix4d& h, double beta);

/// Maximizes the fidelity of rho with exp(-beta H)/Z over beta in
/// [beta_lo, beta_hi]: coarse scan, then golden section to 1e-6 in beta. A
/// negative beta_lo admits population inversion relative to H.
ThermalFit thermal_mode_fit(const Eigen::Matrix4cd& rho, const Eigen::Matrix4d& h, double beta_lo = 0.0,
                            double beta_hi = 50.0);

// ---- oracle check ---------------------------------------------------------

struct OracleCase {
  ChainSpec chain;
  BathSpec bath;
  double tau = 1.0;
};

struct OracleResult {
  OracleCase c;
  Solver fast = Solver::UnitaryBdg;
  double max_abs_diff = 0.0;
  double tolerance = 1e-6;
  bool passed = false;
  std::string error;
};

/// {decay, pump, mixed eta=0.5} x L=4 and dephasing x L=5 for kappa in
/// {0.05, 0.2} and tau in {1, 5}, plus kappa = 0 on both chains.
std::vector<OracleCase> default_oracle_cases();

/// Compares eps(t) of the fast solver and the dense oracle on every
/// integrator step. `builder` replaces the oracle's quadratic form when set.
OracleResult check_case(const OracleCase& c, const Schedule& base, double tolerance = 1e-6,
                        const HamiltonianBuilder& builder = {});

}  // namespace dqa
