#include "dqa/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "dqa/dephasing_corr.hpp"
#include "dqa/errors.hpp"
#include "dqa/parallel.hpp"
#include "dqa/unitary_bdg.hpp"

namespace dqa {

namespace {

using cd = std::complex<double>;

void require_curve(const Curve& c, std::size_t min_points) {
  if (c.tau.size() != c.epsilon.size()) throw ConfigError("curve has mismatched tau and epsilon columns");
  if (c.tau.size() < min_points) {
    std::ostringstream os;
    os << "curve needs at least " << min_points << " points, got " << c.tau.size();
    throw ConfigError(os.str());
  }
  for (std::size_t i = 0; i < c.tau.size(); ++i) {
    if (!(c.tau[i] > 0.0) || !std::isfinite(c.epsilon[i])) throw ConfigError("curve values must be finite, tau > 0");
    if (i > 0 && !(c.tau[i] > c.tau[i - 1])) throw ConfigError("curve tau grid must be strictly increasing");
  }
}

// Vertex of the parabola through three points; falls back to the middle
// point when the parabola does not open the expected way.
std::pair<double, double> parabola_vertex(const double x[3], const double y[3], bool minimum) {
  const double denom = (x[0] - x[1]) * (x[0] - x[2]) * (x[1] - x[2]);
  const double a = (x[2] * (y[1] - y[0]) + x[1] * (y[0] - y[2]) + x[0] * (y[2] - y[1])) / denom;
  const double b = (x[2] * x[2] * (y[0] - y[1]) + x[1] * x[1] * (y[2] - y[0]) + x[0] * x[0] * (y[1] - y[2])) / denom;
  const double c = y[1] - a * x[1] * x[1] - b * x[1];
  if ((minimum && !(a > 0.0)) || (!minimum && !(a < 0.0))) return {x[1], y[1]};
  const double xv = std::clamp(-b / (2.0 * a), x[0], x[2]);
  return {xv, a * xv * xv + b * xv + c};
}

}  // namespace

// ---- solver dispatch -------------------------------------------------------

Solver solver_for(const BathSpec& bath, const ChainSpec& chain) {
  chain.validate();
  bath.validate();
  if (!bath_allowed_in(bath, chain.sector)) {
    std::ostringstream os;
    os << "bath '" << to_string(bath.kind) << "' cannot run on a " << to_string(chain.sector) << " chain (L="
       << chain.L << ")";
    throw ConfigError(os.str());
  }
  switch (bath.kind) {
    case BathKind::None:
      return chain.sector == Sector::EvenAntiperiodic ? Solver::UnitaryBdg : Solver::DephasingCorrelators;
    case BathKind::Dephasing: return Solver::DephasingCorrelators;
    default: return Solver::ModeLiouville;
  }
}

EnergyTrajectory run_trajectory(const ChainSpec& chain, const Schedule& schedule, const BathSpec& bath,
                                const EvolveOptions& options) {
  switch (solver_for(bath, chain)) {
    case Solver::UnitaryBdg: return evolve_chain_unitary(chain, schedule, options);
    case Solver::ModeLiouville: return evolve_chain_modes(chain, schedule, bath, options);
    case Solver::DephasingCorrelators:
      return evolve_correlators(chain, schedule, bath.dephasing_rate(), options).energy;
    case Solver::DenseOracle: break;
  }
  throw Error(ErrorKind::Config, "no fast solver for this configuration");
}

double final_excess(const ChainSpec& chain, const Schedule& schedule, const BathSpec& bath, int workers) {
  return run_trajectory(chain, schedule, bath, {0, workers}).back().epsilon;
}

double epsilon_infinity(const BathSpec& bath, const ChainSpec& chain, double gamma) {
  switch (solver_for(bath, chain)) {
    case Solver::ModeLiouville: return adiabatic_limit_excess(bath, chain, gamma);
    case Solver::DephasingCorrelators: {
      if (bath.kind == BathKind::None) return 0.0;
      // Dephasing drives every field value towards the infinite-temperature
      // state F_0 = G_0 = 1/2, all other correlators zero.
      CorrelatorState s;
      s.L = chain.L;
      s.y = Eigen::VectorXcd::Zero(4 * chain.L);
      s.y(0) = 0.5;
      s.y(chain.L) = 0.5;
      return excess_per_site(energy_from_correlators(s, gamma, chain), ground_energy(chain, gamma), chain.L);
    }
    default: return 0.0;
  }
}

// ---- sweeps ---------------------------------------------------------------

std::vector<SweepPoint> run_sweep(const SweepSpec& spec) {
  if (spec.taus.empty()) throw ConfigError("sweep tau grid is empty");
  if (spec.baths.empty()) throw ConfigError("sweep bath grid is empty");
  spec.chain.validate();
  std::vector<SweepPoint> points;
  for (const auto& bath : spec.baths) {
    for (double tau : spec.taus) {
      SweepPoint p;
      p.bath = bath;
      p.L = spec.chain.L;
      p.tau = tau;
      p.dt = spec.schedule.dt;
      points.push_back(p);
    }
  }
  parallel_for(points.size(), spec.workers, [&](std::size_t i) {
    auto& p = points[i];
    try {
      p.solver = solver_for(p.bath, spec.chain);
      Schedule s = spec.schedule;
      s.tau = p.tau;
      p.epsilon_final = final_excess(spec.chain, s, p.bath, 1);
    } catch (const std::exception& e) {
      p.error = e.what();
      if (p.error.empty()) p.error = "unknown failure";
    }
  });
  return points;
}

std::map<CurveKey, Curve> group_curves(const std::vector<SweepPoint>& points) {
  std::map<CurveKey, std::vector<std::pair<double, double>>> raw;
  for (const auto& p : points) {
    if (!p.ok()) continue;
    raw[{p.bath.kind, p.bath.kappa, p.bath.eta}].emplace_back(p.tau, p.epsilon_final);
  }
  std::map<CurveKey, Curve> out;
  for (auto& [key, pts] : raw) {
    std::sort(pts.begin(), pts.end());
    Curve& c = out[key];
    for (const auto& [t, e] : pts) {
      c.tau.push_back(t);
      c.epsilon.push_back(e);
    }
  }
  return out;
}

// ---- curve analysis -------------------------------------------------------

PowerLawFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y, double lo, double hi) {
  if (x.size() != y.size()) throw ConfigError("power-law fit needs equally long x and y");
  std::vector<double> lx, ly;
  PowerLawFit fit;
  fit.lo = std::numeric_limits<double>::infinity();
  fit.hi = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] >= lo && x[i] <= hi)) continue;
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw ConfigError("power-law fit needs positive values");
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(y[i]));
    fit.lo = std::min(fit.lo, x[i]);
    fit.hi = std::max(fit.hi, x[i]);
  }
  if (lx.size() < 4) throw ConfigError("power-law fit needs at least 4 points in the window");
  const LinearFit lin = fit_linear(lx, ly);
  fit.exponent = lin.slope;
  fit.prefactor = std::exp(lin.intercept);
  fit.n = lin.n;
  double ss = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    const double r = ly[i] - (lin.intercept + lin.slope * lx[i]);
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / static_cast<double>(lx.size()));
  return fit;
}

LinearFit fit_linear(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw ConfigError("linear fit needs at least 2 paired points");
  const auto n = static_cast<Eigen::Index>(x.size());
  Eigen::MatrixXd a(n, 2);
  Eigen::VectorXd b(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    a(i, 0) = 1.0;
    a(i, 1) = x[static_cast<std::size_t>(i)];
    b(i) = y[static_cast<std::size_t>(i)];
  }
  const Eigen::Vector2d coef = a.colPivHouseholderQr().solve(b);
  LinearFit fit;
  fit.intercept = coef(0);
  fit.slope = coef(1);
  fit.n = static_cast<int>(n);
  const double mean = b.mean();
  const double ss_tot = (b.array() - mean).square().sum();
  const double ss_res = (b - a * coef).squaredNorm();
  fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

Optimum find_optimum(const Curve& curve) {
  require_curve(curve, 5);
  const auto& e = curve.epsilon;
  for (double v : e)
    if (!(v > 0.0)) throw ConfigError("optimum search needs positive epsilon");
  const auto i = static_cast<std::size_t>(std::min_element(e.begin(), e.end()) - e.begin());
  if (i == 0 || i + 1 == e.size()) {
    std::ostringstream os;
    os << "no interior optimum: minimum at the grid " << (i == 0 ? "start" : "end") << " (tau=" << curve.tau[i]
       << ")";
    throw NumericalError(os.str());
  }
  const double x[3] = {std::log(curve.tau[i - 1]), std::log(curve.tau[i]), std::log(curve.tau[i + 1])};
  const double y[3] = {std::log(e[i - 1]), std::log(e[i]), std::log(e[i + 1])};
  const auto [xv, yv] = parabola_vertex(x, y, true);
  return {std::exp(xv), std::exp(yv), i};
}

std::optional<Overshoot> find_overshoot(const Curve& curve, double epsilon_inf, double tolerance) {
  require_curve(curve, 3);
  const auto& e = curve.epsilon;
  const auto imin = static_cast<std::size_t>(std::min_element(e.begin(), e.end()) - e.begin());
  if (imin + 2 >= e.size()) return std::nullopt;
  const auto j = static_cast<std::size_t>(std::max_element(e.begin() + static_cast<std::ptrdiff_t>(imin) + 1, e.end()) -
                                          e.begin());
  if (j + 1 == e.size()) return std::nullopt;  // still rising at the grid end
  if (!(e[j] > epsilon_inf + tolerance)) return std::nullopt;
  const double x[3] = {std::log(curve.tau[j - 1]), std::log(curve.tau[j]), std::log(curve.tau[j + 1])};
  const double y[3] = {e[j - 1], e[j], e[j + 1]};
  const auto [xv, yv] = parabola_vertex(x, y, false);
  return Overshoot{std::exp(xv), yv, j};
}

double kz_defect_prefactor() { return 1.0 / (2.0 * std::numbers::pi * std::numbers::sqrt2); }

AnsatzPrediction ansatz_predictions(double kappa, double tau) {
  if (!(kappa >= 0.0) || !std::isfinite(kappa)) throw ConfigError("kappa must be finite and >= 0");
  if (!(tau > 0.0) || !std::isfinite(tau)) throw ConfigError("tau must be finite and > 0");
  const double a = kz_defect_prefactor();
  AnsatzPrediction p;
  p.n_kz = a / std::sqrt(tau);
  p.n_inc = 0.5 * kappa * tau;
  p.n_total = p.n_kz + p.n_inc;
  if (kappa > 0.0) {
    const double a23 = std::cbrt(a * a);
    p.tau_opt = a23 * std::pow(kappa, -2.0 / 3.0);
    p.n_opt = 1.5 * a23 * std::cbrt(kappa);
  } else {
    p.tau_opt = std::numeric_limits<double>::infinity();
    p.n_opt = 0.0;
  }
  p.epsilon_opt = 2.0 * p.n_opt;
  return p;
}

double scaling_function(double gamma, double k) {
  const double s = std::sin(k);
  if (std::abs(s) < 1e-12) throw ConfigError("scaling function is singular at sin k = 0");
  const double c = std::cos(k);
  const double r = (gamma - c + std::sqrt(1.0 + gamma * gamma - 2.0 * gamma * c)) / s;
  return 1.0 / (1.0 + r * r);
}

double incoherent_defect_density(double kappa, double tau, const ChainSpec& chain, double gamma_in) {
  double sum = 0.0;
  for (double k : mode_grid(chain)) {
    auto f = [k](double g) { return scaling_function(g, k); };
    sum += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, gamma_in, 15, 1e-12);
  }
  // +k and -k contribute equally.
  return kappa * tau * 2.0 * sum / chain.L;
}

DeltaCurve delta_collapse(const Curve& curve, double kappa, const Curve& baseline) {
  if (baseline.tau.empty()) throw ConfigError("delta collapse needs the kappa = 0 baseline");
  if (curve.tau.size() != curve.epsilon.size() || baseline.tau.size() != baseline.epsilon.size())
    throw ConfigError("curve has mismatched tau and epsilon columns");
  DeltaCurve out;
  out.kappa = kappa;
  for (std::size_t i = 0; i < curve.tau.size(); ++i) {
    const auto it = std::find_if(baseline.tau.begin(), baseline.tau.end(),
                                 [&](double t) { return std::abs(t - curve.tau[i]) <= 1e-12 * t; });
    if (it == baseline.tau.end()) {
      std::ostringstream os;
      os << "baseline has no point at tau=" << curve.tau[i];
      throw ConfigError(os.str());
    }
    const double d = curve.epsilon[i] - baseline.epsilon[static_cast<std::size_t>(it - baseline.tau.begin())];
    out.tau.push_back(curve.tau[i]);
    out.delta.push_back(d);
    out.delta_over_kappa.push_back(kappa > 0.0 ? d / kappa : 0.0);
  }
  return out;
}

namespace {

Eigen::Matrix4cd psd_sqrt(const Eigen::Matrix4cd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(0.5 * (m + m.adjoint()));
  const Eigen::Vector4d ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * ev.cast<cd>().asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

double uhlmann_fidelity(const Eigen::Matrix4cd& rho, const Eigen::Matrix4cd& sigma) {
  const Eigen::Matrix4cd sr = psd_sqrt(rho);
  const Eigen::Matrix4cd m = sr * sigma * sr;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
  const double tr = es.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
  return tr * tr;
}

Eigen::Matrix4cd gibbs_state(const Eigen::Matrix4d& h, double beta) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(h);
  const Eigen::Vector4d e = es.eigenvalues();
  Eigen::Vector4d w = (-beta * (e.array() - e.minCoeff())).exp();
  w /= w.sum();
  const Eigen::Matrix4d g = es.eigenvectors() * w.asDiagonal() * es.eigenvectors().transpose();
  return g.cast<cd>();
}

ThermalFit thermal_mode_fit(const Eigen::Matrix4cd& rho, const Eigen::Matrix4d& h, double beta_lo, double beta_hi) {
  if (!(beta_lo < beta_hi) || !std::isfinite(beta_lo) || !std::isfinite(beta_hi))
    throw ConfigError("thermal fit needs a finite range beta_lo < beta_hi");
  constexpr int kScan = 500;
  auto fid = [&](double beta) { return uhlmann_fidelity(rho, gibbs_state(h, beta)); };
  auto node = [&](int i) { return beta_lo + (beta_hi - beta_lo) * i / kScan; };
  int best = 0;
  double best_f = -1.0;
  for (int i = 0; i <= kScan; ++i) {
    const double f = fid(node(i));
    if (f > best_f) {
      best_f = f;
      best = i;
    }
  }
  double a = node(std::max(0, best - 1));
  double b = node(std::min(kScan, best + 1));
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
  double fc = fid(c), fd = fid(d);
  while (b - a > 1e-6) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = fid(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = fid(d);
    }
  }
  ThermalFit out;
  out.beta = 0.5 * (a + b);
  out.fidelity = fid(out.beta);
  for (double edge : {beta_lo, beta_hi}) {
    if (const double fe = fid(edge); fe >= out.fidelity) {
      out.beta = edge;
      out.fidelity = fe;
    }
  }
  out.at_lower_edge = out.beta < beta_lo + 1e-5;
  out.at_upper_edge = out.beta > beta_hi - 1e-5;
  return out;
}

// ---- oracle check ---------------------------------------------------------

std::vector<OracleCase> default_oracle_cases() {
  std::vector<OracleCase> cases;
  const ChainSpec even{4, Sector::EvenAntiperiodic};
  const ChainSpec odd{5, Sector::OddPeriodic};
  for (double kappa : {0.05, 0.2}) {
    for (double tau : {1.0, 5.0}) {
      cases.push_back({even, BathSpec::decay(kappa), tau});
      cases.push_back({even, BathSpec::pump(kappa), tau});
      cases.push_back({even, BathSpec::pump_decay(kappa, 0.5), tau});
      cases.push_back({odd, BathSpec::dephasing(kappa), tau});
    }
  }
  for (double tau : {1.0, 5.0}) {
    cases.push_back({even, BathSpec::none(), tau});
    cases.push_back({odd, BathSpec::none(), tau});
  }
  return cases;
}

OracleResult check_case(const OracleCase& c, const Schedule& base, double tolerance, const HamiltonianBuilder& builder) {
  OracleResult r;
  r.c = c;
  r.tolerance = tolerance;
  try {
    Schedule s = base;
    s.tau = c.tau;
    r.fast = solver_for(c.bath, c.chain);
    const EnergyTrajectory fast = run_trajectory(c.chain, s, c.bath, {1, 1});
    const DenseRun dense = builder ? dense_evolve_excess(c.chain, s, c.bath, 1, builder)
                                   : dense_evolve_excess(c.chain, s, c.bath, 1);
    if (fast.size() != dense.energy.size()) throw Error(ErrorKind::Numerical, "sample grids differ");
    for (std::size_t i = 0; i < fast.size(); ++i)
      r.max_abs_diff = std::max(r.max_abs_diff, std::abs(fast[i].epsilon - dense.energy[i].epsilon));
    if (!std::isfinite(r.max_abs_diff)) r.max_abs_diff = std::numeric_limits<double>::infinity();
    r.passed = r.max_abs_diff < tolerance;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    r.error = e.what();
    r.passed = false;
  }
  return r;
}

}  // namespace dqa
