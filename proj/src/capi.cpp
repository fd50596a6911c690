#include "dqa/dqa.h"

#include <cmath>
#include <exception>
#include <limits>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "dqa/analysis.hpp"
#include "dqa/errors.hpp"

struct dqa_trajectory {
  dqa::EnergyTrajectory rows;
  dqa::Solver solver;
};

struct dqa_sweep {
  dqa::SweepSpec spec;
  std::vector<dqa::SweepPoint> points;
};

namespace {

thread_local std::string g_last_error;

dqa_status fail(dqa_status s, std::string msg) {
  g_last_error = std::move(msg);
  return s;
}

// Runs fn, translating exceptions into status codes.
template <class Fn>
dqa_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const dqa::Error& e) {
    switch (e.kind()) {
      case dqa::ErrorKind::Config: return fail(DQA_ERR_CONFIG, e.what());
      case dqa::ErrorKind::Numerical: return fail(DQA_ERR_NUMERICAL, e.what());
      case dqa::ErrorKind::Oracle: return fail(DQA_ERR_ORACLE, e.what());
    }
    return fail(DQA_ERR_INTERNAL, e.what());
  } catch (const std::bad_alloc&) {
    return fail(DQA_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(DQA_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(DQA_ERR_INTERNAL, "unknown error");
  }
}

dqa::BathSpec bath_from(int kind, double kappa, double eta) {
  dqa::BathSpec b;
  switch (kind) {
    case DQA_BATH_NONE: b.kind = dqa::BathKind::None; break;
    case DQA_BATH_PUMP: b.kind = dqa::BathKind::Pump; break;
    case DQA_BATH_DECAY: b.kind = dqa::BathKind::Decay; break;
    case DQA_BATH_MIXED: b.kind = dqa::BathKind::PumpDecay; break;
    case DQA_BATH_DEPHASING: b.kind = dqa::BathKind::Dephasing; break;
    default: throw dqa::ConfigError("unknown bath kind " + std::to_string(kind));
  }
  b.kappa = b.kind == dqa::BathKind::None ? 0.0 : kappa;
  b.eta = b.kind == dqa::BathKind::PumpDecay ? eta : 0.0;
  b.validate();
  return b;
}

int bath_code(dqa::BathKind k) {
  switch (k) {
    case dqa::BathKind::None: return DQA_BATH_NONE;
    case dqa::BathKind::Pump: return DQA_BATH_PUMP;
    case dqa::BathKind::Decay: return DQA_BATH_DECAY;
    case dqa::BathKind::PumpDecay: return DQA_BATH_MIXED;
    case dqa::BathKind::Dephasing: return DQA_BATH_DEPHASING;
  }
  return -1;
}

int solver_code(dqa::Solver s) {
  switch (s) {
    case dqa::Solver::UnitaryBdg: return DQA_SOLVER_UNITARY_BDG;
    case dqa::Solver::ModeLiouville: return DQA_SOLVER_MODE_LIOUVILLE;
    case dqa::Solver::DephasingCorrelators: return DQA_SOLVER_DEPHASING_CORR;
    case dqa::Solver::DenseOracle: return DQA_SOLVER_DENSE_ORACLE;
  }
  return -1;
}

dqa::ChainSpec chain_from(const dqa_problem& p, int bath) {
  dqa::ChainSpec c;
  c.L = p.L;
  switch (p.sector) {
    case DQA_SECTOR_EVEN: c.sector = dqa::Sector::EvenAntiperiodic; break;
    case DQA_SECTOR_ODD: c.sector = dqa::Sector::OddPeriodic; break;
    case DQA_SECTOR_AUTO:
      c.sector = bath == DQA_BATH_DEPHASING ? dqa::Sector::OddPeriodic : dqa::Sector::EvenAntiperiodic;
      break;
    default: throw dqa::ConfigError("unknown sector " + std::to_string(p.sector));
  }
  c.validate();
  return c;
}

dqa::Schedule schedule_from(const dqa_problem& p) {
  dqa::Schedule s{p.tau, p.t_in_factor, p.dt};
  s.validate();
  return s;
}

dqa::Curve curve_from(const double* tau, const double* eps, size_t n) {
  dqa::Curve c;
  c.tau.assign(tau, tau + n);
  c.epsilon.assign(eps, eps + n);
  return c;
}

}  // namespace

extern "C" {

const char* dqa_version(void) { return "0.1.0"; }

const char* dqa_last_error(void) { return g_last_error.c_str(); }

const char* dqa_bath_name(int bath) {
  switch (bath) {
    case DQA_BATH_NONE: return "none";
    case DQA_BATH_PUMP: return "pump";
    case DQA_BATH_DECAY: return "decay";
    case DQA_BATH_MIXED: return "mixed";
    case DQA_BATH_DEPHASING: return "dephasing";
    default: return "unknown";
  }
}

const char* dqa_solver_name(int solver) {
  switch (solver) {
    case DQA_SOLVER_UNITARY_BDG: return "unitary_bdg";
    case DQA_SOLVER_MODE_LIOUVILLE: return "mode_liouville";
    case DQA_SOLVER_DEPHASING_CORR: return "dephasing_corr";
    case DQA_SOLVER_DENSE_ORACLE: return "dense_oracle";
    default: return "unknown";
  }
}

dqa_status dqa_parse_bath(const char* name, int* bath) {
  if (!name || !bath) return fail(DQA_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *bath = bath_code(dqa::parse_bath_kind(name));
    return DQA_OK;
  });
}

void dqa_problem_init(dqa_problem* p) {
  if (!p) return;
  p->L = 1000;
  p->sector = DQA_SECTOR_AUTO;
  p->bath = DQA_BATH_NONE;
  p->kappa = 0.0;
  p->eta = 0.0;
  p->tau = 10.0;
  p->dt = 1e-2;
  p->t_in_factor = 5.0;
  p->stride = 100;
  p->workers = 0;
}

dqa_status dqa_run(const dqa_problem* p, dqa_trajectory** out) {
  if (!p || !out) return fail(DQA_ERR_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    const dqa::BathSpec bath = bath_from(p->bath, p->kappa, p->eta);
    const dqa::ChainSpec chain = chain_from(*p, p->bath);
    const dqa::Schedule schedule = schedule_from(*p);
    auto t = std::make_unique<dqa_trajectory>();
    t->solver = dqa::solver_for(bath, chain);
    t->rows = dqa::run_trajectory(chain, schedule, bath, {p->stride, p->workers});
    *out = t.release();
    return DQA_OK;
  });
}

size_t dqa_trajectory_length(const dqa_trajectory* t) { return t ? t->rows.size() : 0; }

dqa_status dqa_trajectory_sample(const dqa_trajectory* t, size_t i, dqa_sample* out) {
  if (!t || !out) return fail(DQA_ERR_INVALID_ARGUMENT, "null argument");
  if (i >= t->rows.size()) return fail(DQA_ERR_INVALID_ARGUMENT, "sample index out of range");
  const auto& r = t->rows[i];
  *out = {r.t, r.gamma, r.energy, r.ground_energy, r.epsilon};
  return DQA_OK;
}

int dqa_trajectory_solver(const dqa_trajectory* t) { return t ? solver_code(t->solver) : -1; }

void dqa_trajectory_free(dqa_trajectory* t) { delete t; }

dqa_status dqa_sweep_create(const dqa_problem* base, dqa_sweep** out) {
  if (!base || !out) return fail(DQA_ERR_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    auto s = std::make_unique<dqa_sweep>();
    s->spec.chain = chain_from(*base, base->bath);
    s->spec.schedule = {1.0, base->t_in_factor, base->dt};
    s->spec.schedule.validate();
    s->spec.workers = base->workers;
    *out = s.release();
    return DQA_OK;
  });
}

dqa_status dqa_sweep_add_tau(dqa_sweep* s, double tau) {
  if (!s) return fail(DQA_ERR_INVALID_ARGUMENT, "null argument");
  if (!(tau > 0.0) || !std::isfinite(tau)) return fail(DQA_ERR_CONFIG, "tau must be finite and > 0");
  s->spec.taus.push_back(tau);
  return DQA_OK;
}

dqa_status dqa_sweep_add_bath(dqa_sweep* s, int bath, double kappa, double eta) {
  if (!s) return fail(DQA_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    s->spec.baths.push_back(bath_from(bath, kappa, eta));
    return DQA_OK;
  });
}

dqa_status dqa_sweep_run(dqa_sweep* s) {
  if (!s) return fail(DQA_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    s->points = dqa::run_sweep(s->spec);
    for (const auto& p : s->points)
      if (!p.ok()) return fail(DQA_ERR_NUMERICAL, "sweep point failed: " + p.error);
    return DQA_OK;
  });
}

size_t dqa_sweep_size(const dqa_sweep* s) { return s ? s->points.size() : 0; }

dqa_status dqa_sweep_point_get(const dqa_sweep* s, size_t i, dqa_sweep_point* out) {
  if (!s || !out) return fail(DQA_ERR_INVALID_ARGUMENT, "null argument");
  if (i >= s->points.size()) return fail(DQA_ERR_INVALID_ARGUMENT, "point index out of range");
  const auto& p = s->points[i];
  out->bath = bath_code(p.bath.kind);
  out->kappa = p.bath.kappa;
  out->eta = p.bath.eta;
  out->L = p.L;
  out->tau = p.tau;
  out->dt = p.dt;
  out->solver = solver_code(p.solver);
  out->epsilon_final = p.ok() ? p.epsilon_final : std::numeric_limits<double>::quiet_NaN();
  out->status = p.ok() ? DQA_OK : DQA_ERR_NUMERICAL;
  return DQA_OK;
}

const char* dqa_sweep_point_error(const dqa_sweep* s, size_t i) {
  if (!s || i >= s->points.size()) return "";
  return s->points[i].error.c_str();
}

void dqa_sweep_free(dqa_sweep* s) { delete s; }

dqa_status dqa_fit_power_law(const double* x, const double* y, size_t n, double lo, double hi, dqa_power_law* out) {
  if (!x || !y || !out) return fail(DQA_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const auto f = dqa::fit_power_law({x, x + n}, {y, y + n}, lo, hi);
    *out = {f.exponent, f.prefactor, f.residual, f.lo, f.hi, f.n};
    return DQA_OK;
  });
}

dqa_status dqa_find_optimum(const double* tau, const double* eps, size_t n, dqa_curve_point* out) {
  if (!tau || !eps || !out) return fail(DQA_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const auto o = dqa::find_optimum(curve_from(tau, eps, n));
    *out = {o.tau, o.epsilon};
    return DQA_OK;
  });
}

dqa_status dqa_find_overshoot(const double* tau, const double* eps, size_t n, double epsilon_inf, double tolerance,
                              int* found, dqa_curve_point* out) {
  if (!tau || !eps || !found || !out) return fail(DQA_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const auto o = dqa::find_overshoot(curve_from(tau, eps, n), epsilon_inf, tolerance);
    *found = o.has_value() ? 1 : 0;
    if (o) *out = {o->tau, o->epsilon};
    return DQA_OK;
  });
}

dqa_status dqa_epsilon_infinity(const dqa_problem* p, double gamma, double* out) {
  if (!p || !out) return fail(DQA_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = dqa::epsilon_infinity(bath_from(p->bath, p->kappa, p->eta), chain_from(*p, p->bath), gamma);
    return DQA_OK;
  });
}

dqa_status dqa_ansatz(double kappa, double tau, dqa_ansatz_prediction* out) {
  if (!out) return fail(DQA_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const auto a = dqa::ansatz_predictions(kappa, tau);
    *out = {a.n_kz, a.n_inc, a.n_total, a.tau_opt, a.n_opt, a.epsilon_opt};
    return DQA_OK;
  });
}

dqa_status dqa_check_case(const dqa_problem* p, double tolerance, dqa_oracle_result* out) {
  if (!p || !out) return fail(DQA_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    dqa::OracleCase c{chain_from(*p, p->bath), bath_from(p->bath, p->kappa, p->eta), p->tau};
    const dqa::Schedule base = schedule_from(*p);
    const auto r = dqa::check_case(c, base, tolerance);
    *out = {r.max_abs_diff, r.tolerance, r.passed ? 1 : 0, solver_code(r.fast)};
    if (!r.error.empty()) throw dqa::NumericalError(r.error);
    if (!r.passed) {
      return fail(DQA_ERR_ORACLE, "max |eps_fast - eps_dense| = " + std::to_string(r.max_abs_diff) +
                                      " exceeds " + std::to_string(tolerance));
    }
    return DQA_OK;
  });
}

size_t dqa_default_case_count(void) { return dqa::default_oracle_cases().size(); }

dqa_status dqa_default_case(size_t i, dqa_problem* p) {
  if (!p) return fail(DQA_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const auto cases = dqa::default_oracle_cases();
    if (i >= cases.size()) return fail(DQA_ERR_INVALID_ARGUMENT, "case index out of range");
    const auto& c = cases[i];
    p->L = c.chain.L;
    p->sector = c.chain.sector == dqa::Sector::OddPeriodic ? DQA_SECTOR_ODD : DQA_SECTOR_EVEN;
    p->bath = bath_code(c.bath.kind);
    p->kappa = c.bath.kappa;
    p->eta = c.bath.eta;
    p->tau = c.tau;
    return DQA_OK;
  });
}

}  // extern "C"
