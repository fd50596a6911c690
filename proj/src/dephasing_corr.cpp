#include "dqa/dephasing_corr.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dqa/errors.hpp"
#include "stepping.hpp"

namespace dqa {

namespace {

using cd = std::complex<double>;
constexpr double kInvariantLimit = 1e-6;

void require_odd(const ChainSpec& chain) {
  chain.validate();
  if (chain.sector != Sector::OddPeriodic)
    throw ConfigError("correlator solver needs an odd periodic chain");
}

}  // namespace

CorrelatorState init_correlators(const ChainSpec& chain, double gamma_in) {
  require_odd(chain);
  const BogoliubovModes modes = bogoliubov_modes(build_ab(chain, gamma_in));
  if (modes.energies.minCoeff() < 1e-10)
    throw NumericalError("zero Bogoliubov mode at the initial field; move gamma_in away from the critical point");
  const int L = chain.L;
  // Offsets are read off the first row: X_l = X(0, l).
  const Eigen::RowVectorXd u0 = modes.U.row(0);
  const Eigen::RowVectorXd v0 = modes.V.row(0);
  CorrelatorState s;
  s.L = L;
  s.y.resize(4 * L);
  for (int l = 0; l < L; ++l) {
    s.y(l) = v0.dot(modes.V.row(l));
    s.y(L + l) = u0.dot(modes.U.row(l));
    s.y(2 * L + l) = v0.dot(modes.U.row(l));
    s.y(3 * L + l) = u0.dot(modes.V.row(l));
  }
  return s;
}

DephasingGenerator::DephasingGenerator(const ChainSpec& chain, double kappa) : L_(chain.L), kappa_(kappa) {
  require_odd(chain);
  if (!(kappa >= 0.0) || !std::isfinite(kappa)) throw ConfigError("kappa must be finite and >= 0");
}

void DephasingGenerator::apply(double gamma, const Eigen::VectorXcd& y, Eigen::VectorXcd& dy) const {
  const int L = L_;
  if (y.size() != 4 * L) throw ConfigError("correlator vector has the wrong size");
  dy.resize(4 * L);
  const cd* F = y.data();
  const cd* G = F + L;
  const cd* I = G + L;
  const cd* K = I + L;
  cd* dF = dy.data();
  cd* dG = dF + L;
  cd* dI = dG + L;
  cd* dK = dI + L;
  const cd two_i{0.0, 2.0};
  for (int l = 0; l < L; ++l) {
    const int lm = l == 0 ? L - 1 : l - 1;
    const int lp = l == L - 1 ? 0 : l + 1;
    const cd bi = 0.5 * (I[lm] - I[lp]);
    const cd bk = 0.5 * (K[lm] - K[lp]);
    const cd bf = 0.5 * (F[lm] - F[lp]);
    const cd bg = 0.5 * (G[lm] - G[lp]);
    const cd ai = -gamma * I[l] - 0.5 * (I[lm] + I[lp]);
    const cd ak = -gamma * K[l] - 0.5 * (K[lm] + K[lp]);
    const double p = l == 0 ? 0.0 : kappa_;
    const double q = l == 0 ? 2.0 * kappa_ : kappa_;
    dF[l] = -two_i * (bi + bk) - p * F[l];
    dG[l] = two_i * (bi + bk) - p * G[l];
    dI[l] = two_i * (bf - bg + 2.0 * ai) - q * I[l];
    dK[l] = two_i * (bf - bg - 2.0 * ak) - q * K[l];
  }
}

Eigen::MatrixXcd DephasingGenerator::dense(double gamma) const {
  const int n = 4 * L_;
  Eigen::MatrixXcd m(n, n);
  Eigen::VectorXcd e = Eigen::VectorXcd::Zero(n), col(n);
  for (int j = 0; j < n; ++j) {
    e(j) = 1.0;
    apply(gamma, e, col);
    m.col(j) = col;
    e(j) = 0.0;
  }
  return m;
}

Eigen::VectorXd DephasingGenerator::damping() const {
  Eigen::VectorXd d = Eigen::VectorXd::Constant(4 * L_, kappa_);
  d(0) = 0.0;
  d(L_) = 0.0;
  d(2 * L_) = 2.0 * kappa_;
  d(3 * L_) = 2.0 * kappa_;
  return d;
}

double energy_from_correlators(const CorrelatorState& s, double gamma, const ChainSpec& chain) {
  if (s.L != chain.L) throw ConfigError("correlator state size does not match the chain");
  const int L = s.L;
  const cd e = -static_cast<double>(L) * (s.y(1) - s.y(L + 1) - s.y(3 * L + 1) + s.y(2 * L + 1)) -
               2.0 * L * gamma * s.y(0);
  if (std::abs(e.imag()) > 1e-8 * L) {
    std::ostringstream os;
    os << "correlator energy has imaginary part " << e.imag();
    throw NumericalError(os.str());
  }
  return e.real();
}

double CorrelatorInvariants::max() const {
  return std::max({hermiticity, g_f_relation, k_i_relation, i0, f0_imag, f0_range});
}

CorrelatorInvariants correlator_invariants(const CorrelatorState& s) {
  const int L = s.L;
  CorrelatorInvariants inv;
  for (int l = 0; l < L; ++l) {
    const int ml = (L - l) % L;
    const cd f = s.y(l);
    inv.hermiticity = std::max(inv.hermiticity, std::abs(f - std::conj(s.y(ml))));
    inv.g_f_relation = std::max(inv.g_f_relation, std::abs(s.y(L + l) - (l == 0 ? 1.0 : 0.0) + std::conj(f)));
    inv.k_i_relation = std::max(inv.k_i_relation, std::abs(std::conj(s.y(3 * L + l)) - s.y(2 * L + ml)));
  }
  inv.i0 = std::abs(s.y(2 * L));
  inv.f0_imag = std::abs(s.y(0).imag());
  const double f0 = s.y(0).real();
  inv.f0_range = std::max({0.0, -f0, f0 - 1.0});
  return inv;
}

namespace {

void fold_worst(CorrelatorInvariants& w, const CorrelatorInvariants& v) {
  w.hermiticity = std::max(w.hermiticity, v.hermiticity);
  w.g_f_relation = std::max(w.g_f_relation, v.g_f_relation);
  w.k_i_relation = std::max(w.k_i_relation, v.k_i_relation);
  w.i0 = std::max(w.i0, v.i0);
  w.f0_imag = std::max(w.f0_imag, v.f0_imag);
  w.f0_range = std::max(w.f0_range, v.f0_range);
}

}  // namespace

CorrelatorRun evolve_correlators(const ChainSpec& chain, const Schedule& schedule, double kappa,
                                 const EvolveOptions& options) {
  const DephasingGenerator gen(chain, kappa);
  schedule.validate();
  CorrelatorRun run;
  CorrelatorState state = init_correlators(chain, schedule.gamma_in());
  run.energy.reserve(static_cast<std::size_t>(detail::sample_count(schedule.steps(), options.stride)));

  auto rhs = [&](double t, const Eigen::VectorXcd& y, Eigen::VectorXcd& dy) { gen.apply(schedule.gamma(t), y, dy); };
  detail::rk4_drive(schedule, options.stride, state.y, rhs, [&](std::int64_t, double t, const Eigen::VectorXcd&) {
    const CorrelatorInvariants inv = correlator_invariants(state);
    fold_worst(run.worst, inv);
    if (inv.max() > kInvariantLimit) {
      std::ostringstream os;
      os << "correlator invariant violated by " << inv.max() << " at t=" << t << " (hermiticity "
         << inv.hermiticity << ", G-F " << inv.g_f_relation << ", K-I " << inv.k_i_relation << ", I0 " << inv.i0
         << ", F0 range " << inv.f0_range << "); reduce dt (currently " << schedule.dt << ")";
      throw NumericalError(os.str());
    }
    EnergySample row;
    row.t = t;
    row.gamma = schedule.gamma(t);
    row.energy = energy_from_correlators(state, row.gamma, chain);
    row.ground_energy = ground_energy(chain, row.gamma);
    row.epsilon = excess_per_site(row.energy, row.ground_energy, chain.L);
    run.energy.push_back(row);
  });
  run.final_state = std::move(state);
  return run;
}

}  // namespace dqa
