#include "dqa/unitary_bdg.hpp"

#include <cmath>
#include <sstream>

#include "dqa/errors.hpp"
#include "dqa/parallel.hpp"
#include "stepping.hpp"

namespace dqa {

namespace {

using cd = std::complex<double>;
constexpr double kNormDriftLimit = 1e-6;

// Integrates one mode and calls on_sample(t, state) at sample steps.
template <class OnSample>
double integrate_mode(BdgModeState state, const Schedule& schedule, int stride, OnSample&& on_sample) {
  const double c = std::cos(state.k);
  const double s = std::sin(state.k);
  const double norm0 = state.norm2();
  const cd i{0.0, 1.0};
  double max_drift = 0.0;

  Eigen::Vector2cd y(state.u, state.v);
  // The equations are integrated with h shifted by +lambda(t) * 1, lambda the
  // instantaneous gap half-width, which only changes the global phase. The
  // dominant ground component then sits at zero frequency; otherwise RK4's
  // amplitude damping of a fast phase rotation biases the energy noticeably at
  // dt = 1e-2 and large Gamma_in.
  auto rhs = [&](double t, const Eigen::Vector2cd& a, Eigen::Vector2cd& da) {
    const double d = schedule.gamma(t) + c;
    const double lambda = 2.0 * std::sqrt(d * d + s * s);
    da(0) = i * (2.0 * d * a(0) - 2.0 * s * a(1)) - i * lambda * a(0);
    da(1) = -i * (2.0 * d * a(1) + 2.0 * s * a(0)) - i * lambda * a(1);
  };
  detail::rk4_drive(schedule, stride, y, rhs, [&](std::int64_t, double t, const Eigen::Vector2cd& a) {
    state.u = a(0);
    state.v = a(1);
    const double drift = std::abs(state.norm2() - norm0);
    max_drift = std::max(max_drift, drift);
    if (drift > kNormDriftLimit) {
      std::ostringstream os;
      os << "BdG norm drift " << drift << " at t=" << t << " for k=" << state.k
         << "; reduce dt (currently " << schedule.dt << ")";
      throw NumericalError(os.str());
    }
    on_sample(t, state);
  });
  return max_drift;
}

}  // namespace

Eigen::Vector4cd BdgModeState::pair_vector() const {
  Eigen::Vector4cd psi = Eigen::Vector4cd::Zero();
  psi(0) = v;
  psi(3) = u;
  return psi;
}

BdgModeState init_mode_ground(double k, double gamma_in) {
  if (!(gamma_in > 1.0)) throw ConfigError("initial field must be in the paramagnetic phase (> 1)");
  const double d = gamma_in + std::cos(k);
  const double s = std::sin(k);
  Eigen::Matrix2d h;
  h << -2.0 * d, 2.0 * s, 2.0 * s, 2.0 * d;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(h);
  Eigen::Vector2d g = es.eigenvectors().col(0);
  if (g(0) < 0.0) g = -g;
  return {k, cd{g(0), 0.0}, cd{g(1), 0.0}};
}

double mode_energy(const BdgModeState& s, double gamma) {
  const Eigen::Vector4cd psi = s.pair_vector();
  const Eigen::Matrix4cd h = hk_matrix(s.k, gamma).cast<cd>();
  return (psi.adjoint() * h * psi)(0).real();
}

double excitation_probability(const BdgModeState& s, double gamma) {
  const double d = gamma + std::cos(s.k);
  const double sn = std::sin(s.k);
  Eigen::Matrix2d h;
  h << -2.0 * d, 2.0 * sn, 2.0 * sn, 2.0 * d;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(h);
  const Eigen::Vector2d e = es.eigenvectors().col(1);
  return std::norm(e(0) * s.u + e(1) * s.v) / s.norm2();
}

BdgTrajectory evolve_bdg(const BdgModeState& state, const Schedule& schedule, int stride) {
  BdgTrajectory out;
  out.max_norm_drift = integrate_mode(state, schedule, stride, [&](double t, const BdgModeState& s) {
    out.t.push_back(t);
    out.states.push_back(s);
  });
  return out;
}

double unitary_excess(const std::vector<BdgModeState>& modes, double gamma, const ChainSpec& chain) {
  const auto ks = mode_grid(chain);
  if (ks.size() != modes.size())
    throw ConfigError("mode set does not match the chain's mode grid");
  double energy = 0.0;
  for (std::size_t i = 0; i < modes.size(); ++i) {
    if (std::abs(modes[i].k - ks[i]) > 1e-12)
      throw ConfigError("mode set does not match the chain's mode grid");
    energy += mode_energy(modes[i], gamma);
  }
  return excess_per_site(energy, ground_energy(chain, gamma), chain.L);
}

EnergyTrajectory evolve_chain_unitary(const ChainSpec& chain, const Schedule& schedule,
                                      const EvolveOptions& options) {
  const auto ks = mode_grid(chain);
  schedule.validate();
  const std::int64_t n = schedule.steps();
  const auto nsamples = static_cast<std::size_t>(detail::sample_count(n, options.stride));

  std::vector<std::vector<double>> energies(ks.size());
  std::vector<double> times;
  parallel_for(ks.size(), options.workers, [&](std::size_t m) {
    auto& e = energies[m];
    e.reserve(nsamples);
    std::vector<double> tm;
    integrate_mode(init_mode_ground(ks[m], schedule.gamma_in()), schedule, options.stride,
                   [&](double t, const BdgModeState& s) {
                     e.push_back(mode_energy(s, schedule.gamma(t)));
                     if (m == 0) tm.push_back(t);
                   });
    if (m == 0) times = std::move(tm);
  });

  EnergyTrajectory traj(times.size());
  for (std::size_t j = 0; j < times.size(); ++j) {
    auto& row = traj[j];
    row.t = times[j];
    row.gamma = schedule.gamma(times[j]);
    for (const auto& e : energies) row.energy += e[j];
    row.ground_energy = ground_energy(chain, row.gamma);
    row.epsilon = excess_per_site(row.energy, row.ground_energy, chain.L);
  }
  return traj;
}

}  // namespace dqa
