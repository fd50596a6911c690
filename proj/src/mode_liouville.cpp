#include "dqa/mode_liouville.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/SVD>

#include "dqa/errors.hpp"
#include "dqa/parallel.hpp"
#include "stepping.hpp"

namespace dqa {

namespace {

using cd = std::complex<double>;
constexpr double kTraceDriftLimit = 1e-6;

Matrix16cd kron(const Eigen::Matrix4cd& a, const Eigen::Matrix4cd& b) {
  Matrix16cd out;
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < 4; ++k) out.block<4, 4>(4 * i, 4 * k) = a(i, k) * b;
  return out;
}

// Lindblad dissipator rate * D[W] for a real jump operator W.
Matrix16cd dissipator(const Eigen::Matrix4d& w, double rate) {
  const Eigen::Matrix4cd wc = w.cast<cd>();
  const Eigen::Matrix4cd wdw = (w.transpose() * w).cast<cd>();
  const Eigen::Matrix4cd id = Eigen::Matrix4cd::Identity();
  return rate * (kron(wc, wc) - 0.5 * kron(wdw, id) - 0.5 * kron(id, wdw.transpose()));
}

Matrix16cd commutator_part(const Eigen::Matrix4d& h) {
  const Eigen::Matrix4cd hc = h.cast<cd>();
  const Eigen::Matrix4cd id = Eigen::Matrix4cd::Identity();
  return cd{0.0, -1.0} * (kron(hc, id) - kron(id, hc.transpose()));
}

void require_mode_bath(const BathSpec& bath) {
  bath.validate();
  if (bath.kind == BathKind::Dephasing)
    throw ConfigError("dephasing bath is not factorizable in momentum pairs; use the correlator solver");
}

Matrix16cd generator_at(double k, double gamma, const BathSpec& bath) {
  Matrix16cd g = commutator_part(hk_matrix(k, gamma));
  const Eigen::Matrix4d ck = pair_annihilator_k();
  const Eigen::Matrix4d cmk = pair_annihilator_minus_k();
  if (const double d = bath.decay_rate(); d > 0.0) g += dissipator(ck, d) + dissipator(cmk, d);
  if (const double p = bath.pump_rate(); p > 0.0)
    g += dissipator(ck.transpose(), p) + dissipator(cmk.transpose(), p);
  return g;
}

double trace_of(const Vector16cd& r) { return (r(0) + r(5) + r(10) + r(15)).real(); }

}  // namespace

Eigen::Matrix4cd ModeState::matrix() const {
  Eigen::Matrix4cd m;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) m(a, b) = rho(4 * a + b);
  return m;
}

ModeState ModeState::from_matrix(double k, const Eigen::Matrix4cd& m) {
  ModeState s;
  s.k = k;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) s.rho(4 * a + b) = m(a, b);
  return s;
}

Eigen::Matrix4d pair_annihilator_k() {
  Eigen::Matrix4d c = Eigen::Matrix4d::Zero();
  c(0, 1) = 1.0;  // |1_k>        -> |0>
  c(2, 3) = 1.0;  // |1_k 1_-k>   -> |1_-k>
  return c;
}

Eigen::Matrix4d pair_annihilator_minus_k() {
  Eigen::Matrix4d c = Eigen::Matrix4d::Zero();
  c(0, 2) = 1.0;   // |1_-k>       -> |0>
  c(1, 3) = -1.0;  // |1_k 1_-k>   -> -|1_k>
  return c;
}

Matrix16cd liouvillian_matrix(double k, double gamma, const BathSpec& bath) {
  require_mode_bath(bath);
  return generator_at(k, gamma, bath);
}

ModeGenerator::ModeGenerator(double k, const BathSpec& bath) : k_(k) {
  require_mode_bath(bath);
  const Matrix16cd g0 = generator_at(k, 0.0, bath);
  const Matrix16cd g1 = generator_at(k, 1.0, bath) - g0;
  for (int r = 0; r < 16; ++r)
    for (int c = 0; c < 16; ++c)
      if (g0(r, c) != cd{0.0, 0.0}) entries_.push_back({r, c, g0(r, c)});
  diag1_ = g1.diagonal();
}

void ModeGenerator::apply(double gamma, const Vector16cd& x, Vector16cd& y) const {
  y = gamma * diag1_.cwiseProduct(x);
  for (const auto& e : entries_) y(e.row) += e.value * x(e.col);
}

Matrix16cd ModeGenerator::dense(double gamma) const {
  Matrix16cd g = Matrix16cd::Zero();
  for (const auto& e : entries_) g(e.row, e.col) = e.value;
  g.diagonal() += gamma * diag1_;
  return g;
}

ModeState mode_ground_state(double k, double gamma) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(hk_matrix(k, gamma));
  const Eigen::Vector4cd g = es.eigenvectors().col(0).cast<cd>();
  return ModeState::from_matrix(k, g * g.adjoint());
}

double mode_energy(const ModeState& s, double gamma) {
  const Eigen::Matrix4d h = hk_matrix(s.k, gamma);
  cd e = 0.0;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) e += h(a, b) * s.rho(4 * b + a);
  return e.real();
}

ModeInvariants mode_invariants(const ModeState& s) {
  const Eigen::Matrix4cd m = s.matrix();
  ModeInvariants inv;
  inv.trace_error = std::abs(m.trace() - cd{1.0, 0.0});
  inv.hermiticity_error = (m - m.adjoint()).cwiseAbs().maxCoeff();
  const Eigen::Matrix4cd herm = 0.5 * (m + m.adjoint());
  inv.min_eigenvalue = Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd>(herm, Eigen::EigenvaluesOnly).eigenvalues()(0);
  for (int a : {0, 3})
    for (int b : {1, 2}) inv.parity_leak = std::max({inv.parity_leak, std::abs(m(a, b)), std::abs(m(b, a))});
  return inv;
}

namespace {

template <class OnSample>
ModeInvariants integrate_mode(double k, const Schedule& schedule, const BathSpec& bath, int stride,
                              OnSample&& on_sample) {
  const ModeGenerator gen(k, bath);
  ModeState state = mode_ground_state(k, schedule.gamma_in());
  ModeInvariants worst = mode_invariants(state);
  auto rhs = [&](double t, const Vector16cd& x, Vector16cd& dx) { gen.apply(schedule.gamma(t), x, dx); };
  detail::rk4_drive(schedule, stride, state.rho, rhs, [&](std::int64_t, double t, const Vector16cd&) {
    const double drift = std::abs(trace_of(state.rho) - 1.0);
    if (drift > kTraceDriftLimit) {
      std::ostringstream os;
      os << "mode trace drift " << drift << " at t=" << t << " for k=" << k << "; reduce dt (currently "
         << schedule.dt << ")";
      throw NumericalError(os.str());
    }
    on_sample(t, state, worst);
  });
  return worst;
}

void fold_worst(ModeInvariants& worst, const ModeInvariants& inv) {
  worst.trace_error = std::max(worst.trace_error, inv.trace_error);
  worst.hermiticity_error = std::max(worst.hermiticity_error, inv.hermiticity_error);
  worst.min_eigenvalue = std::min(worst.min_eigenvalue, inv.min_eigenvalue);
  worst.parity_leak = std::max(worst.parity_leak, inv.parity_leak);
}

}  // namespace

ModeTrajectory evolve_mode(double k, const Schedule& schedule, const BathSpec& bath, int stride) {
  ModeTrajectory out;
  out.worst = integrate_mode(k, schedule, bath, stride,
                             [&](double t, const ModeState& s, ModeInvariants& worst) {
                               fold_worst(worst, mode_invariants(s));
                               out.t.push_back(t);
                               out.states.push_back(s);
                             });
  return out;
}

double mode_excess(const std::vector<ModeState>& states, double gamma, const ChainSpec& chain) {
  const auto ks = mode_grid(chain);
  if (ks.size() != states.size()) throw ConfigError("mode set does not match the chain's mode grid");
  double energy = 0.0;
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (std::abs(states[i].k - ks[i]) > 1e-12) throw ConfigError("mode set does not match the chain's mode grid");
    energy += mode_energy(states[i], gamma);
  }
  return excess_per_site(energy, ground_energy(chain, gamma), chain.L);
}

EnergyTrajectory evolve_chain_modes(const ChainSpec& chain, const Schedule& schedule, const BathSpec& bath,
                                    const EvolveOptions& options) {
  require_mode_bath(bath);
  const auto ks = mode_grid(chain);
  schedule.validate();
  const auto nsamples = static_cast<std::size_t>(detail::sample_count(schedule.steps(), options.stride));

  std::vector<std::vector<double>> energies(ks.size());
  std::vector<double> times;
  parallel_for(ks.size(), options.workers, [&](std::size_t m) {
    auto& e = energies[m];
    e.reserve(nsamples);
    std::vector<double> tm;
    integrate_mode(ks[m], schedule, bath, options.stride, [&](double t, const ModeState& s, ModeInvariants&) {
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

ModeState steady_state(double k, double gamma, const BathSpec& bath) {
  require_mode_bath(bath);
  if (!(bath.kappa > 0.0)) throw ConfigError("steady state needs kappa > 0");
  const Matrix16cd g = generator_at(k, gamma, bath);
  Eigen::JacobiSVD<Matrix16cd> svd(g, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  if (sv(14) < 1e-8) {
    std::ostringstream os;
    os << "degenerate steady state at k=" << k << ", gamma=" << gamma << " (second smallest singular value "
       << sv(14) << ")";
    throw NumericalError(os.str());
  }
  ModeState s;
  s.k = k;
  s.rho = svd.matrixV().col(15);
  s.rho /= s.rho(0) + s.rho(5) + s.rho(10) + s.rho(15);
  const double residual = (g * s.rho).norm();
  if (residual > 1e-10 * std::max(1.0, g.norm())) {
    std::ostringstream os;
    os << "steady state residual " << residual << " at k=" << k;
    throw NumericalError(os.str());
  }
  return s;
}

double adiabatic_limit_excess(const BathSpec& bath, const ChainSpec& chain, double gamma) {
  double energy = 0.0;
  for (double k : mode_grid(chain)) energy += mode_energy(steady_state(k, gamma, bath), gamma);
  return excess_per_site(energy, ground_energy(chain, gamma), chain.L);
}

double steady_state_energy(const BathSpec& bath, const ChainSpec& chain, double gamma) {
  double energy = 0.0;
  for (double k : mode_grid(chain)) energy += mode_energy(steady_state(k, gamma, bath), gamma);
  return energy / chain.L + gamma;
}

}  // namespace dqa
