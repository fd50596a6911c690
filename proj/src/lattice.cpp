#include "dqa/lattice.hpp"

#include <cmath>
#include <numbers>

#include "dqa/errors.hpp"

namespace dqa {

std::string_view to_string(Sector s) {
  switch (s) {
    case Sector::EvenAntiperiodic: return "even";
    case Sector::OddPeriodic: return "odd";
  }
  return "?";
}

Sector parse_sector(std::string_view name) {
  if (name == "even" || name == "EvenAntiperiodic") return Sector::EvenAntiperiodic;
  if (name == "odd" || name == "OddPeriodic") return Sector::OddPeriodic;
  throw ConfigError("unknown sector '" + std::string(name) + "' (expected even|odd)");
}

void ChainSpec::validate() const {
  if (J != 1.0) throw ConfigError("J is the energy unit and must equal 1");
  switch (sector) {
    case Sector::EvenAntiperiodic:
      if (L < 2 || L % 2 != 0)
        throw ConfigError("even antiperiodic sector needs an even L >= 2, got L=" + std::to_string(L));
      break;
    case Sector::OddPeriodic:
      if (L < 3 || L % 2 != 1)
        throw ConfigError("odd periodic sector needs an odd L >= 3, got L=" + std::to_string(L));
      break;
  }
}

void Schedule::validate() const {
  if (!(tau > 0.0) || !std::isfinite(tau)) throw ConfigError("tau must be finite and > 0");
  if (!(t_in_factor > 0.0) || !std::isfinite(t_in_factor))
    throw ConfigError("t_in_factor must be finite and > 0");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("dt must be finite and > 0");
}

std::int64_t Schedule::steps() const {
  const double n = std::ceil(-t_in() / dt - 1e-9);
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(n));
}

std::string_view to_string(BathKind k) {
  switch (k) {
    case BathKind::None: return "none";
    case BathKind::Pump: return "pump";
    case BathKind::Decay: return "decay";
    case BathKind::PumpDecay: return "mixed";
    case BathKind::Dephasing: return "dephasing";
  }
  return "?";
}

BathKind parse_bath_kind(std::string_view name) {
  if (name == "none") return BathKind::None;
  if (name == "pump") return BathKind::Pump;
  if (name == "decay") return BathKind::Decay;
  if (name == "mixed" || name == "pumpdecay" || name == "pump_decay") return BathKind::PumpDecay;
  if (name == "dephasing") return BathKind::Dephasing;
  throw ConfigError("unknown bath '" + std::string(name) +
                    "' (expected none|pump|decay|mixed|dephasing)");
}

void BathSpec::validate() const {
  if (!(kappa >= 0.0) || !std::isfinite(kappa)) throw ConfigError("kappa must be finite and >= 0");
  if (!(eta >= 0.0) || !std::isfinite(eta)) throw ConfigError("eta must be finite and >= 0");
  if (kind != BathKind::PumpDecay && eta != 0.0)
    throw ConfigError("eta is only meaningful for the mixed pump/decay bath");
}

double BathSpec::pump_rate() const {
  switch (kind) {
    case BathKind::Pump: return kappa;
    case BathKind::PumpDecay: return eta * kappa;
    default: return 0.0;
  }
}

double BathSpec::decay_rate() const {
  switch (kind) {
    case BathKind::Decay:
    case BathKind::PumpDecay: return kappa;
    default: return 0.0;
  }
}

bool bath_allowed_in(const BathSpec& bath, Sector sector) {
  switch (bath.kind) {
    case BathKind::None: return true;
    case BathKind::Dephasing: return sector == Sector::OddPeriodic;
    default: return sector == Sector::EvenAntiperiodic;
  }
}

std::vector<double> mode_grid(const ChainSpec& chain) {
  chain.validate();
  if (chain.sector != Sector::EvenAntiperiodic)
    throw ConfigError("mode grid is defined for even antiperiodic chains only");
  std::vector<double> ks;
  ks.reserve(chain.L / 2);
  for (int m = 1; m <= chain.L / 2; ++m)
    ks.push_back((2.0 * m - 1.0) * std::numbers::pi / chain.L);
  return ks;
}

HamiltonianMatrices build_ab(const ChainSpec& chain, double gamma) {
  chain.validate();
  const int L = chain.L;
  HamiltonianMatrices hm{Eigen::MatrixXd::Zero(L, L), Eigen::MatrixXd::Zero(L, L)};
  const double half = 0.5 * chain.J;
  for (int n = 0; n < L; ++n) hm.A(n, n) = -gamma;
  // Bond (n, n+1); the wrap-around bond picks up the boundary sign. Entries
  // are accumulated so that L = 2 (both bonds joining the same sites) works.
  for (int n = 0; n < L; ++n) {
    const int m = (n + 1) % L;
    const double sign = (m == 0 && chain.sector == Sector::EvenAntiperiodic) ? -1.0 : 1.0;
    hm.A(n, m) += -half * sign;
    hm.A(m, n) += -half * sign;
    hm.B(n, m) += -half * sign;
    hm.B(m, n) += half * sign;
  }
  return hm;
}

Eigen::Matrix4d hk_matrix(double k, double gamma) {
  const double d = gamma + std::cos(k);
  const double s = 2.0 * std::sin(k);
  Eigen::Matrix4d h = Eigen::Matrix4d::Zero();
  h(0, 3) = s;
  h(3, 0) = s;
  h(1, 1) = -2.0 * d;
  h(2, 2) = -2.0 * d;
  h(3, 3) = -4.0 * d;
  return h;
}

double mode_ground_energy(double k, double gamma) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(hk_matrix(k, gamma), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

BogoliubovModes bogoliubov_modes(const HamiltonianMatrices& hm) {
  const auto L = hm.A.rows();
  Eigen::MatrixXd nambu(2 * L, 2 * L);
  nambu << hm.A, hm.B, -hm.B, -hm.A;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(nambu);
  if (es.info() != Eigen::Success) throw NumericalError("Bogoliubov diagonalization failed");
  // Eigenvalues come in +/- pairs, sorted ascending: the upper half is positive.
  BogoliubovModes out;
  out.energies = es.eigenvalues().tail(L);
  out.U = es.eigenvectors().block(0, L, L, L);
  out.V = es.eigenvectors().block(L, L, L, L);
  return out;
}

double ground_energy_realspace(const ChainSpec& chain, double gamma) {
  const auto hm = build_ab(chain, gamma);
  const auto modes = bogoliubov_modes(hm);
  // H = 2 (1/2 Psi+ Nambu Psi + 1/2 tr A) and the Nambu vacuum sits at -sum(e)/2.
  return -modes.energies.sum() + hm.A.trace();
}

double ground_energy(const ChainSpec& chain, double gamma) {
  chain.validate();
  double e = 0.0;
  if (chain.sector == Sector::OddPeriodic) {
    // Periodic momenta 2 pi m / L: pairs (k, -k) plus the unpaired k = 0 mode,
    // whose level -2 (Gamma + 1) is filled when negative. Matches the
    // real-space minimum without its O(L^3) cost.
    for (int m = 1; m <= chain.L / 2; ++m)
      e += mode_ground_energy(2.0 * std::numbers::pi * m / chain.L, gamma);
    return e + std::min(0.0, -2.0 * (gamma + chain.J));
  }
  for (double k : mode_grid(chain)) e += mode_ground_energy(k, gamma);
  return e;
}

}  // namespace dqa
