#pragma once

// Chain geometry, annealing schedule, bath description and the quadratic
// Hamiltonian of the free-fermion chain
//
//   H(t) = 2 * sum_{m,n} [ c+_m A_mn c_n + 1/2 (c+_m B_mn c+_n + h.c.) ]
//        = -sum_n [ (c+_n c_{n+1} + c+_n c+_{n+1} + h.c.) + 2 Gamma(t) n_n ]
//
// with J = 1. The overall factor 2 makes the quadratic form coincide with the
// Jordan-Wigner image of the transverse-field Ising chain (up to the constant
// Gamma * L), which is the normalization used by the mode matrices, the
// Bogoliubov-de Gennes equations and the correlator equations.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace dqa {

enum class Sector {
  EvenAntiperiodic,  // L even, c_{L+1} = -c_1
  OddPeriodic,       // L odd,  c_{L+1} = +c_1
};

std::string_view to_string(Sector s);
Sector parse_sector(std::string_view name);

struct ChainSpec {
  int L = 0;
  Sector sector = Sector::EvenAntiperiodic;
  double J = 1.0;

  /// Throws ConfigError when L does not match the sector parity.
  void validate() const;
};

/// Linear ramp Gamma(t) = -t / tau on [t_in, 0] with t_in = -t_in_factor * tau.
struct Schedule {
  double tau = 1.0;
  double t_in_factor = 5.0;
  double dt = 1e-2;

  void validate() const;
  double t_in() const { return -t_in_factor * tau; }
  double gamma_in() const { return t_in_factor; }
  double gamma(double t) const { return -t / tau; }
  /// Number of integrator steps; the step is shrunk so the last one lands on t = 0.
  std::int64_t steps() const;
  double step() const { return -t_in() / static_cast<double>(steps()); }
};

enum class BathKind { None, Pump, Decay, PumpDecay, Dephasing };

std::string_view to_string(BathKind k);
BathKind parse_bath_kind(std::string_view name);

struct BathSpec {
  BathKind kind = BathKind::None;
  double kappa = 0.0;  // decay rate for PumpDecay, the only rate otherwise
  double eta = 0.0;    // kappa_pump / kappa_decay, PumpDecay only

  void validate() const;
  double pump_rate() const;
  double decay_rate() const;
  double dephasing_rate() const { return kind == BathKind::Dephasing ? kappa : 0.0; }

  static BathSpec none() { return {}; }
  static BathSpec pump(double kappa) { return {BathKind::Pump, kappa, 0.0}; }
  static BathSpec decay(double kappa) { return {BathKind::Decay, kappa, 0.0}; }
  static BathSpec pump_decay(double kappa, double eta) { return {BathKind::PumpDecay, kappa, eta}; }
  static BathSpec dephasing(double kappa) { return {BathKind::Dephasing, kappa, 0.0}; }
};

/// Sector each bath is solved in: dephasing on odd periodic chains, the rest
/// on even antiperiodic chains. None works in either.
bool bath_allowed_in(const BathSpec& bath, Sector sector);

struct HamiltonianMatrices {
  Eigen::MatrixXd A;  // symmetric
  Eigen::MatrixXd B;  // antisymmetric
};

/// Positive momenta k = (2m - 1) pi / L, m = 1..L/2. Even antiperiodic chains only.
std::vector<double> mode_grid(const ChainSpec& chain);

HamiltonianMatrices build_ab(const ChainSpec& chain, double gamma);

/// 4x4 pair Hamiltonian in the basis {|0>, |1_k>, |1_-k>, |1_k 1_-k>}.
Eigen::Matrix4d hk_matrix(double k, double gamma);

/// Lowest eigenvalue of hk_matrix(k, gamma).
double mode_ground_energy(double k, double gamma);

/// Positive quasiparticle energies and the Bogoliubov amplitudes of the
/// real-space problem. Column mu of (U; V) is the eigenvector of the Nambu
/// matrix [[A, B], [-B, -A]] with eigenvalue +energies[mu], so that
/// c_i = sum_mu U_i,mu gamma_mu + V_i,mu gamma+_mu.
struct BogoliubovModes {
  Eigen::VectorXd energies;
  Eigen::MatrixXd U;
  Eigen::MatrixXd V;
};

BogoliubovModes bogoliubov_modes(const HamiltonianMatrices& hm);

/// Ground energy of H from the real-space Bogoliubov spectrum (any sector).
double ground_energy_realspace(const ChainSpec& chain, double gamma);

/// Ground energy of H as a sum of pair-mode minima: antiperiodic momenta for
/// even chains, periodic momenta plus the k = 0 level for odd chains. Agrees
/// with ground_energy_realspace.
double ground_energy(const ChainSpec& chain, double gamma);

}  // namespace dqa
