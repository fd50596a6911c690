#pragma once

// Closed-system annealing of the even antiperiodic chain through the
// time-dependent Bogoliubov-de Gennes equations
//
//   i du/dt = -2 u (Gamma + cos k) + 2 v sin k
//   i dv/dt = +2 v (Gamma + cos k) + 2 u sin k
//
// The pair state of momentum k is v|0> + u|1_k 1_-k>.

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "dqa/lattice.hpp"
#include "dqa/observables.hpp"

namespace dqa {

struct BdgModeState {
  double k = 0.0;
  std::complex<double> u{1.0, 0.0};
  std::complex<double> v{0.0, 0.0};

  double norm2() const { return std::norm(u) + std::norm(v); }
  /// Embedding in the 4-dim pair space {|0>, |1_k>, |1_-k>, |1_k 1_-k>}.
  Eigen::Vector4cd pair_vector() const;
};

/// Lowest-energy Bogoliubov pair of the static mode Hamiltonian. Needs gamma_in > 1.
BdgModeState init_mode_ground(double k, double gamma_in);

/// <psi_k| H_k(gamma) |psi_k> for the pair state.
double mode_energy(const BdgModeState& s, double gamma);

/// Probability of the instantaneous excited pair state at field gamma.
double excitation_probability(const BdgModeState& s, double gamma);

struct BdgTrajectory {
  std::vector<double> t;
  std::vector<BdgModeState> states;
  double max_norm_drift = 0.0;
};

/// RK4 from t_in to 0 starting at `state`; samples every options.stride steps
/// and at the final step. Throws NumericalError if the norm drifts by more
/// than 1e-6 (step too large).
BdgTrajectory evolve_bdg(const BdgModeState& state, const Schedule& schedule, int stride = 100);

/// Excess energy per site of a set of synchronized mode states.
double unitary_excess(const std::vector<BdgModeState>& modes, double gamma, const ChainSpec& chain);

/// Full chain run over mode_grid(chain); modes are evolved independently and
/// reduced in k order.
EnergyTrajectory evolve_chain_unitary(const ChainSpec& chain, const Schedule& schedule,
                                      const EvolveOptions& options = {});

}  // namespace dqa
