#pragma once

// Dephasing bath (jumps c+_n c_n) on the odd periodic chain, solved through the
// closed linear equations of the translation-invariant two-point functions
//
//   F_l = <c+_m c_{m+l}>,  G_l = <c_m c+_{m+l}>,  I_l = <c+_m c+_{m+l}>,  K_l = <c_m c_{m+l}>
//
// stacked as y = (F, G, I, K), with
//
//   dy/dt = M(Gamma) y - kappa diag(P, P, Q, Q) y
//   M = 2i [[0, 0, -B, -B], [0, 0, B, B], [B, -B, 2A, 0], [B, -B, 0, -2A]]
//
// where A, B act as circulant stencils on offset vectors and P_l = 1 - d_l0,
// Q_l = 1 + d_l0.

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "dqa/lattice.hpp"
#include "dqa/observables.hpp"

namespace dqa {

struct CorrelatorState {
  int L = 0;
  Eigen::VectorXcd y;  // (F, G, I, K), 4L entries

  auto F() const { return y.segment(0, L); }
  auto G() const { return y.segment(L, L); }
  auto I() const { return y.segment(2 * L, L); }
  auto K() const { return y.segment(3 * L, L); }
};

/// Ground-state correlators at gamma_in from the real-space Bogoliubov modes.
/// Odd periodic chains only.
CorrelatorState init_correlators(const ChainSpec& chain, double gamma_in);

class DephasingGenerator {
 public:
  DephasingGenerator(const ChainSpec& chain, double kappa);

  int L() const { return L_; }
  double kappa() const { return kappa_; }
  /// dy = (M(gamma) - kappa D) y, O(L).
  void apply(double gamma, const Eigen::VectorXcd& y, Eigen::VectorXcd& dy) const;
  /// Dense 4L x 4L form, for tests on small chains.
  Eigen::MatrixXcd dense(double gamma) const;
  /// Diagonal damping rates kappa (P, P, Q, Q).
  Eigen::VectorXd damping() const;

 private:
  int L_;
  double kappa_;
};

/// E = -L (F_1 - G_1 - K_1 + I_1) - 2 L Gamma F_0. Throws NumericalError on an
/// imaginary residue above tolerance.
double energy_from_correlators(const CorrelatorState& s, double gamma, const ChainSpec& chain);

struct CorrelatorInvariants {
  double hermiticity = 0.0;   // max |F_l - conj(F_{-l})|
  double g_f_relation = 0.0;  // max |G_l - d_l0 + conj(F_l)|
  double k_i_relation = 0.0;  // max |conj(K_l) - I_{-l}|
  double i0 = 0.0;            // |I_0|
  double f0_imag = 0.0;       // |Im F_0|
  double f0_range = 0.0;      // distance of Re F_0 outside [0, 1]

  double max() const;
};

CorrelatorInvariants correlator_invariants(const CorrelatorState& s);

struct CorrelatorRun {
  EnergyTrajectory energy;
  CorrelatorInvariants worst;
  CorrelatorState final_state;
};

/// RK4 from the ground state at gamma_in to t = 0. Invariants are checked at
/// each sample; a violation above 1e-6 throws NumericalError.
CorrelatorRun evolve_correlators(const ChainSpec& chain, const Schedule& schedule, double kappa,
                                 const EvolveOptions& options = {});

}  // namespace dqa
