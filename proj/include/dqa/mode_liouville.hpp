#pragma once

// Open-system annealing of one momentum pair (k, -k) of the even chain under
// pump (c+), decay (c) or mixed baths. The pair density matrix lives in the
// basis {|0>, |1_k>, |1_-k>, |1_k 1_-k>} and is vectorized row-major,
// rho_vec[4 m + n] = rho(m, n), so that |W1 W2 W3>> = (W1 (x) W3^T) |W2>>.

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "dqa/lattice.hpp"
#include "dqa/observables.hpp"

namespace dqa {

using Vector16cd = Eigen::Matrix<std::complex<double>, 16, 1>;
using Matrix16cd = Eigen::Matrix<std::complex<double>, 16, 16>;

struct ModeState {
  double k = 0.0;
  Vector16cd rho = Vector16cd::Zero();

  Eigen::Matrix4cd matrix() const;
  static ModeState from_matrix(double k, const Eigen::Matrix4cd& rho);
};

/// Pair-space annihilators. c_k and c_-k anticommute, with |1_k 1_-k> = c+_k c+_-k |0>.
Eigen::Matrix4d pair_annihilator_k();
Eigen::Matrix4d pair_annihilator_minus_k();

/// Dense generator L(Gamma) of d|rho>>/dt. Rejects the dephasing bath.
Matrix16cd liouvillian_matrix(double k, double gamma, const BathSpec& bath);

/// L(Gamma) = L0 + Gamma * L1 with L1 diagonal; L0 kept as a sparse triple list.
class ModeGenerator {
 public:
  ModeGenerator(double k, const BathSpec& bath);

  double k() const { return k_; }
  void apply(double gamma, const Vector16cd& x, Vector16cd& y) const;
  Matrix16cd dense(double gamma) const;
  std::size_t nonzeros() const { return entries_.size() + 16; }

 private:
  struct Entry {
    int row, col;
    std::complex<double> value;
  };
  double k_;
  std::vector<Entry> entries_;
  Vector16cd diag1_;
};

ModeState mode_ground_state(double k, double gamma);

/// Tr(H_k(gamma) rho).
double mode_energy(const ModeState& s, double gamma);

struct ModeInvariants {
  double trace_error = 0.0;      // |Tr rho - 1|
  double hermiticity_error = 0.0;  // max |rho - rho+|
  double min_eigenvalue = 0.0;
  double parity_leak = 0.0;      // max coherence between the even and odd blocks
};

ModeInvariants mode_invariants(const ModeState& s);

struct ModeTrajectory {
  std::vector<double> t;
  std::vector<ModeState> states;
  ModeInvariants worst;  // worst value of each invariant over the samples
};

/// RK4 from the ground projector at gamma_in to t = 0. Throws NumericalError
/// when the trace drifts by more than 1e-6.
ModeTrajectory evolve_mode(double k, const Schedule& schedule, const BathSpec& bath, int stride = 100);

/// Excess energy per site of synchronized mode states.
double mode_excess(const std::vector<ModeState>& states, double gamma, const ChainSpec& chain);

/// Full chain run; modes evolved independently, reduced in k order.
EnergyTrajectory evolve_chain_modes(const ChainSpec& chain, const Schedule& schedule, const BathSpec& bath,
                                    const EvolveOptions& options = {});

/// Null vector of the generator normalized to unit trace. Requires kappa > 0;
/// throws NumericalError when the null space is degenerate.
ModeState steady_state(double k, double gamma, const BathSpec& bath);

/// (1/L) [sum_k Tr(H_k rho_ss) - E0] at the given field (default: end of ramp).
double adiabatic_limit_excess(const BathSpec& bath, const ChainSpec& chain, double gamma = 0.0);

/// Steady-state energy per site in the spin-chain normalization, i.e. the
/// fermion energy shifted by +Gamma per site. Zero for all Gamma at eta = 1.
double steady_state_energy(const BathSpec& bath, const ChainSpec& chain, double gamma);

}  // namespace dqa
