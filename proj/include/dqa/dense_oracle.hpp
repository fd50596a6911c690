#pragma once

// Brute-force reference: the full 2^L Fock-space density matrix under the
// exact Lindblad equation, for chains of at most 6 sites. Basis states are
// bit strings with bit n = occupation of site n; c_n carries the Jordan-Wigner
// string over sites j < n.

#include <functional>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "dqa/lattice.hpp"
#include "dqa/observables.hpp"

namespace dqa {

inline constexpr int kDenseMaxSites = 6;
// RK4 substeps per dt; keeps the reference well below the fast solvers' step error.
inline constexpr int kDenseSubsteps = 2;

using SparseOp = Eigen::SparseMatrix<double>;

struct FockOperators {
  int L = 0;
  std::vector<SparseOp> c;  // annihilators c_0 .. c_{L-1}; creators are transposes

  int dim() const { return 1 << L; }
};

FockOperators fock_operators(int L);

/// (-1)^N as a diagonal matrix.
Eigen::MatrixXd parity_operator(int L);

/// H = 2 [ sum A_mn c+_m c_n + 1/2 sum B_mn (c+_m c+_n + c_n c_m) ].
Eigen::MatrixXd dense_hamiltonian(const FockOperators& ops, const HamiltonianMatrices& hm);
Eigen::MatrixXd dense_hamiltonian(const ChainSpec& chain, double gamma);

using HamiltonianBuilder = std::function<HamiltonianMatrices(double gamma)>;

struct DenseRun {
  EnergyTrajectory energy;
  double max_trace_error = 0.0;
  double max_hermiticity_error = 0.0;
};

/// RK4 on the full density matrix starting from the ground projector at
/// gamma_in; excess energy uses the dense ground energy at each sample.
DenseRun dense_evolve_excess(const ChainSpec& chain, const Schedule& schedule, const BathSpec& bath,
                             int stride = 100);

/// Same, with the quadratic form supplied by `builder`. The builder is
/// sampled at Gamma = 0 and 1 and assumed affine in Gamma.
DenseRun dense_evolve_excess(const ChainSpec& chain, const Schedule& schedule, const BathSpec& bath, int stride,
                             const HamiltonianBuilder& builder);

}  // namespace dqa
