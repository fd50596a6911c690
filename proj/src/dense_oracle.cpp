#include "dqa/dense_oracle.hpp"

#include <bit>
#include <cmath>
#include <sstream>

#include "dqa/errors.hpp"
#include "stepping.hpp"

namespace dqa {

namespace {

using cd = std::complex<double>;
using SparseOpC = Eigen::SparseMatrix<cd>;

void require_small(int L) {
  if (L < 2 || L > kDenseMaxSites) {
    std::ostringstream os;
    os << "dense oracle supports 2 <= L <= " << kDenseMaxSites << ", got L=" << L;
    throw ConfigError(os.str());
  }
}

double ground_of(const Eigen::MatrixXd& h) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

}  // namespace

FockOperators fock_operators(int L) {
  require_small(L);
  FockOperators ops;
  ops.L = L;
  const int dim = 1 << L;
  for (int n = 0; n < L; ++n) {
    std::vector<Eigen::Triplet<double>> trip;
    const unsigned bit = 1u << n;
    for (unsigned s = 0; s < static_cast<unsigned>(dim); ++s) {
      if (!(s & bit)) continue;
      const double sign = (std::popcount(s & (bit - 1)) % 2) ? -1.0 : 1.0;
      trip.emplace_back(static_cast<int>(s ^ bit), static_cast<int>(s), sign);
    }
    SparseOp c(dim, dim);
    c.setFromTriplets(trip.begin(), trip.end());
    ops.c.push_back(std::move(c));
  }
  return ops;
}

Eigen::MatrixXd parity_operator(int L) {
  require_small(L);
  const int dim = 1 << L;
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(dim, dim);
  for (int s = 0; s < dim; ++s) p(s, s) = (std::popcount(static_cast<unsigned>(s)) % 2) ? -1.0 : 1.0;
  return p;
}

Eigen::MatrixXd dense_hamiltonian(const FockOperators& ops, const HamiltonianMatrices& hm) {
  const int L = ops.L;
  if (hm.A.rows() != L || hm.B.rows() != L) throw ConfigError("Hamiltonian matrices do not match the Fock space");
  SparseOp h(ops.dim(), ops.dim());
  for (int m = 0; m < L; ++m) {
    const SparseOp cdag = ops.c[m].transpose();
    for (int n = 0; n < L; ++n) {
      if (hm.A(m, n) != 0.0) h += hm.A(m, n) * (cdag * ops.c[n]);
      if (hm.B(m, n) != 0.0) {
        const SparseOp pair = cdag * SparseOp(ops.c[n].transpose());
        h += 0.5 * hm.B(m, n) * (pair + SparseOp(ops.c[n] * ops.c[m]));
      }
    }
  }
  return 2.0 * Eigen::MatrixXd(h);
}

Eigen::MatrixXd dense_hamiltonian(const ChainSpec& chain, double gamma) {
  chain.validate();
  require_small(chain.L);
  return dense_hamiltonian(fock_operators(chain.L), build_ab(chain, gamma));
}

DenseRun dense_evolve_excess(const ChainSpec& chain, const Schedule& schedule, const BathSpec& bath, int stride) {
  return dense_evolve_excess(chain, schedule, bath, stride, [&chain](double g) { return build_ab(chain, g); });
}

DenseRun dense_evolve_excess(const ChainSpec& chain, const Schedule& schedule, const BathSpec& bath, int stride,
                             const HamiltonianBuilder& builder) {
  chain.validate();
  require_small(chain.L);
  bath.validate();
  schedule.validate();
  const FockOperators ops = fock_operators(chain.L);
  const int dim = ops.dim();

  const Eigen::MatrixXd h0 = dense_hamiltonian(ops, builder(0.0));
  const Eigen::MatrixXd h1 = dense_hamiltonian(ops, builder(1.0)) - h0;
  const SparseOpC h0s = h0.cast<cd>().sparseView();
  const SparseOpC h1s = h1.cast<cd>().sparseView();

  // Jump operators with their rates; real matrices, so W+ = W^T.
  std::vector<std::pair<SparseOpC, double>> jumps;
  for (int n = 0; n < chain.L; ++n) {
    const SparseOpC c = ops.c[n].cast<cd>();
    const SparseOpC cdag = SparseOpC(c.transpose());
    if (bath.decay_rate() > 0.0) jumps.emplace_back(c, bath.decay_rate());
    if (bath.pump_rate() > 0.0) jumps.emplace_back(cdag, bath.pump_rate());
    if (bath.dephasing_rate() > 0.0) jumps.emplace_back(SparseOpC(cdag * c), bath.dephasing_rate());
  }
  SparseOpC wdw(dim, dim);
  for (const auto& [w, rate] : jumps) wdw += rate * SparseOpC(SparseOpC(w.adjoint()) * w);
  std::vector<SparseOpC> wadj;
  for (const auto& jw : jumps) wadj.emplace_back(jw.first.adjoint());

  Eigen::MatrixXcd rho;
  {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h0 + schedule.gamma_in() * h1);
    const Eigen::VectorXcd g = es.eigenvectors().col(0).cast<cd>();
    rho = g * g.adjoint();
  }

  const cd minus_i{0.0, -1.0};
  auto rhs = [&](double t, const Eigen::MatrixXcd& r, Eigen::MatrixXcd& dr) {
    const SparseOpC h = h0s + schedule.gamma(t) * h1s;
    dr = minus_i * (h * r - r * h);
    dr -= 0.5 * (wdw * r);
    dr -= 0.5 * (r * wdw);
    for (std::size_t j = 0; j < jumps.size(); ++j) {
      const Eigen::MatrixXcd wr = jumps[j].first * r;
      dr += jumps[j].second * (wr * wadj[j]);
    }
  };

  DenseRun run;
  detail::rk4_drive(schedule, stride, rho, rhs, [&](std::int64_t, double t, const Eigen::MatrixXcd& r) {
    const double gamma = schedule.gamma(t);
    const Eigen::MatrixXd h = h0 + gamma * h1;
    run.max_trace_error = std::max(run.max_trace_error, std::abs(r.trace() - cd{1.0, 0.0}));
    run.max_hermiticity_error = std::max(run.max_hermiticity_error, (r - r.adjoint()).cwiseAbs().maxCoeff());
    EnergySample row;
    row.t = t;
    row.gamma = gamma;
    row.energy = (h.cast<cd>().cwiseProduct(r.transpose())).sum().real();
    row.ground_energy = ground_of(h);
    row.epsilon = excess_per_site(row.energy, row.ground_energy, chain.L);
    run.energy.push_back(row);
  }, kDenseSubsteps);
  return run;
}

}  // namespace dqa
