#include <cmath>

#include "doctest.h"
#include "dqa/dephasing_corr.hpp"
#include "dqa/errors.hpp"
#include "dqa/unitary_bdg.hpp"
#include "oracle_values.hpp"

using namespace dqa;
using cd = std::complex<double>;

namespace {

const ChainSpec kOdd5{5, Sector::OddPeriodic};

CorrelatorState empty_state(int L) {
  CorrelatorState s;
  s.L = L;
  s.y = Eigen::VectorXcd::Zero(4 * L);
  return s;
}

}  // namespace

TEST_CASE("ground-state correlators") {
  const ChainSpec c{11, Sector::OddPeriodic};
  const auto s = init_correlators(c, 5.0);
  CHECK(s.F()(0).real() > 0.99);
  for (int l = 1; l < c.L; ++l) CHECK(std::abs(s.F()(l)) < 0.05);
  CHECK(std::abs(s.I()(0)) < 1e-14);
  CHECK(correlator_invariants(s).max() < 1e-12);

  CHECK_THROWS_AS(init_correlators({4, Sector::EvenAntiperiodic}, 5.0), ConfigError);
}

TEST_CASE("energy from correlators") {
  CHECK(energy_from_correlators(empty_state(7), 1.5, {7, Sector::OddPeriodic}) == 0.0);

  auto filled = empty_state(7);
  filled.y(0) = 1.0;
  CHECK(energy_from_correlators(filled, 1.5, {7, Sector::OddPeriodic}) == doctest::Approx(-2.0 * 7 * 1.5));

  CHECK(energy_from_correlators(init_correlators(kOdd5, 5.0), 5.0, kOdd5) ==
        doctest::Approx(ground_energy(kOdd5, 5.0)).epsilon(1e-12));
  CHECK(energy_from_correlators(init_correlators(kOdd5, 2.0), 2.0, kOdd5) ==
        doctest::Approx(oracle::kGroundL5Gamma2).epsilon(1e-12));

  auto bad = empty_state(5);
  bad.y(1) = cd(0.0, 1.0);
  CHECK_THROWS_AS(energy_from_correlators(bad, 0.0, kOdd5), NumericalError);
}

TEST_CASE("damping rates") {
  const DephasingGenerator gen({7, Sector::OddPeriodic}, 0.3);
  const auto d = gen.damping();
  REQUIRE(d.size() == 28);
  for (int b = 0; b < 4; ++b) {
    const double first = b < 2 ? 0.0 : 0.6;
    CHECK(d(7 * b) == doctest::Approx(first));
    for (int l = 1; l < 7; ++l) CHECK(d(7 * b + l) == doctest::Approx(0.3));
  }
}

TEST_CASE("generator blocks") {
  const ChainSpec c{7, Sector::OddPeriodic};
  const double g = 0.8;
  const DephasingGenerator gen(c, 0.0);
  const Eigen::MatrixXcd m = gen.dense(g);
  const auto hm = build_ab(c, g);
  const Eigen::MatrixXcd A = hm.A.cast<cd>();
  const Eigen::MatrixXcd B = hm.B.cast<cd>();
  const Eigen::MatrixXcd Z = Eigen::MatrixXcd::Zero(7, 7);
  const cd i2{0.0, 2.0};
  const Eigen::MatrixXcd blocks[4][4] = {
      {Z, Z, -i2 * B, -i2 * B},
      {Z, Z, i2 * B, i2 * B},
      {i2 * B, -i2 * B, 2.0 * i2 * A, Z},
      {i2 * B, -i2 * B, Z, -2.0 * i2 * A},
  };
  for (int r = 0; r < 4; ++r)
    for (int q = 0; q < 4; ++q) {
      CAPTURE(r);
      CAPTURE(q);
      const Eigen::MatrixXcd blk = m.block(7 * r, 7 * q, 7, 7);
      CHECK((blk - blocks[r][q]).norm() < 1e-14);
      for (int row = 0; row < 7; ++row) CHECK((blk.row(row).array().abs() > 0).count() <= 3);
    }

  const DephasingGenerator damped(c, 0.4);
  const Eigen::MatrixXcd diff = m - damped.dense(g);
  CHECK((diff - Eigen::MatrixXcd(damped.damping().cast<cd>().asDiagonal())).norm() < 1e-14);
}

TEST_CASE("closed quench conserves energy") {
  const ChainSpec c{9, Sector::OddPeriodic};
  const DephasingGenerator gen(c, 0.0);
  auto s = init_correlators(c, 5.0);
  const double g = 1.0;
  const double e0 = energy_from_correlators(s, g, c);
  const double h = 1e-3;
  Eigen::VectorXcd k1, k2, k3, k4;
  for (int n = 0; n < 1000; ++n) {
    gen.apply(g, s.y, k1);
    gen.apply(g, s.y + 0.5 * h * k1, k2);
    gen.apply(g, s.y + 0.5 * h * k2, k3);
    gen.apply(g, s.y + h * k3, k4);
    s.y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  CHECK(std::abs(energy_from_correlators(s, g, c) - e0) < 1e-7);
  CHECK(correlator_invariants(s).max() < 1e-10);
}

TEST_CASE("trajectories against the dense reference") {
  struct Case {
    double kappa, tau;
    const double* eps;
  };
  for (const auto& c : {Case{0.2, 2.0, oracle::kEpsDephasing}, Case{0.0, 2.0, oracle::kEpsNoneOdd}}) {
    CAPTURE(c.kappa);
    const Schedule s{c.tau, 5.0, 1e-2};
    const auto run = evolve_correlators(kOdd5, s, c.kappa, {200, 1});
    REQUIRE(run.energy.size() == 6);
    CHECK(std::abs(run.energy.front().epsilon) < 1e-9);
    for (int i = 0; i < 3; ++i) CHECK(std::abs(run.energy[3 + i].epsilon - c.eps[i]) < 1e-6);
    CHECK(run.worst.max() < 1e-8);
  }
}

TEST_CASE("invariants along a long dephasing run") {
  const ChainSpec c{51, Sector::OddPeriodic};
  const auto run = evolve_correlators(c, {20.0, 5.0, 1e-2}, 0.1, {100, 1});
  CHECK(run.worst.hermiticity < 1e-8);
  CHECK(run.worst.g_f_relation < 1e-8);
  CHECK(run.worst.k_i_relation < 1e-8);
  CHECK(run.worst.i0 < 1e-8);
  CHECK(run.worst.f0_imag < 1e-8);
  CHECK(run.worst.f0_range < 1e-8);
}

TEST_CASE("closed odd chain agrees with the even-chain modes") {
  const Schedule s{100.0, 5.0, 1e-2};
  const double odd = evolve_correlators({501, Sector::OddPeriodic}, s, 0.0, {0, 1}).energy.back().epsilon;
  const double even = evolve_chain_unitary({500, Sector::EvenAntiperiodic}, s, {0, 0}).back().epsilon;
  CHECK(odd == doctest::Approx(even).epsilon(0.02));
}
