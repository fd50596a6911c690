#include <cmath>
#include <numbers>

#include "doctest.h"
#include "dqa/errors.hpp"
#include "dqa/lattice.hpp"
#include "oracle_values.hpp"

using namespace dqa;
using std::numbers::pi;

namespace {
const ChainSpec kEven4{4, Sector::EvenAntiperiodic};
const ChainSpec kOdd3{3, Sector::OddPeriodic};
const ChainSpec kOdd5{5, Sector::OddPeriodic};
}  // namespace

TEST_CASE("chain validation rejects a parity mismatch") {
  CHECK_NOTHROW(kEven4.validate());
  CHECK_THROWS_AS((ChainSpec{5, Sector::EvenAntiperiodic}.validate()), ConfigError);
  CHECK_THROWS_AS((ChainSpec{4, Sector::OddPeriodic}.validate()), ConfigError);
  CHECK_THROWS_AS((ChainSpec{0, Sector::EvenAntiperiodic}.validate()), ConfigError);
}

TEST_CASE("schedule end points") {
  const Schedule s{10.0, 5.0, 1e-2};
  CHECK(s.t_in() == -50.0);
  CHECK(s.gamma(s.t_in()) == 5.0);
  CHECK(s.gamma(0.0) == 0.0);
  CHECK(s.steps() == 5000);
  CHECK(s.step() == doctest::Approx(1e-2).epsilon(1e-14));
  CHECK_THROWS_AS((Schedule{0.0, 5.0, 1e-2}.validate()), ConfigError);
  CHECK_THROWS_AS((Schedule{1.0, 5.0, -1.0}.validate()), ConfigError);
}

TEST_CASE("bath validation") {
  CHECK_THROWS_AS(BathSpec::decay(-0.1).validate(), ConfigError);
  CHECK_THROWS_AS((BathSpec{BathKind::Pump, 0.1, 0.5}.validate()), ConfigError);
  CHECK(BathSpec::pump_decay(0.1, 0.5).pump_rate() == doctest::Approx(0.05));
  CHECK(BathSpec::pump_decay(0.1, 0.5).decay_rate() == doctest::Approx(0.1));
  CHECK(parse_bath_kind("mixed") == BathKind::PumpDecay);
  CHECK_THROWS_AS(parse_bath_kind("thermal"), ConfigError);
  CHECK(bath_allowed_in(BathSpec::dephasing(0.1), Sector::OddPeriodic));
  CHECK_FALSE(bath_allowed_in(BathSpec::dephasing(0.1), Sector::EvenAntiperiodic));
  CHECK_FALSE(bath_allowed_in(BathSpec::decay(0.1), Sector::OddPeriodic));
}

TEST_CASE("mode grid") {
  const auto k4 = mode_grid(kEven4);
  REQUIRE(k4.size() == 2);
  CHECK(k4[0] == doctest::Approx(pi / 4));
  CHECK(k4[1] == doctest::Approx(3 * pi / 4));

  const auto k2 = mode_grid({2, Sector::EvenAntiperiodic});
  REQUIRE(k2.size() == 1);
  CHECK(k2[0] == doctest::Approx(pi / 2));

  const auto k10 = mode_grid({10, Sector::EvenAntiperiodic});
  REQUIRE(k10.size() == 5);
  CHECK(k10.back() == doctest::Approx(9 * pi / 10));
  for (std::size_t i = 1; i < k10.size(); ++i) CHECK(k10[i] > k10[i - 1]);

  CHECK_THROWS_AS(mode_grid(kOdd5), ConfigError);
}

TEST_CASE("A and B matrices") {
  SUBCASE("odd periodic, gamma 0") {
    const auto hm = build_ab(kOdd3, 0.0);
    for (int n = 0; n < 3; ++n) CHECK(hm.A(n, n) == 0.0);
    CHECK(hm.A(0, 1) == -0.5);
    CHECK(hm.A(1, 2) == -0.5);
    CHECK(hm.A(0, 2) == -0.5);
    CHECK(hm.A(2, 0) == -0.5);
    CHECK(hm.B(2, 0) == -0.5);
  }
  SUBCASE("even antiperiodic, gamma 2") {
    const auto hm = build_ab(kEven4, 2.0);
    for (int n = 0; n < 4; ++n) CHECK(hm.A(n, n) == -2.0);
    CHECK(hm.A(0, 3) == 0.5);
    CHECK(hm.A(3, 0) == 0.5);
    CHECK(hm.B(0, 1) == -0.5);
    CHECK(hm.B(1, 0) == 0.5);
    CHECK(hm.B(3, 0) == 0.5);
    CHECK(hm.A(0, 2) == 0.0);
  }
  for (int L : {2, 3, 4, 7, 10}) {
    const ChainSpec c{L, L % 2 ? Sector::OddPeriodic : Sector::EvenAntiperiodic};
    const auto hm = build_ab(c, 0.7);
    CHECK((hm.A - hm.A.transpose()).norm() == 0.0);
    CHECK((hm.B + hm.B.transpose()).norm() == 0.0);
  }
}

TEST_CASE("pair Hamiltonian") {
  const auto h0 = hk_matrix(pi / 2, 0.0);
  CHECK(h0(0, 3) == doctest::Approx(2.0));
  CHECK(h0(3, 0) == doctest::Approx(2.0));
  CHECK(h0.diagonal().norm() == doctest::Approx(0.0).epsilon(1e-14));

  const auto h1 = hk_matrix(pi / 4, 1.0);
  CHECK(h1(1, 1) == doctest::Approx(-2.0 * (1.0 + std::sqrt(2.0) / 2)));
  CHECK(h1(2, 2) == doctest::Approx(-2.0 * (1.0 + std::sqrt(2.0) / 2)));
  CHECK(h1(3, 3) == doctest::Approx(-4.0 * (1.0 + std::sqrt(2.0) / 2)));
  CHECK((h1 - h1.transpose()).norm() == 0.0);

  CHECK(mode_ground_energy(pi / 2, 0.0) == doctest::Approx(-2.0));
}

TEST_CASE("ground energy against the dense Fock-space reference") {
  CHECK(ground_energy(kEven4, 0.0) == doctest::Approx(oracle::kGroundL4Gamma0).epsilon(1e-12));
  CHECK(ground_energy(kEven4, 1.0) == doctest::Approx(oracle::kGroundL4Gamma1).epsilon(1e-12));
  CHECK(ground_energy(kEven4, 5.0) == doctest::Approx(oracle::kGroundL4Gamma5).epsilon(1e-12));
  CHECK(ground_energy(kOdd5, 0.0) == doctest::Approx(oracle::kGroundL5Gamma0).epsilon(1e-12));
  CHECK(ground_energy(kOdd5, 2.0) == doctest::Approx(oracle::kGroundL5Gamma2).epsilon(1e-12));
}

TEST_CASE("mode sum equals real-space diagonalization") {
  for (int L : {3, 4, 5, 7, 8}) {
    const ChainSpec c{L, L % 2 ? Sector::OddPeriodic : Sector::EvenAntiperiodic};
    for (double g : {0.0, 0.3, 1.0, 2.0, 5.0})
      CHECK(std::abs(ground_energy(c, g) - ground_energy_realspace(c, g)) < 1e-9);
  }
}

TEST_CASE("ground energy limits") {
  const ChainSpec big{1000, Sector::EvenAntiperiodic};
  // E0/L -> -Gamma - (1/pi) int_0^pi sqrt(1 + Gamma^2 + 2 Gamma cos k) dk
  CHECK(ground_energy(big, 0.0) / 1000 == doctest::Approx(-1.0).epsilon(1e-6));
  CHECK(ground_energy(big, 1.0) / 1000 == doctest::Approx(-4.0 / pi - 1.0).epsilon(1e-6));
  const double g = 50.0;
  CHECK(std::abs(ground_energy(big, g) / 1000 + 2 * g) < 1.0);

  double prev = ground_energy(big, 0.0);
  for (double x : {0.5, 1.0, 2.0, 5.0}) {
    const double e = ground_energy(big, x);
    CHECK(e <= prev);
    prev = e;
  }
}

TEST_CASE("Bogoliubov modes diagonalize the Nambu matrix") {
  const auto hm = build_ab(kOdd5, 2.0);
  const auto bm = bogoliubov_modes(hm);
  REQUIRE(bm.energies.size() == 5);
  for (int i = 0; i < 5; ++i) CHECK(bm.energies(i) > 0.0);
  // (U; V) orthonormal as a 2L x L isometry
  Eigen::MatrixXd W(10, 5);
  W << bm.U, bm.V;
  CHECK((W.transpose() * W - Eigen::MatrixXd::Identity(5, 5)).norm() < 1e-12);
}
