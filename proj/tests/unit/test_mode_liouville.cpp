#include <cmath>
#include <numbers>

#include "doctest.h"
#include "dqa/errors.hpp"
#include "dqa/mode_liouville.hpp"
#include "dqa/unitary_bdg.hpp"
#include "oracle_values.hpp"

using namespace dqa;
using std::numbers::pi;
using cd = std::complex<double>;

namespace {

const ChainSpec kEven4{4, Sector::EvenAntiperiodic};

Vector16cd trace_vector() {
  Vector16cd t = Vector16cd::Zero();
  for (int m = 0; m < 4; ++m) t(5 * m) = 1.0;
  return t;
}

double occupation_k(const ModeState& s) {
  const auto r = s.matrix();
  return (r(1, 1) + r(3, 3)).real();
}

std::vector<BathSpec> mode_baths() {
  return {BathSpec::none(), BathSpec::decay(0.3), BathSpec::pump(0.2), BathSpec::pump_decay(0.1, 0.4),
          BathSpec::pump_decay(0.1, 1.0)};
}

}  // namespace

TEST_CASE("pair annihilators anticommute") {
  const Eigen::Matrix4d a = pair_annihilator_k();
  const Eigen::Matrix4d b = pair_annihilator_minus_k();
  const Eigen::Matrix4d id = Eigen::Matrix4d::Identity();
  CHECK((a * a.transpose() + a.transpose() * a - id).norm() == 0.0);
  CHECK((b * b.transpose() + b.transpose() * b - id).norm() == 0.0);
  CHECK((a * b + b * a).norm() == 0.0);
  CHECK((a * b.transpose() + b.transpose() * a).norm() == 0.0);
  // |1_k 1_-k> = c+_k c+_-k |0>
  Eigen::Vector4d vac = Eigen::Vector4d::Unit(0);
  CHECK((a.transpose() * b.transpose() * vac - Eigen::Vector4d::Unit(3)).norm() == 0.0);
}

TEST_CASE("vectorization is row-major") {
  Eigen::Matrix4cd r;
  for (int m = 0; m < 4; ++m)
    for (int n = 0; n < 4; ++n) r(m, n) = cd(m, n);
  const auto s = ModeState::from_matrix(0.1, r);
  CHECK(s.rho(4 * 2 + 3) == cd(2, 3));
  CHECK((s.matrix() - r).norm() == 0.0);
}

TEST_CASE("closed generator is the commutator") {
  const double k = 0.9, g = 1.3;
  const Eigen::Matrix4cd h = hk_matrix(k, g).cast<cd>();
  const Eigen::Matrix4cd id = Eigen::Matrix4cd::Identity();
  Matrix16cd expected;
  const cd i{0.0, 1.0};
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c)
        for (int d = 0; d < 4; ++d) expected(4 * a + b, 4 * c + d) = i * (id(a, c) * h(b, d) - h(a, c) * id(b, d));
  CHECK((liouvillian_matrix(k, g, BathSpec::none()) - expected).norm() < 1e-14);
}

TEST_CASE("trace preservation") {
  const Vector16cd t = trace_vector();
  for (const auto& bath : mode_baths())
    for (double k : {0.2, 1.6, 3.0})
      for (double g : {0.0, 1.0, 5.0}) CHECK((t.transpose() * liouvillian_matrix(k, g, bath)).norm() < 1e-12);
}

TEST_CASE("sparse generator matches the dense one") {
  for (const auto& bath : mode_baths()) {
    const ModeGenerator gen(1.1, bath);
    CHECK(gen.nonzeros() < 256);
    for (double g : {0.0, 0.7, 4.0}) {
      CHECK((gen.dense(g) - liouvillian_matrix(1.1, g, bath)).norm() < 1e-13);
      Vector16cd x = Vector16cd::Random();
      Vector16cd y;
      gen.apply(g, x, y);
      CHECK((y - liouvillian_matrix(1.1, g, bath) * x).norm() < 1e-12);
    }
  }
}

TEST_CASE("dephasing is not a mode bath") {
  CHECK_THROWS_AS(liouvillian_matrix(1.0, 0.0, BathSpec::dephasing(0.1)), ConfigError);
  CHECK_THROWS_AS(ModeGenerator(1.0, BathSpec::dephasing(0.1)), ConfigError);
}

TEST_CASE("steady states against the reference null vectors") {
  SUBCASE("decay") {
    const auto s = steady_state(pi / 4, 0.0, BathSpec::decay(0.1));
    CHECK(mode_energy(s, 0.0) == doctest::Approx(oracle::kSteadyDecayEnergy).epsilon(1e-9));
    CHECK(occupation_k(s) == doctest::Approx(oracle::kSteadyDecayOccupation).epsilon(1e-9));
  }
  SUBCASE("pump") {
    const auto s = steady_state(pi / 4, 0.0, BathSpec::pump(0.1));
    CHECK(mode_energy(s, 0.0) == doctest::Approx(oracle::kSteadyPumpEnergy).epsilon(1e-9));
    CHECK(occupation_k(s) == doctest::Approx(oracle::kSteadyPumpOccupation).epsilon(1e-9));
    // The pair coupling 2 sin k competes with the pump; at k = pi/2 the mode
    // is half filled, not filled.
    const auto h = steady_state(pi / 2, 0.0, BathSpec::pump(0.1));
    CHECK(occupation_k(h) == doctest::Approx(oracle::kSteadyPumpHalfPiOccupation).epsilon(1e-9));
    CHECK(std::abs(mode_energy(h, 0.0) - oracle::kSteadyPumpHalfPiEnergy) < 1e-9);
  }
  SUBCASE("balanced pump and decay is maximally mixed") {
    const auto s = steady_state(pi / 4, 0.0, BathSpec::pump_decay(0.1, 1.0));
    CHECK((s.matrix() - 0.25 * Eigen::Matrix4cd::Identity()).norm() < 1e-10);
    CHECK(mode_energy(s, 0.0) == doctest::Approx(oracle::kSteadyBalancedEnergy).epsilon(1e-9));
  }
  SUBCASE("far from the critical point the bath wins") {
    // For Gamma >> 1 the pair levels are nearly diagonal: decay empties the
    // mode, pump fills it.
    CHECK(occupation_k(steady_state(1.0, 50.0, BathSpec::decay(0.1))) < 1e-3);
    CHECK(occupation_k(steady_state(1.0, 50.0, BathSpec::pump(0.1))) > 1 - 1e-3);
  }
  SUBCASE("residual and positivity") {
    for (const auto& bath : {BathSpec::decay(0.05), BathSpec::pump(0.3), BathSpec::pump_decay(0.1, 0.5)}) {
      const auto s = steady_state(2.0, 0.4, bath);
      CHECK((liouvillian_matrix(2.0, 0.4, bath) * s.rho).norm() < 1e-10);
      const auto inv = mode_invariants(s);
      CHECK(inv.trace_error < 1e-12);
      CHECK(inv.hermiticity_error < 1e-12);
      CHECK(inv.min_eigenvalue > -1e-12);
    }
  }
  CHECK_THROWS_AS(steady_state(1.0, 0.0, BathSpec::none()), ConfigError);
}

TEST_CASE("infinitely slow limit") {
  const ChainSpec c{256, Sector::EvenAntiperiodic};
  CHECK(adiabatic_limit_excess(BathSpec::decay(0.1), c) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(adiabatic_limit_excess(BathSpec::pump(0.1), c) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(adiabatic_limit_excess(BathSpec::pump_decay(0.1, 0.5), c) == doctest::Approx(1.0).epsilon(1e-9));
  for (double g : {0.0, 0.5, 1.0, 2.0, 5.0})
    CHECK(std::abs(steady_state_energy(BathSpec::pump_decay(0.1, 1.0), c, g)) < 1e-8);
}

TEST_CASE("ground state and initial excess") {
  for (double k : {0.3, 2.2}) {
    const auto s = mode_ground_state(k, 5.0);
    CHECK(mode_energy(s, 5.0) == doctest::Approx(mode_ground_energy(k, 5.0)).epsilon(1e-13));
  }
  std::vector<ModeState> states;
  for (double k : mode_grid(kEven4)) states.push_back(mode_ground_state(k, 5.0));
  CHECK(std::abs(mode_excess(states, 5.0, kEven4)) < 1e-12);
}

TEST_CASE("closed limit reproduces the Bogoliubov-de Gennes modes") {
  const Schedule s{4.0, 5.0, 1e-2};
  for (double k : {0.2, 1.2, 2.7}) {
    const auto m = evolve_mode(k, s, BathSpec::none(), 0);
    const auto b = evolve_bdg(init_mode_ground(k, 5.0), s, 0);
    CHECK(std::abs(mode_energy(m.states.back(), 0.0) - dqa::mode_energy(b.states.back(), 0.0)) < 1e-7);
  }
}

TEST_CASE("invariants along trajectories") {
  const Schedule s{3.0, 5.0, 1e-2};
  for (const auto& bath : mode_baths()) {
    for (double k : {0.1, 1.5, 3.0}) {
      const auto traj = evolve_mode(k, s, bath, 25);
      CHECK(traj.worst.trace_error < 1e-8);
      CHECK(traj.worst.hermiticity_error < 1e-8);
      CHECK(traj.worst.min_eigenvalue > -1e-8);
      CHECK(traj.worst.parity_leak < 1e-8);
    }
  }
}

TEST_CASE("chain runs against the dense reference") {
  struct Case {
    ChainSpec chain;
    BathSpec bath;
    double tau;
    const double* eps;
  };
  const Case cases[] = {
      {kEven4, BathSpec::decay(0.1), 5.0, oracle::kEpsDecay},
      {kEven4, BathSpec::pump(0.1), 1.0, oracle::kEpsPump},
      {kEven4, BathSpec::pump_decay(0.2, 0.5), 2.0, oracle::kEpsMixed},
      {{6, Sector::EvenAntiperiodic}, BathSpec::decay(0.05), 1.0, oracle::kEpsDecayL6},
  };
  for (const auto& c : cases) {
    CAPTURE(to_string(c.bath.kind));
    const Schedule s{c.tau, 5.0, 1e-2};
    const int stride = static_cast<int>(std::lround(100 * c.tau));
    const auto traj = evolve_chain_modes(c.chain, s, c.bath, {stride, 1});
    REQUIRE(traj.size() == 6);
    CHECK(std::abs(traj.front().epsilon) < 1e-9);
    for (int i = 0; i < 3; ++i) CHECK(std::abs(traj[3 + i].epsilon - c.eps[i]) < 1e-6);
  }
}

TEST_CASE("slow pump keeps modes near their steady states") {
  const BathSpec bath = BathSpec::pump(0.01);
  const Schedule s{1000.0, 5.0, 1e-2};
  auto deviation = [&](double k, const ModeTrajectory& traj, std::size_t i) {
    const auto ss = steady_state(k, s.gamma(traj.t[i]), bath);
    return (traj.states[i].matrix() - ss.matrix()).cwiseAbs().maxCoeff();
  };

  // Gapped all along the ramp: follows the steady state closely.
  const double soft = pi / 64;
  const auto a = evolve_mode(soft, s, bath, 50000);
  REQUIRE(a.states.size() == 11);
  for (std::size_t i = 1; i < a.states.size(); ++i) CHECK(deviation(soft, a, i) < 1e-3);

  // Next to k = pi the gap closes at Gamma = 1: the mode lags there and
  // relaxes back onto the steady state by the end of the ramp.
  const double hard = pi * (1.0 - 1.0 / 64);
  const auto b = evolve_mode(hard, s, bath, 50000);
  for (std::size_t i = 1; i < b.states.size(); ++i) {
    const double g = s.gamma(b.t[i]);
    CAPTURE(g);
    if (g >= 2.0 || g == 0.0) CHECK(deviation(hard, b, i) < 1e-3);
    if (g == 1.0) CHECK(deviation(hard, b, i) > 0.1);
  }
}
