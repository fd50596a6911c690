#pragma once

#include <string_view>
#include <vector>

namespace dqa {

/// One row of an energy trajectory. Energies are totals for the chain;
/// epsilon is the excess energy per site.
struct EnergySample {
  double t = 0.0;
  double gamma = 0.0;
  double energy = 0.0;
  double ground_energy = 0.0;
  double epsilon = 0.0;
};

using EnergyTrajectory = std::vector<EnergySample>;

enum class Solver { UnitaryBdg, ModeLiouville, DephasingCorrelators, DenseOracle };

std::string_view to_string(Solver s);

struct EvolveOptions {
  int stride = 100;  // emit a sample every `stride` integrator steps (plus the final one)
  int workers = 1;
};

inline double excess_per_site(double energy, double ground, int L) { return (energy - ground) / L; }

}  // namespace dqa
