#pragma once

#include <cstdint>

#include "dqa/lattice.hpp"

namespace dqa::detail {

// Step index i counts completed steps, 0..n. The initial and final states are
// always sampled.
inline bool is_sample_step(std::int64_t i, std::int64_t n, int stride) {
  return i == 0 || i == n || (stride > 0 && i % stride == 0);
}

inline std::int64_t sample_count(std::int64_t n, int stride) {
  if (stride <= 0) return 2;
  return n / stride + 1 + (n % stride != 0 ? 1 : 0);
}

// Classical RK4 over the schedule, t_in -> 0. rhs(t, y, dy) writes dy;
// on_sample(step, t, y) is called at sample steps. The last step lands on t = 0
// exactly.
template <class State, class Rhs, class OnSample>
void rk4_drive(const Schedule& schedule, int stride, State& y, Rhs&& rhs, OnSample&& on_sample, int substeps = 1) {
  schedule.validate();
  const std::int64_t n = schedule.steps();
  const double h = schedule.step();
  const double t0 = schedule.t_in();
  State k1 = y, k2 = y, k3 = y, k4 = y, tmp = y;
  on_sample(std::int64_t{0}, t0, y);
  for (std::int64_t i = 0; i < n; ++i) {
    // Substeps refine the integration without moving the sample grid.
    const double hs = h / static_cast<double>(substeps);
    for (int j = 0; j < substeps; ++j) {
      const double t = t0 + static_cast<double>(i) * h + static_cast<double>(j) * hs;
      rhs(t, y, k1);
      tmp = y + (0.5 * hs) * k1;
      rhs(t + 0.5 * hs, tmp, k2);
      tmp = y + (0.5 * hs) * k2;
      rhs(t + 0.5 * hs, tmp, k3);
      tmp = y + hs * k3;
      rhs(t + hs, tmp, k4);
      y += (hs / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    const std::int64_t done = i + 1;
    if (is_sample_step(done, n, stride)) {
      const double t_now = done == n ? 0.0 : t0 + static_cast<double>(done) * h;
      on_sample(done, t_now, y);
    }
  }
}

}  // namespace dqa::detail
