#include "dqa/observables.hpp"

namespace dqa {

std::string_view to_string(Solver s) {
  switch (s) {
    case Solver::UnitaryBdg: return "unitary_bdg";
    case Solver::ModeLiouville: return "mode_liouville";
    case Solver::DephasingCorrelators: return "dephasing_corr";
    case Solver::DenseOracle: return "dense_oracle";
  }
  return "unknown";
}

}  // namespace dqa
