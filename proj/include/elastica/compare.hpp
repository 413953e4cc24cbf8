#pragma once

#include "elastica/flow_solver.hpp"
#include "elastica/heat_picard.hpp"
#include "elastica/manifest.hpp"

#include <vector>

namespace elastica {

struct ComparisonRow {
  double t = 0.0;
  double sup_diff = 0.0;
};

struct Comparison {
  PicardResult picard;
  FlowTrajectory flow;
  std::vector<ComparisonRow> rows;  // one per Picard time slice
};

/// Picard solution and finite-difference flow on [0, t0], compared in the
/// sup norm at every Picard slice. The flow step is h^2/4 shrunk so that
/// the slices fall on step boundaries. A zero opts.t0 selects the largest
/// halving of L^2/16 that passes the contraction test.
Comparison compare_flow_picard(const AngleField& phi0, const ConstraintSpec& constraint,
                               const FlowConfig& flow, const PicardOptions& opts);

}  // namespace elastica
