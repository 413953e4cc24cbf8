#pragma once

#include "elastica/flow_solver.hpp"

#include <filesystem>
#include <iosfwd>

namespace elastica {

/// curves.svg (stored snapshots, at most 60 evenly strided, blue to red in t), energy.svg and
/// residual.svg (log scale). Output depends only on the trajectory. An empty
/// trajectory writes nothing and prints a warning to `warn`.
/// Returns the number of files written.
int emit_plots(const FlowTrajectory& traj, const std::filesystem::path& dir, std::ostream& warn);

}  // namespace elastica
