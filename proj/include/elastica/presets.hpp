#pragma once

#include "elastica/grid_curve.hpp"
#include "elastica/manifest.hpp"

#include <cstdint>
#include <filesystem>

namespace elastica {

/// C-infinity step, 0 for x <= 0 and 1 for x >= 1, with every derivative
/// vanishing at both ends.
double smooth_step(double x);

/// exp(-1/(1 - x^2)) on (-1, 1), zero outside.
double smooth_bump(double x);

/// Builds phi0 for the named preset. Open presets have the form
/// theta + a * shape(s) + fixed interior bumps; (theta, a) are fitted by a
/// damped 2D Newton to the endpoint constraint (residual <= 1e-9 L).
/// Throws PresetInfeasible when the fit fails within 50 iterations.
AngleField make_initial(const InitialData& init, const Grid& grid, const ConstraintSpec& constraint,
                        std::uint64_t seed);

/// Fits theta and a in phi = theta + a * shape + offset so that the
/// trapezoid quadrature of T equals delta_p.
Eigen::VectorXd fit_constraint(const Grid& grid, const Eigen::VectorXd& shape,
                               const Eigen::VectorXd& offset, const ConstraintSpec& constraint,
                               double a_guess = 0.0);

/// AngleField files: {"L": .., "N": .., "t": .., "phi": [..]}.
AngleField read_angle_field(const std::filesystem::path& path);
void write_angle_field(const AngleField& field, const std::filesystem::path& path);

}  // namespace elastica
