#pragma once

#include <span>
#include <vector>

namespace elastica::stencils {

/// Finite-difference weights for the `order`-th derivative at x = 0 from
/// samples at the given offsets (in units of the grid spacing), by
/// Fornberg's recursion. Multiply the weighted sum by h^{-order}.
std::vector<double> fornberg_weights(int order, std::span<const double> offsets);

/// One-sided weights using offsets 0, 1, ..., points-1.
std::vector<double> one_sided_weights(int order, int points);

/// Derivative of `order` at the left end (node 0) or the right end
/// (node n-1) of `values`, with the given number of one-sided points.
double left_derivative(std::span<const double> values, double h, int order, int points);
double right_derivative(std::span<const double> values, double h, int order, int points);

}  // namespace elastica::stencils
