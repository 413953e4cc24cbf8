#include "elastica/stencils.hpp"

#include <cmath>
#include <stdexcept>

namespace elastica::stencils {

std::vector<double> fornberg_weights(int order, std::span<const double> offsets) {
  const int n = static_cast<int>(offsets.size());
  if (order < 0 || n <= order) {
    throw std::invalid_argument("fornberg_weights: need more points than the derivative order");
  }
  // c[j][k]: weight of node j for derivative k.
  std::vector<std::vector<double>> c(n, std::vector<double>(order + 1, 0.0));
  double c1 = 1.0;
  double c4 = offsets[0];
  c[0][0] = 1.0;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, order);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = offsets[i];
    for (int j = 0; j < i; ++j) {
      const double c3 = offsets[i] - offsets[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) {
          c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        }
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k) {
        c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      }
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(n);
  for (int j = 0; j < n; ++j) w[j] = c[j][order];
  return w;
}

std::vector<double> one_sided_weights(int order, int points) {
  std::vector<double> offsets(points);
  for (int j = 0; j < points; ++j) offsets[j] = j;
  return fornberg_weights(order, offsets);
}

double left_derivative(std::span<const double> values, double h, int order, int points) {
  if (static_cast<int>(values.size()) < points) {
    throw std::invalid_argument("left_derivative: too few samples");
  }
  const auto w = one_sided_weights(order, points);
  double acc = 0.0;
  for (int j = 0; j < points; ++j) acc += w[j] * values[j];
  return acc / std::pow(h, order);
}

double right_derivative(std::span<const double> values, double h, int order, int points) {
  const int n = static_cast<int>(values.size());
  if (n < points) {
    throw std::invalid_argument("right_derivative: too few samples");
  }
  // Mirror the stencil: offsets -j, so odd derivatives flip sign.
  const auto w = one_sided_weights(order, points);
  const double sign = (order % 2 == 0) ? 1.0 : -1.0;
  double acc = 0.0;
  for (int j = 0; j < points; ++j) acc += w[j] * values[n - 1 - j];
  return sign * acc / std::pow(h, order);
}

}  // namespace elastica::stencils
