#pragma once

#include "elastica/grid_curve.hpp"

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace elastica {

/// K(x, t) = (4 pi t)^{-1/2} exp(-x^2 / 4t). Throws Domain for t <= 0.
double heat_kernel(double x, double t);
double heat_kernel_dx(double x, double t);

/// Adaptive quadrature of int K dx and int |dK/dx| dx over |x| <= 12 sqrt(t).
struct KernelMoments {
  double mass = 0.0;
  double abs_slope = 0.0;
};
KernelMoments kernel_moments(double t);

struct KernelParams {
  int image_count = 5;    // periodic images |m| <= image_count
  int quad_nodes = 0;     // quadrature points per period 2L; 0 selects 4N
  double t_floor = 0.0;   // lags below this act as the identity; 0 selects spacing^2
  int time_slices = 64;

  /// Defaults filled in for a base grid of N intervals; throws Domain when
  /// image_count < 3, quad_nodes < 4N or quad_nodes is not a multiple of 2N.
  KernelParams resolved(int intervals, double length) const;

  /// exp(-(2 L M)^2 / 8t), the size of the first dropped image.
  double truncation_bound(double length, double t) const;
};

/// Samples of a 2L-periodic function at s_j = j * 2L / P, j = 0..P-1.
struct PeriodicSamples {
  double length = 1.0;  // half period
  Eigen::VectorXd values;

  int points() const noexcept { return static_cast<int>(values.size()); }
  double spacing() const noexcept { return 2.0 * length / points(); }
};

PeriodicSamples sample_periodic(const EvenPeriodicExtension& ext, int points);

/// Centered difference on the periodic grid.
Eigen::VectorXd periodic_derivative(const PeriodicSamples& f);

/// Image-sum convolution with K(., t) applied to all nodes at once through
/// the circulant structure (FFT).
class HeatConvolver {
 public:
  HeatConvolver(double length, int points, const KernelParams& params);

  /// Spectrum of the discrete kernel at lag t (all ones below t_floor).
  std::vector<std::complex<double>> kernel_spectrum(double t) const;
  std::vector<std::complex<double>> forward(const Eigen::VectorXd& values) const;
  Eigen::VectorXd inverse(const std::vector<std::complex<double>>& spectrum) const;
  Eigen::VectorXd apply(const Eigen::VectorXd& values, double t) const;

  int points() const noexcept { return points_; }
  double spacing() const noexcept { return 2.0 * length_ / points_; }
  const KernelParams& params() const noexcept { return params_; }

 private:
  double length_;
  int points_;
  KernelParams params_;
};

/// U(s, t) = int K(s - xi, t) phi0_ext(xi) dxi as a truncated image sum with
/// trapezoid quadrature; t = 0 returns the extension itself.
double free_heat(const EvenPeriodicExtension& ext, double s, double t, const KernelParams& params);

/// Slices of an iterate psi(s, t) on the periodic quadrature grid.
struct PicardState {
  double length = 1.0;
  std::vector<double> times;           // 0 = t_0 < ... < t_S
  std::vector<Eigen::VectorXd> psi;    // periodic samples per slice
  std::vector<Vec2> lambda;            // multipliers per slice (filled by the solver)
  int n = 0;
  double d0 = 0.0;
  double M0 = 0.0;
  double contraction_q = 0.0;

  int points() const noexcept { return psi.empty() ? 0 : static_cast<int>(psi.front().size()); }
  double spacing() const noexcept { return 2.0 * length / points(); }

  /// Restriction of slice k to [0, L] on the given grid, whose nodes must
  /// be quadrature nodes.
  AngleField slice_field(int k, const Grid& grid) const;

  static PicardState from_function(double length, int points, std::vector<double> times,
                                   const std::function<double(double, double)>& f);
};

/// h(psi) = lambda_1 sin psi - lambda_2 cos psi for every slice, with
/// lambda from the closed-form multipliers of the slice on [0, L].
/// Fills state.lambda. A pinned multiplier replaces the closed form.
std::vector<Eigen::VectorXd> source_slices(PicardState& state,
                                           const std::optional<Vec2>& fixed_lambda = std::nullopt);

/// Running bound check of the Duhamel term against t * C3 and
/// 2 sqrt(t / pi) * C3, C3 = sup |h| over the slices up to t.
struct DuhamelBounds {
  long evaluations = 0;
  long violations = 0;
  double worst_value_ratio = 0.0;  // max |H| / (t C3)
  double worst_slope_ratio = 0.0;  // max |d_s H| / (2 sqrt(t/pi) C3)
};

/// Duhamel term at every slice time and quadrature node: trapezoid in tau
/// over the stored slices of the spatial image-sum convolution of h.
std::vector<Eigen::VectorXd> duhamel_slices(const HeatConvolver& conv,
                                            const std::vector<Eigen::VectorXd>& sources,
                                            const std::vector<double>& times,
                                            DuhamelBounds* bounds = nullptr);

/// Pointwise Duhamel term at (s, t), t in (0, t_S]: trapezoid on the same
/// number of tau nodes over [0, t], h linear in time between stored slices,
/// direct image sum in space.
double duhamel(const PicardState& state, double s, double t, const KernelParams& params);

struct PicardReportRow {
  int n = 0;
  double increment_norm = 0.0;
  double q_n = 0.0;  // NaN for the first increment
  double apriori_q = 0.0;
};

struct PicardResult {
  PicardState state;
  std::vector<PicardReportRow> report;
  double t0 = 0.0;
  double C4 = 0.0;
  double apriori_q = 0.0;
  bool converged = false;
  bool class_ok = true;  // oscillation >= d0 and slope <= M0 on every slice
  double max_evenness_defect = 0.0;
  double max_boundary_slope = 0.0;
  DuhamelBounds bounds;
};

/// C4 (t0 + 2 sqrt(t0 / pi)).
double apriori_factor(double C4, double t0);

/// Lipschitz constant of psi -> h(psi) from the value + slope norm to the
/// sup norm, by difference quotients along random smooth even directions.
/// Returns the largest quotient times 1.5.
double estimate_lipschitz(const AngleField& phi0, const KernelParams& params, int directions = 8,
                          double eps = 1e-6, std::uint64_t seed = 7);

/// Largest t0 = L^2 / 16 / 2^j with apriori_factor(C4, t0) < 1.
double choose_t0(double length, double C4);

/// psi_{n+1} = U_{phi0} + H(psi_n) from psi_0 = U_{phi0} until the
/// increment in the value + slope norm drops to tol. Throws NoContraction
/// after three consecutive ratios q_n >= 1.
/// A pinned multiplier turns the source into a fixed linear forcing (zero
/// gives the pure heat flow).
PicardResult picard_solve(const AngleField& phi0, const ConstraintSpec& constraint, double t0,
                          int n_max, double tol, const KernelParams& params = {},
                          const std::optional<Vec2>& fixed_lambda = std::nullopt);

}  // namespace elastica
