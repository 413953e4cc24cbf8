#pragma once

#include <Eigen/Dense>

#include <functional>
#include <vector>

namespace elastica {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

/// Whether the curve is open with hinged ends or closed. In closed mode the
/// last node is identified with the first one, offset by the winding
/// phi_N - phi_0 (a multiple of 2*pi for a smooth closed curve).
enum class CurveMode { OpenHinged, ClosedPeriodic };

/// Uniform arclength grid s_i = i*h on [0, L], i = 0..N.
class Grid {
 public:
  static constexpr int kMinIntervals = 8;

  Grid(double length, int intervals);

  double length() const noexcept { return length_; }
  int intervals() const noexcept { return intervals_; }
  int size() const noexcept { return intervals_ + 1; }
  double spacing() const noexcept { return spacing_; }

  /// Node i; the last node is L exactly.
  double node(int i) const noexcept {
    return i == intervals_ ? length_ : i * spacing_;
  }

  /// Composite trapezoid weight of node i.
  double weight(int i) const noexcept {
    return (i == 0 || i == intervals_) ? 0.5 * spacing_ : spacing_;
  }

  Eigen::VectorXd nodes() const;
  Eigen::VectorXd weights() const;

  friend bool operator==(const Grid& a, const Grid& b) noexcept {
    return a.length_ == b.length_ && a.intervals_ == b.intervals_;
  }

 private:
  double length_;
  int intervals_;
  double spacing_;
};

/// Tangent-angle samples on a grid at time t. Angles are stored unwrapped.
struct AngleField {
  Grid grid;
  Eigen::VectorXd phi;
  double t = 0.0;

  /// Validating constructor: sizes must agree and all samples be finite.
  static AngleField make(const Grid& grid, Eigen::VectorXd phi, double t = 0.0);

  static AngleField sample(const Grid& grid, const std::function<double(double)>& f,
                           double t = 0.0);
};

/// Endpoint displacement p_+ - p_- for a curve of length L. The admissible
/// class needs a strictly positive slack L - |delta_p|.
struct ConstraintSpec {
  Vec2 delta_p = Vec2::Zero();
  double length = 1.0;

  double slack() const noexcept { return length - delta_p.norm(); }

  static ConstraintSpec make(const Vec2& delta_p, double length);
};

struct CurveSample {
  Eigen::VectorXd s;
  std::vector<Vec2> positions;
  std::vector<Vec2> tangents;
  std::vector<Vec2> normals;
  Eigen::VectorXd signed_curvature;
};

/// Composite trapezoid rule of nodal values on the grid.
double trapezoid(const Grid& grid, const Eigen::Ref<const Eigen::VectorXd>& values);

/// Trapezoid quadrature of T = (cos phi, sin phi).
Vec2 tangent_integral(const AngleField& field);

/// k = d(phi)/ds: centered differences inside, second-order one-sided at the ends.
Eigen::VectorXd signed_curvature(const AngleField& field);

/// Derivative of nodal values with the same stencils as signed_curvature.
Eigen::VectorXd differentiate(const Grid& grid, const Eigen::Ref<const Eigen::VectorXd>& values);

/// 1/2 int k^2 ds by the trapezoid rule.
double bending_energy(const AngleField& field);

/// L2 norm of d(phi)/ds by the trapezoid rule, i.e. sqrt(2 * bending_energy).
double curvature_l2_norm(const AngleField& field);

/// Trapezoid quadrature of T minus delta_p.
Vec2 constraint_residual(const AngleField& field, const ConstraintSpec& constraint);

/// Curve from tangent angles: f_0 = p_minus, trapezoid increments.
CurveSample reconstruct_curve(const AngleField& field, const Vec2& p_minus);

/// Boundary curvature k(0), k(L) from high-order one-sided stencils.
/// Smooth fields satisfying the hinged condition have all odd derivatives
/// of phi vanishing at the ends, so this estimate is accurate to O(h^7).
Vec2 boundary_curvature(const AngleField& field);

/// phi0 reflected evenly about s = 0 and extended 2L-periodically. Between
/// nodes the samples are interpolated by local cubics that see the same
/// reflection, so evaluation at a node returns the stored sample exactly.
class EvenPeriodicExtension {
 public:
  explicit EvenPeriodicExtension(AngleField phi0);

  double operator()(double s) const;
  double period() const noexcept { return 2.0 * field_.grid.length(); }
  const AngleField& field() const noexcept { return field_; }

 private:
  double sample(int i) const;

  AngleField field_;
};

EvenPeriodicExtension extend_even_periodic(const AngleField& phi0);

}  // namespace elastica
