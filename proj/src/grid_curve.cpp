#include "elastica/grid_curve.hpp"

#include "elastica/errors.hpp"
#include "elastica/stencils.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace elastica {

namespace {

constexpr int kBoundaryStencilPoints = 7;

void require_finite(const Eigen::VectorXd& v, const char* what) {
  if (!v.allFinite()) {
    throw Error(ErrorKind::InvalidState, std::string(what) + ": non-finite sample");
  }
}

}  // namespace

Grid::Grid(double length, int intervals)
    : length_(length), intervals_(intervals), spacing_(length / intervals) {
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw Error(ErrorKind::InvalidState, "grid length must be positive and finite");
  }
  if (intervals < kMinIntervals) {
    std::ostringstream os;
    os << "grid needs at least " << kMinIntervals << " intervals, got " << intervals;
    throw Error(ErrorKind::InvalidState, os.str());
  }
}

Eigen::VectorXd Grid::nodes() const {
  Eigen::VectorXd s(size());
  for (int i = 0; i < size(); ++i) s[i] = node(i);
  return s;
}

Eigen::VectorXd Grid::weights() const {
  Eigen::VectorXd w = Eigen::VectorXd::Constant(size(), spacing_);
  w[0] = w[intervals_] = 0.5 * spacing_;
  return w;
}

AngleField AngleField::make(const Grid& grid, Eigen::VectorXd phi, double t) {
  if (phi.size() != grid.size()) {
    std::ostringstream os;
    os << "angle field has " << phi.size() << " samples, grid has " << grid.size() << " nodes";
    throw Error(ErrorKind::InvalidState, os.str());
  }
  require_finite(phi, "angle field");
  if (!std::isfinite(t)) throw Error(ErrorKind::InvalidState, "angle field: non-finite time");
  return AngleField{grid, std::move(phi), t};
}

AngleField AngleField::sample(const Grid& grid, const std::function<double(double)>& f, double t) {
  Eigen::VectorXd phi(grid.size());
  for (int i = 0; i < grid.size(); ++i) phi[i] = f(grid.node(i));
  return make(grid, std::move(phi), t);
}

ConstraintSpec ConstraintSpec::make(const Vec2& delta_p, double length) {
  if (!delta_p.allFinite() || !std::isfinite(length) || !(length > 0.0)) {
    throw Error(ErrorKind::Constraint, "constraint needs finite delta_p and positive length");
  }
  ConstraintSpec c{delta_p, length};
  if (!(c.slack() > 0.0)) {
    std::ostringstream os;
    os << "inadmissible constraint: the length L = " << length
       << " must strictly exceed the endpoint distance |delta_p| = " << delta_p.norm()
       << " (slack L - |delta_p| = " << c.slack() << ")";
    throw Error(ErrorKind::Constraint, os.str());
  }
  return c;
}

double trapezoid(const Grid& grid, const Eigen::Ref<const Eigen::VectorXd>& values) {
  const int n = grid.intervals();
  double interior = 0.0;
  for (int i = 1; i < n; ++i) interior += values[i];
  return grid.spacing() * (interior + 0.5 * (values[0] + values[n]));
}

Vec2 tangent_integral(const AngleField& field) {
  const int n = field.grid.intervals();
  double cx = 0.0, cy = 0.0;
  for (int i = 1; i < n; ++i) {
    cx += std::cos(field.phi[i]);
    cy += std::sin(field.phi[i]);
  }
  cx += 0.5 * (std::cos(field.phi[0]) + std::cos(field.phi[n]));
  cy += 0.5 * (std::sin(field.phi[0]) + std::sin(field.phi[n]));
  return field.grid.spacing() * Vec2(cx, cy);
}

Eigen::VectorXd differentiate(const Grid& grid, const Eigen::Ref<const Eigen::VectorXd>& v) {
  const int n = grid.intervals();
  const double inv2h = 0.5 / grid.spacing();
  Eigen::VectorXd d(grid.size());
  d[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) * inv2h;
  for (int i = 1; i < n; ++i) d[i] = (v[i + 1] - v[i - 1]) * inv2h;
  d[n] = (3.0 * v[n] - 4.0 * v[n - 1] + v[n - 2]) * inv2h;
  return d;
}

Eigen::VectorXd signed_curvature(const AngleField& field) {
  require_finite(field.phi, "signed_curvature");
  return differentiate(field.grid, field.phi);
}

double bending_energy(const AngleField& field) {
  const Eigen::VectorXd k = signed_curvature(field);
  return 0.5 * trapezoid(field.grid, k.array().square().matrix());
}

double curvature_l2_norm(const AngleField& field) {
  return std::sqrt(2.0 * bending_energy(field));
}

Vec2 constraint_residual(const AngleField& field, const ConstraintSpec& constraint) {
  return tangent_integral(field) - constraint.delta_p;
}

CurveSample reconstruct_curve(const AngleField& field, const Vec2& p_minus) {
  require_finite(field.phi, "reconstruct_curve");
  const int n = field.grid.intervals();
  const double h = field.grid.spacing();
  CurveSample out;
  out.s = field.grid.nodes();
  out.positions.resize(n + 1);
  out.tangents.resize(n + 1);
  out.normals.resize(n + 1);
  for (int i = 0; i <= n; ++i) {
    const double c = std::cos(field.phi[i]);
    const double s = std::sin(field.phi[i]);
    out.tangents[i] = Vec2(c, s);
    out.normals[i] = Vec2(-s, c);
  }
  out.positions[0] = p_minus;
  for (int i = 0; i < n; ++i) {
    out.positions[i + 1] = out.positions[i] + 0.5 * h * (out.tangents[i] + out.tangents[i + 1]);
  }
  out.signed_curvature = signed_curvature(field);
  return out;
}

Vec2 boundary_curvature(const AngleField& field) {
  const std::span<const double> phi(field.phi.data(), static_cast<std::size_t>(field.phi.size()));
  const double h = field.grid.spacing();
  const int points = std::min<int>(kBoundaryStencilPoints, field.grid.size());
  return Vec2(stencils::left_derivative(phi, h, 1, points),
              stencils::right_derivative(phi, h, 1, points));
}

EvenPeriodicExtension::EvenPeriodicExtension(AngleField phi0) : field_(std::move(phi0)) {}

double EvenPeriodicExtension::sample(int i) const {
  // Even reflection about both ends of [0, L].
  const int n = field_.grid.intervals();
  const int period = 2 * n;
  i %= period;
  if (i < 0) i += period;
  if (i > n) i = period - i;
  return field_.phi[i];
}

double EvenPeriodicExtension::operator()(double s) const {
  const double L = field_.grid.length();
  const double h = field_.grid.spacing();
  const int n = field_.grid.intervals();
  double r = std::fmod(s, 2.0 * L);
  if (r < 0.0) r += 2.0 * L;
  if (r > L) r = 2.0 * L - r;

  const double x = r / h;
  const double nearest = std::round(x);
  if (std::abs(x - nearest) <= 1e-9 * std::max(1.0, x)) {
    return sample(static_cast<int>(nearest));
  }
  int i = static_cast<int>(std::floor(x));
  i = std::clamp(i, 0, n - 1);
  const double u = x - i;
  // Cubic Lagrange through nodes i-1, i, i+1, i+2.
  const double fm = sample(i - 1), f0 = sample(i), f1 = sample(i + 1), f2 = sample(i + 2);
  const double wm = -u * (u - 1.0) * (u - 2.0) / 6.0;
  const double w0 = (u + 1.0) * (u - 1.0) * (u - 2.0) / 2.0;
  const double w1 = -(u + 1.0) * u * (u - 2.0) / 2.0;
  const double w2 = (u + 1.0) * u * (u - 1.0) / 6.0;
  return wm * fm + w0 * f0 + w1 * f1 + w2 * f2;
}

EvenPeriodicExtension extend_even_periodic(const AngleField& phi0) {
  return EvenPeriodicExtension(phi0);
}

}  // namespace elastica
