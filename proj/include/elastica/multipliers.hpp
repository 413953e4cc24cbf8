#pragma once

#include "elastica/grid_curve.hpp"

namespace elastica {

enum class MultiplierMethod { ContinuousFormula, DiscreteConstraint };

struct MultiplierState {
  Mat2 A = Mat2::Zero();
  double det_A = 0.0;
  Vec2 lambda = Vec2::Zero();
  MultiplierMethod method = MultiplierMethod::ContinuousFormula;
};

/// Constructive lower bound on det A_T for a field with curvature L2 norm M.
struct DetBoundCertificate {
  double delta_L = 0.0;
  double delta_phi = 0.0;
  double M = 0.0;
  double C0 = 1.0;  // Morrey constant in one dimension
  double delta0 = 0.0;
  double C1 = 0.0;
  bool delta0_clamped = false;
};

/// A time step whose outcome is affine in the multiplier:
///   phi_new(lambda) = base + lambda_1 * dir1 + lambda_2 * dir2.
/// Both the explicit and the IMEX step have this form.
struct AffineUpdate {
  Eigen::VectorXd base;
  Eigen::VectorXd dir1;
  Eigen::VectorXd dir2;

  Eigen::VectorXd apply(const Vec2& lambda) const {
    return base + lambda[0] * dir1 + lambda[1] * dir2;
  }
};

/// Quadrature-noise floor below which the Gram matrix counts as singular.
inline double default_det_floor(double length) { return 1e-10 * length * length; }

/// A_T = [[int sin^2, -int sin cos], [-int sin cos, int cos^2]] by trapezoid.
Mat2 gram_matrix(const AngleField& field);

double det_gram(const Mat2& A);

/// lambda = A_T^{-1} (int k^2 cos(phi), int k^2 sin(phi)), the closed form
/// valid under the hinged boundary condition. Throws DegenerateGram when
/// det A_T falls below the floor (a negative floor selects the default).
MultiplierState lambdas_continuous(const AngleField& field, double det_floor = -1.0);

/// lambda chosen so that the trapezoid quadrature of T is unchanged by the
/// update: sum_i w_i (T(phi_new_i) - T(phi_i)) = 0. The linearised 2x2
/// system (a dt-scaled A_T for the explicit step) gives the starting value;
/// Newton then removes the quadratic remainder, so the quadrature of T is
/// preserved to rounding.
MultiplierState lambdas_discrete(const AngleField& field, const AffineUpdate& update,
                                 double det_floor = -1.0);

/// Certificate from the slack, the length, and an upper bound M on the
/// curvature L2 norm.
DetBoundCertificate det_bound_certificate(double delta_L, double length, double M);

/// Certificate with M = current curvature L2 norm of the field.
DetBoundCertificate det_lower_bound(const AngleField& field, const ConstraintSpec& constraint);

}  // namespace elastica
