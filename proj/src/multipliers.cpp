#include "elastica/multipliers.hpp"

#include "elastica/errors.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace elastica {

namespace {

double resolve_floor(double det_floor, double length) {
  return det_floor < 0.0 ? default_det_floor(length) : det_floor;
}

[[noreturn]] void throw_degenerate(double det, double floor) {
  std::ostringstream os;
  os.precision(6);
  os << "degenerate Gram matrix: det A_T = " << det << " below floor " << floor
     << " (tangent direction nearly constant)";
  throw Error(ErrorKind::DegenerateGram, os.str());
}

struct Moments {
  double ss = 0.0, sc = 0.0, cc = 0.0;  // int sin^2, int sin cos, int cos^2
};

Moments trig_moments(const AngleField& field) {
  const Grid& g = field.grid;
  Moments m;
  for (int i = 0; i < g.size(); ++i) {
    const double w = g.weight(i);
    const double s = std::sin(field.phi[i]);
    const double c = std::cos(field.phi[i]);
    m.ss += w * s * s;
    m.sc += w * s * c;
    m.cc += w * c * c;
  }
  return m;
}

Mat2 to_gram(const Moments& m) {
  Mat2 A;
  A << m.ss, -m.sc, -m.sc, m.cc;
  return A;
}

// sum_i w_i T(values_i) and the two columns sum_i w_i T_perp(values_i) d_j,i.
struct Quadrature {
  Vec2 tangent = Vec2::Zero();
  Mat2 jacobian = Mat2::Zero();
};

Quadrature tangent_quadrature(const Grid& g, const Eigen::VectorXd& values,
                              const AffineUpdate& update) {
  Quadrature q;
  for (int i = 0; i < g.size(); ++i) {
    const double w = g.weight(i);
    const double s = std::sin(values[i]);
    const double c = std::cos(values[i]);
    q.tangent += w * Vec2(c, s);
    const double d1 = w * update.dir1[i];
    const double d2 = w * update.dir2[i];
    q.jacobian(0, 0) -= s * d1;
    q.jacobian(1, 0) += c * d1;
    q.jacobian(0, 1) -= s * d2;
    q.jacobian(1, 1) += c * d2;
  }
  return q;
}

Vec2 solve2(const Mat2& J, const Vec2& rhs, double floor_scale) {
  const double det = J(0, 0) * J(1, 1) - J(0, 1) * J(1, 0);
  if (!(std::abs(det) > floor_scale)) {
    throw_degenerate(det, floor_scale);
  }
  return Vec2(J(1, 1) * rhs[0] - J(0, 1) * rhs[1], -J(1, 0) * rhs[0] + J(0, 0) * rhs[1]) / det;
}

}  // namespace

Mat2 gram_matrix(const AngleField& field) { return to_gram(trig_moments(field)); }

double det_gram(const Mat2& A) { return A(0, 0) * A(1, 1) - A(0, 1) * A(1, 0); }

MultiplierState lambdas_continuous(const AngleField& field, double det_floor) {
  const Grid& g = field.grid;
  const double floor = resolve_floor(det_floor, g.length());
  const Eigen::VectorXd k = signed_curvature(field);

  Moments m;
  double k2c = 0.0, k2s = 0.0;
  for (int i = 0; i < g.size(); ++i) {
    const double w = g.weight(i);
    const double s = std::sin(field.phi[i]);
    const double c = std::cos(field.phi[i]);
    m.ss += w * s * s;
    m.sc += w * s * c;
    m.cc += w * c * c;
    k2c += w * k[i] * k[i] * c;
    k2s += w * k[i] * k[i] * s;
  }

  MultiplierState out;
  out.A = to_gram(m);
  out.det_A = det_gram(out.A);
  out.method = MultiplierMethod::ContinuousFormula;
  if (!(out.det_A >= floor)) throw_degenerate(out.det_A, floor);
  out.lambda[0] = (k2c * m.cc + k2s * m.sc) / out.det_A;
  out.lambda[1] = (k2c * m.sc + k2s * m.ss) / out.det_A;
  return out;
}

MultiplierState lambdas_discrete(const AngleField& field, const AffineUpdate& update,
                                 double det_floor) {
  const Grid& g = field.grid;
  const double L = g.length();
  const double floor = resolve_floor(det_floor, L);

  MultiplierState out;
  out.method = MultiplierMethod::DiscreteConstraint;
  out.A = gram_matrix(field);
  out.det_A = det_gram(out.A);
  if (!(out.det_A >= floor)) throw_degenerate(out.det_A, floor);

  // Linearisation about the current state:
  //   sum w T_perp(phi) (base - phi + lambda_1 dir1 + lambda_2 dir2) = 0.
  const Quadrature at_phi = tangent_quadrature(g, field.phi, update);
  Vec2 offset = Vec2::Zero();
  for (int i = 0; i < g.size(); ++i) {
    const double w = g.weight(i) * (update.base[i] - field.phi[i]);
    offset += w * Vec2(-std::sin(field.phi[i]), std::cos(field.phi[i]));
  }
  const double jac_scale = at_phi.jacobian.cwiseAbs().maxCoeff();
  const double singular = 1e-14 * jac_scale * jac_scale;
  Vec2 lambda = solve2(at_phi.jacobian, -offset, singular);

  // Newton on G(lambda) = sum w T(phi_new(lambda)) - sum w T(phi).
  const Vec2 target = at_phi.tangent;
  const double tol = 1e-15 * L;
  Vec2 best = lambda;
  double best_norm = std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < 8; ++iter) {
    const Quadrature q = tangent_quadrature(g, update.apply(lambda), update);
    const Vec2 G = q.tangent - target;
    const double norm = G.norm();
    if (norm < best_norm) {
      best_norm = norm;
      best = lambda;
    } else if (norm > 0.5 * best_norm) {
      break;  // rounding floor reached
    }
    if (norm <= tol) break;
    lambda -= solve2(q.jacobian, G, singular);
  }
  out.lambda = best;
  return out;
}

DetBoundCertificate det_bound_certificate(double delta_L, double length, double M) {
  DetBoundCertificate cert;
  cert.delta_L = delta_L;
  cert.M = M;
  const double ratio = delta_L / length;
  cert.delta_phi = std::acos(1.0 - ratio);
  if (!(cert.delta_phi > 0.0) || !(cert.delta_phi < 0.5 * std::numbers::pi)) {
    std::ostringstream os;
    os << "determinant certificate invalid: delta_phi = arccos(1 - dL/L) = " << cert.delta_phi
       << " lies outside (0, pi/2) for dL = " << delta_L << ", L = " << length;
    throw Error(ErrorKind::CertificateInvalid, os.str());
  }
  const double r = cert.delta_phi / (3.0 * cert.C0 * M);
  cert.delta0 = r * r;
  if (!(cert.delta0 <= length)) {
    // The interval-measure bound |J_s(r)| >= r needs r <= L.
    cert.delta0 = length;
    cert.delta0_clamped = true;
  }
  const double a = cert.delta0 * std::sin(cert.delta_phi / 3.0);
  cert.C1 = 0.5 * a * a;
  return cert;
}

DetBoundCertificate det_lower_bound(const AngleField& field, const ConstraintSpec& constraint) {
  return det_bound_certificate(constraint.slack(), constraint.length, curvature_l2_norm(field));
}

}  // namespace elastica
