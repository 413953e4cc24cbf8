#include "elastica/diagnostics.hpp"

#include "elastica/errors.hpp"
#include "elastica/stencils.hpp"

#include <algorithm>
#include <cmath>

namespace elastica {

namespace {

void require_same_grid(const AngleField& a, const AngleField& b) {
  if (!(a.grid == b.grid)) {
    throw Error(ErrorKind::InvalidState, "diagnostics window: snapshots on different grids");
  }
}

// k, d_s k, ..., d_s^order k by repeated differentiation.
std::vector<Eigen::VectorXd> curvature_derivatives(const AngleField& field, int order) {
  std::vector<Eigen::VectorXd> d;
  d.reserve(order + 1);
  d.push_back(signed_curvature(field));
  for (int j = 1; j <= order; ++j) d.push_back(differentiate(field.grid, d.back()));
  return d;
}

struct IdentityTerms {
  double energy = 0.0;       // 1/2 int |d^m k|^2
  double dissipation = 0.0;  // int |d^{m+1} k|^2
  double forcing = 0.0;      // -int d^{m+1} k * d^{m-1}(<lambda,T> k)
};

IdentityTerms identity_terms(int m, const AngleField& field, const Vec2& lambda) {
  const Grid& g = field.grid;
  const auto d = curvature_derivatives(field, m + 1);
  Eigen::VectorXd weighted(g.size());
  for (int i = 0; i < g.size(); ++i) {
    weighted[i] = (lambda[0] * std::cos(field.phi[i]) + lambda[1] * std::sin(field.phi[i])) * d[0][i];
  }
  for (int j = 1; j <= m - 1; ++j) weighted = differentiate(g, weighted);

  IdentityTerms terms;
  terms.energy = 0.5 * trapezoid(g, d[m].array().square().matrix());
  terms.dissipation = trapezoid(g, d[m + 1].array().square().matrix());
  terms.forcing = -trapezoid(g, d[m + 1].cwiseProduct(weighted));
  return terms;
}

}  // namespace

double dissipation(const AngleField& a, const AngleField& b, double dt) {
  require_same_grid(a, b);
  const Eigen::VectorXd rate = (b.phi - a.phi) / dt;
  return trapezoid(a.grid, rate.array().square().matrix());
}

double energy_identity_defect(const AngleField& a, const AngleField& b, double dt) {
  const double slope = (bending_energy(b) - bending_energy(a)) / dt;
  return std::abs(slope + dissipation(a, b, dt));
}

double higher_energy_defect(int m, const AngleField& a, const AngleField& b, double dt,
                            std::optional<std::pair<Vec2, Vec2>> lambdas) {
  if (m < 1 || m > 2) {
    throw Error(ErrorKind::Domain, "higher_energy_defect: m must be 1 or 2");
  }
  require_same_grid(a, b);
  const Vec2 la = lambdas ? lambdas->first : lambdas_continuous(a).lambda;
  const Vec2 lb = lambdas ? lambdas->second : lambdas_continuous(b).lambda;
  const IdentityTerms ta = identity_terms(m, a, la);
  const IdentityTerms tb = identity_terms(m, b, lb);
  const double lhs = (tb.energy - ta.energy) / dt + 0.5 * (ta.dissipation + tb.dissipation);
  const double rhs = 0.5 * (ta.forcing + tb.forcing);
  return std::abs(lhs - rhs);
}

std::optional<ParityResiduals> boundary_parity_check(const AngleField& field, int ell_max,
                                                     CurveMode mode) {
  if (mode == CurveMode::ClosedPeriodic) return std::nullopt;
  if (ell_max < 0 || ell_max > 2) {
    throw Error(ErrorKind::Domain, "boundary_parity_check: ell_max must lie in 0..2");
  }
  const std::span<const double> phi(field.phi.data(), static_cast<std::size_t>(field.phi.size()));
  const double h = field.grid.spacing();
  ParityResiduals out;
  const Vec2 k = boundary_curvature(field);
  out.left.push_back(std::abs(k[0]));
  out.right.push_back(std::abs(k[1]));
  for (int ell = 1; ell <= ell_max; ++ell) {
    // d_s^{2l} k = d_s^{2l+1} phi, second-order one-sided.
    const int order = 2 * ell + 1;
    const int points = std::min(order + 2, field.grid.size());
    out.left.push_back(std::abs(stencils::left_derivative(phi, h, order, points)));
    out.right.push_back(std::abs(stencils::right_derivative(phi, h, order, points)));
  }
  return out;
}

int inflection_count(const Eigen::Ref<const Eigen::VectorXd>& k, double threshold) {
  const Eigen::Index n = k.size();
  if (n < 3) return 0;
  if (threshold < 0.0) threshold = 1e-7 * k.cwiseAbs().maxCoeff();
  int count = 0;
  int last_sign = 0;
  for (Eigen::Index i = 1; i + 1 < n; ++i) {
    if (std::abs(k[i]) < threshold || k[i] == 0.0) continue;
    const int sign = k[i] > 0.0 ? 1 : -1;
    if (last_sign != 0 && sign != last_sign) ++count;
    last_sign = sign;
  }
  return count;
}

SobolevNorms sobolev_norms(const Eigen::Ref<const Eigen::VectorXd>& k, const Grid& grid,
                           int m_max, double p) {
  if (m_max < 0 || m_max > 3) {
    throw Error(ErrorKind::Domain, "sobolev_norms: m_max must lie in 0..3");
  }
  if (!(p >= 1.0)) throw Error(ErrorKind::Domain, "sobolev_norms: p must be >= 1");
  const double L = grid.length();
  SobolevNorms out;
  Eigen::VectorXd d = k;
  double running = 0.0;
  for (int i = 0; i <= m_max; ++i) {
    if (i > 0) d = differentiate(grid, d);
    const double integral = trapezoid(grid, d.array().abs().pow(p).matrix());
    const double norm = std::pow(L, i + 1.0 - 1.0 / p) * std::pow(integral, 1.0 / p);
    out.derivative.push_back(norm);
    running += norm;
    out.cumulative[i] = running;
  }
  return out;
}

}  // namespace elastica
