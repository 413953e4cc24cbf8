#pragma once

#include "elastica/grid_curve.hpp"
#include "elastica/multipliers.hpp"

#include <map>
#include <optional>
#include <vector>

namespace elastica {

/// Everything monitored at one step of a flow. Step quantities (the energy
/// slope and the dissipation) are only meaningful when has_step is set; the
/// terminal record of a run has no following step.
struct DiagnosticsRecord {
  double t = 0.0;
  double F = 0.0;
  bool has_step = false;
  double dF_dt_lhs = 0.0;
  double dissipation_rhs = 0.0;
  double residual_eq = 0.0;
  Vec2 constraint_res = Vec2::Zero();
  Vec2 lambda = Vec2::Zero();
  double detA = 0.0;
  bool certificate_valid = false;
  double C1 = 0.0;
  Vec2 k_bdry = Vec2::Zero();
  Vec2 k2_bdry = Vec2::Zero();
  int inflections = 0;
  double k_min = 0.0;
  std::map<int, double> sobolev;               // m -> ||kappa||_{m,2}
  std::map<int, double> higher_energy_defect;  // m -> defect of the m-th identity
};

/// int |d_t T|^2 ds with d_t phi taken from the discrete update b - a.
double dissipation(const AngleField& a, const AngleField& b, double dt);

/// |(F_b - F_a)/dt + int |d_t T|^2 ds|.
double energy_identity_defect(const AngleField& a, const AngleField& b, double dt);

/// Defect of
///   d/dt 1/2 int |d_s^m k|^2 + int |d_s^{m+1} k|^2
///     = - int d_s^{m+1} k * d_s^{m-1}(<lambda, T> k),
/// for m in {1, 2}. The time derivative is a difference quotient, the other
/// terms are averaged over the window. Without explicit multipliers each
/// state uses the closed-form ones.
double higher_energy_defect(int m, const AngleField& a, const AngleField& b, double dt,
                            std::optional<std::pair<Vec2, Vec2>> lambdas = std::nullopt);

/// |d_s^{2l} k| at s = 0 and s = L for l = 0..ell_max (ell_max <= 2), from
/// one-sided stencils. Not applicable to closed curves.
struct ParityResiduals {
  std::vector<double> left;
  std::vector<double> right;
};
std::optional<ParityResiduals> boundary_parity_check(const AngleField& field, int ell_max,
                                                     CurveMode mode = CurveMode::OpenHinged);

/// Interior sign changes of k after zeroing |k_i| < threshold. A negative
/// threshold selects the relative default 1e-7 * max|k|.
int inflection_count(const Eigen::Ref<const Eigen::VectorXd>& k, double threshold = -1.0);

/// Scale-invariant norms ||d_s^i k||_p = L^{i+1-1/p} (int |d_s^i k|^p)^{1/p}
/// and their partial sums ||kappa||_{m,p}.
struct SobolevNorms {
  std::vector<double> derivative;       // i -> ||d_s^i k||_p
  std::map<int, double> cumulative;     // m -> ||kappa||_{m,p}
};
SobolevNorms sobolev_norms(const Eigen::Ref<const Eigen::VectorXd>& k, const Grid& grid,
                           int m_max, double p = 2.0);

}  // namespace elastica
