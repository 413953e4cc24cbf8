#pragma once

#include "elastica/diagnostics.hpp"
#include "elastica/grid_curve.hpp"
#include "elastica/multipliers.hpp"

#include <optional>
#include <vector>

namespace elastica {

enum class Scheme { ExplicitEuler, Imex };
enum class Termination { ReachedTEnd, Equilibrium, DegenerateGram, Instability };

const char* to_string(Scheme s) noexcept;
const char* to_string(Termination t) noexcept;
const char* to_string(CurveMode m) noexcept;
const char* to_string(MultiplierMethod m) noexcept;

struct FlowConfig {
  Scheme scheme = Scheme::Imex;
  double dt = 0.0;  // 0 selects h^2/4
  double t_end = 10.0;
  CurveMode mode = CurveMode::OpenHinged;
  MultiplierMethod multiplier_method = MultiplierMethod::DiscreteConstraint;
  double equilibrium_tol = 1e-8;
  int snapshot_stride = 100;
  bool stability_guard = true;

  /// Pin the multipliers instead of computing them (pure heat flow with zero).
  std::optional<Vec2> fixed_lambda;
  /// Sobolev norms and higher identities are evaluated at snapshot steps.
  int sobolev_m_max = 2;
  bool higher_identities = true;

  double resolved_dt(const Grid& grid) const;
  /// Throws InvalidState naming the offending field.
  void validate() const;
};

/// Second-order Laplacian of phi: ghost reflection phi_{-1} = phi_1,
/// phi_{N+1} = phi_{N-1} for hinged ends; periodic wrap carrying the winding
/// phi_N - phi_0 in closed mode.
Eigen::VectorXd laplacian(const AngleField& phi, CurveMode mode = CurveMode::OpenHinged);

/// Laplacian plus lambda_1 sin(phi) - lambda_2 cos(phi).
Eigen::VectorXd rhs(const AngleField& phi, const Vec2& lambda,
                    CurveMode mode = CurveMode::OpenHinged);

/// Trapezoid L2 norm of rhs(phi, lambda).
double equilibrium_residual(const AngleField& phi, const Vec2& lambda,
                            CurveMode mode = CurveMode::OpenHinged);

struct StepResult {
  AngleField next;
  MultiplierState multipliers;
};

/// Advances one scheme step at a fixed dt. The implicit operator of the IMEX
/// scheme is factorised once per (grid, dt, mode).
class Stepper {
 public:
  Stepper(const Grid& grid, const FlowConfig& cfg, double dt);

  StepResult step(const AngleField& phi) const;
  double dt() const noexcept { return dt_; }

 private:
  AffineUpdate explicit_update(const AngleField& phi) const;
  AffineUpdate imex_update(const AngleField& phi) const;
  Eigen::VectorXd solve_open(const Eigen::VectorXd& b) const;
  Eigen::VectorXd solve_closed(const Eigen::VectorXd& b) const;

  Grid grid_;
  FlowConfig cfg_;
  double dt_;
  // Thomas elimination of the hinged operator.
  Eigen::VectorXd c_prime_;
  Eigen::VectorXd denom_;
  // Sherman-Morrison data of the periodic operator.
  Eigen::VectorXd cyc_c_prime_;
  Eigen::VectorXd cyc_denom_;
  Eigen::VectorXd cyc_z_;
  double cyc_gamma_ = 0.0;
};

/// Forward Euler. Throws Instability when the guard is on and dt > h^2/2.
AngleField step_explicit(const AngleField& phi, const FlowConfig& cfg);

/// (Id - dt Lap) phi_new = phi + dt (lambda_1 sin phi - lambda_2 cos phi).
AngleField step_imex(const AngleField& phi, const FlowConfig& cfg);

struct FlowTrajectory {
  std::vector<AngleField> snapshots;
  std::vector<DiagnosticsRecord> diagnostics;
  Termination termination = Termination::ReachedTEnd;
  std::string message;
  long steps = 0;
  double dt = 0.0;
};

/// Integrates until t_end or until the equilibrium residual drops to the
/// tolerance. Degenerate Gram matrices and instabilities end the run with
/// the matching tag; incompatible initial data throws Precondition.
FlowTrajectory run_flow(const AngleField& phi0, const ConstraintSpec& constraint,
                        const FlowConfig& cfg);

}  // namespace elastica
