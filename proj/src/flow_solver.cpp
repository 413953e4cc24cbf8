#include "elastica/flow_solver.hpp"

#include "elastica/errors.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace elastica {

const char* to_string(Scheme s) noexcept {
  return s == Scheme::Imex ? "imex" : "explicit-euler";
}

const char* to_string(Termination t) noexcept {
  switch (t) {
    case Termination::ReachedTEnd: return "reached-t-end";
    case Termination::Equilibrium: return "equilibrium";
    case Termination::DegenerateGram: return "degenerate-gram";
    case Termination::Instability: return "instability";
  }
  return "unknown";
}

const char* to_string(CurveMode m) noexcept {
  return m == CurveMode::OpenHinged ? "open-hinged" : "closed-periodic";
}

const char* to_string(MultiplierMethod m) noexcept {
  return m == MultiplierMethod::ContinuousFormula ? "continuous-formula" : "discrete-constraint";
}

double FlowConfig::resolved_dt(const Grid& grid) const {
  return dt > 0.0 ? dt : 0.25 * grid.spacing() * grid.spacing();
}

void FlowConfig::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorKind::InvalidState, msg); };
  if (!(dt >= 0.0) || !std::isfinite(dt)) fail("flow config: dt must be positive (or 0 for h^2/4)");
  if (!(t_end > 0.0) || !std::isfinite(t_end)) fail("flow config: t_end must be positive");
  if (!(equilibrium_tol > 0.0)) fail("flow config: equilibrium_tol must be positive");
  if (snapshot_stride < 1) fail("flow config: snapshot_stride must be at least 1");
  if (sobolev_m_max < 0 || sobolev_m_max > 3) fail("flow config: sobolev_m_max must lie in 0..3");
  if (fixed_lambda && !fixed_lambda->allFinite()) fail("flow config: fixed_lambda must be finite");
}

Eigen::VectorXd laplacian(const AngleField& phi, CurveMode mode) {
  const int n = phi.grid.intervals();
  const double inv_h2 = 1.0 / (phi.grid.spacing() * phi.grid.spacing());
  const Eigen::VectorXd& p = phi.phi;
  Eigen::VectorXd lap(n + 1);
  for (int i = 1; i < n; ++i) lap[i] = (p[i - 1] - 2.0 * p[i] + p[i + 1]) * inv_h2;
  if (mode == CurveMode::OpenHinged) {
    lap[0] = 2.0 * (p[1] - p[0]) * inv_h2;
    lap[n] = 2.0 * (p[n - 1] - p[n]) * inv_h2;
  } else {
    const double winding = p[n] - p[0];
    lap[0] = (p[n - 1] - winding - 2.0 * p[0] + p[1]) * inv_h2;
    lap[n] = lap[0];
  }
  return lap;
}

Eigen::VectorXd rhs(const AngleField& phi, const Vec2& lambda, CurveMode mode) {
  Eigen::VectorXd r = laplacian(phi, mode);
  for (Eigen::Index i = 0; i < r.size(); ++i) {
    r[i] += lambda[0] * std::sin(phi.phi[i]) - lambda[1] * std::cos(phi.phi[i]);
  }
  return r;
}

double equilibrium_residual(const AngleField& phi, const Vec2& lambda, CurveMode mode) {
  const Eigen::VectorXd r = rhs(phi, lambda, mode);
  return std::sqrt(trapezoid(phi.grid, r.array().square().matrix()));
}

Stepper::Stepper(const Grid& grid, const FlowConfig& cfg, double dt)
    : grid_(grid), cfg_(cfg), dt_(dt) {
  const double h2 = grid.spacing() * grid.spacing();
  if (!(dt > 0.0)) throw Error(ErrorKind::InvalidState, "time step must be positive");
  if (cfg.scheme == Scheme::ExplicitEuler) {
    if (cfg.stability_guard && dt > 0.5 * h2) {
      std::ostringstream os;
      os.precision(6);
      os << "explicit step unstable: dt = " << dt << " exceeds h^2/2 = " << 0.5 * h2;
      throw Error(ErrorKind::Instability, os.str());
    }
    return;
  }

  const double r = dt / h2;
  const double diag = 1.0 + 2.0 * r;
  const int n = grid.intervals();
  if (cfg.mode == CurveMode::OpenHinged) {
    // Rows 0 and N carry the reflected ghost: off-diagonal -2r.
    c_prime_.resize(n + 1);
    denom_.resize(n + 1);
    denom_[0] = diag;
    c_prime_[0] = -2.0 * r / diag;
    for (int i = 1; i <= n; ++i) {
      const double sub = (i == n) ? -2.0 * r : -r;
      denom_[i] = diag - sub * c_prime_[i - 1];
      c_prime_[i] = (i == n) ? 0.0 : -r / denom_[i];
    }
    return;
  }

  // Periodic operator on nodes 0..N-1 by Sherman-Morrison around a
  // tridiagonal with modified corners.
  const int m = n;
  const double corner = -r;
  cyc_gamma_ = -diag;
  Eigen::VectorXd d = Eigen::VectorXd::Constant(m, diag);
  d[0] = diag - cyc_gamma_;
  d[m - 1] = diag - corner * corner / cyc_gamma_;
  cyc_c_prime_.resize(m);
  cyc_denom_.resize(m);
  cyc_denom_[0] = d[0];
  cyc_c_prime_[0] = -r / d[0];
  for (int i = 1; i < m; ++i) {
    cyc_denom_[i] = d[i] + r * cyc_c_prime_[i - 1];
    cyc_c_prime_[i] = -r / cyc_denom_[i];
  }
  Eigen::VectorXd u = Eigen::VectorXd::Zero(m);
  u[0] = cyc_gamma_;
  u[m - 1] = corner;
  // Tridiagonal solve for z with the modified matrix.
  cyc_z_.resize(m);
  cyc_z_[0] = u[0] / cyc_denom_[0];
  for (int i = 1; i < m; ++i) cyc_z_[i] = (u[i] + r * cyc_z_[i - 1]) / cyc_denom_[i];
  for (int i = m - 2; i >= 0; --i) cyc_z_[i] -= cyc_c_prime_[i] * cyc_z_[i + 1];
}

Eigen::VectorXd Stepper::solve_open(const Eigen::VectorXd& b) const {
  const int n = grid_.intervals();
  const double r = dt_ / (grid_.spacing() * grid_.spacing());
  Eigen::VectorXd x(n + 1);
  x[0] = b[0] / denom_[0];
  for (int i = 1; i <= n; ++i) {
    const double sub = (i == n) ? -2.0 * r : -r;
    x[i] = (b[i] - sub * x[i - 1]) / denom_[i];
  }
  for (int i = n - 1; i >= 0; --i) x[i] -= c_prime_[i] * x[i + 1];
  return x;
}

Eigen::VectorXd Stepper::solve_closed(const Eigen::VectorXd& b) const {
  const int m = grid_.intervals();
  const double r = dt_ / (grid_.spacing() * grid_.spacing());
  Eigen::VectorXd y(m);
  y[0] = b[0] / cyc_denom_[0];
  for (int i = 1; i < m; ++i) y[i] = (b[i] + r * y[i - 1]) / cyc_denom_[i];
  for (int i = m - 2; i >= 0; --i) y[i] -= cyc_c_prime_[i] * y[i + 1];
  const double corner = -r;
  const double factor = (y[0] + corner * y[m - 1] / cyc_gamma_) /
                        (1.0 + cyc_z_[0] + corner * cyc_z_[m - 1] / cyc_gamma_);
  Eigen::VectorXd x(m + 1);
  x.head(m) = y - factor * cyc_z_;
  x[m] = x[0];
  return x;
}

AffineUpdate Stepper::explicit_update(const AngleField& phi) const {
  AffineUpdate u;
  u.base = phi.phi + dt_ * laplacian(phi, cfg_.mode);
  u.dir1 = dt_ * phi.phi.array().sin().matrix();
  u.dir2 = -dt_ * phi.phi.array().cos().matrix();
  return u;
}

AffineUpdate Stepper::imex_update(const AngleField& phi) const {
  AffineUpdate u;
  const Eigen::VectorXd s = dt_ * phi.phi.array().sin().matrix();
  const Eigen::VectorXd c = -dt_ * phi.phi.array().cos().matrix();
  if (cfg_.mode == CurveMode::OpenHinged) {
    u.base = solve_open(phi.phi);
    u.dir1 = solve_open(s);
    u.dir2 = solve_open(c);
    return u;
  }
  // Subtract the winding ramp, which the periodic Laplacian annihilates.
  const int n = grid_.intervals();
  const double winding = phi.phi[n] - phi.phi[0];
  Eigen::VectorXd ramp(n + 1);
  for (int i = 0; i <= n; ++i) ramp[i] = winding * i / n;
  u.base = solve_closed(phi.phi - ramp) + ramp;
  u.base[n] = u.base[0] + winding;
  u.dir1 = solve_closed(s);
  u.dir2 = solve_closed(c);
  return u;
}

StepResult Stepper::step(const AngleField& phi) const {
  if (!(phi.grid == grid_)) {
    throw Error(ErrorKind::InvalidState, "stepper: field lives on a different grid");
  }
  const AffineUpdate update =
      cfg_.scheme == Scheme::Imex ? imex_update(phi) : explicit_update(phi);

  MultiplierState ms;
  if (cfg_.fixed_lambda) {
    ms.A = gram_matrix(phi);
    ms.det_A = det_gram(ms.A);
    ms.lambda = *cfg_.fixed_lambda;
    ms.method = cfg_.multiplier_method;
  } else if (cfg_.multiplier_method == MultiplierMethod::DiscreteConstraint) {
    ms = lambdas_discrete(phi, update);
  } else {
    ms = lambdas_continuous(phi);
  }

  Eigen::VectorXd next = update.apply(ms.lambda);
  if (!next.allFinite()) {
    throw Error(ErrorKind::Instability, "time step produced non-finite angles");
  }
  return StepResult{AngleField{grid_, std::move(next), phi.t + dt_}, ms};
}

AngleField step_explicit(const AngleField& phi, const FlowConfig& cfg) {
  FlowConfig c = cfg;
  c.scheme = Scheme::ExplicitEuler;
  return Stepper(phi.grid, c, c.resolved_dt(phi.grid)).step(phi).next;
}

AngleField step_imex(const AngleField& phi, const FlowConfig& cfg) {
  FlowConfig c = cfg;
  c.scheme = Scheme::Imex;
  return Stepper(phi.grid, c, c.resolved_dt(phi.grid)).step(phi).next;
}

namespace {

void check_preconditions(const AngleField& phi0, const ConstraintSpec& constraint,
                         const FlowConfig& cfg) {
  const double L = phi0.grid.length();
  if (std::abs(constraint.length - L) > 1e-12 * L) {
    std::ostringstream os;
    os << "constraint length " << constraint.length << " differs from grid length " << L;
    throw Error(ErrorKind::Precondition, os.str());
  }
  if (cfg.mode == CurveMode::OpenHinged) {
    const Vec2 k = boundary_curvature(phi0);
    if (std::abs(k[0]) > 1e-8 || std::abs(k[1]) > 1e-8) {
      std::ostringstream os;
      os.precision(6);
      os << "initial data violates the hinged condition: |k0(0)| = " << std::abs(k[0])
         << ", |k0(L)| = " << std::abs(k[1]) << " (tolerance 1e-8)";
      throw Error(ErrorKind::Precondition, os.str());
    }
  }
  const double res = constraint_residual(phi0, constraint).norm();
  if (res > 1e-6 * L) {
    std::ostringstream os;
    os.precision(6);
    os << "initial data violates the endpoint constraint: |residual| = " << res
       << " exceeds 1e-6 L = " << 1e-6 * L;
    throw Error(ErrorKind::Precondition, os.str());
  }
}

DiagnosticsRecord state_record(const AngleField& phi, const ConstraintSpec& constraint,
                               const FlowConfig& cfg, double F) {
  DiagnosticsRecord rec;
  rec.t = phi.t;
  rec.F = F;
  rec.constraint_res = constraint_residual(phi, constraint);
  rec.detA = det_gram(gram_matrix(phi));
  rec.C1 = std::numeric_limits<double>::quiet_NaN();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  if (cfg.mode == CurveMode::OpenHinged) {
    try {
      rec.C1 = det_lower_bound(phi, constraint).C1;
      rec.certificate_valid = true;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::CertificateInvalid) throw;
    }
    const auto parity = boundary_parity_check(phi, 1);
    rec.k_bdry = boundary_curvature(phi);
    rec.k2_bdry = Vec2((*parity).left[1], (*parity).right[1]);
  } else {
    rec.k_bdry = Vec2(nan, nan);
    rec.k2_bdry = Vec2(nan, nan);
  }
  const Eigen::VectorXd k = signed_curvature(phi);
  rec.inflections = inflection_count(k);
  rec.k_min = k.minCoeff();
  return rec;
}

void add_snapshot_norms(DiagnosticsRecord& rec, const AngleField& phi,
                        const std::optional<AngleField>& next, double dt,
                        const FlowConfig& cfg) {
  const SobolevNorms norms = sobolev_norms(signed_curvature(phi), phi.grid, cfg.sobolev_m_max);
  rec.sobolev = norms.cumulative;
  if (cfg.higher_identities && next) {
    for (int m = 1; m <= 2; ++m) {
      try {
        rec.higher_energy_defect[m] = higher_energy_defect(m, phi, *next, dt);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::DegenerateGram) throw;
      }
    }
  }
}

}  // namespace

FlowTrajectory run_flow(const AngleField& phi0, const ConstraintSpec& constraint,
                        const FlowConfig& cfg) {
  cfg.validate();
  check_preconditions(phi0, constraint, cfg);

  const Grid& grid = phi0.grid;
  const double dt = cfg.resolved_dt(grid);
  const double t0 = phi0.t;
  const double span = cfg.t_end - t0;

  FlowTrajectory traj;
  traj.dt = dt;
  traj.snapshots.push_back(phi0);
  if (!(span > 0.0)) {
    traj.diagnostics.push_back(state_record(phi0, constraint, cfg, bending_energy(phi0)));
    traj.message = "t_end not after the initial time";
    return traj;
  }

  // Whole steps of size dt, with the last one shortened to land on t_end.
  const long n_steps = std::max<long>(1, static_cast<long>(std::ceil(span / dt - 1e-9)));
  const double last_dt = span - (n_steps - 1) * dt;

  std::optional<Stepper> stepper;
  std::optional<Stepper> last_stepper;
  try {
    stepper.emplace(grid, cfg, dt);
    if (std::abs(last_dt - dt) > 1e-12 * dt) last_stepper.emplace(grid, cfg, last_dt);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::Instability) throw;
    traj.termination = Termination::Instability;
    traj.message = e.what();
    traj.diagnostics.push_back(state_record(phi0, constraint, cfg, bending_energy(phi0)));
    return traj;
  }

  AngleField cur = phi0;
  double F_cur = bending_energy(cur);
  for (long n = 0;; ++n) {
    DiagnosticsRecord rec = state_record(cur, constraint, cfg, F_cur);
    const bool at_end = n == n_steps;
    const Stepper& st = (n == n_steps - 1 && last_stepper) ? *last_stepper : *stepper;

    std::optional<StepResult> res;
    try {
      res = st.step(cur);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::DegenerateGram && e.kind() != ErrorKind::Instability) throw;
      traj.termination = e.kind() == ErrorKind::DegenerateGram ? Termination::DegenerateGram
                                                              : Termination::Instability;
      traj.message = e.what();
      add_snapshot_norms(rec, cur, std::nullopt, st.dt(), cfg);
      traj.diagnostics.push_back(rec);
      break;
    }
    rec.lambda = res->multipliers.lambda;
    rec.residual_eq = equilibrium_residual(cur, rec.lambda, cfg.mode);

    const bool equilibrium = rec.residual_eq <= cfg.equilibrium_tol;
    if (equilibrium || at_end) {
      traj.termination = equilibrium ? Termination::Equilibrium : Termination::ReachedTEnd;
      add_snapshot_norms(rec, cur, std::nullopt, st.dt(), cfg);
      traj.diagnostics.push_back(rec);
      break;
    }

    AngleField next = std::move(res->next);
    next.t = (n + 1 == n_steps) ? cfg.t_end : t0 + (n + 1) * dt;
    const double F_next = bending_energy(next);
    rec.has_step = true;
    rec.dF_dt_lhs = (F_next - F_cur) / st.dt();
    rec.dissipation_rhs = -dissipation(cur, next, st.dt());
    if (n % cfg.snapshot_stride == 0) add_snapshot_norms(rec, cur, next, st.dt(), cfg);
    traj.diagnostics.push_back(rec);

    cur = std::move(next);
    F_cur = F_next;
    ++traj.steps;
    if (traj.steps % cfg.snapshot_stride == 0) traj.snapshots.push_back(cur);
  }

  if (traj.snapshots.back().t != cur.t) traj.snapshots.push_back(cur);
  return traj;
}

}  // namespace elastica
