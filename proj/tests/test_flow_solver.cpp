#include "doctest.h"

#include "elastica/errors.hpp"
#include "elastica/flow_solver.hpp"
#include "oracles/shooting.hpp"

#include <cmath>
#include <numbers>

using namespace elastica;
using std::numbers::pi;

namespace {

double hinged_phi(double s) { return 0.2 + 0.9 * std::cos(pi * s) + 0.15 * std::cos(2 * pi * s); }

AngleField unit_circle(int n) { return AngleField::sample(Grid(2 * pi, n), [](double s) { return s; }); }

FlowConfig config(Scheme scheme, double dt, CurveMode mode = CurveMode::OpenHinged) {
  FlowConfig c;
  c.scheme = scheme;
  c.dt = dt;
  c.mode = mode;
  return c;
}

double sup_diff(const Eigen::VectorXd& a, const Eigen::VectorXd& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace

TEST_SUITE("flow_solver") {

TEST_CASE("rhs of a constant field and of the circle") {
  const AngleField c = AngleField::sample(Grid(1.0, 32), [](double) { return 0.7; });
  CHECK(rhs(c, Vec2::Zero()).cwiseAbs().maxCoeff() == 0.0);
  const AngleField circle = unit_circle(128);
  CHECK(rhs(circle, Vec2::Zero(), CurveMode::ClosedPeriodic).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(equilibrium_residual(circle, Vec2::Zero(), CurveMode::ClosedPeriodic) < 1e-12);
}

TEST_CASE("hinged laplacian is second-order up to the ends") {
  double prev = 0.0;
  for (int n : {32, 64, 128}) {
    const AngleField f = AngleField::sample(Grid(1.0, n), [](double s) { return std::cos(pi * s); });
    const Eigen::VectorXd lap = laplacian(f);
    double err = 0.0;
    for (int i = 0; i <= n; ++i) err = std::max(err, std::abs(lap[i] + pi * pi * std::cos(pi * f.grid.node(i))));
    if (prev > 0.0) CHECK(std::log2(prev / err) == doctest::Approx(2.0).epsilon(0.05));
    prev = err;
  }
}

TEST_CASE("explicit step leaves a rest state untouched") {
  const AngleField c = AngleField::sample(Grid(1.0, 64), [](double) { return 0.3; });
  FlowConfig cfg = config(Scheme::ExplicitEuler, 0.0);
  cfg.fixed_lambda = Vec2::Zero();
  const AngleField next = step_explicit(c, cfg);
  CHECK(next.phi == c.phi);
  CHECK(next.t == doctest::Approx(0.25 / (64.0 * 64.0)));
}

TEST_CASE("explicit step beyond h^2/2 is refused") {
  const AngleField f = AngleField::sample(Grid(1.0, 64), hinged_phi);
  const double h2 = f.grid.spacing() * f.grid.spacing();
  try {
    step_explicit(f, config(Scheme::ExplicitEuler, h2));
    FAIL("expected instability");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Instability);
  }
  FlowConfig unguarded = config(Scheme::ExplicitEuler, h2);
  unguarded.stability_guard = false;
  CHECK_NOTHROW(step_explicit(f, unguarded));
  CHECK_NOTHROW(step_imex(f, config(Scheme::Imex, 100 * h2)));
}

TEST_CASE("pure heat flow damps the first periodic mode") {
  // Closed circle plus 0.01 sin(s) on L = 2 pi: the perturbation decays like exp(-t).
  const Grid g(2 * pi, 128);
  const AngleField f0 = AngleField::sample(g, [](double s) { return s + 0.01 * std::sin(s); });
  FlowConfig cfg = config(Scheme::ExplicitEuler, 0.0, CurveMode::ClosedPeriodic);
  cfg.fixed_lambda = Vec2::Zero();
  const double dt = 0.25 * g.spacing() * g.spacing();
  const Stepper st(g, cfg, dt);
  AngleField cur = f0;
  const long steps = std::lround(0.5 / dt);
  for (long n = 0; n < steps; ++n) cur = st.step(cur).next;
  double amp = 0.0;
  for (int i = 0; i < g.intervals(); ++i) amp += (cur.phi[i] - g.node(i)) * std::sin(g.node(i)) * g.spacing();
  amp /= pi;
  CHECK(amp / 0.01 == doctest::Approx(std::exp(-steps * dt)).epsilon(0.05));
  CHECK(cur.phi[g.intervals()] - cur.phi[0] == doctest::Approx(2 * pi).epsilon(1e-14));
}

TEST_CASE("imex heat step matches the discrete and continuous decay factors") {
  const double dt = 1e-3;
  double prev = 0.0;
  for (int n : {64, 128, 256}) {
    const Grid g(1.0, n);
    const AngleField f = AngleField::sample(g, [](double s) { return 0.3 * std::cos(pi * s); });
    FlowConfig cfg = config(Scheme::Imex, dt);
    cfg.fixed_lambda = Vec2::Zero();
    const AngleField next = step_imex(f, cfg);
    // cos(pi s) is an exact eigenvector of the hinged discrete Laplacian.
    const double h = g.spacing();
    const double mu = 4.0 / (h * h) * std::pow(std::sin(pi * h / 2), 2);
    CHECK(sup_diff(next.phi, f.phi / (1 + dt * mu)) < 1e-14);
    const double err = sup_diff(next.phi, f.phi / (1 + dt * pi * pi));
    if (prev > 0.0) CHECK(std::log2(prev / err) == doctest::Approx(2.0).epsilon(0.05));
    prev = err;
  }
}

TEST_CASE("explicit and imex steps agree to second order in dt") {
  const AngleField f = AngleField::sample(Grid(1.0, 64), hinged_phi);
  const double h2 = f.grid.spacing() * f.grid.spacing();
  double prev = 0.0;
  for (double dt : {h2 / 8, h2 / 16, h2 / 32}) {
    const double d = sup_diff(step_explicit(f, config(Scheme::ExplicitEuler, dt)).phi,
                              step_imex(f, config(Scheme::Imex, dt)).phi);
    if (prev > 0.0) CHECK(prev / d == doctest::Approx(4.0).epsilon(0.1));
    prev = d;
  }
}

TEST_CASE("imex step keeps an equilibrium fixed") {
  const AngleField c = unit_circle(128);
  const AngleField next = step_imex(c, config(Scheme::Imex, 0.0, CurveMode::ClosedPeriodic));
  CHECK(sup_diff(next.phi, c.phi) < 1e-13);
}

TEST_CASE("circle stops at equilibrium before the first step") {
  const AngleField c = unit_circle(128);
  const FlowTrajectory tr = run_flow(c, ConstraintSpec::make(Vec2::Zero(), 2 * pi),
                                     config(Scheme::Imex, 0.0, CurveMode::ClosedPeriodic));
  CHECK(tr.termination == Termination::Equilibrium);
  CHECK(tr.steps == 0);
  REQUIRE(tr.diagnostics.size() == 1);
  CHECK_FALSE(tr.diagnostics[0].has_step);
  CHECK(std::isnan(tr.diagnostics[0].C1));
  CHECK(std::isnan(tr.diagnostics[0].k_bdry[0]));
  CHECK(tr.snapshots.size() == 1);
}

TEST_CASE("run lands exactly on t_end") {
  const AngleField f = AngleField::sample(Grid(1.0, 128), hinged_phi);
  const ConstraintSpec c = ConstraintSpec::make(tangent_integral(f), 1.0);
  FlowConfig cfg = config(Scheme::Imex, 1e-4);
  cfg.t_end = 10.5e-4;
  cfg.snapshot_stride = 4;
  const FlowTrajectory tr = run_flow(f, c, cfg);
  CHECK(tr.termination == Termination::ReachedTEnd);
  CHECK(tr.steps == 11);
  REQUIRE(tr.diagnostics.size() == 12);
  CHECK(tr.diagnostics.back().t == cfg.t_end);
  CHECK_FALSE(tr.diagnostics.back().has_step);
  CHECK(tr.snapshots.back().t == cfg.t_end);
  CHECK(tr.snapshots.size() == 4);  // t = 0, 4 dt, 8 dt, t_end
  for (std::size_t i = 0; i + 1 < tr.diagnostics.size(); ++i) {
    const DiagnosticsRecord& r = tr.diagnostics[i];
    CHECK(r.has_step);
    CHECK(r.dF_dt_lhs <= 0.0);
    CHECK(r.dissipation_rhs <= 0.0);
    CHECK(r.constraint_res.norm() < 1e-13);
    CHECK(tr.diagnostics[i + 1].F <= r.F);
  }
}

TEST_CASE("initial data must be hinged and meet the constraint") {
  const AngleField slope = AngleField::sample(Grid(1.0, 64), [](double s) { return 0.5 * s; });
  try {
    run_flow(slope, ConstraintSpec::make(tangent_integral(slope), 1.0), FlowConfig{});
    FAIL("expected precondition");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Precondition);
    CHECK(std::string(e.what()).find("|k0(0)|") != std::string::npos);
  }
  const AngleField f = AngleField::sample(Grid(1.0, 128), hinged_phi);
  CHECK_THROWS_AS(run_flow(f, ConstraintSpec::make(Vec2(0.5, 0.0), 1.0), FlowConfig{}), Error);
  CHECK_THROWS_AS(run_flow(f, ConstraintSpec::make(tangent_integral(f) * 2, 2.0), FlowConfig{}), Error);
}

TEST_CASE("config validation") {
  FlowConfig cfg;
  cfg.dt = -1.0;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = FlowConfig{};
  cfg.snapshot_stride = 0;
  CHECK_THROWS_AS(cfg.validate(), Error);
}

TEST_CASE("equilibrium residual of a shooting elastica is second order") {
  double prev = 0.0;
  for (int n : {32, 64, 128}) {
    const oracle::Elastica e = oracle::shoot(1.0, 0.8, 0.0, 0.9, pi * pi, 0.0, n);
    REQUIRE(e.converged);
    Eigen::VectorXd phi(n + 1);
    for (int i = 0; i <= n; ++i) phi[i] = e.phi[i];
    const AngleField f = AngleField::make(Grid(1.0, n), phi);
    const double r = equilibrium_residual(f, Vec2(e.l1, e.l2));
    if (prev > 0.0) CHECK(std::log2(prev / r) == doctest::Approx(2.0).epsilon(0.1));
    prev = r;
  }
}

}  // TEST_SUITE
