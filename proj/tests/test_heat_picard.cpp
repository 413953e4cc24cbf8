#include "doctest.h"

#include "elastica/errors.hpp"
#include "elastica/flow_solver.hpp"
#include "elastica/heat_picard.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace elastica;
using std::numbers::pi;

namespace {

double hinged_phi(double s) { return 0.2 + 0.9 * std::cos(pi * s) + 0.15 * std::cos(2 * pi * s); }

std::vector<double> uniform_times(double t_end, int slices) {
  std::vector<double> t;
  for (int k = 0; k <= slices; ++k) t.push_back(t_end * k / slices);
  return t;
}

// Smooth even 2-periodic iterate for L = 1.
double iterate(double s, double t) {
  return 0.3 + 0.8 * std::cos(pi * s) * std::exp(-t) + 0.1 * std::cos(2 * pi * s);
}

}  // namespace

TEST_SUITE("heat_picard") {

TEST_CASE("kernel values and domain") {
  CHECK(heat_kernel(0.0, 1.0 / (4 * pi)) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(heat_kernel_dx(0.3, 0.01) == doctest::Approx(-15.0 * heat_kernel(0.3, 0.01)));
  CHECK_THROWS_AS(heat_kernel(0.1, 0.0), Error);
  CHECK_THROWS_AS(kernel_moments(-1.0), Error);
}

TEST_CASE("kernel mass and slope moments") {
  for (double t : {1e-3, 1e-2, 1e-1}) {
    const KernelMoments m = kernel_moments(t);
    CHECK(std::abs(m.mass - 1.0) < 1e-12);
    CHECK(std::abs(m.abs_slope - 1.0 / std::sqrt(pi * t)) < 1e-10);
  }
}

TEST_CASE("kernel params are validated") {
  KernelParams p;
  CHECK(p.resolved(64, 1.0).quad_nodes == 256);
  p.quad_nodes = 192;
  CHECK_THROWS_AS(p.resolved(64, 1.0), Error);
  p.quad_nodes = 128;
  CHECK_THROWS_AS(p.resolved(64, 1.0), Error);
  p = KernelParams{};
  p.image_count = 2;
  CHECK_THROWS_AS(p.resolved(64, 1.0), Error);
  CHECK(KernelParams{}.truncation_bound(1.0, 0.1) < 1e-50);
}

TEST_CASE("free heat evolution of a constant and of the first cosine mode") {
  const Grid g(1.0, 256);
  const EvenPeriodicExtension c = extend_even_periodic(AngleField::sample(g, [](double) { return 0.7; }));
  const EvenPeriodicExtension e =
      extend_even_periodic(AngleField::sample(g, [](double s) { return std::cos(pi * s); }));
  for (double t : {1e-3, 1e-2, 1e-1}) {
    for (double s : {0.0, 0.125, 0.4, 1.0}) {
      CHECK(std::abs(free_heat(c, s, t, {}) - 0.7) < 1e-12);
      CHECK(std::abs(free_heat(e, s, t, {}) - std::exp(-pi * pi * t) * std::cos(pi * s)) < 1e-8);
    }
  }
  CHECK(free_heat(e, 0.3, 0.0, {}) == e(0.3));
}

TEST_CASE("free heat keeps the hinged condition") {
  const EvenPeriodicExtension e = extend_even_periodic(AngleField::sample(Grid(1.0, 128), hinged_phi));
  const double eps = 1e-4;
  for (double t : {1e-3, 1e-2}) {
    for (double s : {0.0, 1.0}) {
      const double slope = (free_heat(e, s + eps, t, {}) - free_heat(e, s - eps, t, {})) / (2 * eps);
      CHECK(std::abs(slope) < 1e-8);
    }
  }
}

TEST_CASE("fft convolution matches the direct image sum") {
  const Grid g(1.0, 64);
  const EvenPeriodicExtension e = extend_even_periodic(AngleField::sample(g, hinged_phi));
  const KernelParams p = KernelParams{}.resolved(64, 1.0);
  const PeriodicSamples base = sample_periodic(e, p.quad_nodes);
  const HeatConvolver conv(1.0, p.quad_nodes, p);
  const double t = 0.004;
  const Eigen::VectorXd u = conv.apply(base.values, t);
  for (int j : {0, 3, 100, 128, 255}) CHECK(std::abs(u[j] - free_heat(e, j * base.spacing(), t, p)) < 1e-12);
  // Below the floor the convolution is the identity.
  CHECK((conv.apply(base.values, 0.5 * p.t_floor) - base.values).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("duhamel term of a zero source vanishes") {
  const KernelParams p = KernelParams{}.resolved(32, 1.0);
  const HeatConvolver conv(1.0, p.quad_nodes, p);
  const std::vector<double> times = uniform_times(0.01, 8);
  const std::vector<Eigen::VectorXd> zero(times.size(), Eigen::VectorXd::Zero(p.quad_nodes));
  for (const auto& v : duhamel_slices(conv, zero, times)) CHECK(v.cwiseAbs().maxCoeff() == 0.0);
  std::vector<double> bad = times;
  bad[3] += 1e-4;
  CHECK_THROWS_AS(duhamel_slices(conv, zero, bad), Error);
}

TEST_CASE("duhamel term obeys the value and slope bounds") {
  const KernelParams p = KernelParams{}.resolved(64, 1.0);
  const HeatConvolver conv(1.0, p.quad_nodes, p);
  const std::vector<double> times = uniform_times(0.02, 16);
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Eigen::VectorXd> src;
  const double a = u(gen), b = u(gen), c = u(gen);
  for (double t : times) {
    Eigen::VectorXd v(p.quad_nodes);
    for (int j = 0; j < p.quad_nodes; ++j) {
      const double s = j * conv.spacing();
      v[j] = a + b * std::cos(pi * s) * (1 + t) + c * std::cos(3 * pi * s);
    }
    src.push_back(v);
  }
  DuhamelBounds bounds;
  duhamel_slices(conv, src, times, &bounds);
  CHECK(bounds.evaluations == 16L * p.quad_nodes);
  CHECK(bounds.violations == 0);
  CHECK(bounds.worst_value_ratio <= 1.0);
  CHECK(bounds.worst_slope_ratio <= 1.0);
}

TEST_CASE("duhamel slices match a 4x refined quadrature") {
  // Refined in space and in time; compared at the shared nodes.
  auto run = [&](int points, int slices) {
    const std::vector<double> times = uniform_times(0.01, slices);
    PicardState st = PicardState::from_function(1.0, points, times, iterate);
    KernelParams p;
    p.quad_nodes = points;
    p = p.resolved(points / 4, 1.0);
    const HeatConvolver conv(1.0, points, p);
    return duhamel_slices(conv, source_slices(st), times);
  };
  const auto coarse = run(2048, 16);
  const auto fine = run(8192, 64);
  double diff = 0.0;
  for (int k = 0; k <= 16; ++k) {
    for (int j = 0; j < 2048; ++j) diff = std::max(diff, std::abs(coarse[k][j] - fine[4 * k][4 * j]));
  }
  CHECK(diff < 1e-6);
}

TEST_CASE("pointwise duhamel agrees with the slice evaluation") {
  const std::vector<double> times = uniform_times(0.01, 8);
  PicardState st = PicardState::from_function(1.0, 128, times, iterate);
  KernelParams p;
  p = p.resolved(32, 1.0);
  const HeatConvolver conv(1.0, 128, p);
  const auto H = duhamel_slices(conv, source_slices(st), times);
  for (int j : {0, 17, 64, 100}) {
    CHECK(std::abs(duhamel(st, j * st.spacing(), times.back(), p) - H.back()[j]) < 1e-12);
  }
  CHECK_THROWS_AS(duhamel(st, 0.1, 0.02, p), Error);
}

TEST_CASE("pinned zero multiplier: one iteration reproduces the heat flow") {
  const Grid g(1.0, 128);
  const AngleField phi0 = AngleField::sample(g, hinged_phi);
  const ConstraintSpec c = ConstraintSpec::make(tangent_integral(phi0), 1.0);
  const double t0 = 0.004;
  const PicardResult r = picard_solve(phi0, c, t0, 10, 1e-12, {}, Vec2::Zero());
  CHECK(r.converged);
  REQUIRE(r.report.size() == 1);
  CHECK(r.report[0].increment_norm == 0.0);

  FlowConfig cfg;
  cfg.fixed_lambda = Vec2::Zero();
  cfg.dt = t0 / 400;
  cfg.t_end = t0;
  cfg.snapshot_stride = 1000;
  const FlowTrajectory tr = run_flow(phi0, c, cfg);
  const AngleField last = r.state.slice_field(static_cast<int>(r.state.times.size()) - 1, g);
  CHECK((last.phi - tr.snapshots.back().phi).cwiseAbs().maxCoeff() < 1e-3);
}

TEST_CASE("strong pinned forcing over a long window does not contract") {
  const Grid g(1.0, 32);
  const AngleField phi0 = AngleField::sample(g, hinged_phi);
  const ConstraintSpec c = ConstraintSpec::make(tangent_integral(phi0), 1.0);
  try {
    picard_solve(phi0, c, 0.5, 40, 1e-12, {}, Vec2(500.0, 0.0));
    FAIL("expected no-contraction");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NoContraction);
  }
}

TEST_CASE("t0 halving search") {
  const double t0 = choose_t0(1.0, 20.0);
  CHECK(apriori_factor(20.0, t0) < 1.0);
  CHECK(apriori_factor(20.0, 2 * t0) >= 1.0);
  CHECK(choose_t0(1.0, 0.1) == 1.0 / 16);
}

TEST_CASE("picard iteration on hinged data") {
  const Grid g(1.0, 64);
  const AngleField phi0 = AngleField::sample(g, hinged_phi);
  const ConstraintSpec c = ConstraintSpec::make(tangent_integral(phi0), 1.0);
  const KernelParams p;
  const double C4 = estimate_lipschitz(phi0, p);
  CHECK(C4 > 0.0);
  const double t0 = choose_t0(1.0, C4);
  const PicardResult r = picard_solve(phi0, c, t0, 60, 1e-11, p);
  CHECK(r.converged);
  CHECK(r.bounds.violations == 0);
  CHECK(r.max_evenness_defect < 1e-12);
  CHECK(r.max_boundary_slope < 1e-10);
  for (const PicardReportRow& row : r.report) {
    if (!std::isnan(row.q_n) && row.increment_norm > 1e-13) CHECK(row.q_n <= row.apriori_q + 0.1);
  }
  CHECK(r.state.lambda.size() == r.state.times.size());
}

}  // TEST_SUITE
