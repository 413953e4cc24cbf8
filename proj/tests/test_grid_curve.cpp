#include "doctest.h"

#include "elastica/errors.hpp"
#include "elastica/grid_curve.hpp"
#include "elastica/stencils.hpp"
#include "oracles/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <vector>

using namespace elastica;
using std::numbers::pi;

TEST_SUITE("grid_curve") {

TEST_CASE("grid nodes, spacing and trapezoid weights") {
  const Grid g(2.0, 16);
  CHECK(g.size() == 17);
  CHECK(g.spacing() == doctest::Approx(0.125));
  CHECK(g.node(16) == 2.0);
  CHECK(g.weights().sum() == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(g.weight(0) == doctest::Approx(0.0625));
  CHECK_THROWS_AS(Grid(1.0, 4), Error);
  CHECK_THROWS_AS(Grid(-1.0, 16), Error);
}

TEST_CASE("angle field validation") {
  const Grid g(1.0, 8);
  CHECK_THROWS_AS(AngleField::make(g, Eigen::VectorXd::Zero(5)), Error);
  Eigen::VectorXd bad = Eigen::VectorXd::Zero(9);
  bad[3] = std::nan("");
  try {
    AngleField::make(g, bad);
    FAIL("expected invalid-state error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidState);
  }
}

TEST_CASE("constraint admissibility") {
  CHECK_NOTHROW(ConstraintSpec::make(Vec2(0.8, 0.0), 1.0));
  try {
    ConstraintSpec::make(Vec2(1.0, 0.0), 1.0);
    FAIL("expected constraint error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Constraint);
    CHECK(std::string(e.what()).find("strictly exceed") != std::string::npos);
  }
  CHECK_THROWS_AS(ConstraintSpec::make(Vec2(3.0, 4.0), 4.0), Error);
}

TEST_CASE("straight line: zero curvature, energy and exact tangent integral") {
  const Grid g(1.0, 64);
  const AngleField f = AngleField::sample(g, [](double) { return 0.3; });
  CHECK(signed_curvature(f).cwiseAbs().maxCoeff() < 1e-13);
  CHECK(bending_energy(f) < 1e-28);
  const Vec2 T = tangent_integral(f);
  CHECK(T[0] == doctest::Approx(std::cos(0.3)).epsilon(1e-15));
  CHECK(T[1] == doctest::Approx(std::sin(0.3)).epsilon(1e-15));
}

TEST_CASE("unit circle: curvature one, energy pi, closed to rounding") {
  const Grid g(2 * pi, 256);
  const AngleField f = AngleField::sample(g, [](double s) { return s; });
  CHECK((signed_curvature(f).array() - 1.0).abs().maxCoeff() < 1e-12);
  CHECK(bending_energy(f) == doctest::Approx(pi).epsilon(1e-12));
  CHECK(tangent_integral(f).norm() < 1e-13);
  const CurveSample c = reconstruct_curve(f, Vec2::Zero());
  CHECK((c.positions.back() - c.positions.front()).norm() < 1e-13);
}

TEST_CASE("curvature is second-order accurate") {
  // phi = cos(pi s): k = -pi sin(pi s). Error ratios at doubling N near 4.
  double prev = 0.0;
  for (int n : {64, 128, 256}) {
    const Grid g(1.0, n);
    const AngleField f = AngleField::sample(g, [](double s) { return std::cos(pi * s); });
    const Eigen::VectorXd k = signed_curvature(f);
    double err = 0.0;
    for (int i = 0; i < g.size(); ++i) err = std::max(err, std::abs(k[i] + pi * std::sin(pi * g.node(i))));
    if (prev > 0.0) CHECK(std::log2(prev / err) == doctest::Approx(2.0).epsilon(0.1));
    prev = err;
  }
}

TEST_CASE("tangent integral against the Simpson oracle") {
  auto phi = [](double s) { return 0.7 * std::cos(pi * s) + 0.2 * std::sin(3 * s); };
  const double cx = oracle::simpson([&](double s) { return std::cos(phi(s)); }, 0, 1);
  const double cy = oracle::simpson([&](double s) { return std::sin(phi(s)); }, 0, 1);
  const AngleField f = AngleField::sample(Grid(1.0, 1 << 14), phi);
  const Vec2 T = tangent_integral(f);
  CHECK(std::abs(T[0] - cx) < 1e-8);
  CHECK(std::abs(T[1] - cy) < 1e-8);
}

TEST_CASE("energy against the Simpson oracle") {
  auto dphi = [](double s) { return -0.7 * pi * std::sin(pi * s); };
  const double F = 0.5 * oracle::simpson([&](double s) { return dphi(s) * dphi(s); }, 0, 1);
  const AngleField f = AngleField::sample(Grid(1.0, 1 << 12), [](double s) { return 0.7 * std::cos(pi * s); });
  CHECK(std::abs(bending_energy(f) - F) < 1e-6);
}

TEST_CASE("reconstructed curve ends at delta_p") {
  const AngleField f = AngleField::sample(Grid(1.0, 128), [](double s) { return 0.9 * std::cos(pi * s); });
  const CurveSample c = reconstruct_curve(f, Vec2(1.0, -2.0));
  CHECK((c.positions.back() - Vec2(1.0, -2.0) - tangent_integral(f)).norm() < 1e-14);
  CHECK((c.tangents[5] - Vec2(std::cos(f.phi[5]), std::sin(f.phi[5]))).norm() == 0.0);
  CHECK(c.normals[5].dot(c.tangents[5]) == doctest::Approx(0.0));
}

TEST_CASE("fornberg weights reproduce textbook stencils") {
  const std::vector<double> w = stencils::one_sided_weights(1, 3);
  CHECK(w[0] == doctest::Approx(-1.5));
  CHECK(w[1] == doctest::Approx(2.0));
  CHECK(w[2] == doctest::Approx(-0.5));
  const double offs[] = {-1.0, 0.0, 1.0};
  const std::vector<double> c = stencils::fornberg_weights(2, offs);
  CHECK(c[0] == doctest::Approx(1.0));
  CHECK(c[1] == doctest::Approx(-2.0));
  CHECK(c[2] == doctest::Approx(1.0));
}

TEST_CASE("one-sided derivatives are exact on polynomials of the stencil degree") {
  std::vector<double> v(10);
  const double h = 0.1;
  for (int i = 0; i < 10; ++i) {
    const double x = i * h;
    v[i] = 1 + 2 * x - 3 * x * x + x * x * x * x;
  }
  CHECK(stencils::left_derivative(v, h, 1, 6) == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(stencils::left_derivative(v, h, 2, 6) == doctest::Approx(-6.0).epsilon(1e-9));
  // Right end, x = 0.9: p'(x) = 2 - 6x + 4x^3.
  CHECK(stencils::right_derivative(v, h, 1, 6) == doctest::Approx(2 - 5.4 + 4 * 0.729).epsilon(1e-10));
  CHECK(stencils::right_derivative(v, h, 3, 6) == doctest::Approx(24 * 0.9).epsilon(1e-8));
}

TEST_CASE("boundary curvature vanishes for even data") {
  const AngleField f = AngleField::sample(Grid(1.0, 256), [](double s) { return 0.8 * std::cos(pi * s); });
  const Vec2 k = boundary_curvature(f);
  CHECK(std::abs(k[0]) < 1e-10);
  CHECK(std::abs(k[1]) < 1e-10);
}

TEST_CASE("even periodic extension") {
  const Grid g(1.0, 64);
  auto phi = [](double s) { return std::cos(pi * s) + 0.1 * std::cos(2 * pi * s); };
  const AngleField f = AngleField::sample(g, phi);
  const EvenPeriodicExtension ext = extend_even_periodic(f);
  CHECK(ext.period() == 2.0);
  for (int i = 0; i <= 64; ++i) CHECK(ext(g.node(i)) == f.phi[i]);
  for (double s : {0.013, 0.37, 0.99}) {
    CHECK(ext(-s) == doctest::Approx(ext(s)).epsilon(1e-14));
    CHECK(ext(s + 2.0) == doctest::Approx(ext(s)).epsilon(1e-12));
    CHECK(ext(2.0 - s) == doctest::Approx(ext(s)).epsilon(1e-12));
    CHECK(std::abs(ext(s) - phi(s)) < 1e-6);
  }
}

}  // TEST_SUITE
