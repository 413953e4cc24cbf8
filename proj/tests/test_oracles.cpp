#include "doctest.h"

#include "oracles/quadrature.hpp"
#include "oracles/shooting.hpp"

#include <cmath>
#include <numbers>

using std::numbers::pi;

// The oracles are checked against closed forms before other suites trust them.
TEST_SUITE("oracles") {

TEST_CASE("simpson integrates cubics exactly and smooth functions closely") {
  CHECK(oracle::simpson([](double x) { return x * x * x - 2 * x; }, 0, 2, 10) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(std::abs(oracle::simpson([](double x) { return std::exp(x); }, 0, 1) - (std::exp(1.0) - 1)) < 1e-14);
}

TEST_CASE("circle multipliers vanish in the oracle") {
  const auto m = oracle::trig_moments([](double s) { return s; }, [](double) { return 1.0; }, 2 * pi);
  double l1 = 1, l2 = 1;
  oracle::multipliers(m, l1, l2);
  CHECK(std::abs(l1) < 1e-12);
  CHECK(std::abs(l2) < 1e-12);
}

TEST_CASE("shooting finds a symmetric hinged elastica") {
  const oracle::Elastica e = oracle::shoot(1.0, 0.8, 0.0, 0.9, pi * pi, 0.0, 256);
  REQUIRE(e.converged);
  REQUIRE(e.phi.size() == 257);
  // Symmetric first mode: phi(L) = -phi(0), no vertical force.
  CHECK(e.phi.back() == doctest::Approx(-e.phi.front()).epsilon(1e-9));
  CHECK(std::abs(e.l2) < 1e-8);
  CHECK(e.l1 > 0.0);
  // Small-angle check: the buckling load tends to pi^2 as the end shortening vanishes.
  const oracle::Elastica near = oracle::shoot(1.0, 0.999, 0.0, 0.05, pi * pi, 0.0, 64);
  REQUIRE(near.converged);
  CHECK(near.l1 == doctest::Approx(pi * pi).epsilon(2e-3));
}

}  // TEST_SUITE
