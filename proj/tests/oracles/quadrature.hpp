#pragma once

// Composite Simpson rule on analytic integrands; independent of the
// library's trapezoid code.

#include <cmath>
#include <functional>

namespace oracle {

inline double simpson(const std::function<double(double)>& f, double a, double b, long panels = 1000000) {
  if (panels % 2) ++panels;
  const double h = (b - a) / panels;
  double odd = 0.0, even = 0.0;
  for (long i = 1; i < panels; ++i) {
    const double v = f(a + i * h);
    (i % 2 ? odd : even) += v;
  }
  return h / 3.0 * (f(a) + f(b) + 4.0 * odd + 2.0 * even);
}

struct TrigMoments {
  double ss, sc, cc, k2c, k2s;
};

// Gram entries and curvature-weighted tangent integrals of an analytic
// angle function phi with derivative dphi on [0, L].
inline TrigMoments trig_moments(const std::function<double(double)>& phi,
                                const std::function<double(double)>& dphi, double L,
                                long panels = 1000000) {
  TrigMoments m{};
  m.ss = simpson([&](double s) { return std::pow(std::sin(phi(s)), 2); }, 0, L, panels);
  m.sc = simpson([&](double s) { return std::sin(phi(s)) * std::cos(phi(s)); }, 0, L, panels);
  m.cc = simpson([&](double s) { return std::pow(std::cos(phi(s)), 2); }, 0, L, panels);
  m.k2c = simpson([&](double s) { return dphi(s) * dphi(s) * std::cos(phi(s)); }, 0, L, panels);
  m.k2s = simpson([&](double s) { return dphi(s) * dphi(s) * std::sin(phi(s)); }, 0, L, panels);
  return m;
}

// lambda from A_T lambda = (int k^2 cos, int k^2 sin), solved by Cramer's rule.
inline void multipliers(const TrigMoments& m, double& l1, double& l2) {
  const double a11 = m.ss, a12 = -m.sc, a21 = -m.sc, a22 = m.cc;
  const double det = a11 * a22 - a12 * a21;
  l1 = (m.k2c * a22 - a12 * m.k2s) / det;
  l2 = (a11 * m.k2s - a21 * m.k2c) / det;
}

}  // namespace oracle
