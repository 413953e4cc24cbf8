#include "elastica/heat_picard.hpp"

#include "elastica/errors.hpp"
#include "elastica/multipliers.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

namespace elastica {

namespace {

using Spectrum = std::vector<std::complex<double>>;

void require_positive_time(double t, const char* who) {
  if (!(t > 0.0)) {
    std::ostringstream os;
    os << who << ": time must be positive, got " << t;
    throw Error(ErrorKind::Domain, os.str());
  }
}

// Representative of node offset j in [-P/2, P/2).
double centered_offset(int j, int points, double spacing) {
  return (j < points / 2 ? j : j - points) * spacing;
}

double image_sum(double x, double t, double period, int images) {
  double sum = 0.0;
  for (int m = -images; m <= images; ++m) sum += heat_kernel(x - m * period, t);
  return sum;
}

// Cubic Lagrange interpolation of periodic samples.
double periodic_interpolate(const Eigen::VectorXd& v, double spacing, double s) {
  const int p = static_cast<int>(v.size());
  const double x = s / spacing;
  const double fl = std::floor(x);
  const double u = x - fl;
  auto at = [&](long i) {
    long r = i % p;
    if (r < 0) r += p;
    return v[r];
  };
  const long i = static_cast<long>(fl);
  if (u == 0.0) return at(i);
  const double wm = -u * (u - 1.0) * (u - 2.0) / 6.0;
  const double w0 = (u + 1.0) * (u - 1.0) * (u - 2.0) / 2.0;
  const double w1 = -(u + 1.0) * u * (u - 2.0) / 2.0;
  const double w2 = (u + 1.0) * u * (u - 1.0) / 6.0;
  return wm * at(i - 1) + w0 * at(i) + w1 * at(i + 1) + w2 * at(i + 2);
}

double slab_norm(const std::vector<Eigen::VectorXd>& slices, double length) {
  double value = 0.0, slope = 0.0;
  for (const auto& v : slices) {
    value = std::max(value, v.cwiseAbs().maxCoeff());
    slope = std::max(slope, periodic_derivative({length, v}).cwiseAbs().maxCoeff());
  }
  return value + slope;
}

Grid half_period_grid(double length, int points) { return Grid(length, points / 2); }

AngleField restrict_to_half(double length, const Eigen::VectorXd& v) {
  const int half = static_cast<int>(v.size()) / 2;
  return AngleField{half_period_grid(length, static_cast<int>(v.size())), v.head(half + 1), 0.0};
}

Eigen::VectorXd source_of(double length, const Eigen::VectorXd& psi, Vec2* lambda_out,
                          const std::optional<Vec2>& fixed_lambda = std::nullopt) {
  const Vec2 lambda =
      fixed_lambda ? *fixed_lambda : lambdas_continuous(restrict_to_half(length, psi)).lambda;
  if (lambda_out) *lambda_out = lambda;
  return (lambda[0] * psi.array().sin() - lambda[1] * psi.array().cos()).matrix();
}

// Uniform draw in [0, 1) from the top 53 bits; identical on every platform.
double uniform01(std::mt19937_64& gen) { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }

}  // namespace

double heat_kernel(double x, double t) {
  require_positive_time(t, "heat_kernel");
  return std::exp(-x * x / (4.0 * t)) / std::sqrt(4.0 * std::numbers::pi * t);
}

double heat_kernel_dx(double x, double t) {
  return -x / (2.0 * t) * heat_kernel(x, t);
}

KernelMoments kernel_moments(double t) {
  require_positive_time(t, "kernel_moments");
  using boost::math::quadrature::gauss_kronrod;
  const double cut = 12.0 * std::sqrt(t);
  KernelMoments m;
  // Both integrands are even in x; |dK/dx| has a kink at the origin.
  m.mass = 2.0 * gauss_kronrod<double, 61>::integrate(
                     [t](double x) { return heat_kernel(x, t); }, 0.0, cut, 15, 1e-14);
  m.abs_slope = 2.0 * gauss_kronrod<double, 61>::integrate(
                          [t](double x) { return std::abs(heat_kernel_dx(x, t)); }, 0.0, cut,
                          15, 1e-14);
  return m;
}

KernelParams KernelParams::resolved(int intervals, double length) const {
  KernelParams p = *this;
  if (p.quad_nodes == 0) p.quad_nodes = 4 * intervals;
  if (p.image_count < 3) throw Error(ErrorKind::Domain, "kernel params: image_count must be >= 3");
  if (p.quad_nodes < 4 * intervals || p.quad_nodes % (2 * intervals) != 0) {
    std::ostringstream os;
    os << "kernel params: quad_nodes = " << p.quad_nodes << " must be a multiple of 2N and at least 4N = "
       << 4 * intervals;
    throw Error(ErrorKind::Domain, os.str());
  }
  if (p.time_slices < 2) throw Error(ErrorKind::Domain, "kernel params: time_slices must be >= 2");
  if (p.t_floor == 0.0) {
    const double spacing = 2.0 * length / p.quad_nodes;
    p.t_floor = spacing * spacing;
  }
  if (!(p.t_floor > 0.0)) throw Error(ErrorKind::Domain, "kernel params: t_floor must be positive");
  return p;
}

double KernelParams::truncation_bound(double length, double t) const {
  const double reach = 2.0 * length * image_count;
  return std::exp(-reach * reach / (8.0 * t));
}

PeriodicSamples sample_periodic(const EvenPeriodicExtension& ext, int points) {
  PeriodicSamples out;
  out.length = ext.field().grid.length();
  out.values.resize(points);
  const double spacing = 2.0 * out.length / points;
  for (int j = 0; j < points; ++j) out.values[j] = ext(j * spacing);
  return out;
}

Eigen::VectorXd periodic_derivative(const PeriodicSamples& f) {
  const int p = f.points();
  const double inv2h = 0.5 / f.spacing();
  Eigen::VectorXd d(p);
  for (int j = 0; j < p; ++j) {
    d[j] = (f.values[(j + 1) % p] - f.values[(j + p - 1) % p]) * inv2h;
  }
  return d;
}

HeatConvolver::HeatConvolver(double length, int points, const KernelParams& params)
    : length_(length), points_(points), params_(params) {
  if (points < 8 || points % 2 != 0) {
    throw Error(ErrorKind::Domain, "heat convolver: need an even number of at least 8 points");
  }
}

Spectrum HeatConvolver::kernel_spectrum(double t) const {
  if (t < params_.t_floor) return Spectrum(points_, {1.0, 0.0});
  const double h = spacing();
  std::vector<double> g(points_);
  for (int j = 0; j < points_; ++j) {
    g[j] = h * image_sum(centered_offset(j, points_, h), t, 2.0 * length_, params_.image_count);
  }
  Spectrum out;
  Eigen::FFT<double> fft;
  fft.fwd(out, g);
  return out;
}

Spectrum HeatConvolver::forward(const Eigen::VectorXd& values) const {
  std::vector<double> in(values.data(), values.data() + values.size());
  Spectrum out;
  Eigen::FFT<double> fft;
  fft.fwd(out, in);
  return out;
}

Eigen::VectorXd HeatConvolver::inverse(const Spectrum& spectrum) const {
  std::vector<double> out;
  Eigen::FFT<double> fft;
  fft.inv(out, spectrum);
  return Eigen::Map<const Eigen::VectorXd>(out.data(), static_cast<Eigen::Index>(out.size()));
}

Eigen::VectorXd HeatConvolver::apply(const Eigen::VectorXd& values, double t) const {
  Spectrum f = forward(values);
  const Spectrum g = kernel_spectrum(t);
  for (int j = 0; j < points_; ++j) f[j] *= g[j];
  return inverse(f);
}

double free_heat(const EvenPeriodicExtension& ext, double s, double t, const KernelParams& params) {
  if (t < 0.0) throw Error(ErrorKind::Domain, "free_heat: negative time");
  const Grid& g = ext.field().grid;
  const KernelParams p = params.resolved(g.intervals(), g.length());
  if (t < p.t_floor) return ext(s);
  const double period = ext.period();
  const double h = period / p.quad_nodes;
  double sum = 0.0;
  for (int l = 0; l < p.quad_nodes; ++l) {
    const double xi = l * h;
    sum += image_sum(s - xi, t, period, p.image_count) * ext(xi);
  }
  return h * sum;
}

AngleField PicardState::slice_field(int k, const Grid& grid) const {
  const int half = points() / 2;
  if (std::abs(grid.length() - length) > 1e-12 * length || half % grid.intervals() != 0) {
    throw Error(ErrorKind::Domain, "picard slice: grid nodes are not quadrature nodes");
  }
  const int stride = half / grid.intervals();
  Eigen::VectorXd phi(grid.size());
  for (int i = 0; i < grid.size(); ++i) phi[i] = psi.at(k)[i * stride];
  return AngleField::make(grid, std::move(phi), times.at(k));
}

PicardState PicardState::from_function(double length, int points, std::vector<double> times,
                                       const std::function<double(double, double)>& f) {
  PicardState st;
  st.length = length;
  st.times = std::move(times);
  const double h = 2.0 * length / points;
  for (double t : st.times) {
    Eigen::VectorXd v(points);
    for (int j = 0; j < points; ++j) v[j] = f(j * h, t);
    st.psi.push_back(std::move(v));
  }
  return st;
}

std::vector<Eigen::VectorXd> source_slices(PicardState& state, const std::optional<Vec2>& fixed_lambda) {
  std::vector<Eigen::VectorXd> out;
  out.reserve(state.psi.size());
  state.lambda.assign(state.psi.size(), Vec2::Zero());
  for (std::size_t k = 0; k < state.psi.size(); ++k) {
    out.push_back(source_of(state.length, state.psi[k], &state.lambda[k], fixed_lambda));
  }
  return out;
}

std::vector<Eigen::VectorXd> duhamel_slices(const HeatConvolver& conv,
                                            const std::vector<Eigen::VectorXd>& sources,
                                            const std::vector<double>& times,
                                            DuhamelBounds* bounds) {
  const int slices = static_cast<int>(times.size()) - 1;
  if (slices < 1 || sources.size() != times.size()) {
    throw Error(ErrorKind::Domain, "duhamel: need matching sources and at least two time slices");
  }
  const double dtau = times.back() / slices;
  for (int k = 0; k <= slices; ++k) {
    if (std::abs(times[k] - k * dtau) > 1e-12 * times.back()) {
      throw Error(ErrorKind::Domain, "duhamel: time slices must be uniform from 0");
    }
  }
  const int p = conv.points();

  std::vector<Spectrum> kernels;
  kernels.reserve(slices + 1);
  for (int d = 0; d <= slices; ++d) kernels.push_back(conv.kernel_spectrum(d * dtau));
  std::vector<Spectrum> src;
  src.reserve(slices + 1);
  for (const auto& h : sources) src.push_back(conv.forward(h));

  std::vector<Eigen::VectorXd> out;
  out.push_back(Eigen::VectorXd::Zero(p));
  double C3 = sources[0].cwiseAbs().maxCoeff();
  const double length = 0.5 * conv.spacing() * p;
  for (int i = 1; i <= slices; ++i) {
    C3 = std::max(C3, sources[i].cwiseAbs().maxCoeff());
    Spectrum acc(p, {0.0, 0.0});
    for (int k = 0; k <= i; ++k) {
      const double w = (k == 0 || k == i) ? 0.5 * dtau : dtau;
      const Spectrum& g = kernels[i - k];
      const Spectrum& f = src[k];
      for (int j = 0; j < p; ++j) acc[j] += w * g[j] * f[j];
    }
    out.push_back(conv.inverse(acc));

    if (bounds) {
      const double t = times[i];
      const double value_bound = t * C3;
      const double slope_bound = 2.0 * std::sqrt(t / std::numbers::pi) * C3;
      const Eigen::VectorXd slope = periodic_derivative({length, out.back()});
      for (int j = 0; j < p; ++j) {
        const double v = std::abs(out.back()[j]);
        const double d = std::abs(slope[j]);
        ++bounds->evaluations;
        if (v > value_bound * (1.0 + 1e-9) + 1e-14 || d > slope_bound * (1.0 + 1e-9) + 1e-14) {
          ++bounds->violations;
        }
        if (value_bound > 0.0) bounds->worst_value_ratio = std::max(bounds->worst_value_ratio, v / value_bound);
        if (slope_bound > 0.0) bounds->worst_slope_ratio = std::max(bounds->worst_slope_ratio, d / slope_bound);
      }
    }
  }
  return out;
}

double duhamel(const PicardState& state, double s, double t, const KernelParams& params) {
  const int slices = static_cast<int>(state.times.size()) - 1;
  if (slices < 1) throw Error(ErrorKind::Domain, "duhamel: state has no time slices");
  const double t_last = state.times.back();
  if (!(t > 0.0) || t > t_last * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "duhamel: t = " << t << " outside (0, " << t_last << "]";
    throw Error(ErrorKind::Domain, os.str());
  }
  PicardState copy = state;
  const std::vector<Eigen::VectorXd> sources = source_slices(copy);
  const int p = state.points();
  const double h = state.spacing();
  const double period = 2.0 * state.length;
  const double floor = params.t_floor > 0.0 ? params.t_floor : h * h;
  const int images = params.image_count;

  // h(., tau) linear in time between stored slices.
  auto source_at = [&](double tau) -> Eigen::VectorXd {
    const auto it = std::upper_bound(state.times.begin(), state.times.end(), tau);
    int hi = static_cast<int>(it - state.times.begin());
    hi = std::clamp(hi, 1, slices);
    const int lo = hi - 1;
    const double a = (tau - state.times[lo]) / (state.times[hi] - state.times[lo]);
    return (1.0 - a) * sources[lo] + a * sources[hi];
  };

  double total = 0.0;
  const double dtau = t / slices;
  for (int k = 0; k <= slices; ++k) {
    const double tau = k * dtau;
    const double w = (k == 0 || k == slices) ? 0.5 * dtau : dtau;
    const Eigen::VectorXd src = source_at(tau);
    const double lag = t - tau;
    double conv = 0.0;
    if (lag < floor) {
      conv = periodic_interpolate(src, h, s);
    } else {
      for (int l = 0; l < p; ++l) conv += image_sum(s - l * h, lag, period, images) * src[l];
      conv *= h;
    }
    total += w * conv;
  }
  return total;
}

double apriori_factor(double C4, double t0) {
  return C4 * (t0 + 2.0 * std::sqrt(t0 / std::numbers::pi));
}

double estimate_lipschitz(const AngleField& phi0, const KernelParams& params, int directions,
                          double eps, std::uint64_t seed) {
  const Grid& g = phi0.grid;
  const double L = g.length();
  const KernelParams p = params.resolved(g.intervals(), L);
  const PeriodicSamples base = sample_periodic(extend_even_periodic(phi0), p.quad_nodes);
  const Eigen::VectorXd h0 = source_of(L, base.values, nullptr);

  std::mt19937_64 gen(seed);
  constexpr int kModes = 5;
  double best = 0.0;
  for (int d = 0; d < directions; ++d) {
    double coef[kModes];
    for (double& c : coef) c = 2.0 * uniform01(gen) - 1.0;
    Eigen::VectorXd v(base.points());
    for (int j = 0; j < base.points(); ++j) {
      const double s = j * base.spacing();
      double sum = 0.0;
      for (int m = 0; m < kModes; ++m) sum += coef[m] * std::cos(m * std::numbers::pi * s / L);
      v[j] = sum;
    }
    const double norm = v.cwiseAbs().maxCoeff() + periodic_derivative({L, v}).cwiseAbs().maxCoeff();
    if (!(norm > 0.0)) continue;
    const Eigen::VectorXd h1 = source_of(L, base.values + eps * v, nullptr);
    best = std::max(best, (h1 - h0).cwiseAbs().maxCoeff() / (eps * norm));
  }
  return 1.5 * best;
}

double choose_t0(double length, double C4) {
  double t0 = length * length / 16.0;
  const double smallest = 1e-14 * length * length;
  while (apriori_factor(C4, t0) >= 1.0) {
    t0 *= 0.5;
    if (t0 < smallest) {
      throw Error(ErrorKind::NoContraction, "no t0 down to 1e-14 L^2 passes the contraction test");
    }
  }
  return t0;
}

PicardResult picard_solve(const AngleField& phi0, const ConstraintSpec& constraint, double t0,
                          int n_max, double tol, const KernelParams& params,
                          const std::optional<Vec2>& fixed_lambda) {
  const Grid& g = phi0.grid;
  const double L = g.length();
  if (!(t0 > 0.0)) throw Error(ErrorKind::Domain, "picard: t0 must be positive");
  if (n_max < 1) throw Error(ErrorKind::Domain, "picard: n_max must be at least 1");
  if (!(tol > 0.0)) throw Error(ErrorKind::Domain, "picard: tol must be positive");
  const double res = constraint_residual(phi0, constraint).norm();
  if (res > 1e-6 * L) {
    std::ostringstream os;
    os << "picard: initial data violates the endpoint constraint, |residual| = " << res;
    throw Error(ErrorKind::Precondition, os.str());
  }
  const KernelParams p = params.resolved(g.intervals(), L);

  PicardResult result;
  result.t0 = t0;
  PicardState& st = result.state;
  st.length = L;
  st.d0 = 0.5 * (phi0.phi.maxCoeff() - phi0.phi.minCoeff());
  st.M0 = 2.0 * signed_curvature(phi0).cwiseAbs().maxCoeff();

  const PeriodicSamples base = sample_periodic(extend_even_periodic(phi0), p.quad_nodes);
  const HeatConvolver conv(L, p.quad_nodes, p);
  const int slices = p.time_slices;
  for (int k = 0; k <= slices; ++k) st.times.push_back(k == slices ? t0 : t0 * k / slices);

  // psi_0 = U_{phi0}.
  const Spectrum base_hat = conv.forward(base.values);
  std::vector<Eigen::VectorXd> free(slices + 1);
  for (int k = 0; k <= slices; ++k) {
    Spectrum f = base_hat;
    const Spectrum kern = conv.kernel_spectrum(st.times[k]);
    for (int j = 0; j < p.quad_nodes; ++j) f[j] *= kern[j];
    free[k] = conv.inverse(f);
  }
  st.psi = free;

  result.C4 = estimate_lipschitz(phi0, p);
  result.apriori_q = apriori_factor(result.C4, t0);

  double previous = std::numeric_limits<double>::quiet_NaN();
  int stalled = 0;
  for (int n = 1; n <= n_max; ++n) {
    const std::vector<Eigen::VectorXd> sources = source_slices(st, fixed_lambda);
    const std::vector<Eigen::VectorXd> H = duhamel_slices(conv, sources, st.times, &result.bounds);
    std::vector<Eigen::VectorXd> next(slices + 1);
    std::vector<Eigen::VectorXd> diff(slices + 1);
    for (int k = 0; k <= slices; ++k) {
      next[k] = free[k] + H[k];
      diff[k] = next[k] - st.psi[k];
    }
    const double inc = slab_norm(diff, L);
    const double q = std::isnan(previous) || previous == 0.0 ? std::numeric_limits<double>::quiet_NaN()
                                                             : inc / previous;
    result.report.push_back({n, inc, q, result.apriori_q});
    st.psi = std::move(next);
    st.n = n;
    if (!std::isnan(q)) st.contraction_q = q;
    previous = inc;

    if (inc <= tol) {
      result.converged = true;
      break;
    }
    stalled = (!std::isnan(q) && q >= 1.0) ? stalled + 1 : 0;
    if (stalled >= 3) {
      std::ostringstream os;
      os << "picard iteration does not contract (q_n >= 1 three times running, last q = " << q
         << "); retry with a smaller t0 than " << t0;
      throw Error(ErrorKind::NoContraction, os.str());
    }
  }
  source_slices(st, fixed_lambda);

  const int half = p.quad_nodes / 2;
  for (const auto& v : st.psi) {
    for (int j = 1; j < half; ++j) {
      result.max_evenness_defect = std::max(result.max_evenness_defect, std::abs(v[j] - v[p.quad_nodes - j]));
    }
    const Eigen::VectorXd d = periodic_derivative({L, v});
    result.max_boundary_slope = std::max({result.max_boundary_slope, std::abs(d[0]), std::abs(d[half])});
    const double osc = v.head(half + 1).maxCoeff() - v.head(half + 1).minCoeff();
    if (osc < st.d0 || d.cwiseAbs().maxCoeff() > st.M0) result.class_ok = false;
  }
  return result;
}

}  // namespace elastica
