#include "elastica/presets.hpp"

#include "elastica/errors.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "json.hpp"

namespace elastica {

namespace {

double uniform01(std::mt19937_64& gen) { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }

double uniform(std::mt19937_64& gen, double lo, double hi) { return lo + (hi - lo) * uniform01(gen); }

double flat_exp(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }

struct Residual {
  Vec2 value;
  Mat2 jacobian;
};

Residual constraint_map(const Grid& grid, const Eigen::VectorXd& phi, const Eigen::VectorXd& shape,
                        const Vec2& target) {
  Residual r{-target, Mat2::Zero()};
  for (int i = 0; i < grid.size(); ++i) {
    const double w = grid.weight(i);
    const double c = std::cos(phi[i]), s = std::sin(phi[i]);
    r.value += w * Vec2(c, s);
    r.jacobian(0, 0) -= w * s;
    r.jacobian(1, 0) += w * c;
    r.jacobian(0, 1) -= w * s * shape[i];
    r.jacobian(1, 1) += w * c * shape[i];
  }
  return r;
}

[[noreturn]] void infeasible(const std::string& why) {
  throw Error(ErrorKind::PresetInfeasible, "preset infeasible: " + why);
}

}  // namespace

double smooth_step(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double a = flat_exp(x), b = flat_exp(1.0 - x);
  return a / (a + b);
}

double smooth_bump(double x) {
  if (std::abs(x) >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - x * x));
}

Eigen::VectorXd fit_constraint(const Grid& grid, const Eigen::VectorXd& shape,
                               const Eigen::VectorXd& offset, const ConstraintSpec& constraint,
                               double a_guess) {
  const double L = grid.length();
  const double mean = trapezoid(grid, shape) / L;
  const double var = trapezoid(grid, (shape.array() - mean).square().matrix());
  if (!(var > 1e-14 * L)) infeasible("the shape function is constant, so no amplitude can bend it");

  double a = a_guess != 0.0 ? a_guess : std::sqrt(2.0 * constraint.slack() / var);
  const Vec2& dp = constraint.delta_p;
  const double heading = dp.norm() > 0.0 ? std::atan2(dp[1], dp[0]) : 0.0;
  double theta = heading - a * mean - trapezoid(grid, offset) / L;

  auto build = [&](double th, double amp) -> Eigen::VectorXd {
    return (th + amp * shape.array() + offset.array()).matrix();
  };
  Eigen::VectorXd phi = build(theta, a);
  Residual r = constraint_map(grid, phi, shape, dp);
  const double target_tol = 1e-14 * L;
  for (int iter = 0; iter < 50 && r.value.norm() > target_tol; ++iter) {
    const double det = r.jacobian.determinant();
    if (!(std::abs(det) > 1e-300)) break;
    const Vec2 step = r.jacobian.partialPivLu().solve(r.value);
    double scale = 1.0;
    bool improved = false;
    for (int half = 0; half < 30; ++half, scale *= 0.5) {
      const Eigen::VectorXd trial = build(theta - scale * step[0], a - scale * step[1]);
      const Residual rt = constraint_map(grid, trial, shape, dp);
      if (rt.value.norm() < r.value.norm()) {
        theta -= scale * step[0];
        a -= scale * step[1];
        phi = trial;
        r = rt;
        improved = true;
        break;
      }
    }
    if (!improved) break;
  }
  if (!(r.value.norm() <= 1e-9 * L)) {
    std::ostringstream os;
    os.precision(6);
    os << "Newton on (rotation, amplitude) left a constraint residual of " << r.value.norm()
       << " after 50 iterations";
    infeasible(os.str());
  }
  return phi;
}

AngleField make_initial(const InitialData& init, const Grid& grid, const ConstraintSpec& constraint,
                        std::uint64_t seed) {
  const double L = grid.length();
  const Eigen::VectorXd s = grid.nodes();
  const int n = grid.size();

  if (init.preset == "closed-circle") {
    return AngleField::make(grid, (2.0 * std::numbers::pi / L * s.array()).matrix());
  }
  if (init.preset == "closed-ellipse-angle") {
    if (!(std::abs(init.eccentricity) < 0.5)) {
      infeasible("closed-ellipse-angle needs |eccentricity| < 0.5 for a convex curve");
    }
    Eigen::VectorXd phi(n);
    for (int i = 0; i < n; ++i) {
      const double u = 2.0 * std::numbers::pi * s[i] / L;
      phi[i] = u + init.eccentricity * std::sin(2.0 * u);
    }
    return AngleField::make(grid, std::move(phi));
  }
  if (init.preset == "from-file") {
    AngleField f = read_angle_field(init.path);
    if (!(f.grid == grid)) {
      std::ostringstream os;
      os << "angle file '" << init.path.string() << "' has L = " << f.grid.length()
         << ", N = " << f.grid.intervals() << "; the manifest asks for L = " << L
         << ", N = " << grid.intervals();
      throw Error(ErrorKind::Manifest, os.str());
    }
    return f;
  }

  Eigen::VectorXd shape(n), offset = Eigen::VectorXd::Zero(n);
  double a_guess = 0.0;
  if (init.preset == "straight-plus-bump") {
    const double lo = init.center - init.width, hi = init.center + init.width;
    if (!(lo > 0.0 && hi < 1.0)) infeasible("bump support must lie strictly inside (0, L)");
    for (int i = 0; i < n; ++i) shape[i] = smooth_bump((s[i] / L - init.center) / init.width);
    // Normalised so that the amplitude is the peak angle.
    shape /= smooth_bump(0.0);
    a_guess = init.amplitude;
  } else if (init.preset == "perturbed-arc") {
    // Everything varies inside [0.2 L, 0.8 L] only, so any end stencil
    // spanning at most 0.2 L sees a constant.
    for (int i = 0; i < n; ++i) shape[i] = std::cos(std::numbers::pi * smooth_step((s[i] / L - 0.2) / 0.6));
    std::mt19937_64 gen(seed);
    for (int b = 0; b < init.bumps; ++b) {
      const double c = uniform(gen, 0.4, 0.6);
      const double w = uniform(gen, 0.15, 0.2);
      const double amp = init.amplitude * uniform(gen, -1.0, 1.0) / smooth_bump(0.0);
      for (int i = 0; i < n; ++i) offset[i] += amp * smooth_bump((s[i] / L - c) / w);
    }
  } else {
    throw Error(ErrorKind::Manifest, "unknown preset '" + init.preset + "'");
  }
  return AngleField::make(grid, fit_constraint(grid, shape, offset, constraint, a_guess));
}

AngleField read_angle_field(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open angle file '" + path.string() + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::Manifest, "angle file '" + path.string() + "' is not valid JSON: " + e.what());
  }
  auto need = [&](const char* key, bool ok) {
    if (!ok) {
      throw Error(ErrorKind::Manifest, "angle file '" + path.string() + "': field '" + key +
                                           "' missing or of the wrong type");
    }
  };
  need("L", j.contains("L") && j["L"].is_number());
  need("N", j.contains("N") && j["N"].is_number_integer());
  need("phi", j.contains("phi") && j["phi"].is_array());
  const double t = j.contains("t") && j["t"].is_number() ? j["t"].get<double>() : 0.0;
  const std::vector<double> phi = j["phi"].get<std::vector<double>>();
  try {
    const Grid grid(j["L"].get<double>(), j["N"].get<int>());
    return AngleField::make(grid, Eigen::Map<const Eigen::VectorXd>(phi.data(), phi.size()), t);
  } catch (const Error& e) {
    throw Error(ErrorKind::Manifest, "angle file '" + path.string() + "': " + e.what());
  }
}

void write_angle_field(const AngleField& field, const std::filesystem::path& path) {
  nlohmann::json j;
  j["L"] = field.grid.length();
  j["N"] = field.grid.intervals();
  j["t"] = field.t;
  j["phi"] = std::vector<double>(field.phi.data(), field.phi.data() + field.phi.size());
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot write angle file '" + path.string() + "'");
  out << j.dump(1) << '\n';
  if (!out) throw Error(ErrorKind::Io, "write failed for '" + path.string() + "'");
}

}  // namespace elastica
