#include "elastica/plots.hpp"

#include "elastica/errors.hpp"
#include "elastica/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

namespace elastica {

namespace {

constexpr double kWidth = 640.0, kHeight = 480.0, kMargin = 50.0;
constexpr std::size_t kMaxPoints = 2000;
constexpr std::size_t kMaxCurves = 60;

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

struct Box {
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;

  void add(double x, double y) {
    x0 = std::min(x0, x); x1 = std::max(x1, x);
    y0 = std::min(y0, y); y1 = std::max(y1, y);
  }
  void pad() {
    if (!(x1 > x0)) { x0 -= 0.5; x1 += 0.5; }
    if (!(y1 > y0)) { y0 -= 0.5; y1 += 0.5; }
  }
  double px(double x) const { return kMargin + (x - x0) / (x1 - x0) * (kWidth - 2 * kMargin); }
  double py(double y) const { return kHeight - kMargin - (y - y0) / (y1 - y0) * (kHeight - 2 * kMargin); }
};

// Same scale on both axes for the curve overlay.
void equalize(Box& b) {
  const double sx = (b.x1 - b.x0) / (kWidth - 2 * kMargin);
  const double sy = (b.y1 - b.y0) / (kHeight - 2 * kMargin);
  const double s = std::max(sx, sy);
  const double cx = 0.5 * (b.x0 + b.x1), cy = 0.5 * (b.y0 + b.y1);
  b.x0 = cx - 0.5 * s * (kWidth - 2 * kMargin);
  b.x1 = cx + 0.5 * s * (kWidth - 2 * kMargin);
  b.y0 = cy - 0.5 * s * (kHeight - 2 * kMargin);
  b.y1 = cy + 0.5 * s * (kHeight - 2 * kMargin);
}

std::string header(const std::string& title) {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(kWidth) + "\" height=\"" +
         fmt(kHeight) + "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n" +
         "<text x=\"" + fmt(kWidth / 2) + "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"16\">" + title + "</text>\n";
}

std::string axes(const Box& b, const std::string& xlabel, const std::string& ylabel,
                 const std::string& ylo, const std::string& yhi) {
  std::string s;
  s += "<rect x=\"" + fmt(kMargin) + "\" y=\"" + fmt(kMargin) + "\" width=\"" + fmt(kWidth - 2 * kMargin) +
       "\" height=\"" + fmt(kHeight - 2 * kMargin) + "\" fill=\"none\" stroke=\"black\"/>\n";
  s += "<text x=\"" + fmt(kWidth / 2) + "\" y=\"" + fmt(kHeight - 12) +
       "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" + xlabel + " [" +
       fmt(b.x0) + ", " + fmt(b.x1) + "]</text>\n";
  s += "<text x=\"4\" y=\"" + fmt(kMargin - 8) + "\" font-family=\"sans-serif\" font-size=\"12\">" + ylabel +
       " [" + ylo + ", " + yhi + "]</text>\n";
  return s;
}

std::string polyline(const std::vector<std::pair<double, double>>& pts, const Box& b,
                     const std::string& color) {
  std::string s = "<polyline fill=\"none\" stroke=\"" + color + "\" stroke-width=\"1.2\" points=\"";
  for (const auto& [x, y] : pts) s += fmt(b.px(x)) + "," + fmt(b.py(y)) + " ";
  s += "\"/>\n";
  return s;
}

std::string graded_color(double u) {
  const int r = static_cast<int>(std::lround(255.0 * u));
  const int bl = 255 - r;
  char buf[16];
  std::snprintf(buf, sizeof buf, "#%02x20%02x", r, bl);
  return buf;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot write plot '" + path.string() + "'");
  out << text;
  out.flush();
  if (!out) throw Error(ErrorKind::Io, "write failed for plot '" + path.string() + "'");
}

std::string series_plot(const std::string& title, const std::string& ylabel,
                        const std::vector<std::pair<double, double>>& pts, bool log_scale) {
  std::vector<std::pair<double, double>> shown;
  Box b;
  // Long runs are thinned to about kMaxPoints evenly strided samples.
  const std::size_t stride = std::max<std::size_t>(1, (pts.size() + kMaxPoints - 1) / kMaxPoints);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i % stride != 0 && i + 1 != pts.size()) continue;
    const auto& [t, v] = pts[i];
    if (!std::isfinite(v) || (log_scale && !(v > 0.0))) continue;
    const double y = log_scale ? std::log10(v) : v;
    shown.emplace_back(t, y);
    b.add(t, y);
  }
  std::string svg = header(title);
  if (shown.empty()) return svg + "</svg>\n";
  b.pad();
  const std::string ylo = log_scale ? "1e" + fmt(b.y0) : fmt(b.y0);
  const std::string yhi = log_scale ? "1e" + fmt(b.y1) : fmt(b.y1);
  svg += axes(b, "t", log_scale ? "log10 " + ylabel : ylabel, ylo, yhi);
  svg += polyline(shown, b, "#1f4e9a");
  return svg + "</svg>\n";
}

}  // namespace

int emit_plots(const FlowTrajectory& traj, const std::filesystem::path& dir, std::ostream& warn) {
  if (traj.snapshots.empty() && traj.diagnostics.empty()) {
    warn << "warning: empty trajectory, no plots written\n";
    return 0;
  }
  ensure_directory(dir);

  std::vector<std::vector<std::pair<double, double>>> curves;
  Box cb;
  // At most kMaxCurves snapshots, evenly strided, the last one always kept.
  std::vector<std::size_t> picked;
  const std::size_t count = traj.snapshots.size();
  const std::size_t every = std::max<std::size_t>(1, (count + kMaxCurves - 1) / kMaxCurves);
  for (std::size_t k = 0; k < count; ++k) {
    if (k % every == 0 || k + 1 == count) picked.push_back(k);
  }
  for (std::size_t k : picked) {
    const AngleField& f = traj.snapshots[k];
    const CurveSample c = reconstruct_curve(f, Vec2::Zero());
    std::vector<std::pair<double, double>> pts;
    for (const Vec2& p : c.positions) {
      pts.emplace_back(p[0], p[1]);
      cb.add(p[0], p[1]);
    }
    curves.push_back(std::move(pts));
  }
  std::string svg = header("curve snapshots");
  if (!curves.empty()) {
    cb.pad();
    equalize(cb);
    svg += axes(cb, "x", "y", fmt(cb.y0), fmt(cb.y1));
    const double t0 = traj.snapshots.front().t, t1 = traj.snapshots.back().t;
    for (std::size_t c = 0; c < curves.size(); ++c) {
      const double t = traj.snapshots[picked[c]].t;
      const double u = t1 > t0 ? (t - t0) / (t1 - t0) : 0.0;
      svg += polyline(curves[c], cb, graded_color(u));
    }
  }
  svg += "</svg>\n";
  write_text(dir / "curves.svg", svg);

  std::vector<std::pair<double, double>> energy, residual;
  for (const DiagnosticsRecord& r : traj.diagnostics) {
    energy.emplace_back(r.t, r.F);
    residual.emplace_back(r.t, r.residual_eq);
  }
  write_text(dir / "energy.svg", series_plot("bending energy", "F", energy, false));
  write_text(dir / "residual.svg", series_plot("equilibrium residual", "residual", residual, true));
  return 3;
}

}  // namespace elastica
