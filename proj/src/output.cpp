#include "elastica/output.hpp"

#include "elastica/diagnostics.hpp"
#include "elastica/errors.hpp"
#include "elastica/multipliers.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace elastica {

namespace {

namespace fs = std::filesystem;

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot write '" + path.string() + "'");
  return out;
}

void finish(std::ofstream& out, const fs::path& path) {
  out.flush();
  if (!out) throw Error(ErrorKind::Io, "write failed for '" + path.string() + "'");
}

std::ifstream open_in(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot read '" + path.string() + "'");
  return in;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

double parse_double(const std::string& cell, const fs::path& path) {
  char* end = nullptr;
  const double v = std::strtod(cell.c_str(), &end);
  if (end == cell.c_str()) throw Error(ErrorKind::Io, "malformed number '" + cell + "' in " + path.string());
  return v;
}

nlohmann::json read_json(const fs::path& path) {
  std::ifstream in = open_in(path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::Io, "'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

void write_json(const fs::path& path, const nlohmann::json& j) {
  std::ofstream out = open_out(path);
  out << j.dump(2) << '\n';
  finish(out, path);
}

}  // namespace

void ensure_directory(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw Error(ErrorKind::Io, "cannot create output directory '" + dir.string() + "': " + ec.message());
  }
}

void write_energy_csv(const fs::path& path, const FlowTrajectory& traj) {
  std::ofstream out = open_out(path);
  out << kEnergyHeader << '\n';
  for (const DiagnosticsRecord& r : traj.diagnostics) {
    out << num(r.t) << ',' << num(r.F) << ',' << num(r.residual_eq) << ',' << num(r.constraint_res[0])
        << ',' << num(r.constraint_res[1]) << ',' << num(r.lambda[0]) << ',' << num(r.lambda[1]) << ','
        << num(r.detA) << ',' << num(r.C1) << ',' << num(r.k_bdry[0]) << ',' << num(r.k_bdry[1]) << ','
        << r.inflections << '\n';
  }
  finish(out, path);
}

void write_snapshot_csv(const fs::path& path, const AngleField& field) {
  const CurveSample c = reconstruct_curve(field, Vec2::Zero());
  std::ofstream out = open_out(path);
  out << kSnapshotHeader << '\n';
  for (int i = 0; i < field.grid.size(); ++i) {
    out << num(c.s[i]) << ',' << num(c.positions[i][0]) << ',' << num(c.positions[i][1]) << ','
        << num(field.phi[i]) << ',' << num(c.signed_curvature[i]) << '\n';
  }
  finish(out, path);
}

void write_run(const fs::path& dir, const RunManifest& manifest, const FlowTrajectory& traj) {
  ensure_directory(dir);
  nlohmann::json snaps = nlohmann::json::array();
  for (std::size_t k = 0; k < traj.snapshots.size(); ++k) {
    const std::string name = "snap_" + std::to_string(k) + ".csv";
    write_snapshot_csv(dir / name, traj.snapshots[k]);
    snaps.push_back({{"file", name}, {"t", traj.snapshots[k].t}});
  }
  write_energy_csv(dir / "energy.csv", traj);
  nlohmann::json meta = {{"manifest", to_json(manifest)},
                         {"termination", to_string(traj.termination)},
                         {"message", traj.message},
                         {"steps", traj.steps},
                         {"dt", traj.dt},
                         {"snapshots", snaps}};
  write_json(dir / "meta.json", meta);
}

AngleField read_snapshot_csv(const fs::path& path, const Grid& grid, double t) {
  std::ifstream in = open_in(path);
  std::string line;
  if (!std::getline(in, line) || line != kSnapshotHeader) {
    throw Error(ErrorKind::Io, "'" + path.string() + "' lacks the snapshot header " + kSnapshotHeader);
  }
  std::vector<double> phi;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != 5) throw Error(ErrorKind::Io, "malformed row in '" + path.string() + "'");
    phi.push_back(parse_double(cells[3], path));
  }
  if (static_cast<int>(phi.size()) != grid.size()) {
    throw Error(ErrorKind::Io, "'" + path.string() + "' has " + std::to_string(phi.size()) +
                                   " rows, expected " + std::to_string(grid.size()));
  }
  return AngleField::make(grid, Eigen::Map<const Eigen::VectorXd>(phi.data(), phi.size()), t);
}

StoredRun read_run(const fs::path& dir) {
  StoredRun run;
  run.meta = read_json(dir / "meta.json");
  if (!run.meta.contains("manifest") || !run.meta.contains("snapshots")) {
    throw Error(ErrorKind::Io, "'" + (dir / "meta.json").string() + "' lacks manifest or snapshots");
  }
  run.manifest = manifest_from_json(run.meta["manifest"]);
  const Grid grid = run.manifest.grid();
  for (const auto& s : run.meta["snapshots"]) {
    run.snapshots.push_back(read_snapshot_csv(dir / s.at("file").get<std::string>(), grid,
                                              s.at("t").get<double>()));
  }
  return run;
}

std::vector<EnergyRow> read_energy_csv(const fs::path& path) {
  std::ifstream in = open_in(path);
  std::string line;
  if (!std::getline(in, line) || line != kEnergyHeader) {
    throw Error(ErrorKind::Io, "'" + path.string() + "' lacks the energy header");
  }
  std::vector<EnergyRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto c = split(line);
    if (c.size() != 12) throw Error(ErrorKind::Io, "malformed row in '" + path.string() + "'");
    EnergyRow r{};
    double* fields[] = {&r.t, &r.F, &r.residual_eq, &r.rcx, &r.rcy, &r.lambda1,
                        &r.lambda2, &r.detA, &r.C1, &r.k0, &r.kL};
    for (int i = 0; i < 11; ++i) *fields[i] = parse_double(c[i], path);
    r.inflections = static_cast<int>(parse_double(c[11], path));
    rows.push_back(r);
  }
  return rows;
}

DiagSummary recompute_diagnostics(const fs::path& dir) {
  const StoredRun run = read_run(dir);
  const RunManifest& m = run.manifest;
  const bool open = m.config.mode == CurveMode::OpenHinged;
  const double nan = std::numeric_limits<double>::quiet_NaN();

  DiagSummary sum;
  sum.snapshots = static_cast<int>(run.snapshots.size());
  sum.termination = run.meta.value("termination", "");

  const fs::path diag_path = dir / "diag.csv";
  std::ofstream out = open_out(diag_path);
  out << "t,F,residual_eq,residual_constraint_x,residual_constraint_y,lambda1,lambda2,detA,C1,k0,kL,"
         "k2_0,k2_L,inflections,sobolev0,sobolev1,sobolev2\n";
  for (const AngleField& f : run.snapshots) {
    Vec2 lambda(nan, nan);
    double residual = nan;
    try {
      lambda = lambdas_continuous(f).lambda;
      residual = equilibrium_residual(f, lambda, m.config.mode);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::DegenerateGram) throw;
    }
    const Vec2 cres = constraint_residual(f, m.constraint);
    const double detA = det_gram(gram_matrix(f));
    double C1 = nan;
    Vec2 k(nan, nan), k2(nan, nan);
    if (open) {
      try {
        C1 = det_lower_bound(f, m.constraint).C1;
        if (detA < C1 - 1e-9) ++sum.certificate_violations;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::CertificateInvalid) throw;
      }
      k = boundary_curvature(f);
      const auto parity = boundary_parity_check(f, 1);
      k2 = Vec2(parity->left[1], parity->right[1]);
      sum.max_boundary_curvature = std::max({sum.max_boundary_curvature, std::abs(k[0]), std::abs(k[1])});
    }
    const Eigen::VectorXd kappa = signed_curvature(f);
    const int infl = inflection_count(kappa);
    sum.max_inflections = std::max(sum.max_inflections, infl);
    sum.max_constraint_residual = std::max(sum.max_constraint_residual, cres.norm());
    const SobolevNorms sob = sobolev_norms(kappa, f.grid, 2);
    out << num(f.t) << ',' << num(bending_energy(f)) << ',' << num(residual) << ',' << num(cres[0]) << ','
        << num(cres[1]) << ',' << num(lambda[0]) << ',' << num(lambda[1]) << ',' << num(detA) << ','
        << num(C1) << ',' << num(k[0]) << ',' << num(k[1]) << ',' << num(k2[0]) << ',' << num(k2[1])
        << ',' << infl << ',' << num(sob.cumulative.at(0)) << ',' << num(sob.cumulative.at(1)) << ','
        << num(sob.cumulative.at(2)) << '\n';
  }
  finish(out, diag_path);

  const std::vector<EnergyRow> rows = read_energy_csv(dir / "energy.csv");
  sum.energy_rows = static_cast<int>(rows.size());
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].F > rows[i - 1].F + 1e-10) ++sum.energy_increases;
  }
  for (const EnergyRow& r : rows) {
    sum.max_constraint_residual = std::max(sum.max_constraint_residual, std::hypot(r.rcx, r.rcy));
  }

  write_json(dir / "diag.json", {{"snapshots", sum.snapshots},
                                 {"energy_rows", sum.energy_rows},
                                 {"energy_increases", sum.energy_increases},
                                 {"max_constraint_residual", sum.max_constraint_residual},
                                 {"max_boundary_curvature", sum.max_boundary_curvature},
                                 {"certificate_violations", sum.certificate_violations},
                                 {"max_inflections", sum.max_inflections},
                                 {"termination", sum.termination}});
  return sum;
}

void write_picard(const fs::path& dir, const RunManifest& manifest, const PicardResult& result) {
  ensure_directory(dir);
  const fs::path report = dir / "picard_report.csv";
  std::ofstream out = open_out(report);
  out << "n,increment_norm,q_n,apriori_q\n";
  for (const PicardReportRow& r : result.report) {
    out << r.n << ',' << num(r.increment_norm) << ',' << num(r.q_n) << ',' << num(r.apriori_q) << '\n';
  }
  finish(out, report);

  const Grid grid = manifest.grid();
  nlohmann::json slices = nlohmann::json::array();
  for (std::size_t k = 0; k < result.state.times.size(); ++k) {
    const std::string name = "picard_slice_" + std::to_string(k) + ".csv";
    write_snapshot_csv(dir / name, result.state.slice_field(static_cast<int>(k), grid));
    slices.push_back({{"file", name}, {"t", result.state.times[k]}});
  }
  write_json(dir / "picard_meta.json",
             {{"manifest", to_json(manifest)},
              {"t0", result.t0},
              {"C4", result.C4},
              {"apriori_q", result.apriori_q},
              {"converged", result.converged},
              {"iterations", result.state.n},
              {"d0", result.state.d0},
              {"M0", result.state.M0},
              {"class_ok", result.class_ok},
              {"max_evenness_defect", result.max_evenness_defect},
              {"max_boundary_slope", result.max_boundary_slope},
              {"duhamel_evaluations", result.bounds.evaluations},
              {"duhamel_violations", result.bounds.violations},
              {"worst_value_ratio", result.bounds.worst_value_ratio},
              {"worst_slope_ratio", result.bounds.worst_slope_ratio},
              {"slices", slices}});
}

}  // namespace elastica
