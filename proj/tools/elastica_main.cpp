// Command-line driver: run, picard, compare, diag.

#include "elastica/compare.hpp"
#include "elastica/errors.hpp"
#include "elastica/manifest.hpp"
#include "elastica/output.hpp"
#include "elastica/plots.hpp"
#include "elastica/presets.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <mutex>
#include <thread>

namespace fs = std::filesystem;
using namespace elastica;

namespace {

std::mutex g_log_mutex;

struct Options {
  int jobs = 1;
  int snapshot_stride = 0;  // 0 keeps the manifest value
  bool quiet = false;
};

void log(const Options& opt, const std::string& line) {
  if (opt.quiet) return;
  std::lock_guard<std::mutex> lock(g_log_mutex);
  std::cout << line << '\n';
}

void report_error(const std::string& where, const std::string& what) {
  std::lock_guard<std::mutex> lock(g_log_mutex);
  std::cerr << "error: " << where << ": " << what << '\n';
}

RunManifest load(const fs::path& path, const Options& opt) {
  RunManifest m = parse_manifest(path);
  if (opt.snapshot_stride > 0) m.config.snapshot_stride = opt.snapshot_stride;
  return m;
}

// Runs one manifest; returns its exit code.
template <class Body>
int guarded(const std::string& where, Body&& body) {
  try {
    return body();
  } catch (const Error& e) {
    report_error(where, std::string(to_string(e.kind())) + ": " + e.what());
    return exit_code(e.kind());
  } catch (const fs::filesystem_error& e) {
    report_error(where, e.what());
    return 4;
  } catch (const std::exception& e) {
    report_error(where, e.what());
    return 3;
  }
}

int run_one(const fs::path& manifest_path, const Options& opt) {
  return guarded(manifest_path.string(), [&] {
    const RunManifest m = load(manifest_path, opt);
    const AngleField phi0 = make_initial(m.initial, m.grid(), m.constraint, m.seed);
    log(opt, "run " + manifest_path.string() + ": N = " + std::to_string(m.intervals) +
                 ", preset " + m.initial.preset);
    const FlowTrajectory traj = run_flow(phi0, m.constraint, m.config);
    write_run(m.output_dir, m, traj);
    emit_plots(traj, m.output_dir, std::cerr);
    char buf[256];
    const DiagnosticsRecord& last = traj.diagnostics.back();
    std::snprintf(buf, sizeof buf, "  %s after %ld steps, t = %.6g, F = %.12g, residual = %.3g -> %s",
                  to_string(traj.termination), traj.steps, last.t, last.F, last.residual_eq,
                  m.output_dir.string().c_str());
    log(opt, buf);
    const bool failed = traj.termination == Termination::DegenerateGram ||
                        traj.termination == Termination::Instability;
    if (failed) report_error(manifest_path.string(), traj.message);
    return failed ? 3 : 0;
  });
}

int cmd_run(const std::vector<fs::path>& manifests, const Options& opt) {
  std::vector<int> codes(manifests.size(), 0);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < manifests.size(); i = next++) codes[i] = run_one(manifests[i], opt);
  };
  const int jobs = std::clamp<int>(opt.jobs, 1, static_cast<int>(manifests.size()));
  std::vector<std::thread> pool;
  for (int j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  int code = 0;
  for (int c : codes) code = std::max(code, c);
  return code;
}

int cmd_picard(const fs::path& manifest_path, const Options& opt) {
  return guarded(manifest_path.string(), [&] {
    const RunManifest m = load(manifest_path, opt);
    const AngleField phi0 = make_initial(m.initial, m.grid(), m.constraint, m.seed);
    const KernelParams kernel = m.picard.kernel.resolved(m.intervals, m.length);
    const double C4 = estimate_lipschitz(phi0, kernel);
    const double t0 = m.picard.t0 > 0.0 ? m.picard.t0 : choose_t0(m.length, C4);
    const PicardResult r = picard_solve(phi0, m.constraint, t0, m.picard.n_max, m.picard.tol, kernel);
    write_picard(m.output_dir, m, r);
    char buf[256];
    std::snprintf(buf, sizeof buf, "picard: t0 = %.6g, C4 = %.6g, a priori factor = %.4g, %d iterations, %s",
                  r.t0, r.C4, r.apriori_q, r.state.n, r.converged ? "converged" : "not converged");
    log(opt, buf);
    for (const PicardReportRow& row : r.report) {
      std::snprintf(buf, sizeof buf, "  n = %3d  increment = %.3e  q = %.4f", row.n, row.increment_norm, row.q_n);
      log(opt, buf);
    }
    return 0;
  });
}

int cmd_compare(const fs::path& manifest_path, const Options& opt) {
  return guarded(manifest_path.string(), [&] {
    const RunManifest m = load(manifest_path, opt);
    const AngleField phi0 = make_initial(m.initial, m.grid(), m.constraint, m.seed);
    const Comparison c = compare_flow_picard(phi0, m.constraint, m.config, m.picard);
    ensure_directory(m.output_dir);
    write_picard(m.output_dir, m, c.picard);
    const fs::path table = m.output_dir / "compare.csv";
    std::ofstream out(table);
    if (!out) throw Error(ErrorKind::Io, "cannot write '" + table.string() + "'");
    out << "t,sup_diff\n";
    char buf[128];
    log(opt, "         t        sup |phi_picard - phi_flow|");
    for (const ComparisonRow& row : c.rows) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g", row.t, row.sup_diff);
      out << buf << '\n';
      std::snprintf(buf, sizeof buf, "  %.6e   %.3e", row.t, row.sup_diff);
      log(opt, buf);
    }
    out.flush();
    if (!out) throw Error(ErrorKind::Io, "write failed for '" + table.string() + "'");
    return 0;
  });
}

int cmd_diag(const fs::path& dir, const Options& opt) {
  return guarded(dir.string(), [&] {
    const DiagSummary s = recompute_diagnostics(dir);
    char buf[512];
    std::snprintf(buf, sizeof buf,
                  "diag %s: %d snapshots, %d energy rows, %d energy increases, max |constraint residual| = %.3e,\n"
                  "  max |k(boundary)| = %.3e, certificate violations = %d, max inflections = %d, termination %s",
                  dir.string().c_str(), s.snapshots, s.energy_rows, s.energy_increases,
                  s.max_constraint_residual, s.max_boundary_curvature, s.certificate_violations,
                  s.max_inflections, s.termination.c_str());
    log(opt, buf);
    return 0;
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hinged elastica L2-flow solver"};
  app.require_subcommand(1);
  // Global flags may follow the subcommand.
  app.fallthrough();
  Options opt;
  app.add_option("--jobs", opt.jobs, "Independent manifests run concurrently")->check(CLI::PositiveNumber);
  app.add_option("--snapshot-stride", opt.snapshot_stride, "Override the snapshot stride")
      ->check(CLI::PositiveNumber);
  app.add_flag("--quiet", opt.quiet, "Only report errors");

  std::vector<fs::path> run_manifests;
  auto* run = app.add_subcommand("run", "Integrate the flow for one or more manifests");
  run->add_option("manifests", run_manifests, "Manifest files")->required();

  fs::path picard_manifest, compare_manifest, diag_dir;
  auto* picard = app.add_subcommand("picard", "Heat-kernel Picard solver on [0, t0]");
  picard->add_option("manifest", picard_manifest)->required();
  auto* compare = app.add_subcommand("compare", "Flow against Picard on [0, t0]");
  compare->add_option("manifest", compare_manifest)->required();
  auto* diag = app.add_subcommand("diag", "Recompute diagnostics of a stored run");
  diag->add_option("run_dir", diag_dir)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (*run) return cmd_run(run_manifests, opt);
  if (*picard) return cmd_picard(picard_manifest, opt);
  if (*compare) return cmd_compare(compare_manifest, opt);
  return cmd_diag(diag_dir, opt);
}
