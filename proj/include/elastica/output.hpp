#pragma once

#include "elastica/flow_solver.hpp"
#include "elastica/heat_picard.hpp"
#include "elastica/manifest.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace elastica {

inline constexpr const char* kEnergyHeader =
    "t,F,residual_eq,residual_constraint_x,residual_constraint_y,lambda1,lambda2,detA,C1,k0,kL,"
    "inflections";
inline constexpr const char* kSnapshotHeader = "s,x,y,phi,k";

/// Creates the directory if needed; throws Io with the path on failure.
void ensure_directory(const std::filesystem::path& dir);

void write_energy_csv(const std::filesystem::path& path, const FlowTrajectory& traj);

/// Curve samples of one snapshot, the curve starting at the origin.
void write_snapshot_csv(const std::filesystem::path& path, const AngleField& field);

/// meta.json, energy.csv and snap_<k>.csv for every stored snapshot.
void write_run(const std::filesystem::path& dir, const RunManifest& manifest,
               const FlowTrajectory& traj);

/// Snapshots listed in meta.json, rebuilt from their CSV files.
struct StoredRun {
  nlohmann::json meta;
  RunManifest manifest;
  std::vector<AngleField> snapshots;
};
StoredRun read_run(const std::filesystem::path& dir);

/// Reads the phi column of a snapshot CSV onto the given grid.
AngleField read_snapshot_csv(const std::filesystem::path& path, const Grid& grid, double t);

struct EnergyRow {
  double t, F, residual_eq, rcx, rcy, lambda1, lambda2, detA, C1, k0, kL;
  int inflections;
};
std::vector<EnergyRow> read_energy_csv(const std::filesystem::path& path);

/// Recomputes every snapshot diagnostic from the stored files and writes
/// diag.csv and diag.json into the run directory.
struct DiagSummary {
  int snapshots = 0;
  int energy_rows = 0;
  int energy_increases = 0;         // rows with F above the previous + 1e-10
  double max_constraint_residual = 0.0;
  double max_boundary_curvature = 0.0;
  int certificate_violations = 0;   // detA < C1 - 1e-9
  int max_inflections = 0;
  std::string termination;
};
DiagSummary recompute_diagnostics(const std::filesystem::path& dir);

/// picard_report.csv (n,increment_norm,q_n,apriori_q), picard_meta.json and
/// picard_slice_<k>.csv on the manifest grid.
void write_picard(const std::filesystem::path& dir, const RunManifest& manifest,
                  const PicardResult& result);

}  // namespace elastica
