#pragma once

#include "elastica/flow_solver.hpp"
#include "elastica/heat_picard.hpp"

#include <cstdint>
#include <filesystem>
#include <string>

#include "json.hpp"

namespace elastica {

/// Initial-data descriptor. Preset names: straight-plus-bump, perturbed-arc,
/// closed-circle, closed-ellipse-angle, from-file.
struct InitialData {
  std::string preset = "perturbed-arc";
  std::filesystem::path path;  // from-file only; resolved against the manifest directory
  double amplitude = 0.1;      // bump/perturbation size (radians)
  int bumps = 3;               // perturbed-arc: number of random interior bumps
  double center = 0.5;         // straight-plus-bump: bump centre as a fraction of L
  double width = 0.3;          // straight-plus-bump: bump half-width as a fraction of L
  double eccentricity = 0.2;   // closed-ellipse-angle: coefficient of the second harmonic
};

struct PicardOptions {
  double t0 = 0.0;  // 0 selects the halving search
  int n_max = 60;
  double tol = 1e-11;
  KernelParams kernel;
};

struct RunManifest {
  double length = 1.0;
  int intervals = 256;
  ConstraintSpec constraint;
  InitialData initial;
  FlowConfig config;
  PicardOptions picard;
  std::uint64_t seed = 0;
  std::filesystem::path output_dir = "out";

  Grid grid() const { return Grid(length, intervals); }
};

/// Throws Manifest naming the field and its expected form, or Constraint for
/// inadmissible endpoint data. All defaults are filled in, dt included.
RunManifest parse_manifest(const std::filesystem::path& path);
RunManifest manifest_from_json(const nlohmann::json& j,
                               const std::filesystem::path& base_dir = {});
nlohmann::json to_json(const RunManifest& m);

}  // namespace elastica
