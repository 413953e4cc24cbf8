#include "elastica/manifest.hpp"

#include "elastica/errors.hpp"

#include <fstream>
#include <set>

namespace elastica {

namespace {

using nlohmann::json;

[[noreturn]] void bad_field(const std::string& field, const std::string& expected) {
  throw Error(ErrorKind::Manifest, "manifest field '" + field + "': expected " + expected);
}

const json* find(const json& obj, const char* key) {
  const auto it = obj.find(key);
  return it == obj.end() || it->is_null() ? nullptr : &*it;
}

double get_number(const json& obj, const char* key, const std::string& field, double fallback) {
  const json* v = find(obj, key);
  if (!v) return fallback;
  if (!v->is_number()) bad_field(field, "a number");
  return v->get<double>();
}

double get_positive(const json& obj, const char* key, const std::string& field, double fallback) {
  const double x = get_number(obj, key, field, fallback);
  if (!(x > 0.0) || !std::isfinite(x)) bad_field(field, "a positive finite number");
  return x;
}

long long get_integer(const json& obj, const char* key, const std::string& field, long long fallback,
                      long long min_value) {
  const json* v = find(obj, key);
  if (!v) return fallback;
  if (!v->is_number_integer()) bad_field(field, "an integer");
  const long long x = v->get<long long>();
  if (x < min_value) bad_field(field, "an integer >= " + std::to_string(min_value));
  return x;
}

bool get_bool(const json& obj, const char* key, const std::string& field, bool fallback) {
  const json* v = find(obj, key);
  if (!v) return fallback;
  if (!v->is_boolean()) bad_field(field, "true or false");
  return v->get<bool>();
}

std::string get_choice(const json& obj, const char* key, const std::string& field,
                       const std::string& fallback, const std::set<std::string>& allowed) {
  const json* v = find(obj, key);
  std::string s = fallback;
  std::string list;
  for (const auto& a : allowed) list += (list.empty() ? "" : " | ") + a;
  if (v) {
    if (!v->is_string()) bad_field(field, "one of " + list);
    s = v->get<std::string>();
  }
  if (!allowed.count(s)) bad_field(field, "one of " + list + ", got '" + s + "'");
  return s;
}

const json& get_object(const json& obj, const char* key, const std::string& field) {
  static const json empty = json::object();
  const json* v = find(obj, key);
  if (!v) return empty;
  if (!v->is_object()) bad_field(field, "an object");
  return *v;
}

const std::set<std::string> kPresets = {"straight-plus-bump", "perturbed-arc", "closed-circle",
                                        "closed-ellipse-angle", "from-file"};

}  // namespace

RunManifest manifest_from_json(const json& j, const std::filesystem::path& base_dir) {
  if (!j.is_object()) bad_field("<root>", "a JSON object");
  static const std::set<std::string> known = {"length", "intervals", "delta_p", "initial", "flow",
                                              "picard", "seed", "output_dir"};
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) bad_field(key, "no such field (known: length, intervals, delta_p, initial, flow, picard, seed, output_dir)");
  }

  RunManifest m;
  m.length = get_positive(j, "length", "length", 1.0);
  m.intervals = static_cast<int>(get_integer(j, "intervals", "intervals", 256, Grid::kMinIntervals));

  const json& init = get_object(j, "initial", "initial");
  m.initial.preset = get_choice(init, "preset", "initial.preset", "perturbed-arc", kPresets);
  m.initial.amplitude = get_number(init, "amplitude", "initial.amplitude", m.initial.amplitude);
  m.initial.bumps = static_cast<int>(get_integer(init, "bumps", "initial.bumps", m.initial.bumps, 0));
  m.initial.center = get_number(init, "center", "initial.center", m.initial.center);
  m.initial.width = get_positive(init, "width", "initial.width", m.initial.width);
  m.initial.eccentricity = get_number(init, "eccentricity", "initial.eccentricity", m.initial.eccentricity);
  if (const json* p = find(init, "path")) {
    if (!p->is_string()) bad_field("initial.path", "a file path string");
    std::filesystem::path path = p->get<std::string>();
    if (path.is_relative() && !base_dir.empty()) path = base_dir / path;
    m.initial.path = path;
  }
  if (m.initial.preset == "from-file") {
    if (m.initial.path.empty()) bad_field("initial.path", "a file path (required by preset from-file)");
    if (!std::filesystem::exists(m.initial.path)) {
      bad_field("initial.path", "an existing file, '" + m.initial.path.string() + "' not found");
    }
  }
  const bool closed_preset = m.initial.preset.rfind("closed-", 0) == 0;

  Vec2 dp = closed_preset ? Vec2::Zero() : Vec2(0.8 * m.length, 0.0);
  if (const json* v = find(j, "delta_p")) {
    if (!v->is_array() || v->size() != 2 || !(*v)[0].is_number() || !(*v)[1].is_number()) {
      bad_field("delta_p", "an array of two numbers [dx, dy]");
    }
    dp = Vec2((*v)[0].get<double>(), (*v)[1].get<double>());
  }
  m.constraint = ConstraintSpec::make(dp, m.length);

  const json& flow = get_object(j, "flow", "flow");
  FlowConfig& c = m.config;
  c.scheme = get_choice(flow, "scheme", "flow.scheme", "imex", {"imex", "explicit-euler"}) == "imex"
                 ? Scheme::Imex
                 : Scheme::ExplicitEuler;
  const double h = m.length / m.intervals;
  c.dt = get_positive(flow, "dt", "flow.dt", 0.25 * h * h);
  c.t_end = get_positive(flow, "t_end", "flow.t_end", c.t_end);
  c.mode = get_choice(flow, "mode", "flow.mode", closed_preset ? "closed-periodic" : "open-hinged",
                      {"open-hinged", "closed-periodic"}) == "open-hinged"
               ? CurveMode::OpenHinged
               : CurveMode::ClosedPeriodic;
  c.multiplier_method =
      get_choice(flow, "multiplier_method", "flow.multiplier_method", "discrete-constraint",
                 {"discrete-constraint", "continuous-formula"}) == "discrete-constraint"
          ? MultiplierMethod::DiscreteConstraint
          : MultiplierMethod::ContinuousFormula;
  c.equilibrium_tol = get_positive(flow, "equilibrium_tol", "flow.equilibrium_tol", c.equilibrium_tol);
  c.snapshot_stride = static_cast<int>(
      get_integer(flow, "snapshot_stride", "flow.snapshot_stride", c.snapshot_stride, 1));
  c.stability_guard = get_bool(flow, "stability_guard", "flow.stability_guard", c.stability_guard);

  const json& pic = get_object(j, "picard", "picard");
  m.picard.t0 = get_number(pic, "t0", "picard.t0", 0.0);
  if (m.picard.t0 < 0.0) bad_field("picard.t0", "a nonnegative number (0 selects the search)");
  m.picard.n_max = static_cast<int>(get_integer(pic, "n_max", "picard.n_max", m.picard.n_max, 1));
  m.picard.tol = get_positive(pic, "tol", "picard.tol", m.picard.tol);
  m.picard.kernel.image_count =
      static_cast<int>(get_integer(pic, "image_count", "picard.image_count", 5, 3));
  m.picard.kernel.quad_nodes =
      static_cast<int>(get_integer(pic, "quad_nodes", "picard.quad_nodes", 4LL * m.intervals, 4LL * m.intervals));
  m.picard.kernel.time_slices =
      static_cast<int>(get_integer(pic, "time_slices", "picard.time_slices", 64, 2));
  if (m.picard.kernel.quad_nodes % (2 * m.intervals) != 0) {
    bad_field("picard.quad_nodes", "a multiple of 2 * intervals");
  }
  const double spacing = 2.0 * m.length / m.picard.kernel.quad_nodes;
  m.picard.kernel.t_floor = get_positive(pic, "t_floor", "picard.t_floor", spacing * spacing);

  m.seed = static_cast<std::uint64_t>(get_integer(j, "seed", "seed", 0, 0));
  if (const json* v = find(j, "output_dir")) {
    if (!v->is_string()) bad_field("output_dir", "a directory path string");
    m.output_dir = v->get<std::string>();
  }
  if (m.output_dir.is_relative() && !base_dir.empty()) m.output_dir = base_dir / m.output_dir;

  try {
    c.validate();
  } catch (const Error& e) {
    throw Error(ErrorKind::Manifest, std::string("manifest field 'flow': ") + e.what());
  }
  return m;
}

RunManifest parse_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Manifest, "cannot open manifest '" + path.string() + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::Manifest, "manifest '" + path.string() + "' is not valid JSON: " + e.what());
  }
  return manifest_from_json(j, path.parent_path());
}

json to_json(const RunManifest& m) {
  json init = {{"preset", m.initial.preset},
               {"amplitude", m.initial.amplitude},
               {"bumps", m.initial.bumps},
               {"center", m.initial.center},
               {"width", m.initial.width},
               {"eccentricity", m.initial.eccentricity}};
  if (!m.initial.path.empty()) init["path"] = m.initial.path.string();
  const FlowConfig& c = m.config;
  // Automatic settings are written out resolved so the file reads back as is.
  const KernelParams k = m.picard.kernel.resolved(m.intervals, m.length);
  return {
      {"length", m.length},
      {"intervals", m.intervals},
      {"delta_p", {m.constraint.delta_p[0], m.constraint.delta_p[1]}},
      {"initial", init},
      {"flow",
       {{"scheme", to_string(c.scheme)},
        {"dt", c.resolved_dt(m.grid())},
        {"t_end", c.t_end},
        {"mode", to_string(c.mode)},
        {"multiplier_method", to_string(c.multiplier_method)},
        {"equilibrium_tol", c.equilibrium_tol},
        {"snapshot_stride", c.snapshot_stride},
        {"stability_guard", c.stability_guard}}},
      {"picard",
       {{"t0", m.picard.t0},
        {"n_max", m.picard.n_max},
        {"tol", m.picard.tol},
        {"image_count", k.image_count},
        {"quad_nodes", k.quad_nodes},
        {"time_slices", k.time_slices},
        {"t_floor", k.t_floor}}},
      {"seed", m.seed},
      {"output_dir", m.output_dir.string()},
  };
}

}  // namespace elastica
