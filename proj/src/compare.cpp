#include "elastica/compare.hpp"

#include "elastica/errors.hpp"

#include <algorithm>
#include <cmath>

namespace elastica {

Comparison compare_flow_picard(const AngleField& phi0, const ConstraintSpec& constraint,
                               const FlowConfig& flow, const PicardOptions& opts) {
  const Grid& g = phi0.grid;
  const KernelParams kernel = opts.kernel.resolved(g.intervals(), g.length());
  double t0 = opts.t0;
  if (t0 == 0.0) t0 = choose_t0(g.length(), estimate_lipschitz(phi0, kernel));

  Comparison out;
  out.picard = picard_solve(phi0, constraint, t0, opts.n_max, opts.tol, kernel);

  const int slices = kernel.time_slices;
  const double dtau = t0 / slices;
  const double h = g.spacing();
  const long per_slice = static_cast<long>(std::ceil(dtau / (0.25 * h * h)));
  FlowConfig cfg = flow;
  cfg.dt = dtau / per_slice;
  cfg.t_end = phi0.t + t0;
  cfg.snapshot_stride = static_cast<int>(per_slice);
  // The comparison needs every slice, not an early equilibrium exit.
  cfg.equilibrium_tol = std::min(cfg.equilibrium_tol, 1e-300);
  out.flow = run_flow(phi0, constraint, cfg);
  if (out.flow.termination != Termination::ReachedTEnd) {
    throw Error(ErrorKind::Instability,
                std::string("flow stopped before t0: ") + to_string(out.flow.termination) + " " +
                    out.flow.message);
  }

  for (const AngleField& snap : out.flow.snapshots) {
    const double rel = (snap.t - phi0.t) / dtau;
    const long k = std::lround(rel);
    if (std::abs(rel - k) > 1e-6 || k < 0 || k > slices) continue;
    const AngleField ref = out.picard.state.slice_field(static_cast<int>(k), g);
    out.rows.push_back({out.picard.state.times[k], (ref.phi - snap.phi).cwiseAbs().maxCoeff()});
  }
  return out;
}

}  // namespace elastica
