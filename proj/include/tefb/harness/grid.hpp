#pragma once

#include <cstddef>
#include <ostream>
#include <string>
#include <vector>

#include "tefb/core/errors.hpp"
#include "tefb/harness/experiment.hpp"

namespace tefb {

/// One evaluated grid point. Phase 1 varies eta, phase 2 varies g at the
/// phase-1 eta.
struct GridRow {
  int phase = 1;
  double eta = 0.0;
  double g = 0.0;
  ModeAggregate ff;
  ModeAggregate fffb;
};

struct GridResult {
  double best_eta = 0.0;
  double best_g = 0.0;
  std::vector<GridRow> rows;
};

namespace detail {

/// Fewer mean epochs wins, then higher mean accuracy, then the smaller
/// parameter value.
inline bool ranks_before(const ModeAggregate& a, double pa, const ModeAggregate& b, double pb) {
  if (a.mean_epochs != b.mean_epochs) return a.mean_epochs < b.mean_epochs;
  if (a.mean_accuracy != b.mean_accuracy) return a.mean_accuracy > b.mean_accuracy;
  return pa < pb;
}

inline GridRow evaluate_point(const ExperimentSpec& base, int phase, double eta, double g) {
  ExperimentSpec spec = base;
  spec.mode = Mode::both;
  spec.train.eta = eta;
  spec.train.g = g;
  const RunReport report = run_experiment(spec);
  GridRow row{phase, eta, g, {}, {}};
  if (const auto* a = find_aggregate(report, "ff")) row.ff = *a;
  if (const auto* a = find_aggregate(report, "fffb")) row.fffb = *a;
  return row;
}

}  // namespace detail

/// Two-phase search: pick eta by the FF baseline with g held at the base
/// value, then pick g by FF+FB at that eta. Both modes run at every point.
inline GridResult grid_search(const ExperimentSpec& base, const std::vector<double>& eta_grid,
                              const std::vector<double>& g_grid) {
  if (eta_grid.empty() || g_grid.empty()) throw ConfigError("grid search needs non-empty eta and g grids");
  GridResult result;
  const GridRow* best = nullptr;
  for (double eta : eta_grid) {
    result.rows.push_back(detail::evaluate_point(base, 1, eta, base.train.g));
  }
  for (const auto& row : result.rows) {
    if (!best || detail::ranks_before(row.ff, row.eta, best->ff, best->eta)) best = &row;
  }
  result.best_eta = best->eta;

  const std::size_t phase2 = result.rows.size();
  for (double g : g_grid) {
    result.rows.push_back(detail::evaluate_point(base, 2, result.best_eta, g));
  }
  best = nullptr;
  for (std::size_t i = phase2; i < result.rows.size(); ++i) {
    const auto& row = result.rows[i];
    if (!best || detail::ranks_before(row.fffb, row.g, best->fffb, best->g)) best = &row;
  }
  result.best_g = best->g;
  return result;
}

inline void write_grid_csv(std::ostream& out, const GridResult& result) {
  out << "phase,eta,g,ff_mean_epochs,ff_mean_accuracy,ff_reached,fffb_mean_epochs,fffb_mean_accuracy,"
         "fffb_reached\n";
  const auto precision = out.precision(10);
  for (const auto& r : result.rows) {
    out << r.phase << ',' << r.eta << ',' << r.g << ',' << r.ff.mean_epochs << ',' << r.ff.mean_accuracy
        << ',' << r.ff.reached << ',' << r.fffb.mean_epochs << ',' << r.fffb.mean_accuracy << ','
        << r.fffb.reached << '\n';
  }
  out.precision(precision);
}

}  // namespace tefb
