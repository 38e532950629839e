#ifndef TRACON_SVG_PLOT_HPP
#define TRACON_SVG_PLOT_HPP

#include <string>

#include "tracon/scenario_io.hpp"

namespace tracon {

/// Airspace snapshot at simulation time t: TCP boundary, gates, FAF, runway
/// threshold, every airborne aircraft's position, its remaining path, and
/// green/red connectors between consecutive landings (red when the pair's
/// separation slack exceeds kViolationEpsilon).
std::string render_snapshot_svg(const ResultsDoc& results, double t);

/// Figure-5-style scatter: violation percentage (left axis) and total path
/// stretch (right axis) against the achieved FAF landing rate, with a
/// vertical dashed line at the capacity threshold 3600/t_sep.
std::string render_scatter_svg(const BatchReport& report);

}  // namespace tracon

#endif  // TRACON_SVG_PLOT_HPP
