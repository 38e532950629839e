#ifndef TRACON_SIMKIT_HPP
#define TRACON_SIMKIT_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "tracon/nlp.hpp"

namespace tracon {

/// Slacks above this are counted as real separation violations; below it
/// they are numerical noise.
inline constexpr double kViolationEpsilon = 0.1;  // seconds

/// Traffic generation knobs for one Monte Carlo run.
struct TrafficParams {
    int lambda_min = 1;    // aircraft/hour
    int lambda_max = 60;
    double t_sep = 66.0;   // seconds
    double t_max = 3600.0;
};

struct RunMetrics {
    int n_aircraft = 0;
    double faf_landing_rate = 0.0;  // aircraft/hour over the active window
    double violation_pct = 0.0;     // violating consecutive pairs, percent
    double total_stretch = 0.0;     // sum of d_i, NM
    double makespan = 0.0;          // t_N, seconds
    double sum_sigma = 0.0;         // seconds
    SolveStatus solver_status = SolveStatus::Converged;
    std::map<std::string, int> rates;
    std::uint64_t seed = 0;
};

struct BatchReport {
    std::vector<RunMetrics> runs;      // in run-index order
    double capacity_threshold = 0.0;   // 3600 / t_sep, aircraft/hour
    std::uint64_t master_seed = 0;
    TrafficParams traffic;
};

/// Metric extraction shared with the CLI: landing rate over the active
/// window, violating-pair percentage, and stretch totals.
RunMetrics metrics_of(const Solution& solution);

/// Per-run seed derivation: splitmix64 over master_seed + run_index.
std::uint64_t run_seed(std::uint64_t master_seed, int run_index);

/// One Monte Carlo run: sample rates, generate the scenario, solve the
/// fixed-sequence program, and reduce to metrics. An empty scenario yields
/// zeroed metrics.
RunMetrics run_once(const GeometryConfig& config, const Bounds& bounds,
                    const Weights& weights, const SolverParams& solver,
                    const TrafficParams& traffic, std::uint64_t seed);

/// n_runs independent runs with seeds derived from master_seed. The report
/// is assembled in run-index order regardless of execution order; n_threads
/// > 1 distributes runs across threads.
BatchReport run_batch(const GeometryConfig& config, const Bounds& bounds,
                      const Weights& weights, const SolverParams& solver,
                      const TrafficParams& traffic, int n_runs,
                      std::uint64_t master_seed, int n_threads = 1);

}  // namespace tracon

#endif  // TRACON_SIMKIT_HPP
