#ifndef TRACON_NLP_HPP
#define TRACON_NLP_HPP

#include <string>
#include <vector>

#include "tracon/geometry.hpp"
#include "tracon/traffic.hpp"

namespace tracon {

struct SpeedRange {
    double min = 0.0;
    double max = 0.0;  // knots
};

/// Decision-variable boxes. The default speed envelopes follow stabilized
/// approach profiles; d_max mirrors the geometry config.
struct Bounds {
    double d_max = 15.0;               // NM
    SpeedRange v_L{180.0, 240.0};
    SpeedRange v_theta{130.0, 200.0};
    SpeedRange v_f{130.0, 160.0};

    SpeedProfile max_speeds() const { return {v_L.max, v_theta.max, v_f.max}; }
    SpeedProfile min_speeds() const { return {v_L.min, v_theta.min, v_f.min}; }

    /// Requires min <= max per leg plus the chain conditions
    /// max_L >= max_theta >= max_f and min_L >= min_theta >= min_f, so that a
    /// monotone speed profile exists everywhere in the box.
    void validate() const;
};

/// Objective weights; the hierarchy w_safe >= w_thru >= w_eff >= w_speed
/// keeps safety dominant over throughput over efficiency.
struct Weights {
    double safe = 1.0e4;
    double thru = 1.0;
    double eff = 0.1;
    double speed = 0.01;

    void validate() const;
};

struct SolverParams {
    int max_iterations = 5000;
    double tolerance = 1e-8;     // relative objective decrease over stall_window
    int stall_window = 50;       // iterations
    double softplus_eta = 0.5;   // seconds, separation-hinge smoothing width
    int restarts = 4;            // perturbed restarts beyond the warm start
};

/// Decisions and derived quantities for one aircraft.
struct AircraftPlan {
    int arrival_id = 0;
    std::string gate;
    Point entry;
    double tau = 0.0;        // entry time, seconds
    double d = 0.0;          // path extension, NM
    SpeedProfile speeds;
    double faf_time_t = 0.0;  // tau + travel time, seconds
    PathGeometry geometry;
};

enum class SolveStatus { Converged, IterationLimit, InfeasibleGeometry };

std::string to_string(SolveStatus status);

struct ObjectiveBreakdown {
    double total = 0.0;
    double safety = 0.0;      // sum of separation slacks, seconds
    double throughput = 0.0;  // makespan t_N, seconds
    double efficiency = 0.0;  // total stretch, NM
    double speed = 0.0;       // sum of normalized speed deficits
};

struct Solution {
    std::vector<AircraftPlan> plans;   // FCFS rank order
    std::vector<double> slacks_sigma;  // ranks k = 2..N, seconds
    ObjectiveBreakdown objective;
    SolveStatus status = SolveStatus::Converged;
};

/// FCFS landing sequence: ranks aircraft by nominal ETA (d = 0, maximum
/// speeds), ties broken by entry time then id. Returns indices into
/// scenario.arrivals, rank by rank.
std::vector<int> fcfs_sequence(const GeometryConfig& config, const Scenario& scenario,
                               const Bounds& bounds);

/// Separation slacks for plans in rank order: sigma_k = max(0, t_{k-1} +
/// t_sep - t_k).
std::vector<double> separation_slacks(const std::vector<AircraftPlan>& plans,
                                      double t_sep);

/// Weighted four-term objective over plans in rank order.
ObjectiveBreakdown evaluate_objective(const Scenario& scenario, const Bounds& bounds,
                                      const Weights& weights,
                                      const std::vector<AircraftPlan>& plans);

/// Rank-by-rank baseline: each aircraft takes the smallest delay reaching
/// t_k >= t_{k-1} + t_sep, slowing down before extending the path; if even
/// the maximal delay falls short it is applied anyway and the shortfall
/// shows up as slack.
Solution greedy_fcfs_solve(const GeometryConfig& config, const Scenario& scenario,
                           const std::vector<int>& sequence, const Bounds& bounds,
                           const Weights& weights);

/// Full solve: projected-gradient descent on the softplus-smoothed objective
/// from the greedy warm start plus perturbed restarts, re-scored with the
/// exact hinge. Never returns a worse objective than the greedy baseline.
Solution solve(const GeometryConfig& config, const Scenario& scenario,
               const std::vector<int>& sequence, const Bounds& bounds,
               const Weights& weights, const SolverParams& params = {});

/// Snaps every planned speed down to the nearest grid_kt multiple that stays
/// inside its leg bounds (never upward, preserving the monotone profile),
/// then recomputes FAF times, slacks, and the objective exactly.
Solution quantize_speeds(const GeometryConfig& config, const Scenario& scenario,
                         const Bounds& bounds, const Weights& weights,
                         const Solution& solution, double grid_kt = 10.0);

}  // namespace tracon

#endif  // TRACON_NLP_HPP
