#ifndef TRACON_TRAFFIC_HPP
#define TRACON_TRAFFIC_HPP

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "tracon/geometry.hpp"

namespace tracon {

/// One aircraft entering the terminal area.
struct Arrival {
    int id = 0;                   // global FCFS-sorted index
    std::string gate;             // feeder gate of origin
    Point entry_point;            // equals the configured gate point
    double entry_time_tau = 0.0;  // seconds
};

/// A seeded, sorted set of arrivals plus the separation and horizon
/// parameters they were generated under.
struct Scenario {
    std::vector<Arrival> arrivals;   // sorted by entry_time_tau
    std::map<std::string, int> rates;  // aircraft/hour per gate
    double t_sep = 66.0;             // seconds
    double t_max = 3600.0;           // seconds
    std::uint64_t rng_seed = 0;
};

/// Inverse-CDF exponential inter-arrival sample: -ln(u)/lambda hours,
/// returned in seconds. u must lie in (0, 1].
double exp_sample_seconds(double u, double lambda_per_hr);

/// One independent discrete-uniform integer rate per gate, drawn from the
/// gate's own substream so that adding a gate never perturbs the others.
std::map<std::string, int> sample_rates(std::uint64_t seed,
                                        const std::vector<std::string>& gates,
                                        int lambda_min, int lambda_max);

/// Shifted-Poisson entry times for one gate: each gap is t_sep plus an
/// Exp(lambda) draw. The recursion starts at 0, which is a seed value and not
/// an emitted aircraft; generation stops once the next time would exceed
/// t_max (a time exactly at t_max is kept).
std::vector<double> generate_stream(std::uint64_t seed, std::string_view gate,
                                    double lambda_per_hr, double t_sep, double t_max);

/// Merges the per-gate streams into a globally sorted scenario. Ties in entry
/// time break by gate name; ids are assigned in sorted order.
Scenario build_scenario(const GeometryConfig& config,
                        const std::map<std::string, int>& rates, double t_sep,
                        double t_max, std::uint64_t seed);

}  // namespace tracon

#endif  // TRACON_TRAFFIC_HPP
