#include "tracon/simkit.hpp"

#include <atomic>
#include <stdexcept>
#include <thread>

#include "tracon/rng.hpp"

namespace tracon {

RunMetrics metrics_of(const Solution& solution) {
    RunMetrics m;
    m.n_aircraft = static_cast<int>(solution.plans.size());
    m.solver_status = solution.status;
    for (const AircraftPlan& plan : solution.plans) m.total_stretch += plan.d;
    if (!solution.plans.empty()) m.makespan = solution.plans.back().faf_time_t;

    int violations = 0;
    for (const double sigma : solution.slacks_sigma) {
        m.sum_sigma += sigma;
        if (sigma > kViolationEpsilon) ++violations;
    }
    if (m.n_aircraft >= 2) {
        const double window =
            solution.plans.back().faf_time_t - solution.plans.front().faf_time_t;
        if (window > 0.0)
            m.faf_landing_rate = kSecondsPerHour * (m.n_aircraft - 1) / window;
        m.violation_pct = 100.0 * violations / (m.n_aircraft - 1);
    }
    return m;
}

std::uint64_t run_seed(std::uint64_t master_seed, int run_index) {
    return splitmix64(master_seed + static_cast<std::uint64_t>(run_index));
}

RunMetrics run_once(const GeometryConfig& config, const Bounds& bounds,
                    const Weights& weights, const SolverParams& solver,
                    const TrafficParams& traffic, std::uint64_t seed) {
    std::vector<std::string> gate_names;
    gate_names.reserve(config.gates.size());
    for (const auto& [name, point] : config.gates) gate_names.push_back(name);

    const auto rates =
        sample_rates(seed, gate_names, traffic.lambda_min, traffic.lambda_max);
    const Scenario scenario =
        build_scenario(config, rates, traffic.t_sep, traffic.t_max, seed);

    RunMetrics m;
    if (!scenario.arrivals.empty()) {
        const auto sequence = fcfs_sequence(config, scenario, bounds);
        const Solution solution =
            solve(config, scenario, sequence, bounds, weights, solver);
        m = metrics_of(solution);
    }
    m.rates = rates;
    m.seed = seed;
    return m;
}

BatchReport run_batch(const GeometryConfig& config, const Bounds& bounds,
                      const Weights& weights, const SolverParams& solver,
                      const TrafficParams& traffic, int n_runs,
                      std::uint64_t master_seed, int n_threads) {
    if (n_runs < 1) throw std::invalid_argument("run_batch: n_runs must be >= 1");

    BatchReport report;
    report.capacity_threshold = kSecondsPerHour / traffic.t_sep;
    report.master_seed = master_seed;
    report.traffic = traffic;
    report.runs.resize(n_runs);

    const auto worker = [&](std::atomic<int>& next) {
        for (int i = next.fetch_add(1); i < n_runs; i = next.fetch_add(1))
            report.runs[i] = run_once(config, bounds, weights, solver, traffic,
                                      run_seed(master_seed, i));
    };

    std::atomic<int> next{0};
    if (n_threads <= 1) {
        worker(next);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (int t = 0; t < n_threads; ++t) pool.emplace_back([&] { worker(next); });
        for (std::thread& t : pool) t.join();
    }
    return report;
}

}  // namespace tracon
