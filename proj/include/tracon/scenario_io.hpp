#ifndef TRACON_SCENARIO_IO_HPP
#define TRACON_SCENARIO_IO_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tracon/nlp.hpp"
#include "tracon/simkit.hpp"

namespace tracon {

/// Malformed or inconsistent input file. The message carries the offending
/// JSON path or parse position.
class IoError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// In-memory form of a scenario file. Every section except the schema
/// version is optional in the file and defaults as below; unknown keys are
/// rejected. Traffic demand is either fixed per-gate rates or a rate range
/// to sample per seed.
struct ScenarioDoc {
    int version = 1;
    GeometryConfig geometry = GeometryConfig::defaults();
    std::optional<std::map<std::string, int>> rates;  // fixed aircraft/hour
    TrafficParams traffic;                            // rate range + t_sep + t_max
    std::uint64_t seed = 0;
    Bounds bounds;
    Weights weights;
    SolverParams solver;
    std::optional<std::vector<Arrival>> arrivals;  // materialized traffic
};

/// Resolves the per-gate demand: the fixed rates if given, otherwise a
/// seeded draw from the rate range.
std::map<std::string, int> resolve_rates(const ScenarioDoc& doc);

/// Generates and attaches the arrivals section (overwriting any present).
void materialize(ScenarioDoc& doc);

/// Converts a materialized document into a solver-ready Scenario.
/// Throws IoError when the arrivals section is missing.
Scenario scenario_of(const ScenarioDoc& doc);

ScenarioDoc load_scenario(const std::string& path);
std::string to_json_string(const ScenarioDoc& doc);
void save_scenario(const ScenarioDoc& doc, const std::string& path);

/// Results file: input echo, FCFS sequence, solution, metrics, and the
/// optional speed-quantized variant.
struct ResultsDoc {
    int version = 1;
    ScenarioDoc scenario;
    std::vector<int> sequence;
    Solution solution;
    RunMetrics metrics;
    std::optional<Solution> quantized;
    std::optional<RunMetrics> quantized_metrics;
};

ResultsDoc load_results(const std::string& path);
std::string to_json_string(const ResultsDoc& doc);
void save_results(const ResultsDoc& doc, const std::string& path);

BatchReport load_batch(const std::string& path);
std::string to_json_string(const BatchReport& report);
void save_batch(const BatchReport& report, const std::string& path);

/// One row per run: run, seed, per-gate rates, n_aircraft, faf_landing_rate,
/// violation_pct, total_stretch, makespan.
std::string to_csv(const BatchReport& report);

}  // namespace tracon

#endif  // TRACON_SCENARIO_IO_HPP
