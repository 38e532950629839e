#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "oracles.hpp"
#include "tracon/scenario_io.hpp"
#include "tracon/svg_plot.hpp"

using namespace tracon;

namespace {

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name)
        : path((std::filesystem::temp_directory_path() / name).string()) {}
    ~TempFile() { std::remove(path.c_str()); }
};

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
}

ResultsDoc solved_results(std::uint64_t seed, int rate, double t_max) {
    ScenarioDoc doc;
    doc.seed = seed;
    std::map<std::string, int> rates;
    for (const auto& [gate, point] : doc.geometry.gates) rates[gate] = rate;
    doc.rates = rates;
    doc.traffic.t_max = t_max;
    materialize(doc);

    ResultsDoc results;
    results.scenario = doc;
    const Scenario scenario = scenario_of(doc);
    results.sequence = fcfs_sequence(doc.geometry, scenario, doc.bounds);
    results.solution =
        solve(doc.geometry, scenario, results.sequence, doc.bounds, doc.weights, doc.solver);
    results.metrics = metrics_of(results.solution);
    return results;
}

}  // namespace

TEST_CASE("scenario files round-trip losslessly") {
    ScenarioDoc doc;
    doc.seed = 424242;
    doc.traffic.t_sep = 66.0;
    doc.traffic.t_max = 1800.0;
    doc.rates = std::map<std::string, int>{
        {"DALAS", 17}, {"LOGEN", 52}, {"HUSKY", 9}, {"TIROE", 33}};
    materialize(doc);
    REQUIRE(doc.arrivals.has_value());
    REQUIRE(!doc.arrivals->empty());

    TempFile file("tracon_scenario_roundtrip.json");
    save_scenario(doc, file.path);
    const ScenarioDoc loaded = load_scenario(file.path);

    CHECK(loaded.seed == doc.seed);
    CHECK(loaded.traffic.t_sep == doc.traffic.t_sep);
    CHECK(loaded.geometry.faf.x == doc.geometry.faf.x);
    CHECK(loaded.geometry.turn_radius == doc.geometry.turn_radius);
    REQUIRE(loaded.arrivals.has_value());
    REQUIRE(loaded.arrivals->size() == doc.arrivals->size());
    for (std::size_t i = 0; i < doc.arrivals->size(); ++i) {
        CHECK((*loaded.arrivals)[i].entry_time_tau == (*doc.arrivals)[i].entry_time_tau);
        CHECK((*loaded.arrivals)[i].gate == (*doc.arrivals)[i].gate);
    }

    // Serialize -> parse -> serialize is a fixed point.
    CHECK(to_json_string(loaded) == to_json_string(doc));
}

TEST_CASE("defaults fill omitted sections") {
    TempFile file("tracon_scenario_defaults.json");
    write_file(file.path, "{\"version\": 1}\n");
    const ScenarioDoc doc = load_scenario(file.path);
    CHECK(doc.traffic.t_sep == 66.0);
    CHECK(doc.traffic.t_max == 3600.0);
    CHECK(doc.bounds.v_L.max == 240.0);
    CHECK(doc.weights.safe == 1.0e4);
    CHECK(doc.geometry.gates.size() == 4);
    CHECK(!doc.arrivals.has_value());

    // Solving needs materialized arrivals.
    CHECK_THROWS_AS(scenario_of(doc), IoError);
}

TEST_CASE("malformed scenario files are rejected with diagnostics") {
    TempFile file("tracon_scenario_bad.json");

    write_file(file.path, "{\"version\": 1, \"bogus\": 3}\n");
    CHECK_THROWS_AS(load_scenario(file.path), IoError);

    write_file(file.path, "{}\n");
    CHECK_THROWS_AS(load_scenario(file.path), IoError);  // version required

    write_file(file.path, "{\"version\": 1, \"traffic\": {\"t_sep\": \"fast\"}}\n");
    CHECK_THROWS_AS(load_scenario(file.path), IoError);

    write_file(file.path, "{\"version\": 1, \"traffic\": {\"rates\": {\"NOPE\": 5}}}\n");
    CHECK_THROWS_AS(load_scenario(file.path), IoError);

    write_file(file.path, "not json at all\n");
    CHECK_THROWS_AS(load_scenario(file.path), IoError);

    // Arrivals violating the per-gate floor are rejected.
    write_file(file.path,
               "{\"version\": 1, \"arrivals\": ["
               "{\"id\": 0, \"gate\": \"DALAS\", \"tau\": 100.0},"
               "{\"id\": 1, \"gate\": \"DALAS\", \"tau\": 120.0}]}\n");
    CHECK_THROWS_AS(load_scenario(file.path), IoError);

    try {
        load_scenario(file.path);
    } catch (const IoError& e) {
        CHECK(std::string(e.what()).find("arrivals[1]") != std::string::npos);
    }
}

TEST_CASE("results files round-trip and re-evaluate") {
    const ResultsDoc results = solved_results(777, 20, 900.0);
    REQUIRE(!results.solution.plans.empty());

    TempFile file("tracon_results_roundtrip.json");
    save_results(results, file.path);
    const ResultsDoc loaded = load_results(file.path);

    CHECK(to_json_string(loaded) == to_json_string(results));

    // Re-evaluating the objective from the loaded plans reproduces the total.
    const Scenario scenario = scenario_of(loaded.scenario);
    const ObjectiveBreakdown again = evaluate_objective(
        scenario, loaded.scenario.bounds, loaded.scenario.weights, loaded.solution.plans);
    CHECK(again.total ==
          doctest::Approx(loaded.solution.objective.total).epsilon(1e-9));
}

TEST_CASE("batch reports serialize to json and csv") {
    const GeometryConfig config = GeometryConfig::defaults();
    const TrafficParams traffic{1, 60, 66.0, 600.0};
    const BatchReport report = run_batch(config, {}, {}, {}, traffic, 4, 5, 1);

    TempFile file("tracon_batch.json");
    save_batch(report, file.path);
    const BatchReport loaded = load_batch(file.path);
    CHECK(to_json_string(loaded) == to_json_string(report));

    const std::string csv = to_csv(report);
    CHECK(csv.rfind("run,seed,rate_DALAS,rate_HUSKY,rate_LOGEN,rate_TIROE,n_aircraft,"
                    "faf_landing_rate,violation_pct,total_stretch,makespan\n",
                    0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);  // header + 4 rows
}

TEST_CASE("snapshot svg is well-formed and places aircraft at gates") {
    // Hand-built scenario with one aircraft entering at tau = 0.
    ScenarioDoc doc;
    doc.arrivals = std::vector<Arrival>{
        {0, "DALAS", doc.geometry.gates.at("DALAS"), 0.0}};
    ResultsDoc results;
    results.scenario = doc;
    const Scenario scenario = scenario_of(doc);
    results.sequence = fcfs_sequence(doc.geometry, scenario, doc.bounds);
    results.solution =
        solve(doc.geometry, scenario, results.sequence, doc.bounds, doc.weights);
    results.metrics = metrics_of(results.solution);

    const std::string svg = render_snapshot_svg(results, 0.0);
    CHECK(oracles::xml_check(svg).empty());
    // Exactly one aircraft marker, drawn at the gate.
    CHECK(svg.find("fill=\"#111111\"") != std::string::npos);
    const Point gate = doc.geometry.gates.at("DALAS");
    const double extent = doc.geometry.tcp_radius + 6.0;
    char expected[64];
    std::snprintf(expected, sizeof(expected), "cx=\"%.3f\" cy=\"%.3f\" r=\"4.000\"",
                  (gate.x + extent) / (2.0 * extent) * 860.0,
                  860.0 - (gate.y + extent) / (2.0 * extent) * 860.0);
    CHECK(svg.find(expected) != std::string::npos);

    // Far beyond the makespan the airspace is empty but still well-formed.
    const std::string late = render_snapshot_svg(results, 1.0e6);
    CHECK(oracles::xml_check(late).empty());
    CHECK(late.find("airborne 0") != std::string::npos);
}

TEST_CASE("scatter svg is well-formed and marks the capacity line") {
    const GeometryConfig config = GeometryConfig::defaults();
    const TrafficParams traffic{1, 60, 66.0, 600.0};
    const BatchReport report = run_batch(config, {}, {}, {}, traffic, 4, 5, 1);

    const std::string svg = render_scatter_svg(report);
    CHECK(oracles::xml_check(svg).empty());
    CHECK(svg.find("3600/t_sep") != std::string::npos);
    CHECK(svg.find("54.545") != std::string::npos);
}
