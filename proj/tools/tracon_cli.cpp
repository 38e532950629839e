// tracon: terminal-area arrival trajectory planner.
//
// Subcommands: generate (materialize stochastic arrivals), solve (fixed-
// sequence trajectory optimization), mc (Monte Carlo batch), plot (SVG
// snapshot / scatter). Exit codes: 0 success, 2 input error, 3 geometry
// infeasibility.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "tracon/scenario_io.hpp"
#include "tracon/svg_plot.hpp"

namespace {

namespace fs = std::filesystem;

/// Relative inputs that do not exist are also looked up under
/// $TRACON_CONFIG_DIR.
std::string resolve_input(const std::string& path) {
    if (fs::exists(path)) return path;
    const char* dir = std::getenv("TRACON_CONFIG_DIR");
    if (dir != nullptr && fs::path(path).is_relative()) {
        const fs::path candidate = fs::path(dir) / path;
        if (fs::exists(candidate)) return candidate.string();
    }
    return path;
}

int cmd_generate(const std::string& input, const std::string& out,
                 std::optional<std::uint64_t> seed) {
    tracon::ScenarioDoc doc = tracon::load_scenario(resolve_input(input));
    if (seed) doc.seed = *seed;
    doc.rates = tracon::resolve_rates(doc);
    tracon::materialize(doc);
    tracon::save_scenario(doc, out.empty() ? input : out);
    std::cout << doc.arrivals->size() << " aircraft generated (seed " << doc.seed
              << ")\n";
    return 0;
}

int cmd_solve(const std::string& input, const std::string& out, bool quantize) {
    const tracon::ScenarioDoc doc = tracon::load_scenario(resolve_input(input));
    const tracon::Scenario scenario = tracon::scenario_of(doc);

    tracon::ResultsDoc results;
    results.scenario = doc;
    results.sequence = tracon::fcfs_sequence(doc.geometry, scenario, doc.bounds);
    results.solution = tracon::solve(doc.geometry, scenario, results.sequence, doc.bounds,
                                     doc.weights, doc.solver);
    if (results.solution.status == tracon::SolveStatus::InfeasibleGeometry) {
        std::cerr << "error: no valid path for at least one aircraft\n";
        return 3;
    }
    results.metrics = tracon::metrics_of(results.solution);
    results.metrics.rates = scenario.rates;
    results.metrics.seed = scenario.rng_seed;

    if (quantize) {
        results.quantized = tracon::quantize_speeds(doc.geometry, scenario, doc.bounds,
                                                    doc.weights, results.solution);
        results.quantized_metrics = tracon::metrics_of(*results.quantized);
        results.quantized_metrics->rates = scenario.rates;
        results.quantized_metrics->seed = scenario.rng_seed;
    }
    tracon::save_results(results, out);

    std::cout << scenario.arrivals.size() << " aircraft, status "
              << tracon::to_string(results.solution.status) << ", objective "
              << results.solution.objective.total << ", sum sigma "
              << results.metrics.sum_sigma << " s\n";
    return 0;
}

int cmd_mc(const std::string& input, int runs, const std::string& out, int threads) {
    const tracon::ScenarioDoc doc = tracon::load_scenario(resolve_input(input));
    const tracon::BatchReport report =
        tracon::run_batch(doc.geometry, doc.bounds, doc.weights, doc.solver, doc.traffic,
                          runs, doc.seed, threads);

    fs::path base(out);
    if (base.extension() == ".json" || base.extension() == ".csv")
        base.replace_extension();
    tracon::save_batch(report, base.string() + ".json");
    std::ofstream csv(base.string() + ".csv");
    if (!csv) throw tracon::IoError(base.string() + ".csv: cannot open for writing");
    csv << tracon::to_csv(report);

    std::cout << runs << " runs written to " << base.string() << ".{json,csv}\n";
    return 0;
}

int cmd_plot(const std::string& input, std::optional<double> snapshot_t, bool scatter,
             const std::string& out) {
    std::string svg;
    if (scatter) {
        svg = tracon::render_scatter_svg(tracon::load_batch(resolve_input(input)));
    } else {
        const tracon::ResultsDoc results = tracon::load_results(resolve_input(input));
        const double t = *snapshot_t;
        if (t < 0.0 || t > results.metrics.makespan)
            std::cerr << "warning: t=" << t << " is outside [0, "
                      << results.metrics.makespan << "]; airspace will be empty\n";
        svg = tracon::render_snapshot_svg(results, t);
    }
    std::ofstream file(out);
    if (!file) throw tracon::IoError(out + ": cannot open for writing");
    file << svg;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Terminal-area arrival trajectory planner"};
    app.require_subcommand(1);

    std::string input;
    std::string generate_out;
    std::string solve_out = "results.json";
    std::string mc_out = "batch";
    std::string plot_out = "plot.svg";
    std::optional<std::uint64_t> seed;
    bool quantize = false;
    int runs = 0;
    int threads = static_cast<int>(std::thread::hardware_concurrency());
    std::optional<double> snapshot_t;
    bool scatter = false;

    auto* generate = app.add_subcommand("generate", "Materialize stochastic arrivals");
    generate->add_option("scenario", input, "Scenario file")->required();
    generate->add_option("--seed", seed, "Override the scenario seed");
    generate->add_option("--out", generate_out, "Output path (default: rewrite in place)");

    auto* solve = app.add_subcommand("solve", "Solve the fixed-sequence program");
    solve->add_option("scenario", input, "Materialized scenario file")->required();
    solve->add_option("--out", solve_out, "Results file");
    solve->add_flag("--quantize-speeds", quantize,
                    "Also report speeds snapped down to the 10-knot grid");

    auto* mc = app.add_subcommand("mc", "Monte Carlo batch");
    mc->add_option("scenario", input, "Scenario file (rates are sampled per run)")
        ->required();
    mc->add_option("--runs", runs, "Number of runs")->required()
        ->check(CLI::PositiveNumber);
    mc->add_option("--out", mc_out, "Output base path");
    mc->add_option("--threads", threads, "Worker threads");

    auto* plot = app.add_subcommand("plot", "Render an SVG chart");
    plot->add_option("input", input, "Results file (snapshot) or batch report (scatter)")
        ->required();
    auto* snap_opt = plot->add_option("--snapshot", snapshot_t, "Airspace at time t");
    plot->add_flag("--scatter", scatter, "Batch scatter chart");
    plot->add_option("--out", plot_out, "SVG path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*generate) return cmd_generate(input, generate_out, seed);
        if (*solve) return cmd_solve(input, solve_out, quantize);
        if (*mc) return cmd_mc(input, runs, mc_out, threads);
        if (*plot) {
            if (scatter == static_cast<bool>(*snap_opt)) {
                std::cerr << "error: choose exactly one of --snapshot or --scatter\n";
                return 2;
            }
            return cmd_plot(input, snapshot_t, scatter, plot_out);
        }
    } catch (const tracon::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const tracon::GeometryError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
