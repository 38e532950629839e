#include "tracon/scenario_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string_view>

#include <json.hpp>

namespace tracon {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw IoError(path + ": " + what);
}

void check_keys(const json& obj, const std::string& path,
                std::initializer_list<std::string_view> allowed) {
    if (!obj.is_object()) fail(path, "expected an object");
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const std::string_view key : allowed)
            if (it.key() == key) {
                known = true;
                break;
            }
        if (!known) fail(path, "unknown key \"" + it.key() + "\"");
    }
}

double as_number(const json& value, const std::string& path) {
    if (!value.is_number()) fail(path, "expected a number");
    return value.get<double>();
}

double number_or(const json& obj, const std::string& path, const char* key,
                 double fallback) {
    if (!obj.contains(key)) return fallback;
    return as_number(obj.at(key), path + "." + key);
}

std::int64_t integer_or(const json& obj, const std::string& path, const char* key,
                        std::int64_t fallback) {
    if (!obj.contains(key)) return fallback;
    const json& value = obj.at(key);
    if (!value.is_number_integer()) fail(path + "." + key, "expected an integer");
    return value.get<std::int64_t>();
}

Point as_point(const json& value, const std::string& path) {
    if (!value.is_array() || value.size() != 2)
        fail(path, "expected a 2-element [x, y] array");
    return {as_number(value[0], path + "[0]"), as_number(value[1], path + "[1]")};
}

json point_json(Point p) { return json::array({p.x, p.y}); }

SpeedRange as_range(const json& value, const std::string& path) {
    if (!value.is_array() || value.size() != 2)
        fail(path, "expected a 2-element [min, max] array");
    return {as_number(value[0], path + "[0]"), as_number(value[1], path + "[1]")};
}

json range_json(const SpeedRange& r) { return json::array({r.min, r.max}); }

GeometryConfig parse_geometry(const json& obj, const std::string& path) {
    check_keys(obj, path, {"faf", "turn_radius", "tcp_radius", "d_max", "gates"});
    GeometryConfig config = GeometryConfig::defaults();
    if (obj.contains("faf")) config.faf = as_point(obj.at("faf"), path + ".faf");
    config.turn_radius = number_or(obj, path, "turn_radius", config.turn_radius);
    config.tcp_radius = number_or(obj, path, "tcp_radius", config.tcp_radius);
    config.d_max = number_or(obj, path, "d_max", config.d_max);
    if (obj.contains("gates")) {
        const json& gates = obj.at("gates");
        if (!gates.is_object()) fail(path + ".gates", "expected an object");
        config.gates.clear();
        for (auto it = gates.begin(); it != gates.end(); ++it)
            config.gates[it.key()] = as_point(it.value(), path + ".gates." + it.key());
    }
    return config;
}

json geometry_json(const GeometryConfig& config) {
    json gates = json::object();
    for (const auto& [name, point] : config.gates) gates[name] = point_json(point);
    return {{"faf", point_json(config.faf)},
            {"turn_radius", config.turn_radius},
            {"tcp_radius", config.tcp_radius},
            {"d_max", config.d_max},
            {"gates", std::move(gates)}};
}

Bounds parse_bounds(const json& obj, const std::string& path, double geometry_d_max) {
    check_keys(obj, path, {"d_max", "v_L", "v_theta", "v_f"});
    Bounds bounds;
    bounds.d_max = geometry_d_max;
    if (obj.contains("d_max")) {
        const double d = as_number(obj.at("d_max"), path + ".d_max");
        if (d != geometry_d_max)
            fail(path + ".d_max", "must match geometry.d_max when both are given");
    }
    if (obj.contains("v_L")) bounds.v_L = as_range(obj.at("v_L"), path + ".v_L");
    if (obj.contains("v_theta"))
        bounds.v_theta = as_range(obj.at("v_theta"), path + ".v_theta");
    if (obj.contains("v_f")) bounds.v_f = as_range(obj.at("v_f"), path + ".v_f");
    return bounds;
}

json bounds_json(const Bounds& bounds) {
    return {{"d_max", bounds.d_max},
            {"v_L", range_json(bounds.v_L)},
            {"v_theta", range_json(bounds.v_theta)},
            {"v_f", range_json(bounds.v_f)}};
}

Weights parse_weights(const json& obj, const std::string& path) {
    check_keys(obj, path, {"safe", "thru", "eff", "speed"});
    Weights weights;
    weights.safe = number_or(obj, path, "safe", weights.safe);
    weights.thru = number_or(obj, path, "thru", weights.thru);
    weights.eff = number_or(obj, path, "eff", weights.eff);
    weights.speed = number_or(obj, path, "speed", weights.speed);
    return weights;
}

json weights_json(const Weights& weights) {
    return {{"safe", weights.safe},
            {"thru", weights.thru},
            {"eff", weights.eff},
            {"speed", weights.speed}};
}

SolverParams parse_solver(const json& obj, const std::string& path) {
    check_keys(obj, path,
               {"max_iterations", "tolerance", "stall_window", "softplus_eta", "restarts"});
    SolverParams params;
    params.max_iterations =
        static_cast<int>(integer_or(obj, path, "max_iterations", params.max_iterations));
    params.tolerance = number_or(obj, path, "tolerance", params.tolerance);
    params.stall_window =
        static_cast<int>(integer_or(obj, path, "stall_window", params.stall_window));
    params.softplus_eta = number_or(obj, path, "softplus_eta", params.softplus_eta);
    params.restarts = static_cast<int>(integer_or(obj, path, "restarts", params.restarts));
    if (params.max_iterations < 1) fail(path + ".max_iterations", "must be >= 1");
    if (!(params.tolerance > 0.0)) fail(path + ".tolerance", "must be positive");
    if (params.stall_window < 1) fail(path + ".stall_window", "must be >= 1");
    if (!(params.softplus_eta > 0.0)) fail(path + ".softplus_eta", "must be positive");
    if (params.restarts < 0) fail(path + ".restarts", "must be nonnegative");
    return params;
}

json solver_json(const SolverParams& params) {
    return {{"max_iterations", params.max_iterations},
            {"tolerance", params.tolerance},
            {"stall_window", params.stall_window},
            {"softplus_eta", params.softplus_eta},
            {"restarts", params.restarts}};
}

std::vector<Arrival> parse_arrivals(const json& arr, const std::string& path,
                                    const ScenarioDoc& doc) {
    if (!arr.is_array()) fail(path, "expected an array");
    std::vector<Arrival> arrivals;
    arrivals.reserve(arr.size());
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const std::string item_path = path + "[" + std::to_string(i) + "]";
        const json& item = arr[i];
        check_keys(item, item_path, {"id", "gate", "entry", "tau"});
        Arrival a;
        a.id = static_cast<int>(integer_or(item, item_path, "id", static_cast<int>(i)));
        if (!item.contains("gate") || !item.at("gate").is_string())
            fail(item_path, "missing string \"gate\"");
        a.gate = item.at("gate").get<std::string>();
        if (!item.contains("tau")) fail(item_path, "missing number \"tau\"");
        a.entry_time_tau = as_number(item.at("tau"), item_path + ".tau");

        const auto gate_it = doc.geometry.gates.find(a.gate);
        if (gate_it == doc.geometry.gates.end())
            fail(item_path + ".gate", "unknown gate \"" + a.gate + "\"");
        a.entry_point = gate_it->second;
        if (item.contains("entry")) {
            const Point p = as_point(item.at("entry"), item_path + ".entry");
            if (std::abs(p.x - a.entry_point.x) > 1e-9 ||
                std::abs(p.y - a.entry_point.y) > 1e-9)
                fail(item_path + ".entry", "does not match the configured gate point");
        }
        arrivals.push_back(std::move(a));
    }

    // Scenario invariants: global sort, horizon, and the per-gate hard floor.
    std::map<std::string, double> last_by_gate;
    for (std::size_t i = 0; i < arrivals.size(); ++i) {
        const Arrival& a = arrivals[i];
        const std::string item_path = path + "[" + std::to_string(i) + "]";
        if (a.entry_time_tau < 0.0) fail(item_path, "tau must be nonnegative");
        if (a.entry_time_tau > doc.traffic.t_max) fail(item_path, "tau exceeds t_max");
        if (i > 0 && a.entry_time_tau < arrivals[i - 1].entry_time_tau)
            fail(item_path, "arrivals must be sorted by tau");
        if (a.id != static_cast<int>(i)) fail(item_path, "ids must follow sorted order");
        const auto prev = last_by_gate.find(a.gate);
        if (prev != last_by_gate.end() &&
            a.entry_time_tau - prev->second < doc.traffic.t_sep - 1e-9)
            fail(item_path, "per-gate gap below t_sep");
        last_by_gate[a.gate] = a.entry_time_tau;
    }
    return arrivals;
}

json arrivals_json(const std::vector<Arrival>& arrivals) {
    json arr = json::array();
    for (const Arrival& a : arrivals)
        arr.push_back({{"id", a.id},
                       {"gate", a.gate},
                       {"entry", point_json(a.entry_point)},
                       {"tau", a.entry_time_tau}});
    return arr;
}

ScenarioDoc parse_scenario_doc(const json& root, const std::string& path) {
    check_keys(root, path,
               {"version", "geometry", "traffic", "bounds", "weights", "solver", "arrivals"});
    if (!root.contains("version")) fail(path, "missing required \"version\"");
    ScenarioDoc doc;
    doc.version = static_cast<int>(integer_or(root, path, "version", 1));
    if (doc.version != 1) fail(path + ".version", "unsupported schema version");

    if (root.contains("geometry"))
        doc.geometry = parse_geometry(root.at("geometry"), path + ".geometry");
    doc.geometry.validate();

    if (root.contains("traffic")) {
        const json& traffic = root.at("traffic");
        const std::string tpath = path + ".traffic";
        check_keys(traffic, tpath, {"rates", "rate_range", "t_sep", "t_max", "seed"});
        if (traffic.contains("rates") && traffic.contains("rate_range"))
            fail(tpath, "give either fixed rates or a rate_range, not both");
        if (traffic.contains("rates")) {
            const json& rates = traffic.at("rates");
            if (!rates.is_object()) fail(tpath + ".rates", "expected an object");
            std::map<std::string, int> fixed;
            for (auto it = rates.begin(); it != rates.end(); ++it) {
                if (doc.geometry.gates.find(it.key()) == doc.geometry.gates.end())
                    fail(tpath + ".rates", "unknown gate \"" + it.key() + "\"");
                fixed[it.key()] = static_cast<int>(
                    integer_or(rates, tpath + ".rates", it.key().c_str(), 0));
            }
            doc.rates = std::move(fixed);
        }
        if (traffic.contains("rate_range")) {
            const json& range = traffic.at("rate_range");
            const std::string rpath = tpath + ".rate_range";
            check_keys(range, rpath, {"min", "max"});
            doc.traffic.lambda_min =
                static_cast<int>(integer_or(range, rpath, "min", doc.traffic.lambda_min));
            doc.traffic.lambda_max =
                static_cast<int>(integer_or(range, rpath, "max", doc.traffic.lambda_max));
        }
        doc.traffic.t_sep = number_or(traffic, tpath, "t_sep", doc.traffic.t_sep);
        doc.traffic.t_max = number_or(traffic, tpath, "t_max", doc.traffic.t_max);
        if (traffic.contains("seed")) {
            const json& seed = traffic.at("seed");
            if (!seed.is_number_integer()) fail(tpath + ".seed", "expected an integer");
            doc.seed = seed.get<std::uint64_t>();
        }
        if (!(doc.traffic.t_sep > 0.0)) fail(tpath + ".t_sep", "must be positive");
        if (!(doc.traffic.t_max >= 0.0)) fail(tpath + ".t_max", "must be nonnegative");
        if (doc.traffic.lambda_min < 1 || doc.traffic.lambda_min > doc.traffic.lambda_max)
            fail(tpath + ".rate_range", "need 1 <= min <= max");
    }

    if (root.contains("bounds"))
        doc.bounds = parse_bounds(root.at("bounds"), path + ".bounds", doc.geometry.d_max);
    else
        doc.bounds.d_max = doc.geometry.d_max;
    doc.bounds.validate();

    if (root.contains("weights"))
        doc.weights = parse_weights(root.at("weights"), path + ".weights");
    doc.weights.validate();

    if (root.contains("solver"))
        doc.solver = parse_solver(root.at("solver"), path + ".solver");

    if (root.contains("arrivals"))
        doc.arrivals = parse_arrivals(root.at("arrivals"), path + ".arrivals", doc);
    return doc;
}

json scenario_doc_json(const ScenarioDoc& doc) {
    json traffic{{"t_sep", doc.traffic.t_sep},
                 {"t_max", doc.traffic.t_max},
                 {"seed", doc.seed}};
    if (doc.rates) {
        json rates = json::object();
        for (const auto& [gate, rate] : *doc.rates) rates[gate] = rate;
        traffic["rates"] = std::move(rates);
    } else {
        traffic["rate_range"] = {{"min", doc.traffic.lambda_min},
                                 {"max", doc.traffic.lambda_max}};
    }
    json root{{"version", doc.version},
              {"geometry", geometry_json(doc.geometry)},
              {"traffic", std::move(traffic)},
              {"bounds", bounds_json(doc.bounds)},
              {"weights", weights_json(doc.weights)},
              {"solver", solver_json(doc.solver)}};
    if (doc.arrivals) root["arrivals"] = arrivals_json(*doc.arrivals);
    return root;
}

SolveStatus parse_status(const json& value, const std::string& path) {
    if (!value.is_string()) fail(path, "expected a status string");
    const std::string s = value.get<std::string>();
    if (s == "converged") return SolveStatus::Converged;
    if (s == "iteration-limit") return SolveStatus::IterationLimit;
    if (s == "infeasible-geometry") return SolveStatus::InfeasibleGeometry;
    fail(path, "unknown status \"" + s + "\"");
}

json path_geometry_json(const PathGeometry& path) {
    return {{"turn_center", point_json(path.turn_center)},
            {"reference_projection", point_json(path.reference_projection)},
            {"tangent_point", point_json(path.tangent_point)},
            {"d_L", path.d_L},
            {"theta", path.theta},
            {"d_theta", path.d_theta},
            {"d_final", path.d_final},
            {"total_length", path.total_length},
            {"turn_ccw", path.turn_ccw}};
}

PathGeometry parse_path_geometry(const json& obj, const std::string& path) {
    check_keys(obj, path,
               {"turn_center", "reference_projection", "tangent_point", "d_L", "theta",
                "d_theta", "d_final", "total_length", "turn_ccw"});
    PathGeometry out;
    out.turn_center = as_point(obj.at("turn_center"), path + ".turn_center");
    out.reference_projection =
        as_point(obj.at("reference_projection"), path + ".reference_projection");
    out.tangent_point = as_point(obj.at("tangent_point"), path + ".tangent_point");
    out.d_L = as_number(obj.at("d_L"), path + ".d_L");
    out.theta = as_number(obj.at("theta"), path + ".theta");
    out.d_theta = as_number(obj.at("d_theta"), path + ".d_theta");
    out.d_final = as_number(obj.at("d_final"), path + ".d_final");
    out.total_length = as_number(obj.at("total_length"), path + ".total_length");
    if (!obj.at("turn_ccw").is_boolean()) fail(path + ".turn_ccw", "expected a boolean");
    out.turn_ccw = obj.at("turn_ccw").get<bool>();
    return out;
}

json solution_json(const Solution& solution) {
    json plans = json::array();
    for (const AircraftPlan& plan : solution.plans) {
        plans.push_back({{"id", plan.arrival_id},
                         {"gate", plan.gate},
                         {"entry", point_json(plan.entry)},
                         {"tau", plan.tau},
                         {"d", plan.d},
                         {"v_L", plan.speeds.v_L},
                         {"v_theta", plan.speeds.v_theta},
                         {"v_f", plan.speeds.v_f},
                         {"faf_time", plan.faf_time_t},
                         {"path", path_geometry_json(plan.geometry)}});
    }
    return {{"status", to_string(solution.status)},
            {"objective",
             {{"total", solution.objective.total},
              {"safety", solution.objective.safety},
              {"throughput", solution.objective.throughput},
              {"efficiency", solution.objective.efficiency},
              {"speed", solution.objective.speed}}},
            {"plans", std::move(plans)},
            {"slacks", solution.slacks_sigma}};
}

Solution parse_solution(const json& obj, const std::string& path) {
    check_keys(obj, path, {"status", "objective", "plans", "slacks"});
    Solution solution;
    solution.status = parse_status(obj.at("status"), path + ".status");

    const json& objective = obj.at("objective");
    const std::string opath = path + ".objective";
    check_keys(objective, opath, {"total", "safety", "throughput", "efficiency", "speed"});
    solution.objective.total = as_number(objective.at("total"), opath + ".total");
    solution.objective.safety = as_number(objective.at("safety"), opath + ".safety");
    solution.objective.throughput =
        as_number(objective.at("throughput"), opath + ".throughput");
    solution.objective.efficiency =
        as_number(objective.at("efficiency"), opath + ".efficiency");
    solution.objective.speed = as_number(objective.at("speed"), opath + ".speed");

    const json& plans = obj.at("plans");
    if (!plans.is_array()) fail(path + ".plans", "expected an array");
    for (std::size_t i = 0; i < plans.size(); ++i) {
        const std::string ppath = path + ".plans[" + std::to_string(i) + "]";
        const json& item = plans[i];
        check_keys(item, ppath,
                   {"id", "gate", "entry", "tau", "d", "v_L", "v_theta", "v_f", "faf_time",
                    "path"});
        AircraftPlan plan;
        plan.arrival_id = static_cast<int>(integer_or(item, ppath, "id", 0));
        plan.gate = item.at("gate").get<std::string>();
        plan.entry = as_point(item.at("entry"), ppath + ".entry");
        plan.tau = as_number(item.at("tau"), ppath + ".tau");
        plan.d = as_number(item.at("d"), ppath + ".d");
        plan.speeds.v_L = as_number(item.at("v_L"), ppath + ".v_L");
        plan.speeds.v_theta = as_number(item.at("v_theta"), ppath + ".v_theta");
        plan.speeds.v_f = as_number(item.at("v_f"), ppath + ".v_f");
        plan.faf_time_t = as_number(item.at("faf_time"), ppath + ".faf_time");
        plan.geometry = parse_path_geometry(item.at("path"), ppath + ".path");
        solution.plans.push_back(std::move(plan));
    }

    const json& slacks = obj.at("slacks");
    if (!slacks.is_array()) fail(path + ".slacks", "expected an array");
    for (std::size_t i = 0; i < slacks.size(); ++i)
        solution.slacks_sigma.push_back(
            as_number(slacks[i], path + ".slacks[" + std::to_string(i) + "]"));
    return solution;
}

json metrics_json(const RunMetrics& m) {
    json rates = json::object();
    for (const auto& [gate, rate] : m.rates) rates[gate] = rate;
    return {{"n_aircraft", m.n_aircraft},
            {"faf_landing_rate", m.faf_landing_rate},
            {"violation_pct", m.violation_pct},
            {"total_stretch", m.total_stretch},
            {"makespan", m.makespan},
            {"sum_sigma", m.sum_sigma},
            {"solver_status", to_string(m.solver_status)},
            {"rates", std::move(rates)},
            {"seed", m.seed}};
}

RunMetrics parse_metrics(const json& obj, const std::string& path) {
    check_keys(obj, path,
               {"n_aircraft", "faf_landing_rate", "violation_pct", "total_stretch",
                "makespan", "sum_sigma", "solver_status", "rates", "seed"});
    RunMetrics m;
    m.n_aircraft = static_cast<int>(integer_or(obj, path, "n_aircraft", 0));
    m.faf_landing_rate = number_or(obj, path, "faf_landing_rate", 0.0);
    m.violation_pct = number_or(obj, path, "violation_pct", 0.0);
    m.total_stretch = number_or(obj, path, "total_stretch", 0.0);
    m.makespan = number_or(obj, path, "makespan", 0.0);
    m.sum_sigma = number_or(obj, path, "sum_sigma", 0.0);
    if (obj.contains("solver_status"))
        m.solver_status = parse_status(obj.at("solver_status"), path + ".solver_status");
    if (obj.contains("rates"))
        for (auto it = obj.at("rates").begin(); it != obj.at("rates").end(); ++it)
            m.rates[it.key()] = it.value().get<int>();
    if (obj.contains("seed")) m.seed = obj.at("seed").get<std::uint64_t>();
    return m;
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError(path + ": cannot open for reading");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw IoError(path + ": " + e.what());
    }
}

/// Missing keys and type mismatches inside the parsers surface as library
/// exceptions; rewrap them with the file path attached.
template <typename Fn>
auto with_io_diagnostics(const std::string& path, Fn&& fn) {
    try {
        return fn();
    } catch (const json::exception& e) {
        throw IoError(path + ": " + e.what());
    }
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw IoError(path + ": cannot open for writing");
    out << text;
    if (!out) throw IoError(path + ": write failed");
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

std::map<std::string, int> resolve_rates(const ScenarioDoc& doc) {
    if (doc.rates) return *doc.rates;
    std::vector<std::string> gates;
    gates.reserve(doc.geometry.gates.size());
    for (const auto& [name, point] : doc.geometry.gates) gates.push_back(name);
    return sample_rates(doc.seed, gates, doc.traffic.lambda_min, doc.traffic.lambda_max);
}

void materialize(ScenarioDoc& doc) {
    const Scenario scenario = build_scenario(doc.geometry, resolve_rates(doc),
                                             doc.traffic.t_sep, doc.traffic.t_max, doc.seed);
    doc.arrivals = scenario.arrivals;
}

Scenario scenario_of(const ScenarioDoc& doc) {
    if (!doc.arrivals)
        throw IoError("scenario has no materialized arrivals; run generate first");
    Scenario scenario;
    scenario.arrivals = *doc.arrivals;
    scenario.rates = doc.rates ? *doc.rates : std::map<std::string, int>{};
    scenario.t_sep = doc.traffic.t_sep;
    scenario.t_max = doc.traffic.t_max;
    scenario.rng_seed = doc.seed;
    return scenario;
}

ScenarioDoc load_scenario(const std::string& path) {
    const json root = load_json_file(path);
    return with_io_diagnostics(path,
                               [&] { return parse_scenario_doc(root, "scenario"); });
}

std::string to_json_string(const ScenarioDoc& doc) {
    return scenario_doc_json(doc).dump(2) + "\n";
}

void save_scenario(const ScenarioDoc& doc, const std::string& path) {
    write_text_file(path, to_json_string(doc));
}

static ResultsDoc parse_results_doc(const json& root) {
    const std::string rpath = "results";
    check_keys(root, rpath,
               {"version", "scenario", "sequence", "solution", "metrics", "quantized",
                "quantized_metrics"});
    ResultsDoc doc;
    doc.version = static_cast<int>(integer_or(root, rpath, "version", 1));
    if (doc.version != 1) fail(rpath + ".version", "unsupported schema version");
    doc.scenario = parse_scenario_doc(root.at("scenario"), rpath + ".scenario");
    if (root.contains("sequence"))
        for (const json& v : root.at("sequence"))
            doc.sequence.push_back(v.get<int>());
    doc.solution = parse_solution(root.at("solution"), rpath + ".solution");
    doc.metrics = parse_metrics(root.at("metrics"), rpath + ".metrics");
    if (root.contains("quantized"))
        doc.quantized = parse_solution(root.at("quantized"), rpath + ".quantized");
    if (root.contains("quantized_metrics"))
        doc.quantized_metrics =
            parse_metrics(root.at("quantized_metrics"), rpath + ".quantized_metrics");
    return doc;
}

ResultsDoc load_results(const std::string& path) {
    const json root = load_json_file(path);
    return with_io_diagnostics(path, [&] { return parse_results_doc(root); });
}

std::string to_json_string(const ResultsDoc& doc) {
    json root{{"version", doc.version},
              {"scenario", scenario_doc_json(doc.scenario)},
              {"sequence", doc.sequence},
              {"solution", solution_json(doc.solution)},
              {"metrics", metrics_json(doc.metrics)}};
    if (doc.quantized) root["quantized"] = solution_json(*doc.quantized);
    if (doc.quantized_metrics)
        root["quantized_metrics"] = metrics_json(*doc.quantized_metrics);
    return root.dump(2) + "\n";
}

void save_results(const ResultsDoc& doc, const std::string& path) {
    write_text_file(path, to_json_string(doc));
}

static BatchReport parse_batch_report(const json& root) {
    const std::string bpath = "batch";
    check_keys(root, bpath,
               {"version", "capacity_threshold", "master_seed", "traffic", "runs"});
    BatchReport report;
    report.capacity_threshold = number_or(root, bpath, "capacity_threshold", 0.0);
    if (root.contains("master_seed"))
        report.master_seed = root.at("master_seed").get<std::uint64_t>();
    if (root.contains("traffic")) {
        const json& traffic = root.at("traffic");
        const std::string tpath = bpath + ".traffic";
        check_keys(traffic, tpath, {"lambda_min", "lambda_max", "t_sep", "t_max"});
        report.traffic.lambda_min =
            static_cast<int>(integer_or(traffic, tpath, "lambda_min", 1));
        report.traffic.lambda_max =
            static_cast<int>(integer_or(traffic, tpath, "lambda_max", 60));
        report.traffic.t_sep = number_or(traffic, tpath, "t_sep", 66.0);
        report.traffic.t_max = number_or(traffic, tpath, "t_max", 3600.0);
    }
    if (!root.contains("runs")) fail(bpath, "missing \"runs\"");
    for (std::size_t i = 0; i < root.at("runs").size(); ++i)
        report.runs.push_back(parse_metrics(root.at("runs")[i],
                                            bpath + ".runs[" + std::to_string(i) + "]"));
    return report;
}

BatchReport load_batch(const std::string& path) {
    const json root = load_json_file(path);
    return with_io_diagnostics(path, [&] { return parse_batch_report(root); });
}

std::string to_json_string(const BatchReport& report) {
    json runs = json::array();
    for (const RunMetrics& m : report.runs) runs.push_back(metrics_json(m));
    const json root{{"version", 1},
                    {"capacity_threshold", report.capacity_threshold},
                    {"master_seed", report.master_seed},
                    {"traffic",
                     {{"lambda_min", report.traffic.lambda_min},
                      {"lambda_max", report.traffic.lambda_max},
                      {"t_sep", report.traffic.t_sep},
                      {"t_max", report.traffic.t_max}}},
                    {"runs", std::move(runs)}};
    return root.dump(2) + "\n";
}

void save_batch(const BatchReport& report, const std::string& path) {
    write_text_file(path, to_json_string(report));
}

std::string to_csv(const BatchReport& report) {
    std::vector<std::string> gates;
    if (!report.runs.empty())
        for (const auto& [gate, rate] : report.runs.front().rates) gates.push_back(gate);

    std::ostringstream out;
    out << "run,seed";
    for (const std::string& gate : gates) out << ",rate_" << gate;
    out << ",n_aircraft,faf_landing_rate,violation_pct,total_stretch,makespan\n";
    for (std::size_t i = 0; i < report.runs.size(); ++i) {
        const RunMetrics& m = report.runs[i];
        out << i << ',' << m.seed;
        for (const std::string& gate : gates) {
            const auto it = m.rates.find(gate);
            out << ',' << (it != m.rates.end() ? it->second : 0);
        }
        out << ',' << m.n_aircraft << ',' << format_double(m.faf_landing_rate) << ','
            << format_double(m.violation_pct) << ',' << format_double(m.total_stretch)
            << ',' << format_double(m.makespan) << '\n';
    }
    return out.str();
}

}  // namespace tracon
