#include "tracon/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <vector>

namespace tracon {

namespace {

std::string escape_xml(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (const char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return buf;
}

/// Affine world-to-pixel mapping with the y axis flipped.
struct Canvas {
    double width, height;
    double x0, x1, y0, y1;  // world window

    double px(double x) const { return (x - x0) / (x1 - x0) * width; }
    double py(double y) const { return height - (y - y0) / (y1 - y0) * height; }
};

void emit_header(std::ostringstream& svg, double width, double height) {
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << width
        << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " " << height
        << "\">\n";
}

void emit_line(std::ostringstream& svg, double x1, double y1, double x2, double y2,
               const std::string& style) {
    svg << "  <line x1=\"" << fmt(x1) << "\" y1=\"" << fmt(y1) << "\" x2=\"" << fmt(x2)
        << "\" y2=\"" << fmt(y2) << "\" " << style << "/>\n";
}

void emit_circle(std::ostringstream& svg, double cx, double cy, double r,
                 const std::string& style) {
    svg << "  <circle cx=\"" << fmt(cx) << "\" cy=\"" << fmt(cy) << "\" r=\"" << fmt(r)
        << "\" " << style << "/>\n";
}

void emit_text(std::ostringstream& svg, double x, double y, const std::string& text,
               const std::string& style) {
    svg << "  <text x=\"" << fmt(x) << "\" y=\"" << fmt(y) << "\" " << style << ">"
        << escape_xml(text) << "</text>\n";
}

struct AirbornePlan {
    const AircraftPlan* plan;
    Point position;
};

}  // namespace

std::string render_snapshot_svg(const ResultsDoc& results, double t) {
    const GeometryConfig& config = results.scenario.geometry;
    const double extent = config.tcp_radius + 6.0;
    Canvas canvas{860.0, 860.0, -extent, extent, -extent, extent};

    std::ostringstream svg;
    emit_header(svg, canvas.width, canvas.height);
    svg << "  <rect width=\"" << canvas.width << "\" height=\"" << canvas.height
        << "\" fill=\"white\"/>\n";

    // Terminal boundary, final course, FAF, and runway threshold at the origin.
    emit_circle(svg, canvas.px(0.0), canvas.py(0.0),
                config.tcp_radius / (2.0 * extent) * canvas.width,
                "fill=\"none\" stroke=\"#888888\" stroke-dasharray=\"6 4\"");
    emit_line(svg, canvas.px(config.faf.x), canvas.py(config.faf.y), canvas.px(0.0),
              canvas.py(0.0), "stroke=\"#444444\" stroke-width=\"1.5\"");
    emit_circle(svg, canvas.px(config.faf.x), canvas.py(config.faf.y), 5.0,
                "fill=\"#222299\"");
    emit_text(svg, canvas.px(config.faf.x) + 8.0, canvas.py(config.faf.y) - 6.0, "FAF",
              "font-size=\"12\" fill=\"#222299\"");
    emit_line(svg, canvas.px(0.0) - 6.0, canvas.py(0.0), canvas.px(0.0) + 6.0,
              canvas.py(0.0), "stroke=\"#000000\" stroke-width=\"2\"");
    emit_line(svg, canvas.px(0.0), canvas.py(0.0) - 6.0, canvas.px(0.0),
              canvas.py(0.0) + 6.0, "stroke=\"#000000\" stroke-width=\"2\"");

    for (const auto& [name, point] : config.gates) {
        svg << "  <rect x=\"" << fmt(canvas.px(point.x) - 4.0) << "\" y=\""
            << fmt(canvas.py(point.y) - 4.0)
            << "\" width=\"8\" height=\"8\" fill=\"#bb2222\"/>\n";
        emit_text(svg, canvas.px(point.x) + 7.0, canvas.py(point.y) + 4.0, name,
                  "font-size=\"12\" fill=\"#bb2222\"");
    }

    // Airborne aircraft: entered but not yet across the FAF.
    std::vector<AirbornePlan> airborne;
    for (const AircraftPlan& plan : results.solution.plans) {
        if (plan.tau > t || plan.faf_time_t < t) continue;
        airborne.push_back(
            {&plan, position_at(config, plan.entry, plan.d, plan.speeds, t - plan.tau)});
    }

    for (const AirbornePlan& a : airborne) {
        const AircraftPlan& plan = *a.plan;
        // Remaining path to the FAF, sampled every two seconds.
        std::ostringstream points;
        const double remaining_start = t - plan.tau;
        const auto samples = sample_trajectory(config, plan.entry, plan.d, plan.speeds, 2.0);
        points << fmt(canvas.px(a.position.x)) << ',' << fmt(canvas.py(a.position.y));
        for (const TrajectorySample& s : samples)
            if (s.t > remaining_start)
                points << ' ' << fmt(canvas.px(s.p.x)) << ',' << fmt(canvas.py(s.p.y));
        svg << "  <polyline points=\"" << points.str()
            << "\" fill=\"none\" stroke=\"#7777cc\" stroke-width=\"1\"/>\n";
    }

    // Connectors between consecutive landings, colored by separation health.
    for (std::size_t i = 0; i + 1 < airborne.size(); ++i) {
        const AirbornePlan& lead = airborne[i];
        const AirbornePlan& trail = airborne[i + 1];
        const std::ptrdiff_t rank =
            trail.plan - results.solution.plans.data();  // sigma index is rank-1
        bool violating = false;
        if (rank >= 1 && static_cast<std::size_t>(rank - 1) < results.solution.slacks_sigma.size())
            violating = results.solution.slacks_sigma[rank - 1] > kViolationEpsilon;
        emit_line(svg, canvas.px(lead.position.x), canvas.py(lead.position.y),
                  canvas.px(trail.position.x), canvas.py(trail.position.y),
                  violating ? "stroke=\"#cc2222\" stroke-width=\"1.2\""
                            : "stroke=\"#22aa22\" stroke-width=\"1.2\"");
    }

    for (const AirbornePlan& a : airborne) {
        emit_circle(svg, canvas.px(a.position.x), canvas.py(a.position.y), 4.0,
                    "fill=\"#111111\"");
    }

    emit_text(svg, 16.0, 24.0, "t = " + fmt(t) + " s, airborne " +
                  std::to_string(airborne.size()),
              "font-size=\"14\" fill=\"#000000\"");
    svg << "</svg>\n";
    return svg.str();
}

std::string render_scatter_svg(const BatchReport& report) {
    const double width = 900.0, height = 600.0;
    const double ml = 70.0, mr = 80.0, mt = 40.0, mb = 60.0;

    double max_rate = report.capacity_threshold * 1.3;
    double max_stretch = 1.0;
    for (const RunMetrics& m : report.runs) {
        max_rate = std::max(max_rate, m.faf_landing_rate);
        max_stretch = std::max(max_stretch, m.total_stretch);
    }
    max_rate *= 1.05;
    max_stretch *= 1.05;

    const auto px = [&](double rate) { return ml + rate / max_rate * (width - ml - mr); };
    const auto py_pct = [&](double pct) {
        return height - mb - pct / 100.0 * (height - mt - mb);
    };
    const auto py_stretch = [&](double s) {
        return height - mb - s / max_stretch * (height - mt - mb);
    };

    std::ostringstream svg;
    emit_header(svg, width, height);
    svg << "  <rect width=\"" << width << "\" height=\"" << height
        << "\" fill=\"white\"/>\n";

    // Axes.
    emit_line(svg, ml, height - mb, width - mr, height - mb, "stroke=\"#000000\"");
    emit_line(svg, ml, mt, ml, height - mb, "stroke=\"#000000\"");
    emit_line(svg, width - mr, mt, width - mr, height - mb, "stroke=\"#000000\"");
    for (int i = 0; i <= 5; ++i) {
        const double rate = max_rate * i / 5.0;
        emit_line(svg, px(rate), height - mb, px(rate), height - mb + 5.0,
                  "stroke=\"#000000\"");
        emit_text(svg, px(rate) - 10.0, height - mb + 20.0, fmt(rate),
                  "font-size=\"11\" fill=\"#000000\"");
        const double pct = 100.0 * i / 5.0;
        emit_text(svg, ml - 40.0, py_pct(pct) + 4.0, fmt(pct),
                  "font-size=\"11\" fill=\"#bb2222\"");
        const double stretch = max_stretch * i / 5.0;
        emit_text(svg, width - mr + 8.0, py_stretch(stretch) + 4.0, fmt(stretch),
                  "font-size=\"11\" fill=\"#2222bb\"");
    }
    emit_text(svg, width / 2.0 - 70.0, height - 18.0, "FAF landing rate (aircraft/hour)",
              "font-size=\"13\" fill=\"#000000\"");
    emit_text(svg, 14.0, 22.0, "separation violations (%)",
              "font-size=\"13\" fill=\"#bb2222\"");
    emit_text(svg, width - mr - 120.0, 22.0, "total stretch (NM)",
              "font-size=\"13\" fill=\"#2222bb\"");

    // Capacity threshold 3600 / t_sep.
    emit_line(svg, px(report.capacity_threshold), mt, px(report.capacity_threshold),
              height - mb,
              "stroke=\"#555555\" stroke-dasharray=\"7 5\" stroke-width=\"1.5\"");
    emit_text(svg, px(report.capacity_threshold) + 5.0, mt + 14.0,
              "3600/t_sep = " + fmt(report.capacity_threshold),
              "font-size=\"12\" fill=\"#555555\"");

    for (const RunMetrics& m : report.runs) {
        if (m.n_aircraft < 2) continue;
        emit_circle(svg, px(m.faf_landing_rate), py_stretch(m.total_stretch), 2.5,
                    "fill=\"#2222bb\" fill-opacity=\"0.5\"");
        emit_circle(svg, px(m.faf_landing_rate), py_pct(m.violation_pct), 2.5,
                    "fill=\"#bb2222\" fill-opacity=\"0.5\"");
    }

    svg << "</svg>\n";
    return svg.str();
}

}  // namespace tracon
