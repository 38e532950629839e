#include "tracon/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace tracon {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Everything the closed-form expressions share for one (entry, d) pair.
struct TurnFrame {
    ArrivalSide side;
    double branch_sign;  // +1 north, -1 south
    Point entry;
    Point c0;            // turn center
    Point c0_ref;        // reference projection / arc exit
    Point v;             // entry - c0
    Point v_perp;        // v rotated +90 degrees
    double d0_sq = 0.0;
    double d0 = 0.0;
    double d_L = 0.0;
    double a = 0.0;  // r^2 / d0^2
    double b = 0.0;  // r * d_L / d0^2
};

TurnFrame make_frame(const GeometryConfig& config, Point entry, double d) {
    TurnFrame f;
    f.side = arrival_side(config, entry);
    f.branch_sign = (f.side == ArrivalSide::North) ? 1.0 : -1.0;
    f.entry = entry;

    const double r = config.turn_radius;
    f.c0 = {config.faf.x - d, config.faf.y + f.branch_sign * r};
    f.c0_ref = {config.faf.x - d, config.faf.y};

    f.v = entry - f.c0;
    f.v_perp = {-f.v.y, f.v.x};
    f.d0_sq = dot(f.v, f.v);
    f.d0 = std::sqrt(f.d0_sq);
    if (f.d0 <= r + kTangentEpsilon) {
        std::ostringstream msg;
        msg << "no tangent from entry (" << entry.x << ", " << entry.y
            << ") at d=" << d << ": center distance " << f.d0
            << " NM is within " << kTangentEpsilon << " NM of the turn radius " << r;
        throw GeometryError(GeometryError::Kind::NoTangent, msg.str());
    }
    f.d_L = std::sqrt(f.d0_sq - r * r);
    f.a = (r * r) / f.d0_sq;
    f.b = r * f.d_L / f.d0_sq;
    return f;
}

Point tangent_point_of(const TurnFrame& f) {
    // Left tangent point: the minus branch of the perpendicular term applies
    // on the south side.
    return f.c0 + f.a * f.v + (f.branch_sign * f.b) * f.v_perp;
}

struct ArcSweep {
    double theta = 0.0;  // in [0, 2*pi)
    bool ccw = false;
};

/// Sweep from the tangent point to the arc exit. u and w are the center-to-
/// tangent-point and center-to-exit radius vectors; inbound is the tangent
/// leg direction. The short-arc angle atan2(|u x w|, u . w) is replaced by
/// its reflex complement when the inbound heading is inconsistent with
/// entering the short arc.
ArcSweep arc_sweep(Point u, Point w, Point inbound) {
    ArcSweep sweep;
    sweep.theta = std::atan2(std::abs(cross(w, u)), dot(w, u));

    // Sense of the short traversal from u toward w.
    const double turn = cross(u, w);
    bool short_ccw;
    if (turn > 0.0) {
        short_ccw = true;
    } else if (turn < 0.0) {
        short_ccw = false;
    } else {
        // Degenerate: u parallel to w (theta 0 or pi). Either sense covers the
        // same arc; pick the one matching the inbound heading.
        short_ccw = dot(inbound, Point{-u.y, u.x}) >= 0.0;
    }

    const Point arc_tangent = short_ccw ? Point{-u.y, u.x} : Point{u.y, -u.x};
    if (dot(inbound, arc_tangent) <= 0.0 && sweep.theta > 0.0) {
        sweep.theta = kTwoPi - sweep.theta;
        short_ccw = !short_ccw;
    }
    sweep.ccw = short_ccw;
    if (sweep.theta >= kTwoPi) sweep.theta = std::fmod(sweep.theta, kTwoPi);
    return sweep;
}

ArcSweep sweep_of(const TurnFrame& f, Point tangent) {
    const Point u = tangent - f.c0;
    const Point w = f.c0_ref - f.c0;
    return arc_sweep(u, w, tangent - f.entry);
}

}  // namespace

namespace detail {
double arc_sweep_angle(Point u, Point w, Point inbound) {
    return arc_sweep(u, w, inbound).theta;
}
}  // namespace detail

double norm(Point p) { return std::hypot(p.x, p.y); }

Point normalized(Point p) {
    const double n = norm(p);
    return {p.x / n, p.y / n};
}

GeometryConfig GeometryConfig::defaults() {
    GeometryConfig config;
    config.faf = {-5.0, 0.0};
    config.turn_radius = 2.0;
    config.d_max = 15.0;
    config.tcp_radius = 30.0;
    config.gates = {
        {"DALAS", {-21.21, 21.21}},
        {"LOGEN", {21.21, 21.21}},
        {"HUSKY", {21.21, -21.21}},
        {"TIROE", {-21.21, -21.21}},
    };
    return config;
}

void GeometryConfig::validate() const {
    auto fail = [](const std::string& what) {
        throw GeometryError(GeometryError::Kind::InvalidConfig, what);
    };
    if (!(turn_radius > 0.0)) fail("turn_radius must be positive");
    if (!(d_max >= 0.0)) fail("d_max must be nonnegative");
    if (!std::isfinite(faf.x) || !std::isfinite(faf.y)) fail("faf coordinates must be finite");
    for (const auto& [name, p] : gates) {
        if (!std::isfinite(p.x) || !std::isfinite(p.y))
            fail("gate " + name + " has non-finite coordinates");
        if (std::abs(p.y - faf.y) <= turn_radius)
            fail("gate " + name + " lies inside the turn band |y - y_faf| <= r");
        // Tangent must exist across the whole extension range.
        const int kGridPoints = 1001;
        for (int i = 0; i < kGridPoints; ++i) {
            const double d = d_max * static_cast<double>(i) / (kGridPoints - 1);
            const double cy = faf.y + ((p.y > faf.y) ? turn_radius : -turn_radius);
            const double dx = p.x - (faf.x - d);
            const double dy = p.y - cy;
            if (std::sqrt(dx * dx + dy * dy) <= turn_radius + kTangentEpsilon)
                fail("gate " + name + " loses tangency at d=" + std::to_string(d));
        }
    }
}

ArrivalSide arrival_side(const GeometryConfig& config, Point entry) {
    if (entry.y > config.faf.y + config.turn_radius) return ArrivalSide::North;
    if (entry.y < config.faf.y - config.turn_radius) return ArrivalSide::South;
    std::ostringstream msg;
    msg << "entry (" << entry.x << ", " << entry.y << ") lies inside the turn band |y - "
        << config.faf.y << "| <= " << config.turn_radius;
    throw GeometryError(GeometryError::Kind::BandViolation, msg.str());
}

std::pair<Point, Point> turn_center(const GeometryConfig& config, Point entry, double d) {
    const ArrivalSide side = arrival_side(config, entry);
    const double sign = (side == ArrivalSide::North) ? 1.0 : -1.0;
    const Point c0{config.faf.x - d, config.faf.y + sign * config.turn_radius};
    const Point c0_ref{config.faf.x - d, config.faf.y};
    return {c0, c0_ref};
}

Point tangent_point(const GeometryConfig& config, Point entry, double d) {
    return tangent_point_of(make_frame(config, entry, d));
}

double rf_angle(const GeometryConfig& config, Point entry, double d) {
    const TurnFrame f = make_frame(config, entry, d);
    return sweep_of(f, tangent_point_of(f)).theta;
}

PathGeometry path_geometry(const GeometryConfig& config, Point entry, double d) {
    const TurnFrame f = make_frame(config, entry, d);
    const Point tangent = tangent_point_of(f);
    const ArcSweep sweep = sweep_of(f, tangent);

    PathGeometry path;
    path.turn_center = f.c0;
    path.reference_projection = f.c0_ref;
    path.tangent_point = tangent;
    path.d_L = f.d_L;
    path.theta = sweep.theta;
    path.d_theta = config.turn_radius * sweep.theta;
    path.d_final = d;
    path.total_length = path.d_L + path.d_theta + path.d_final;
    path.turn_ccw = sweep.ccw;
    return path;
}

double segment_time_seconds(double length_nm, double speed_kt) {
    if (!(speed_kt > 0.0))
        throw std::invalid_argument("segment speed must be positive");
    return kSecondsPerHour * length_nm / speed_kt;
}

double travel_time(const GeometryConfig& config, Point entry, double d,
                   const SpeedProfile& speeds) {
    const PathGeometry path = path_geometry(config, entry, d);
    return segment_time_seconds(path.d_L, speeds.v_L) +
           segment_time_seconds(path.d_theta, speeds.v_theta) +
           segment_time_seconds(path.d_final, speeds.v_f);
}

TravelTimeGradient travel_time_gradient(const GeometryConfig& config, Point entry,
                                        double d, const SpeedProfile& speeds) {
    TurnFrame f;
    try {
        f = make_frame(config, entry, d);
    } catch (const GeometryError& e) {
        if (e.kind() == GeometryError::Kind::NoTangent)
            throw GeometryError(GeometryError::Kind::GradientUnreliable, e.what());
        throw;
    }
    const double r = config.turn_radius;
    const Point tangent = tangent_point_of(f);
    const ArcSweep sweep = sweep_of(f, tangent);

    // dv/dd = (1, 0): the center slides west with d while the entry is fixed.
    const double dd0sq_dd = 2.0 * f.v.x;
    const double dL_dd = f.v.x / f.d_L;
    const double da_dd = -f.a * dd0sq_dd / f.d0_sq;
    // b = r * d_L / d0^2
    const double db_dd = r * (dL_dd * f.d0_sq - f.d_L * dd0sq_dd) / (f.d0_sq * f.d0_sq);

    // u = a*v + s*b*v_perp with s the branch sign; |u| = r.
    const double s = f.branch_sign;
    const Point u = tangent - f.c0;
    const Point du{da_dd * f.v.x + f.a * 1.0 + s * (db_dd * f.v_perp.x + f.b * 0.0),
                   da_dd * f.v.y + f.a * 0.0 + s * (db_dd * f.v_perp.y + f.b * 1.0)};

    // theta traverses from u to the fixed exit radius w in the physical turn
    // sense; its derivative reduces to the signed rotation rate of u.
    const double dalpha_dd = cross(u, du) / (r * r);
    const double dtheta_dd = -s * dalpha_dd;

    TravelTimeGradient g;
    g.d_extension = kSecondsPerHour * (dL_dd / speeds.v_L + r * dtheta_dd / speeds.v_theta +
                                       1.0 / speeds.v_f);
    g.d_v_L = -kSecondsPerHour * f.d_L / (speeds.v_L * speeds.v_L);
    g.d_v_theta = -kSecondsPerHour * r * sweep.theta / (speeds.v_theta * speeds.v_theta);
    g.d_v_f = -kSecondsPerHour * d / (speeds.v_f * speeds.v_f);
    return g;
}

namespace {

Point path_position(const GeometryConfig& config, Point entry, const SpeedProfile& speeds,
                    const PathGeometry& path, double t) {
    const double r = config.turn_radius;
    const double t1 = segment_time_seconds(path.d_L, speeds.v_L);
    const double t2 = t1 + segment_time_seconds(path.d_theta, speeds.v_theta);

    if (t <= 0.0) return entry;
    if (t <= t1) {
        const double s = (speeds.v_L / kSecondsPerHour) * t;
        return entry + s * normalized(path.tangent_point - entry);
    }
    if (t <= t2) {
        const Point u0 = path.tangent_point - path.turn_center;
        const double phi0 = std::atan2(u0.y, u0.x);
        const double arc = (speeds.v_theta / kSecondsPerHour) * (t - t1);
        const double phi = phi0 + (path.turn_ccw ? 1.0 : -1.0) * arc / r;
        return path.turn_center + Point{r * std::cos(phi), r * std::sin(phi)};
    }
    const double s = std::min((speeds.v_f / kSecondsPerHour) * (t - t2), path.d_final);
    // Final course runs from the reference projection to the FAF along +x.
    return path.reference_projection + Point{s, 0.0};
}

}  // namespace

Point position_at(const GeometryConfig& config, Point entry, double d,
                  const SpeedProfile& speeds, double elapsed_seconds) {
    const PathGeometry path = path_geometry(config, entry, d);
    return path_position(config, entry, speeds, path, elapsed_seconds);
}

std::vector<TrajectorySample> sample_trajectory(const GeometryConfig& config, Point entry,
                                                double d, const SpeedProfile& speeds,
                                                double dt) {
    if (!(dt > 0.0))
        throw std::invalid_argument("sample_trajectory: dt must be positive");
    const PathGeometry path = path_geometry(config, entry, d);
    const double total = segment_time_seconds(path.d_L, speeds.v_L) +
                         segment_time_seconds(path.d_theta, speeds.v_theta) +
                         segment_time_seconds(path.d_final, speeds.v_f);

    std::vector<TrajectorySample> samples;
    samples.reserve(static_cast<std::size_t>(total / dt) + 2);
    for (double t = 0.0; t < total; t += dt)
        samples.push_back({t, path_position(config, entry, speeds, path, t)});
    samples.push_back({total, config.faf});
    return samples;
}

}  // namespace tracon
