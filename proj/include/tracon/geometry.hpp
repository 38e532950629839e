#ifndef TRACON_GEOMETRY_HPP
#define TRACON_GEOMETRY_HPP

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace tracon {

// Units are fixed repo-wide: nautical miles, knots, seconds.
// 1 knot = 1 NM/hr; conversion constant is exactly 3600 s/hr.
inline constexpr double kSecondsPerHour = 3600.0;

// Entries closer than this to the turn circle are treated as degenerate.
inline constexpr double kTangentEpsilon = 1e-6;  // NM

struct Point {
    double x = 0.0;  // NM, east positive
    double y = 0.0;  // NM, north positive
};

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator*(double s, Point p) { return {s * p.x, s * p.y}; }
inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
double norm(Point p);
Point normalized(Point p);

/// Commanded ground speeds for the three path segments, in knots.
struct SpeedProfile {
    double v_L = 0.0;      // tangent leg
    double v_theta = 0.0;  // RF turn arc
    double v_f = 0.0;      // final straight-in
};

class GeometryError : public std::runtime_error {
public:
    enum class Kind { BandViolation, NoTangent, GradientUnreliable, InvalidConfig };

    GeometryError(Kind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

/// Planar terminal-area layout: final approach fix, turn radius, feeder
/// gates, and the admissible extension range.
struct GeometryConfig {
    Point faf;
    double turn_radius = 2.0;             // NM
    double d_max = 15.0;                  // NM, upper bound on the extension
    double tcp_radius = 30.0;             // NM, informational (plotting only)
    std::map<std::string, Point> gates;   // ordered by name

    /// Default layout: runway threshold at the origin, final course along +x,
    /// FAF 5 NM west, four gates at the 45-degree points of a 30 NM circle.
    static GeometryConfig defaults();

    /// Throws GeometryError{InvalidConfig} if any invariant fails. Tangent
    /// existence is checked on a 1001-point grid over d in [0, d_max] for
    /// every gate.
    void validate() const;
};

enum class ArrivalSide { North, South };

/// Classifies the entry point against the FAF turn band. Throws
/// GeometryError{BandViolation} when |entry.y - faf.y| <= turn_radius.
ArrivalSide arrival_side(const GeometryConfig& config, Point entry);

/// Full trombone path decomposition for one (entry, d) pair. All lengths in
/// NM, theta in radians in [0, 2*pi).
struct PathGeometry {
    Point turn_center;           // C_0
    Point reference_projection;  // C'_0, also the arc exit point
    Point tangent_point;         // C_L
    double d_L = 0.0;            // tangent leg length
    double theta = 0.0;          // RF arc central angle
    double d_theta = 0.0;        // arc length, turn_radius * theta
    double d_final = 0.0;        // straight-in extension, equals d
    double total_length = 0.0;   // d_L + d_theta + d_final
    bool turn_ccw = false;       // arc traversal sense (counterclockwise)
};

/// Turn-center placement: returns (C_0, C'_0). The center sits one radius
/// north or south of the final course depending on the entry side; the
/// reference projection sits on the course line, d NM upstream of the FAF.
std::pair<Point, Point> turn_center(const GeometryConfig& config, Point entry, double d);

/// Closed-form left tangent point on the turn circle as seen from the entry.
/// Throws GeometryError{NoTangent} when the entry is within kTangentEpsilon
/// of the circle.
Point tangent_point(const GeometryConfig& config, Point entry, double d);

/// Central angle of the RF arc from the tangent point to the arc exit, in
/// [0, 2*pi). The short-arc angle is corrected to its reflex complement when
/// traversing the short arc would break heading continuity at the tangent
/// point.
double rf_angle(const GeometryConfig& config, Point entry, double d);

PathGeometry path_geometry(const GeometryConfig& config, Point entry, double d);

/// 3600 * length / speed. Throws std::invalid_argument on nonpositive speed.
double segment_time_seconds(double length_nm, double speed_kt);

/// Elapsed time from entry to the FAF in seconds (excludes the entry time).
double travel_time(const GeometryConfig& config, Point entry, double d,
                   const SpeedProfile& speeds);

struct TravelTimeGradient {
    double d_extension = 0.0;  // dt/dd, s/NM
    double d_v_L = 0.0;        // dt/dv_L, s/kt
    double d_v_theta = 0.0;
    double d_v_f = 0.0;
};

/// Analytic partials of travel_time. Throws GeometryError{GradientUnreliable}
/// near tangency (d_0 - r < kTangentEpsilon).
TravelTimeGradient travel_time_gradient(const GeometryConfig& config, Point entry,
                                        double d, const SpeedProfile& speeds);

struct TrajectorySample {
    double t = 0.0;  // seconds since entry
    Point p;
};

/// Position along the path at a given elapsed time since entry. Times past
/// the FAF crossing return the FAF.
Point position_at(const GeometryConfig& config, Point entry, double d,
                  const SpeedProfile& speeds, double elapsed_seconds);

/// Positions along the path every dt seconds, piecewise at the commanded
/// segment speeds. The first sample is the entry point at t = 0; the last
/// sample is exactly the FAF.
std::vector<TrajectorySample> sample_trajectory(const GeometryConfig& config, Point entry,
                                                double d, const SpeedProfile& speeds,
                                                double dt);

namespace detail {
/// Arc central angle given the center-to-tangent-point radius u, the
/// center-to-exit radius w, and the inbound tangent-leg direction.
double arc_sweep_angle(Point u, Point w, Point inbound);
}  // namespace detail

}  // namespace tracon

#endif  // TRACON_GEOMETRY_HPP
