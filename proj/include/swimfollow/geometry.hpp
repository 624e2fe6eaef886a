#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <vector>

#include "swimfollow/angles.hpp"

namespace swimfollow {

struct Point2 {
    double x = 0.0; // mm
    double y = 0.0; // mm

    Point2 operator+(Point2 o) const { return {x + o.x, y + o.y}; }
    Point2 operator-(Point2 o) const { return {x - o.x, y - o.y}; }
    Point2 operator*(double k) const { return {x * k, y * k}; }
    double dot(Point2 o) const { return x * o.x + y * o.y; }
    double cross(Point2 o) const { return x * o.y - y * o.x; }
    double norm() const { return std::hypot(x, y); }
    /// 90 degrees counterclockwise.
    Point2 perp() const { return {-y, x}; }
};

inline Point2 heading_vector(double heading) { return {std::cos(heading), std::sin(heading)}; }

struct Pose2 {
    Point2 position;
    double heading = 0.0; // radians, (-pi, pi]
};

struct TankSpec {
    double length = 3050.0; // mm
    double width = 580.0;   // mm

    bool contains(Point2 p, double margin = 0.0) const {
        return p.x >= margin && p.x <= length - margin && p.y >= margin && p.y <= width - margin;
    }
};

struct GuidanceConfig {
    double lookahead = 100.0;              // mm ahead of the closest-point projection
    double gain = 0.3 / (kPi / 4.0);       // steering fraction per radian; saturates at 45 deg error
    double clamp_fraction = 0.3;
};

class DegenerateOffsetError : public std::runtime_error {
public:
    explicit DegenerateOffsetError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A smooth planar curve stored as an arc-length sampled polyline.
struct PathSpline {
    struct Sample {
        Point2 p;
        double s = 0.0;       // cumulative arc length, mm
        double heading = 0.0; // tangent direction
    };

    std::vector<Point2> control_points;
    std::vector<Sample> samples;

    double length() const { return samples.empty() ? 0.0 : samples.back().s; }
    Point2 point_at(double s) const;
    double heading_at(double s) const;

    /// Closest-point projection of p onto the polyline: returns arc length.
    double project(Point2 p) const;

    /// Builds samples from a polyline (arc lengths and headings recomputed).
    static PathSpline from_polyline(const std::vector<Point2>& points);
};

inline constexpr double kPathSampleResolution = 5.0; // mm
inline constexpr double kPathWallMargin = 80.0;      // mm, control points and samples stay this far in
inline constexpr double kPathMinRadius = 300.0;      // mm, tightest turn the leader is asked to track

/// Spline through `start` plus three random control points, one per equal
/// third of the remaining tank length, y uniform inside the wall margins.
/// Pure function of (seed, tank, start); draws again if the curve leaves the
/// margin band between control points or turns tighter than kPathMinRadius.
PathSpline generate_random_path(std::uint64_t seed, const TankSpec& tank, Point2 start,
                                double wall_margin = kPathWallMargin);

enum class Side { left, right };

/// Displaces every sample along its local normal. Headings are unchanged
/// (offset curves of smooth curves keep parallel tangents); arc length is
/// recomputed. Throws DegenerateOffsetError when the offset exceeds the local
/// radius of curvature and consecutive samples fold back on themselves.
PathSpline offset_path(const PathSpline& path, double offset, Side side);

/// Reference heading from pos toward the point `lookahead` mm past the
/// closest-point projection (clamped to the path end).
double los_reference(const PathSpline& path, Point2 pos, const GuidanceConfig& cfg);

/// (reference - current) wrapped into (-pi, pi].
inline double heading_error(double reference, double current) {
    return wrap_angle(reference - current);
}

/// CSV columns: s_mm, x_mm, y_mm, heading_rad.
void write_path_csv(const PathSpline& path, const std::filesystem::path& file);
PathSpline read_path_csv(const std::filesystem::path& file);

} // namespace swimfollow
