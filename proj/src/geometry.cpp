#include "swimfollow/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "swimfollow/csv.hpp"
#include "swimfollow/errors.hpp"
#include "swimfollow/rng.hpp"

namespace swimfollow {

namespace {

// Uniform Catmull-Rom over one span: p(t) for t in [0,1] between p1 and p2.
Point2 catmull_rom(Point2 p0, Point2 p1, Point2 p2, Point2 p3, double t) {
    const double t2 = t * t, t3 = t2 * t;
    auto comb = [&](double a, double b, double c, double d) {
        return 0.5 * (a * p0.x + b * p1.x + c * p2.x + d * p3.x);
    };
    auto comby = [&](double a, double b, double c, double d) {
        return 0.5 * (a * p0.y + b * p1.y + c * p2.y + d * p3.y);
    };
    const double a = -t3 + 2 * t2 - t;
    const double b = 3 * t3 - 5 * t2 + 2;
    const double c = -3 * t3 + 4 * t2 + t;
    const double d = t3 - t2;
    return {comb(a, b, c, d), comby(a, b, c, d)};
}

Point2 catmull_rom_deriv(Point2 p0, Point2 p1, Point2 p2, Point2 p3, double t) {
    const double t2 = t * t;
    const double a = -3 * t2 + 4 * t - 1;
    const double b = 9 * t2 - 10 * t;
    const double c = -9 * t2 + 8 * t + 1;
    const double d = 3 * t2 - 2 * t;
    return {0.5 * (a * p0.x + b * p1.x + c * p2.x + d * p3.x),
            0.5 * (a * p0.y + b * p1.y + c * p2.y + d * p3.y)};
}

struct SplineEval {
    std::vector<Point2> pts; // with phantom endpoints
    std::size_t spans() const { return pts.size() - 3; }
    Point2 at(std::size_t span, double t) const {
        return catmull_rom(pts[span], pts[span + 1], pts[span + 2], pts[span + 3], t);
    }
    Point2 deriv(std::size_t span, double t) const {
        return catmull_rom_deriv(pts[span], pts[span + 1], pts[span + 2], pts[span + 3], t);
    }
};

SplineEval make_spline(const std::vector<Point2>& through) {
    SplineEval ev;
    ev.pts.reserve(through.size() + 2);
    ev.pts.push_back(through[0] * 2.0 - through[1]); // reflected phantom ends
    for (Point2 p : through) ev.pts.push_back(p);
    ev.pts.push_back(through.back() * 2.0 - through[through.size() - 2]);
    return ev;
}

// Resamples the spline at fixed arc-length steps, with analytic tangents.
PathSpline sample_spline(const std::vector<Point2>& through, double resolution) {
    const SplineEval ev = make_spline(through);
    constexpr int kFinePerSpan = 256;

    struct FinePt {
        std::size_t span;
        double t;
        double s;
    };
    std::vector<FinePt> fine;
    fine.reserve(ev.spans() * kFinePerSpan + 1);
    double s = 0.0;
    Point2 prev = ev.at(0, 0.0);
    fine.push_back({0, 0.0, 0.0});
    for (std::size_t span = 0; span < ev.spans(); ++span) {
        for (int k = 1; k <= kFinePerSpan; ++k) {
            const double t = static_cast<double>(k) / kFinePerSpan;
            const Point2 p = ev.at(span, t);
            s += (p - prev).norm();
            prev = p;
            fine.push_back({span, t, s});
        }
    }
    const double total = s;

    PathSpline out;
    out.control_points = through;
    std::size_t idx = 0;
    for (double target = 0.0;; target += resolution) {
        if (target > total) target = total;
        while (idx + 1 < fine.size() && fine[idx + 1].s < target) ++idx;
        // interpolate the curve parameter between fine points
        const FinePt& a = fine[idx];
        const FinePt& b = fine[std::min(idx + 1, fine.size() - 1)];
        double span_t, frac = 0.0;
        std::size_t span;
        if (b.s > a.s) frac = (target - a.s) / (b.s - a.s);
        if (a.span == b.span) {
            span = a.span;
            span_t = a.t + frac * (b.t - a.t);
        } else {
            // crossing a span boundary: parameters are contiguous (t=1 -> t=0)
            const double ta = a.t, tb = b.t + 1.0;
            double t = ta + frac * (tb - ta);
            span = a.span;
            if (t > 1.0) {
                t -= 1.0;
                span = b.span;
            }
            span_t = t;
        }
        const Point2 p = ev.at(span, span_t);
        const Point2 d = ev.deriv(span, span_t);
        out.samples.push_back({p, target, std::atan2(d.y, d.x)});
        if (target >= total) break;
    }
    return out;
}

} // namespace

Point2 PathSpline::point_at(double s) const {
    if (samples.empty()) throw std::invalid_argument("empty path");
    if (s <= samples.front().s) return samples.front().p;
    if (s >= samples.back().s) return samples.back().p;
    auto it = std::lower_bound(samples.begin(), samples.end(), s,
                               [](const Sample& a, double v) { return a.s < v; });
    const Sample& hi = *it;
    const Sample& lo = *(it - 1);
    const double den = hi.s - lo.s;
    const double t = den > 0.0 ? (s - lo.s) / den : 0.0;
    return lo.p + (hi.p - lo.p) * t;
}

double PathSpline::heading_at(double s) const {
    if (samples.empty()) throw std::invalid_argument("empty path");
    if (s <= samples.front().s) return samples.front().heading;
    if (s >= samples.back().s) return samples.back().heading;
    auto it = std::lower_bound(samples.begin(), samples.end(), s,
                               [](const Sample& a, double v) { return a.s < v; });
    const Sample& hi = *it;
    const Sample& lo = *(it - 1);
    const double den = hi.s - lo.s;
    const double t = den > 0.0 ? (s - lo.s) / den : 0.0;
    return lo.heading + wrap_angle(hi.heading - lo.heading) * t;
}

double PathSpline::project(Point2 p) const {
    if (samples.empty()) throw std::invalid_argument("empty path");
    double best_d2 = std::numeric_limits<double>::infinity();
    double best_s = 0.0;
    for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
        const Point2 a = samples[i].p;
        const Point2 b = samples[i + 1].p;
        const Point2 ab = b - a;
        const double len2 = ab.dot(ab);
        double t = len2 > 0.0 ? std::clamp((p - a).dot(ab) / len2, 0.0, 1.0) : 0.0;
        const Point2 q = a + ab * t;
        const double d2 = (p - q).dot(p - q);
        if (d2 < best_d2) {
            best_d2 = d2;
            best_s = samples[i].s + t * (samples[i + 1].s - samples[i].s);
        }
    }
    if (samples.size() == 1) best_s = samples[0].s;
    return best_s;
}

PathSpline PathSpline::from_polyline(const std::vector<Point2>& points) {
    if (points.size() < 2) throw std::invalid_argument("polyline needs at least 2 points");
    PathSpline out;
    out.samples.reserve(points.size());
    double s = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (i > 0) s += (points[i] - points[i - 1]).norm();
        out.samples.push_back({points[i], s, 0.0});
    }
    for (std::size_t i = 0; i < points.size(); ++i) {
        const Point2 d = i + 1 < points.size() ? points[i + 1] - points[i] : points[i] - points[i - 1];
        out.samples[i].heading = std::atan2(d.y, d.x);
    }
    return out;
}

PathSpline generate_random_path(std::uint64_t seed, const TankSpec& tank, Point2 start,
                                double wall_margin) {
    if (!tank.contains(start, wall_margin))
        throw std::invalid_argument("path start outside the tank margin band");

    Rng rng = Rng::substream(seed, "paths");
    const double remaining = tank.length - start.x;
    constexpr int kMaxAttempts = 200;
    for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
        std::vector<Point2> through{start};
        for (int i = 0; i < 3; ++i) {
            const double lo = start.x + remaining * i / 3.0;
            double hi = start.x + remaining * (i + 1) / 3.0;
            hi = std::min(hi, tank.length - wall_margin);
            through.push_back({rng.uniform(lo, hi), rng.uniform(wall_margin, tank.width - wall_margin)});
        }
        PathSpline path = sample_spline(through, kPathSampleResolution);
        bool ok = true;
        for (const auto& smp : path.samples) {
            if (!tank.contains(smp.p, wall_margin)) {
                ok = false;
                break;
            }
        }
        for (std::size_t i = 1; ok && i < path.samples.size(); ++i) {
            const double ds = path.samples[i].s - path.samples[i - 1].s;
            const double dh =
                std::fabs(wrap_angle(path.samples[i].heading - path.samples[i - 1].heading));
            if (dh * kPathMinRadius > ds) ok = false;
        }
        if (ok) return path;
    }
    throw NumericError("random path rejected too many times; margin band too tight");
}

PathSpline offset_path(const PathSpline& path, double offset, Side side) {
    if (offset < 0.0) throw std::invalid_argument("offset must be non-negative");
    const double signed_off = side == Side::left ? offset : -offset;
    PathSpline out;
    out.control_points = path.control_points;
    out.samples.resize(path.samples.size());
    for (std::size_t i = 0; i < path.samples.size(); ++i) {
        const auto& smp = path.samples[i];
        const Point2 n = heading_vector(smp.heading).perp();
        out.samples[i].p = smp.p + n * signed_off;
        out.samples[i].heading = smp.heading;
    }
    double s = 0.0;
    for (std::size_t i = 0; i < out.samples.size(); ++i) {
        if (i > 0) {
            const Point2 seg_new = out.samples[i].p - out.samples[i - 1].p;
            const Point2 seg_old = path.samples[i].p - path.samples[i - 1].p;
            if (seg_new.dot(seg_old) <= 0.0)
                throw DegenerateOffsetError("offset exceeds local radius of curvature");
            s += seg_new.norm();
        }
        out.samples[i].s = s;
    }
    return out;
}

double los_reference(const PathSpline& path, Point2 pos, const GuidanceConfig& cfg) {
    if (path.samples.empty()) throw std::invalid_argument("empty path");
    const double s0 = path.project(pos);
    const double s_target = std::min(s0 + cfg.lookahead, path.length());
    const Point2 target = path.point_at(s_target);
    const Point2 d = target - pos;
    if (d.norm() == 0.0) return path.heading_at(s_target);
    return std::atan2(d.y, d.x);
}

void write_path_csv(const PathSpline& path, const std::filesystem::path& file) {
    CsvWriter w(file, {"s_mm", "x_mm", "y_mm", "heading_rad"});
    for (const auto& smp : path.samples) w.row({smp.s, smp.p.x, smp.p.y, smp.heading});
}

PathSpline read_path_csv(const std::filesystem::path& file) {
    const CsvTable t = read_csv(file);
    const int cs = t.column("s_mm"), cx = t.column("x_mm"), cy = t.column("y_mm"),
              ch = t.column("heading_rad");
    if (cs < 0 || cx < 0 || cy < 0 || ch < 0) throw IoError("path csv missing columns: " + file.string());
    PathSpline out;
    out.samples.reserve(t.rows.size());
    for (std::size_t i = 0; i < t.rows.size(); ++i)
        out.samples.push_back({{t.num(i, cx), t.num(i, cy)}, t.num(i, cs), t.num(i, ch)});
    return out;
}

} // namespace swimfollow
