#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <vector>

#include "swimfollow/geometry.hpp"

using namespace swimfollow;
namespace fs = std::filesystem;

namespace {

std::vector<Point2> arc_points(Point2 center, double radius, double a0, double a1, int n) {
    std::vector<Point2> pts;
    for (int i = 0; i <= n; ++i) {
        const double a = a0 + (a1 - a0) * i / n;
        pts.push_back({center.x + radius * std::cos(a), center.y + radius * std::sin(a)});
    }
    return pts;
}

} // namespace

TEST_SUITE("geometry") {

TEST_CASE("wrap_angle lands in (-pi, pi] and preserves the angle") {
    CHECK(wrap_angle(0.0) == 0.0);
    CHECK(wrap_angle(kPi) == doctest::Approx(kPi));
    CHECK(wrap_angle(-kPi) == doctest::Approx(kPi));
    CHECK(wrap_angle(3.0 * kPi) == doctest::Approx(kPi));
    for (double a = -20.0; a <= 20.0; a += 0.173) {
        const double w = wrap_angle(a);
        CHECK(w > -kPi - 1e-12);
        CHECK(w <= kPi + 1e-12);
        CHECK(std::remainder(w - a, 2.0 * kPi) == doctest::Approx(0.0).epsilon(1e-9));
    }
}

TEST_CASE("heading_error is signed and wrapped") {
    CHECK(heading_error(0.1, -0.1) == doctest::Approx(0.2));
    CHECK(heading_error(-3.0, 3.0) == doctest::Approx(2.0 * kPi - 6.0));
}

TEST_CASE("offsetting a circular path toward the center shrinks the radius") {
    const Point2 c{0.0, 0.0};
    // CCW circle of radius 500; the center lies to the left of the tangent.
    PathSpline circle = PathSpline::from_polyline(arc_points(c, 500.0, 0.0, 1.5 * kPi, 540));
    PathSpline inner = offset_path(circle, 60.0, Side::left);
    REQUIRE(inner.samples.size() > 100);
    for (std::size_t i = 10; i + 10 < inner.samples.size(); ++i) {
        CHECK((inner.samples[i].p - c).norm() == doctest::Approx(440.0).epsilon(2e-3));
    }
    PathSpline outer = offset_path(circle, 60.0, Side::right);
    for (std::size_t i = 10; i + 10 < outer.samples.size(); ++i) {
        CHECK((outer.samples[i].p - c).norm() == doctest::Approx(560.0).epsilon(2e-3));
    }
}

TEST_CASE("offset beyond the curvature radius is degenerate") {
    PathSpline tight = PathSpline::from_polyline(arc_points({0, 0}, 30.0, 0.0, kPi, 90));
    CHECK_THROWS_AS(offset_path(tight, 60.0, Side::left), DegenerateOffsetError);
    CHECK_NOTHROW(offset_path(tight, 60.0, Side::right));
}

TEST_CASE("los reference at a 45 degree geometry") {
    std::vector<Point2> line;
    for (int i = 0; i <= 100; ++i) line.push_back({i * 10.0, 0.0});
    PathSpline path = PathSpline::from_polyline(line);
    GuidanceConfig cfg;
    // projection lands at s=50, lookahead 100 -> target (150, 0), offset (100, 100)
    CHECK(los_reference(path, {50.0, -100.0}, cfg) == doctest::Approx(kPi / 4.0).epsilon(1e-6));
    // past the end the target clamps to the last sample
    CHECK(los_reference(path, {1100.0, 0.0}, cfg) == doctest::Approx(kPi));
    // expert steering saturates at 45 degrees of error
    CHECK(cfg.gain * (kPi / 4.0) == doctest::Approx(0.3));
}

TEST_CASE("project returns arc length of the closest point") {
    std::vector<Point2> line;
    for (int i = 0; i <= 100; ++i) line.push_back({i * 10.0, 0.0});
    PathSpline path = PathSpline::from_polyline(line);
    CHECK(path.project({437.0, 55.0}) == doctest::Approx(437.0).epsilon(1e-6));
    CHECK(path.project({-50.0, 0.0}) == doctest::Approx(0.0));
    CHECK(path.point_at(437.0).x == doctest::Approx(437.0).epsilon(1e-6));
    CHECK(path.heading_at(437.0) == doctest::Approx(0.0));
}

TEST_CASE("random paths are deterministic in the seed") {
    const TankSpec tank;
    const Point2 start{200.0, 290.0};
    PathSpline a = generate_random_path(11, tank, start);
    PathSpline b = generate_random_path(11, tank, start);
    REQUIRE(a.samples.size() == b.samples.size());
    for (std::size_t i = 0; i < a.samples.size(); ++i) {
        CHECK(a.samples[i].p.x == b.samples[i].p.x);
        CHECK(a.samples[i].p.y == b.samples[i].p.y);
    }
    PathSpline c = generate_random_path(12, tank, start);
    bool differs = c.samples.size() != a.samples.size();
    for (std::size_t i = 0; !differs && i < a.samples.size(); ++i) {
        differs = a.samples[i].p.x != c.samples[i].p.x || a.samples[i].p.y != c.samples[i].p.y;
    }
    CHECK(differs);
}

TEST_CASE("a thousand random paths stay inside the wall margin") {
    const TankSpec tank;
    const Point2 start{200.0, 290.0};
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        PathSpline p = generate_random_path(seed, tank, start);
        REQUIRE(p.length() > 1000.0);
        for (const auto& s : p.samples) {
            REQUIRE(tank.contains(s.p, kPathWallMargin - 1e-9));
        }
        for (std::size_t i = 1; i < p.samples.size(); ++i) {
            const double ds = p.samples[i].s - p.samples[i - 1].s;
            const double dh = std::fabs(wrap_angle(p.samples[i].heading - p.samples[i - 1].heading));
            REQUIRE(dh * kPathMinRadius <= ds * (1.0 + 1e-9));
        }
        // both follower lanes must exist for every generated path
        offset_path(p, 60.0, Side::left);
        offset_path(p, 60.0, Side::right);
    }
}

TEST_CASE("sample spacing follows the resolution") {
    PathSpline p = generate_random_path(5, TankSpec{}, {200.0, 290.0});
    for (std::size_t i = 1; i < p.samples.size(); ++i) {
        const double ds = p.samples[i].s - p.samples[i - 1].s;
        CHECK(ds > 0.0);
        CHECK(ds < kPathSampleResolution + 1e-6);
    }
}

TEST_CASE("path csv round trip") {
    const fs::path file = fs::temp_directory_path() / "swimfollow_path_test.csv";
    PathSpline p = generate_random_path(9, TankSpec{}, {200.0, 290.0});
    write_path_csv(p, file);
    PathSpline q = read_path_csv(file);
    REQUIRE(q.samples.size() == p.samples.size());
    for (std::size_t i = 0; i < p.samples.size(); ++i) {
        CHECK(q.samples[i].p.x == p.samples[i].p.x);
        CHECK(q.samples[i].p.y == p.samples[i].p.y);
        CHECK(q.samples[i].s == p.samples[i].s);
        CHECK(q.samples[i].heading == p.samples[i].heading);
    }
}

TEST_CASE("start outside the margin band is rejected") {
    CHECK_THROWS(generate_random_path(1, TankSpec{}, {10.0, 290.0}));
}

}
