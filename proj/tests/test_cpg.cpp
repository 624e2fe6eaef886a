#include <doctest.h>

#include <cmath>
#include <vector>

#include "swimfollow/angles.hpp"
#include "swimfollow/cpg.hpp"
#include "swimfollow/rng.hpp"

using namespace swimfollow;

namespace {

CpgState randomized_state(const CpgParams& params, Rng& rng) {
    CpgState s = CpgState::rest(params);
    for (double& th : s.theta) th = rng.uniform(-kPi, kPi);
    return s;
}

} // namespace

TEST_SUITE("cpg") {

TEST_CASE("phases lock to the bias from random initial conditions") {
    const CpgParams params = CpgParams::defaults(5, 1.0);
    const double dt = 0.0005;
    for (std::uint64_t trial = 0; trial < 50; ++trial) {
        Rng rng = Rng::substream(100, "cpg_lock", trial);
        CpgState s = randomized_state(params, rng);
        for (int k = 0; k < 4000; ++k) cpg_step(s, params, 0.0, dt);
        for (std::size_t i = 0; i + 1 < params.joints(); ++i) {
            const double diff = wrap_angle(s.theta[i + 1] - s.theta[i]);
            CHECK(std::fabs(rad_to_deg(diff) - (-65.0)) < 0.5);
        }
    }
}

TEST_CASE("locked network advances at the commanded frequency") {
    const CpgParams params = CpgParams::defaults(5, 1.0);
    const double dt = 0.0005;
    CpgState s = CpgState::rest(params);
    for (int k = 0; k < 4000; ++k) cpg_step(s, params, 0.0, dt);
    std::vector<double> theta0 = s.theta;
    const int steps = 4000; // 2 s
    for (int k = 0; k < steps; ++k) cpg_step(s, params, 0.0, dt);
    for (std::size_t i = 0; i < params.joints(); ++i) {
        const double rate = (s.theta[i] - theta0[i]) / (steps * dt);
        CHECK(rate == doctest::Approx(2.0 * kPi * 5.0).epsilon(0.01));
    }
}

TEST_CASE("amplitudes settle to the target without overshoot blowup") {
    const CpgParams params = CpgParams::defaults(5, 2.5);
    const double dt = 0.0005;
    CpgState s = CpgState::rest(params);
    double max_r = 0.0;
    for (int k = 0; k < 8000; ++k) {
        cpg_step(s, params, 0.0, dt);
        for (double r : s.r) max_r = std::max(max_r, r);
    }
    for (double r : s.r) CHECK(r == doctest::Approx(2.5).epsilon(1e-3));
    CHECK(max_r < 2.5 * 1.05);
}

TEST_CASE("torque respects the truncation limit") {
    CpgParams params = CpgParams::defaults(4, 1.0);
    const double limit = params.effective_torque_limit();
    CHECK(limit == doctest::Approx(1.15));
    const double dt = 0.0005;
    CpgState s = CpgState::rest(params);
    bool saturated = false;
    for (int k = 0; k < 20000; ++k) {
        TorqueCommand tc = cpg_step(s, params, 0.3, dt);
        for (double t : tc) {
            CHECK(std::fabs(t) <= limit + 1e-12);
            if (std::fabs(t) >= limit - 1e-12) saturated = true;
        }
    }
    // steering offset plus full amplitude exceeds the limit, so it must clip
    CHECK(saturated);
}

TEST_CASE("zero steering keeps torques zero-mean, positive steering shifts them") {
    const CpgParams params = CpgParams::defaults(4, 1.0);
    const double dt = 0.0005;
    CpgState s = CpgState::rest(params);
    for (int k = 0; k < 8000; ++k) cpg_step(s, params, 0.0, dt);
    // average over exactly 5 cycles = 1 s
    std::vector<double> mean_zero(params.joints(), 0.0);
    const int steps = 2000;
    for (int k = 0; k < steps; ++k) {
        TorqueCommand tc = cpg_step(s, params, 0.0, dt);
        for (std::size_t i = 0; i < tc.size(); ++i) mean_zero[i] += tc[i] / steps;
    }
    for (double m : mean_zero) CHECK(std::fabs(m) < 1e-3);

    for (int k = 0; k < 8000; ++k) cpg_step(s, params, 0.2, dt);
    std::vector<double> mean_steer(params.joints(), 0.0);
    for (int k = 0; k < steps; ++k) {
        TorqueCommand tc = cpg_step(s, params, 0.2, dt);
        for (std::size_t i = 0; i < tc.size(); ++i) mean_steer[i] += tc[i] / steps;
    }
    for (double m : mean_steer) CHECK(m > 0.05);
}

TEST_CASE("steering clamps to the fraction") {
    CHECK(clamp_steering(0.5) == doctest::Approx(0.3));
    CHECK(clamp_steering(-2.0) == doctest::Approx(-0.3));
    CHECK(clamp_steering(0.1) == doctest::Approx(0.1));
}

TEST_CASE("identical seeds give identical trajectories") {
    const CpgParams params = CpgParams::defaults(5, 1.0);
    Rng r1 = Rng::substream(8, "cpg_det", 0);
    Rng r2 = Rng::substream(8, "cpg_det", 0);
    CpgState a = randomized_state(params, r1);
    CpgState b = randomized_state(params, r2);
    for (int k = 0; k < 2000; ++k) {
        TorqueCommand ta = cpg_step(a, params, 0.11, 0.0005);
        TorqueCommand tb = cpg_step(b, params, 0.11, 0.0005);
        for (std::size_t i = 0; i < ta.size(); ++i) CHECK(ta[i] == tb[i]);
    }
}

TEST_CASE("dt outside the stable range is rejected") {
    const CpgParams params = CpgParams::defaults(3, 1.0);
    CpgState s = CpgState::rest(params);
    CHECK_THROWS(cpg_step(s, params, 0.0, 0.0));
    CHECK_THROWS(cpg_step(s, params, 0.0, 0.05));
    CHECK_THROWS(cpg_step(s, params, 0.0, -0.001));
}

}
