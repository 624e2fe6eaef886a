#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "swimfollow/angles.hpp"
#include "swimfollow/metrics.hpp"

using namespace swimfollow;

namespace {

TickRecord tick_at(Point2 nose, Pose2 tail, double expert, double applied) {
    TickRecord t;
    t.follower_nose = nose;
    t.leader_tail = tail;
    t.expert_sigma = expert;
    t.applied_sigma = applied;
    return t;
}

} // namespace

TEST_CASE("reward matches the closed form") {
    RewardConfig cfg;
    CHECK(cfg.exponent() == doctest::Approx(17.0 / 3.0).epsilon(1e-12));

    CHECK(reward(0.0, cfg) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(reward(cfg.inner, cfg) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(reward(cfg.outer, cfg) == 0.0);
    CHECK(reward(500.0, cfg) == 0.0);

    // spot values frozen from an independent evaluation of the piecewise form
    CHECK(reward(35.0, cfg) == doctest::Approx(0.9901568667976963).epsilon(1e-14));
    CHECK(reward(105.0, cfg) == doctest::Approx(0.0098431332023037).epsilon(1e-12));

    // continuous at both branch joins
    CHECK(std::fabs(reward(cfg.inner - 1e-7, cfg) - reward(cfg.inner + 1e-7, cfg)) < 1e-6);
    CHECK(std::fabs(reward(cfg.outer - 1e-7, cfg) - reward(cfg.outer, cfg)) < 1e-6);

    // strictly decreasing up to the outer edge
    double prev = reward(0.0, cfg);
    for (double d = 0.5; d <= cfg.outer; d += 0.5) {
        const double r = reward(d, cfg);
        CHECK(r < prev);
        prev = r;
    }

    CHECK_THROWS_AS(reward(-1.0, cfg), std::invalid_argument);
}

TEST_CASE("reward distance to the station square") {
    const double h = 60.0;
    Pose2 tail{{0.0, 0.0}, 0.0};

    CHECK(reward_distance({0.0, 0.0}, tail, h) == doctest::Approx(60.0));
    CHECK(reward_distance({60.0, 0.0}, tail, h) == doctest::Approx(0.0));
    CHECK(reward_distance({60.0, 60.0}, tail, h) == doctest::Approx(0.0));
    CHECK(reward_distance({50.0, 55.0}, tail, h) == doctest::Approx(5.0));
    CHECK(reward_distance({100.0, 0.0}, tail, h) == doctest::Approx(40.0));
    CHECK(reward_distance({0.0, -90.0}, tail, h) == doctest::Approx(30.0));
    CHECK(reward_distance({63.0, 64.0}, tail, h) == doctest::Approx(5.0));

    SUBCASE("invariant under rotating and translating the tail frame") {
        const double ang = 0.6;
        const Point2 shift{812.0, -43.5};
        Pose2 moved{shift, ang};
        const double c = std::cos(ang), s = std::sin(ang);
        for (Point2 p : {Point2{50.0, 55.0}, Point2{63.0, 64.0}, Point2{100.0, 0.0}}) {
            const Point2 q{shift.x + c * p.x - s * p.y, shift.y + s * p.x + c * p.y};
            CHECK(reward_distance(q, moved, h) ==
                  doctest::Approx(reward_distance(p, tail, h)).epsilon(1e-12));
        }
    }
}

TEST_CASE("rollout metrics split reward and live-tick error") {
    RewardConfig cfg;
    RolloutResult r;
    r.cause = TerminationCause::separated;
    const Pose2 tail{{0.0, 0.0}, 0.0};
    // two held ticks (mismatch ignored), two live ticks with known error
    r.ticks.push_back(tick_at({0.0, 0.0}, tail, 0.3, 0.0));
    r.ticks.push_back(tick_at({0.0, 0.0}, tail, -0.2, 0.0));
    r.ticks.push_back(tick_at({35.0, 0.0}, tail, 0.1, 0.3));
    r.ticks.push_back(tick_at({105.0, 0.0}, tail, -0.1, 0.1));

    const Metrics m = rollout_metrics(r, cfg, 2);
    CHECK(m.ticks == 4);
    CHECK(m.cause == TerminationCause::separated);
    CHECK(m.mae == doctest::Approx(0.2).epsilon(1e-12));
    // center of the square sits 60 mm from its boundary
    const double expect = 2.0 * reward(60.0, cfg) + reward(25.0, cfg) + reward(45.0, cfg);
    CHECK(m.cumulative_reward == doctest::Approx(expect).epsilon(1e-12));

    SUBCASE("expert rollouts score zero error") {
        for (TickRecord& t : r.ticks) t.applied_sigma = t.expert_sigma;
        CHECK(rollout_metrics(r, cfg, 2).mae == 0.0);
    }
    SUBCASE("all ticks held counts no live error") {
        CHECK(rollout_metrics(r, cfg, 10).mae == 0.0);
    }
    SUBCASE("empty rollout is rejected") {
        RolloutResult empty;
        CHECK_THROWS_AS(rollout_metrics(empty, cfg, 0), std::invalid_argument);
    }
}

TEST_CASE("quartiles use linear interpolation") {
    QuartileSummary q = quartiles({5.0, 1.0, 4.0, 2.0, 3.0});
    CHECK(q.count == 5);
    CHECK(q.q25 == doctest::Approx(2.0));
    CHECK(q.median == doctest::Approx(3.0));
    CHECK(q.q75 == doctest::Approx(4.0));

    q = quartiles({1.0, 2.0, 3.0, 4.0});
    CHECK(q.q25 == doctest::Approx(1.75));
    CHECK(q.median == doctest::Approx(2.5));
    CHECK(q.q75 == doctest::Approx(3.25));

    q = quartiles({7.0});
    CHECK(q.q25 == 7.0);
    CHECK(q.median == 7.0);
    CHECK(q.q75 == 7.0);

    q = quartiles({});
    CHECK(q.count == 0);
    CHECK(q.median == 0.0);
}

TEST_CASE("summary partitions episodes by termination") {
    std::vector<Metrics> ms(5);
    ms[0] = {0.1, 400.0, TerminationCause::timeout, 500};
    ms[1] = {0.2, 300.0, TerminationCause::timeout, 500};
    ms[2] = {0.3, 100.0, TerminationCause::separated, 200};
    ms[3] = {0.4, 50.0, TerminationCause::contact, 100};
    ms[4] = {0.5, 20.0, TerminationCause::separated, 60};

    const MetricsSummary s = summarize(ms);
    CHECK(s.n_timeout == 2);
    CHECK(s.n_separated == 2);
    CHECK(s.n_contact == 1);
    CHECK(s.mae_all.count == 5);
    CHECK(s.reward_all.median == doctest::Approx(100.0));
    CHECK(s.mae_completed.count == 2);
    CHECK(s.mae_completed.median == doctest::Approx(0.15));
    CHECK(s.reward_early.count == 3);
    CHECK(s.reward_early.median == doctest::Approx(50.0));
}
