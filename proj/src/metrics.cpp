#include "swimfollow/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "swimfollow/csv.hpp"

namespace swimfollow {

double reward_distance(Point2 nose, const Pose2& tail, double half_side) {
    const Point2 rel = nose - tail.position;
    const Point2 dir = heading_vector(tail.heading);
    const double qx = std::fabs(rel.dot(dir));
    const double qy = std::fabs(rel.cross(dir));
    if (qx <= half_side && qy <= half_side) {
        return half_side - std::max(qx, qy);
    }
    const double ox = std::max(qx - half_side, 0.0);
    const double oy = std::max(qy - half_side, 0.0);
    return std::hypot(ox, oy);
}

double reward(double d_r, const RewardConfig& cfg) {
    if (d_r < 0.0) throw std::invalid_argument("reward distance must be non-negative");
    if (d_r > cfg.outer) return 0.0;
    const double c = cfg.exponent();
    const auto f = [c](double x) { return std::pow(2.0 * x, c) / 2.0; };
    if (d_r <= cfg.inner) return 1.0 - f(d_r / cfg.outer);
    return f(1.0 - d_r / cfg.outer);
}

Metrics rollout_metrics(const RolloutResult& rollout, const RewardConfig& cfg,
                        std::size_t head_start_ticks) {
    if (rollout.ticks.empty()) throw std::invalid_argument("empty rollout");
    Metrics m;
    m.cause = rollout.cause;
    m.ticks = rollout.ticks.size();
    std::size_t live = 0;
    for (std::size_t k = 0; k < rollout.ticks.size(); ++k) {
        const TickRecord& t = rollout.ticks[k];
        m.cumulative_reward +=
            reward(reward_distance(t.follower_nose, t.leader_tail, cfg.half_side), cfg);
        if (k >= head_start_ticks) {
            m.mae += std::fabs(t.applied_sigma - t.expert_sigma);
            ++live;
        }
    }
    if (live > 0) m.mae /= static_cast<double>(live);
    return m;
}

QuartileSummary quartiles(std::vector<double> values) {
    QuartileSummary q;
    q.count = values.size();
    if (values.empty()) return q;
    std::sort(values.begin(), values.end());
    const auto at = [&](double p) {
        const double h = p * static_cast<double>(values.size() - 1);
        const auto lo = static_cast<std::size_t>(h);
        const std::size_t hi = std::min(lo + 1, values.size() - 1);
        return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
    };
    q.q25 = at(0.25);
    q.median = at(0.5);
    q.q75 = at(0.75);
    return q;
}

MetricsSummary summarize(const std::vector<Metrics>& rollouts) {
    MetricsSummary s;
    std::vector<double> mae_all, rew_all, mae_done, rew_done, mae_early, rew_early;
    for (const Metrics& m : rollouts) {
        mae_all.push_back(m.mae);
        rew_all.push_back(m.cumulative_reward);
        switch (m.cause) {
            case TerminationCause::timeout:
                ++s.n_timeout;
                mae_done.push_back(m.mae);
                rew_done.push_back(m.cumulative_reward);
                break;
            case TerminationCause::separated:
                ++s.n_separated;
                mae_early.push_back(m.mae);
                rew_early.push_back(m.cumulative_reward);
                break;
            case TerminationCause::contact:
                ++s.n_contact;
                mae_early.push_back(m.mae);
                rew_early.push_back(m.cumulative_reward);
                break;
        }
    }
    s.mae_all = quartiles(std::move(mae_all));
    s.reward_all = quartiles(std::move(rew_all));
    s.mae_completed = quartiles(std::move(mae_done));
    s.reward_completed = quartiles(std::move(rew_done));
    s.mae_early = quartiles(std::move(mae_early));
    s.reward_early = quartiles(std::move(rew_early));
    return s;
}

void write_rollout_csv(const RolloutResult& result, double tick_dt, const RewardConfig& cfg,
                       const std::filesystem::path& file) {
    CsvWriter writer(file, {"tick",
                            "t_s",
                            "p_left_pa",
                            "p_right_pa",
                            "yaw_rad",
                            "pitch_rad",
                            "roll_rad",
                            "motor0",
                            "motor1",
                            "motor2",
                            "expert_sigma",
                            "applied_sigma",
                            "leader_x_mm",
                            "leader_y_mm",
                            "leader_heading_rad",
                            "leader_tail_x_mm",
                            "leader_tail_y_mm",
                            "leader_tail_heading_rad",
                            "follower_x_mm",
                            "follower_y_mm",
                            "follower_heading_rad",
                            "follower_nose_x_mm",
                            "follower_nose_y_mm",
                            "separation_mm",
                            "d_r_mm",
                            "reward"});
    for (std::size_t k = 0; k < result.ticks.size(); ++k) {
        const TickRecord& r = result.ticks[k];
        const double d_r = reward_distance(r.follower_nose, r.leader_tail, cfg.half_side);
        writer.row({static_cast<double>(k), static_cast<double>(k) * tick_dt,
                    r.frame.p_left, r.frame.p_right, r.frame.yaw, r.frame.pitch,
                    r.frame.roll, r.frame.motor[0], r.frame.motor[1], r.frame.motor[2],
                    r.expert_sigma, r.applied_sigma, r.leader_center.x, r.leader_center.y,
                    r.leader_heading, r.leader_tail.position.x, r.leader_tail.position.y,
                    r.leader_tail.heading, r.follower_center.x, r.follower_center.y,
                    r.follower_heading, r.follower_nose.x, r.follower_nose.y,
                    r.separation, d_r, reward(d_r, cfg)});
    }
    writer.close();
}

} // namespace swimfollow
