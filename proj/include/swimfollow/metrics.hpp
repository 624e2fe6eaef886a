#pragma once

#include <cstddef>
#include <filesystem>
#include <vector>

#include "swimfollow/rollout.hpp"

namespace swimfollow {

struct RewardConfig {
    double shape = 0.7;       // s in f(x) = (2x)^c / 2
    double inner = 70.0;      // mm, upper edge of the near branch
    double outer = 140.0;     // mm, reward reaches zero here
    double half_side = 60.0;  // mm, station square around the leader's tail

    double exponent() const { return 2.0 / (1.0 - shape) - 1.0; }
};

/// Unsigned distance from the follower's nose to the boundary of the square
/// centered on the leader's tail link, axes aligned with the tail heading.
/// Zero on the boundary, positive inside and outside.
double reward_distance(Point2 nose, const Pose2& tail, double half_side);

/// Piecewise station-keeping reward:
///   1 - f(d/outer)  for d <= inner, f(1 - d/outer) for inner < d <= outer,
///   0 beyond, with f(x) = (2x)^c / 2 and c = 2/(1-s) - 1.
double reward(double d_r, const RewardConfig& cfg);

struct Metrics {
    double mae = 0.0;                // steering fraction, vs the expert
    double cumulative_reward = 0.0;  // at most one per tick
    TerminationCause cause = TerminationCause::timeout;
    std::size_t ticks = 0;
};

/// Per-rollout metrics. The reward sums over every recorded tick; the mean
/// absolute error only counts ticks where the follower was live, so an
/// expert-piloted rollout scores exactly zero.
Metrics rollout_metrics(const RolloutResult& rollout, const RewardConfig& cfg,
                        std::size_t head_start_ticks);

struct QuartileSummary {
    double q25 = 0.0;
    double median = 0.0;
    double q75 = 0.0;
    std::size_t count = 0;
};

/// Linear-interpolation quantiles on the sorted values (the common default
/// in statistics packages). Empty input gives a zero summary.
QuartileSummary quartiles(std::vector<double> values);

struct MetricsSummary {
    QuartileSummary mae_all, reward_all;
    QuartileSummary mae_completed, reward_completed;  // ran the full episode
    QuartileSummary mae_early, reward_early;          // separated or contact
    std::size_t n_timeout = 0;
    std::size_t n_separated = 0;
    std::size_t n_contact = 0;
};

MetricsSummary summarize(const std::vector<Metrics>& rollouts);

/// Per-tick rollout log. Columns: tick, t_s, the eight sensor channels,
/// expert_sigma, applied_sigma, both body poses, the leader tail pose, the
/// follower nose, separation_mm, d_r_mm, reward.
void write_rollout_csv(const RolloutResult& result, double tick_dt, const RewardConfig& cfg,
                       const std::filesystem::path& file);

} // namespace swimfollow
