#pragma once

#include <filesystem>
#include <vector>

#include "swimfollow/rollout.hpp"

namespace swimfollow {

/// Grid study: the follower is held rigid while the leader swims a straight
/// line from rest, and the follower's pressure traces are recorded. Offsets
/// place the follower's nose relative to the leader's initial tail tip in the
/// leader frame: longitudinal behind, lateral to the left.
struct FixedFollowerConfig {
    std::vector<double> lateral{0.0, 50.0, 60.0, 100.0};
    std::vector<double> longitudinal{0.0, 50.0, 100.0, 150.0, 200.0};
    double duration = 5.0;        // s per cell
    double min_clearance = 20.0;  // mm of capsule clearance for a valid cell
    double onset_threshold = 0.05;  // Pa, absolute front-arrival threshold
    ProtocolConfig protocol;      // sensor noise is disabled for the study
};

struct FixedFollowerCell {
    double lateral = 0.0;
    double longitudinal = 0.0;
    bool valid = false;           // placements that overlap are skipped
    double rms_left = 0.0;        // Pa, about the trace mean
    double rms_right = 0.0;
    double rms = 0.0;             // max of the two channels
    double onset_delay = 0.0;     // s from leader release to threshold crossing
    std::vector<double> p_left;   // per tick
    std::vector<double> p_right;
};

struct FixedFollowerResult {
    std::vector<FixedFollowerCell> cells;  // lateral-major grid order
    std::size_t ticks = 0;
};

FixedFollowerResult run_fixed_follower(const FixedFollowerConfig& cfg);

/// Per-cell summary: lateral_mm, longitudinal_mm, valid, rms_left_pa,
/// rms_right_pa, rms_pa, onset_delay_s.
void write_fixed_follower_summary_csv(const FixedFollowerResult& result,
                                      const std::filesystem::path& file);

/// Long-format traces for valid cells: lateral_mm, longitudinal_mm, tick,
/// t_s, p_left_pa, p_right_pa.
void write_fixed_follower_traces_csv(const FixedFollowerResult& result, double tick_dt,
                                     const std::filesystem::path& file);

} // namespace swimfollow
