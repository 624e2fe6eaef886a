#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "swimfollow/checkpoint.hpp"
#include "swimfollow/cpg.hpp"
#include "swimfollow/flow.hpp"
#include "swimfollow/geometry.hpp"
#include "swimfollow/swimmer.hpp"

namespace swimfollow {

/// Shared per-episode protocol: both fish, the tank, the sensing chain and
/// the guidance law. Lengths mm, times s.
struct ProtocolConfig {
    double tick_dt = 0.02;             // 50 Hz control
    std::size_t substeps = 40;         // physics dt = tick_dt / substeps
    std::size_t max_ticks = 500;       // 10 s episode
    std::size_t head_start_ticks = 20; // follower held for 0.4 s
    double calibration_time = 0.5;     // rest window before the leader starts
    double separation_limit = 200.0;   // leader tail tip to follower nose
    double lateral_offset = 60.0;      // follower lane offset from the leader path
    Point2 start{400.0, 290.0};        // leader body center at release
    TankSpec tank;
    BodySpec body;
    CpgParams cpg = CpgParams::defaults(5, kCruiseAmplitude);
    FlowModelParams flow;
    SensorLayout layout;
    GuidanceConfig guidance;

    double physics_dt() const { return tick_dt / static_cast<double>(substeps); }
};

/// Who drives the follower. The expert command is recorded in every case.
/// `none` swims with zero steering, the lower performance bound.
enum class Pilot { expert, policy, none };

enum class TerminationCause { timeout, separated, contact };

const char* to_string(TerminationCause cause);

/// Clamped steering command that closes the loop on the path. Positive
/// steering turns the body left, matching the sign of the heading error.
double los_steering(const PathSpline& path, Point2 pos, double heading,
                    const GuidanceConfig& cfg);

/// State of both fish at the start of a control tick, plus the commands
/// issued during it.
struct TickRecord {
    SensorFrame frame;      // what the follower's policy sees
    double expert_sigma = 0.0;
    double applied_sigma = 0.0;
    Pose2 leader_tail;      // tail link center pose
    Point2 leader_center;
    double leader_heading = 0.0;
    Point2 follower_nose;
    Point2 follower_center;
    double follower_heading = 0.0;
    double separation = 0.0;  // leader tail tip to follower nose
};

struct RolloutResult {
    std::vector<TickRecord> ticks;
    TerminationCause cause = TerminationCause::timeout;
    Side side = Side::left;
    std::uint64_t seed = 0;
    PathSpline leader_path;
};

/// One leader-follower episode: rest calibration, leader release on a random
/// path, follower release after the head start. Policy rollouts need a
/// checkpoint; the expert pilot ignores it.
RolloutResult run_rollout(const ProtocolConfig& cfg, std::uint64_t seed, Side side,
                          Pilot pilot, const PolicyCheckpoint* policy);

/// Network input layout for one frame:
/// p_left, p_right, yaw, pitch, roll, motor0, motor1, motor2.
std::array<double, 8> frame_to_input(const SensorFrame& frame);

} // namespace swimfollow
