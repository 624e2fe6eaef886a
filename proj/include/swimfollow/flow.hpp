#pragma once

#include <array>
#include <cstddef>
#include <deque>
#include <vector>

#include "swimfollow/angles.hpp"
#include "swimfollow/rng.hpp"
#include "swimfollow/swimmer.hpp"

namespace swimfollow {

/// One link acting as a pressure dipole source: width^2 * length scales the
/// displaced volume, v_normal is the lateral speed of the link center.
struct LinkSource {
    Point2 center;
    Point2 normal;     // unit, left of the link heading
    double v_normal = 0.0;
    double width = 0.0;
    double length = 0.0;
};

std::vector<LinkSource> sources_from_body(const BodyState& state, const BodySpec& spec);

struct FlowModelParams {
    double dipole_coeff = 10.0;        // Pa*s/mm
    double decay_exponent = 3.0;
    double distance_floor = 8.0;       // mm, half the body width
    double propagation_speed = 500.0;  // mm/s, how fast pressure fronts spread; <= 0 disables
    double noise_std = 1.0;            // Pa, per sample per channel
    double bias_left = 120.0;          // Pa, static sensor offset
    double bias_right = 95.0;          // Pa
    double latency = 0.0;              // s, whole-frame sensing delay
    double pitch_amp = deg_to_rad(2.0);
    double roll_amp = deg_to_rad(2.0);
    double euler_noise_std = deg_to_rad(0.1);
};

/// Pressure port positions in the head-link frame.
struct SensorLayout {
    double forward = 8.0;  // mm ahead of the head link center
    double lateral = 8.0;  // mm to each side
};

/// What the follower senses at one control tick.
struct SensorFrame {
    double p_left = 0.0;   // Pa
    double p_right = 0.0;  // Pa
    double yaw = 0.0;      // rad
    double pitch = 0.0;
    double roll = 0.0;
    std::array<double, 3> motor{};  // normalized commands, the three head-most joints
};

/// Instantaneous dipole superposition at a point.
double pressure_at(Point2 point, const std::vector<LinkSource>& sources,
                   const FlowModelParams& params);

struct BiasOffsets {
    double p_left = 0.0;
    double p_right = 0.0;
    double yaw = 0.0;
};

/// Mean offsets over a rest window of raw frames. Throws std::invalid_argument
/// when the window is shorter than 0.5 s or the frames show motion (pressure
/// or yaw scatter beyond what sensor noise explains).
BiasOffsets calibrate_bias(const std::vector<SensorFrame>& window, double tick_dt,
                           const FlowModelParams& params);

/// Simulates the follower's sensing chain at the control rate: dipole
/// superposition with finite propagation speed (per-source time retardation
/// against a per-tick history), static biases, Gaussian noise, synthetic
/// pitch/roll locked to the head motor command, and an optional whole-frame
/// latency buffer.
class FlowSensors {
public:
    FlowSensors(const FlowModelParams& params, const SensorLayout& layout, double tick_dt,
                Rng noise_rng);

    /// Record the tick's sources (all links of both bodies) before sampling.
    void push_sources(std::vector<LinkSource> sources);

    /// Raw frame for the current tick (biases and noise applied, no
    /// calibration, no latency). motor_norm holds the normalized commands of
    /// joints 0, 2 and 4 of the follower.
    SensorFrame sample_raw(const BodyState& follower, const BodySpec& spec,
                           const std::array<double, 3>& motor_norm);

    /// sample_raw, then calibration offsets, then the latency queue. Returns
    /// the frame the policy sees this tick (zeros until the queue fills).
    SensorFrame sample(const BodyState& follower, const BodySpec& spec,
                       const std::array<double, 3>& motor_norm);

    void set_bias(const BiasOffsets& bias) { bias_ = bias; }
    const BiasOffsets& bias() const { return bias_; }

    /// Sensor world positions for the current follower state.
    std::array<Point2, 2> sensor_points(const BodyState& follower, const BodySpec& spec) const;

    double retarded_pressure(Point2 point) const;

private:
    FlowModelParams params_;
    SensorLayout layout_;
    double tick_dt_;
    Rng rng_;
    BiasOffsets bias_;
    std::vector<std::vector<LinkSource>> history_;
    std::deque<SensorFrame> latency_queue_;
    std::deque<double> head_motor_history_;
};

} // namespace swimfollow
