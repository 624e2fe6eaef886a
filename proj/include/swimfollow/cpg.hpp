#pragma once

#include <cstddef>
#include <filesystem>
#include <vector>

#include "swimfollow/angles.hpp"

namespace swimfollow {

/// Coupled phase-oscillator parameters for the undulation gait. One oscillator
/// per joint; neighbors are phase-coupled along the chain.
struct CpgParams {
    double frequency = 5.0;                     // Hz
    std::vector<double> target_amplitude;       // torque units, per joint
    double coupling_weight = 20.0;              // 1/s
    double phase_bias = deg_to_rad(-65.0);      // desired phase of joint i+1 minus joint i
    double amplitude_gain = 20.0;               // 1/s, also drives the offset dynamics
    double torque_limit = 0.0;                  // torque units; 0 means 1.15 * max amplitude
    double clamp_fraction = 0.3;

    std::size_t joints() const { return target_amplitude.size(); }
    double effective_torque_limit() const;

    static CpgParams defaults(std::size_t joints, double amplitude);
};

struct CpgState {
    std::vector<double> theta;   // phase, unbounded
    std::vector<double> r;       // oscillation amplitude
    std::vector<double> r_dot;
    std::vector<double> offset;  // steering offset per joint

    /// Canonical start: phases pre-staggered by the bias, amplitudes at zero
    /// so the gait ramps up smoothly from rest.
    static CpgState rest(const CpgParams& params);
};

using TorqueCommand = std::vector<double>;

/// Default gait torque amplitude: cruise near 155 mm/s with the default body.
inline constexpr double kCruiseAmplitude = 5.0e4;

double clamp_steering(double sigma, double clamp_fraction = 0.3);
double truncate_torque(double raw, double limit);

/// One explicit-Euler step of the oscillator network.
///   theta_i' = 2*pi*f + sum_neighbors w*sin(theta_j - theta_i - bias_ij)
///   r_i''    = a*(a/4*(R_i - r_i) - r_i')
///   offset_i'= a*(sigma_clamped*R_i - offset_i)
/// Torque output: offset_i + r_i*cos(theta_i), truncated to the limit.
/// dt must be in (0, 0.02]; throws NumericError on non-finite state.
TorqueCommand cpg_step(CpgState& state, const CpgParams& params, double sigma, double dt);

struct GaitTrace {
    std::vector<double> t;
    std::vector<std::vector<double>> theta;  // [tick][joint]
    std::vector<std::vector<double>> r;
    std::vector<std::vector<double>> offset;
    std::vector<std::vector<double>> torque;
};

void write_gait_csv(const GaitTrace& trace, const std::filesystem::path& file);

} // namespace swimfollow
