#include "swimfollow/flow.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace swimfollow {

std::vector<LinkSource> sources_from_body(const BodyState& state, const BodySpec& spec) {
    std::vector<LinkSource> out;
    out.reserve(state.n());
    for (const LinkState& link : state.links) {
        LinkSource s;
        s.center = link.pos;
        s.normal = heading_vector(link.heading).perp();
        s.v_normal = link.vel.dot(s.normal);
        s.width = spec.link_width;
        s.length = spec.link_length();
        out.push_back(s);
    }
    return out;
}

namespace {

double dipole_term(Point2 point, const LinkSource& s, const FlowModelParams& params) {
    const Point2 r = point - s.center;
    const double dist = r.norm();
    if (dist < 1e-12) return 0.0;
    const Point2 rh = r * (1.0 / dist);
    const double d = std::max(dist, params.distance_floor);
    const double strength = s.width * s.width * s.length * s.v_normal;
    return params.dipole_coeff * strength * rh.dot(s.normal) / std::pow(d, params.decay_exponent);
}

} // namespace

double pressure_at(Point2 point, const std::vector<LinkSource>& sources,
                   const FlowModelParams& params) {
    double p = 0.0;
    for (const LinkSource& s : sources) p += dipole_term(point, s, params);
    return p;
}

BiasOffsets calibrate_bias(const std::vector<SensorFrame>& window, double tick_dt,
                           const FlowModelParams& params) {
    if (window.size() * tick_dt < 0.5 - 1e-9) {
        throw std::invalid_argument("calibrate_bias: rest window shorter than 0.5 s");
    }
    const double n = static_cast<double>(window.size());
    BiasOffsets bias;
    double sy = 0.0, cy = 0.0;
    for (const SensorFrame& f : window) {
        bias.p_left += f.p_left / n;
        bias.p_right += f.p_right / n;
        sy += std::sin(f.yaw);
        cy += std::cos(f.yaw);
    }
    bias.yaw = std::atan2(sy, cy);
    double var_l = 0.0, var_r = 0.0, var_y = 0.0;
    for (const SensorFrame& f : window) {
        var_l += (f.p_left - bias.p_left) * (f.p_left - bias.p_left) / n;
        var_r += (f.p_right - bias.p_right) * (f.p_right - bias.p_right) / n;
        const double dy = wrap_angle(f.yaw - bias.yaw);
        var_y += dy * dy / n;
    }
    const double p_allow = 5.0 * params.noise_std + 1e-9;
    const double y_allow = 5.0 * params.euler_noise_std + 1e-9;
    if (std::sqrt(var_l) > p_allow || std::sqrt(var_r) > p_allow || std::sqrt(var_y) > y_allow) {
        throw std::invalid_argument("calibrate_bias: motion detected in the rest window");
    }
    return bias;
}

FlowSensors::FlowSensors(const FlowModelParams& params, const SensorLayout& layout,
                         double tick_dt, Rng noise_rng)
    : params_(params), layout_(layout), tick_dt_(tick_dt), rng_(noise_rng) {
    if (!(tick_dt > 0.0)) throw std::invalid_argument("FlowSensors: tick_dt must be positive");
}

void FlowSensors::push_sources(std::vector<LinkSource> sources) {
    history_.push_back(std::move(sources));
    // distant history never matters: cap at the tank diagonal's travel time
    const std::size_t cap =
        params_.propagation_speed > 0.0
            ? static_cast<std::size_t>(3200.0 / (params_.propagation_speed * tick_dt_)) + 4
            : 4;
    if (history_.size() > cap) history_.erase(history_.begin());
}

double FlowSensors::retarded_pressure(Point2 point) const {
    if (history_.empty()) return 0.0;
    const std::vector<LinkSource>& now = history_.back();
    double p = 0.0;
    for (std::size_t i = 0; i < now.size(); ++i) {
        const LinkSource* src = &now[i];
        if (params_.propagation_speed > 0.0) {
            const double d_now = std::max((point - src->center).norm(), params_.distance_floor);
            const double lag = d_now / params_.propagation_speed / tick_dt_;
            const double pos = static_cast<double>(history_.size() - 1) - lag;
            // retarded time before the recorded history: the front has not
            // arrived, and everything was at rest before tick zero anyway
            if (pos < 0.0) continue;
            const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
            const std::size_t hi = std::min(lo + 1, history_.size() - 1);
            const double frac = std::clamp(pos - static_cast<double>(lo), 0.0, 1.0);
            const LinkSource& a = history_[lo][i];
            const LinkSource& b = history_[hi][i];
            LinkSource mixed = a;
            mixed.center = a.center * (1.0 - frac) + b.center * frac;
            mixed.normal = a.normal * (1.0 - frac) + b.normal * frac;
            const double nn = mixed.normal.norm();
            if (nn > 1e-12) mixed.normal = mixed.normal * (1.0 / nn);
            mixed.v_normal = a.v_normal * (1.0 - frac) + b.v_normal * frac;
            p += dipole_term(point, mixed, params_);
        } else {
            p += dipole_term(point, *src, params_);
        }
    }
    return p;
}

std::array<Point2, 2> FlowSensors::sensor_points(const BodyState& follower,
                                                 const BodySpec& spec) const {
    (void)spec;
    const LinkState& head = follower.links.front();
    const Point2 t = heading_vector(head.heading);
    const Point2 n = t.perp();
    const Point2 base = head.pos + t * layout_.forward;
    return {base + n * layout_.lateral, base - n * layout_.lateral};
}

SensorFrame FlowSensors::sample_raw(const BodyState& follower, const BodySpec& spec,
                                    const std::array<double, 3>& motor_norm) {
    const std::array<Point2, 2> pts = sensor_points(follower, spec);
    SensorFrame f;
    f.p_left = retarded_pressure(pts[0]) + params_.bias_left + rng_.gauss() * params_.noise_std;
    f.p_right = retarded_pressure(pts[1]) + params_.bias_right + rng_.gauss() * params_.noise_std;

    head_motor_history_.push_back(motor_norm[0]);
    if (head_motor_history_.size() > 3) head_motor_history_.pop_front();
    const double delayed_head = head_motor_history_.front();

    f.yaw = wrap_angle(follower.links.front().heading + rng_.gauss() * params_.euler_noise_std);
    f.pitch = params_.pitch_amp * motor_norm[0] + rng_.gauss() * params_.euler_noise_std;
    f.roll = params_.roll_amp * delayed_head + rng_.gauss() * params_.euler_noise_std;
    f.motor = motor_norm;
    return f;
}

SensorFrame FlowSensors::sample(const BodyState& follower, const BodySpec& spec,
                                const std::array<double, 3>& motor_norm) {
    SensorFrame f = sample_raw(follower, spec, motor_norm);
    f.p_left -= bias_.p_left;
    f.p_right -= bias_.p_right;
    f.yaw = wrap_angle(f.yaw - bias_.yaw);

    const std::size_t delay_ticks =
        static_cast<std::size_t>(std::llround(params_.latency / tick_dt_));
    if (delay_ticks == 0) return f;
    latency_queue_.push_back(f);
    if (latency_queue_.size() <= delay_ticks) return SensorFrame{};
    SensorFrame out = latency_queue_.front();
    latency_queue_.pop_front();
    return out;
}

} // namespace swimfollow
