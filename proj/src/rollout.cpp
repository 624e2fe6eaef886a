#include "swimfollow/rollout.hpp"

#include <cmath>

#include "swimfollow/errors.hpp"

namespace swimfollow {

const char* to_string(TerminationCause cause) {
    switch (cause) {
        case TerminationCause::timeout: return "timeout";
        case TerminationCause::separated: return "separated";
        case TerminationCause::contact: return "contact";
    }
    return "unknown";
}

double los_steering(const PathSpline& path, Point2 pos, double heading,
                    const GuidanceConfig& cfg) {
    const double ref = los_reference(path, pos, cfg);
    return clamp_steering(cfg.gain * heading_error(ref, heading), cfg.clamp_fraction);
}

std::array<double, 8> frame_to_input(const SensorFrame& frame) {
    return {frame.p_left, frame.p_right, frame.yaw,      frame.pitch,
            frame.roll,   frame.motor[0], frame.motor[1], frame.motor[2]};
}

namespace {

std::vector<LinkSource> combined_sources(const BodyState& leader, const BodyState& follower,
                                         const BodySpec& spec) {
    std::vector<LinkSource> sources = sources_from_body(leader, spec);
    const std::vector<LinkSource> more = sources_from_body(follower, spec);
    sources.insert(sources.end(), more.begin(), more.end());
    return sources;
}

std::array<double, 3> normalized_motor(const TorqueCommand& torques, const CpgParams& cpg) {
    const double limit = cpg.effective_torque_limit();
    return {torques[0] / limit, torques[1] / limit, torques[2] / limit};
}

} // namespace

RolloutResult run_rollout(const ProtocolConfig& cfg, std::uint64_t seed, Side side,
                          Pilot pilot, const PolicyCheckpoint* policy) {
    if (cfg.cpg.joints() + 1 != cfg.body.n_links) {
        throw ConfigError("gait joint count does not match the body");
    }
    if (pilot == Pilot::policy) {
        if (policy == nullptr) throw ConfigError("policy rollout needs a checkpoint");
        if (policy->config.input_dim != 8) {
            throw ConfigError("policy input dim must be 8");
        }
        if (policy->params.size() != policy->config.param_count()) {
            throw ConfigError("policy checkpoint is inconsistent");
        }
    }

    RolloutResult result;
    result.side = side;
    result.seed = seed;
    result.leader_path = generate_random_path(seed, cfg.tank, cfg.start);
    const PathSpline lane = offset_path(result.leader_path, cfg.lateral_offset, side);

    const BodySpec& spec = cfg.body;
    const double lat = side == Side::left ? cfg.lateral_offset : -cfg.lateral_offset;
    const Pose2 leader_start{result.leader_path.point_at(0.0),
                             result.leader_path.heading_at(0.0)};
    BodyState leader = BodyState::straight(spec, leader_start);
    const Point2 dir = heading_vector(leader_start.heading);
    const Point2 left = dir.perp();
    // follower nose abeam the boundary of the leader's last two links
    const double back = -(spec.body_length / 3.0 + spec.body_length / 2.0);
    const Pose2 follower_start{
        leader_start.position + dir * back + left * lat, leader_start.heading};
    BodyState follower = BodyState::straight(spec, follower_start);

    CpgState leader_cpg = CpgState::rest(cfg.cpg);
    CpgState follower_cpg = CpgState::rest(cfg.cpg);
    FlowSensors sensors(cfg.flow, cfg.layout, cfg.tick_dt,
                        Rng::substream(seed, "sensor-noise"));

    // rest calibration before the leader is released
    const auto cal_ticks =
        static_cast<std::size_t>(std::llround(cfg.calibration_time / cfg.tick_dt));
    std::array<double, 3> motor_norm{0.0, 0.0, 0.0};
    std::vector<SensorFrame> window;
    window.reserve(cal_ticks);
    for (std::size_t k = 0; k < cal_ticks; ++k) {
        sensors.push_sources(combined_sources(leader, follower, spec));
        window.push_back(sensors.sample_raw(follower, spec, motor_norm));
    }
    sensors.set_bias(calibrate_bias(window, cfg.tick_dt, cfg.flow));

    Net net(policy ? policy->config : NetConfig{});
    Net::State net_state = net.make_state();
    if (pilot == Pilot::policy) net.params() = policy->params;

    const double dt = cfg.physics_dt();
    result.ticks.reserve(cfg.max_ticks);
    for (std::size_t tick = 0; tick < cfg.max_ticks; ++tick) {
        const SensorFrame frame = sensors.sample(follower, spec, motor_norm);

        const double expert_sigma =
            los_steering(lane, nose_position(follower, spec), body_heading(follower),
                         cfg.guidance);
        double applied = expert_sigma;
        if (pilot == Pilot::policy) {
            std::array<double, 8> input = frame_to_input(frame);
            policy->norm.apply(input.data(), input.size());
            applied = net.step(net_state, input.data());
        } else if (pilot == Pilot::none) {
            applied = 0.0;
        }
        const bool frozen = tick < cfg.head_start_ticks;
        if (frozen) applied = 0.0;

        const double leader_sigma =
            los_steering(result.leader_path, nose_position(leader, spec),
                         body_heading(leader), cfg.guidance);

        TickRecord rec;
        rec.frame = frame;
        rec.expert_sigma = expert_sigma;
        rec.applied_sigma = applied;
        rec.leader_tail = tail_pose(leader);
        rec.leader_center = body_center(leader);
        rec.leader_heading = body_heading(leader);
        rec.follower_nose = nose_position(follower, spec);
        rec.follower_center = body_center(follower);
        rec.follower_heading = body_heading(follower);
        rec.separation = (tail_tip(leader, spec) - rec.follower_nose).norm();
        result.ticks.push_back(rec);

        for (std::size_t s = 0; s < cfg.substeps; ++s) {
            const TorqueCommand ltq = cpg_step(leader_cpg, cfg.cpg, leader_sigma, dt);
            body_step(leader, spec, ltq, dt);
            if (wall_interaction(leader, spec, cfg.tank)) project_chain(leader, spec);
            if (!frozen) {
                const TorqueCommand ftq = cpg_step(follower_cpg, cfg.cpg, applied, dt);
                body_step(follower, spec, ftq, dt);
                if (wall_interaction(follower, spec, cfg.tank)) project_chain(follower, spec);
                if (s + 1 == cfg.substeps) motor_norm = normalized_motor(ftq, cfg.cpg);
            }
        }
        sensors.push_sources(combined_sources(leader, follower, spec));

        const double sep = (tail_tip(leader, spec) - nose_position(follower, spec)).norm();
        if (sep > cfg.separation_limit) {
            result.cause = TerminationCause::separated;
            return result;
        }
        if (detect_contact(leader, follower, spec).contact) {
            result.cause = TerminationCause::contact;
            return result;
        }
    }
    result.cause = TerminationCause::timeout;
    return result;
}

} // namespace swimfollow
