#include "swimfollow/fixed_follower.hpp"

#include <cmath>

#include "swimfollow/csv.hpp"
#include "swimfollow/errors.hpp"

namespace swimfollow {

namespace {

double rms_about_mean(const std::vector<double>& xs) {
    if (xs.empty()) return 0.0;
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(xs.size());
    double sq = 0.0;
    for (double x : xs) sq += (x - mean) * (x - mean);
    return std::sqrt(sq / static_cast<double>(xs.size()));
}

// first tick where the trace leaves its rest value: the pressure front
// arrival, which grows with source distance
double onset_delay(const std::vector<double>& trace, double threshold, double tick_dt,
                   double fallback) {
    if (trace.empty()) return fallback;
    const double base = trace.front();
    for (std::size_t k = 0; k < trace.size(); ++k) {
        if (std::fabs(trace[k] - base) > threshold) {
            return static_cast<double>(k) * tick_dt;
        }
    }
    return fallback;
}

} // namespace

FixedFollowerResult run_fixed_follower(const FixedFollowerConfig& cfg) {
    const ProtocolConfig& proto = cfg.protocol;
    if (proto.cpg.joints() + 1 != proto.body.n_links) {
        throw ConfigError("gait joint count does not match the body");
    }
    FlowModelParams flow = proto.flow;
    flow.noise_std = 0.0;
    flow.euler_noise_std = 0.0;

    const BodySpec& spec = proto.body;
    const auto ticks = static_cast<std::size_t>(std::llround(cfg.duration / proto.tick_dt));
    const double dt = proto.physics_dt();

    // straight leader lane down the middle of the tank
    const Pose2 leader_start{proto.start, 0.0};
    std::vector<Point2> line;
    for (double x = leader_start.position.x; x <= proto.tank.length - kPathWallMargin;
         x += kPathSampleResolution) {
        line.push_back({x, leader_start.position.y});
    }
    const PathSpline lane = PathSpline::from_polyline(line);

    FixedFollowerResult result;
    result.ticks = ticks;
    for (double lat : cfg.lateral) {
        for (double lon : cfg.longitudinal) {
            FixedFollowerCell cell;
            cell.lateral = lat;
            cell.longitudinal = lon;

            BodyState leader = BodyState::straight(spec, leader_start);
            const Point2 tail0 = tail_tip(leader, spec);
            const Point2 dir = heading_vector(leader_start.heading);
            const Point2 nose = tail0 + dir * (-lon) + dir.perp() * lat;
            const Pose2 follower_pose{nose - dir * (spec.body_length / 2.0),
                                      leader_start.heading};
            const BodyState follower = BodyState::straight(spec, follower_pose);

            const ContactResult clearance = detect_contact(leader, follower, spec);
            cell.valid = !clearance.contact && clearance.min_separation >= cfg.min_clearance;
            if (!cell.valid) {
                result.cells.push_back(std::move(cell));
                continue;
            }

            CpgState gait = CpgState::rest(proto.cpg);
            FlowSensors sensors(flow, proto.layout, proto.tick_dt,
                                Rng::substream(1, "fixed-follower"));
            const std::array<double, 3> motor{0.0, 0.0, 0.0};
            cell.p_left.reserve(ticks);
            cell.p_right.reserve(ticks);
            for (std::size_t k = 0; k < ticks; ++k) {
                const SensorFrame frame = sensors.sample_raw(follower, spec, motor);
                cell.p_left.push_back(frame.p_left);
                cell.p_right.push_back(frame.p_right);
                const double sigma = los_steering(lane, nose_position(leader, spec),
                                                  body_heading(leader), proto.guidance);
                for (std::size_t s = 0; s < proto.substeps; ++s) {
                    body_step(leader, spec, cpg_step(gait, proto.cpg, sigma, dt), dt);
                    if (wall_interaction(leader, spec, proto.tank)) project_chain(leader, spec);
                }
                std::vector<LinkSource> sources = sources_from_body(leader, spec);
                const std::vector<LinkSource> still = sources_from_body(follower, spec);
                sources.insert(sources.end(), still.begin(), still.end());
                sensors.push_sources(std::move(sources));
            }
            cell.rms_left = rms_about_mean(cell.p_left);
            cell.rms_right = rms_about_mean(cell.p_right);
            cell.rms = std::max(cell.rms_left, cell.rms_right);
            const std::vector<double>& louder =
                cell.rms_left >= cell.rms_right ? cell.p_left : cell.p_right;
            cell.onset_delay = onset_delay(louder, cfg.onset_threshold, proto.tick_dt,
                                           cfg.duration);
            result.cells.push_back(std::move(cell));
        }
    }
    return result;
}

void write_fixed_follower_summary_csv(const FixedFollowerResult& result,
                                      const std::filesystem::path& file) {
    CsvWriter writer(file, {"lateral_mm", "longitudinal_mm", "valid", "rms_left_pa",
                            "rms_right_pa", "rms_pa", "onset_delay_s"});
    for (const FixedFollowerCell& c : result.cells) {
        writer.row({c.lateral, c.longitudinal, c.valid ? 1.0 : 0.0, c.rms_left,
                    c.rms_right, c.rms, c.onset_delay});
    }
    writer.close();
}

void write_fixed_follower_traces_csv(const FixedFollowerResult& result, double tick_dt,
                                     const std::filesystem::path& file) {
    CsvWriter writer(file, {"lateral_mm", "longitudinal_mm", "tick", "t_s", "p_left_pa",
                            "p_right_pa"});
    for (const FixedFollowerCell& c : result.cells) {
        if (!c.valid) continue;
        for (std::size_t k = 0; k < c.p_left.size(); ++k) {
            writer.row({c.lateral, c.longitudinal, static_cast<double>(k),
                        static_cast<double>(k) * tick_dt, c.p_left[k], c.p_right[k]});
        }
    }
    writer.close();
}

} // namespace swimfollow
