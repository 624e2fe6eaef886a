#include "swimfollow/config.hpp"

#include <fstream>
#include <functional>
#include <sstream>
#include <utility>
#include <vector>

#include <json.hpp>

#include "swimfollow/errors.hpp"

namespace swimfollow {
namespace {

using nlohmann::json;

using Setter = std::function<void(const json&, const std::string&)>;
using Field = std::pair<const char*, Setter>;

/// Applies the listed setters to whichever keys appear, rejecting the rest.
void apply_object(const json& j, const std::string& path, const std::vector<Field>& fields) {
    if (!j.is_object()) throw ConfigError(path + ": expected an object");
    for (const auto& [key, value] : j.items()) {
        const std::string where = path + "." + key;
        bool known = false;
        for (const Field& f : fields) {
            if (key == f.first) {
                f.second(value, where);
                known = true;
                break;
            }
        }
        if (!known) throw ConfigError("unknown config key: " + where);
    }
}

void read_double(const json& j, const std::string& path, double& out) {
    if (!j.is_number()) throw ConfigError(path + ": expected a number");
    out = j.get<double>();
}

void read_count(const json& j, const std::string& path, std::size_t& out) {
    if (!j.is_number_integer() || j.get<double>() < 0)
        throw ConfigError(path + ": expected a non-negative integer");
    out = j.get<std::size_t>();
}

void read_seed(const json& j, const std::string& path, std::uint64_t& out) {
    if (!j.is_number_integer() || j.get<double>() < 0)
        throw ConfigError(path + ": expected a non-negative integer");
    out = j.get<std::uint64_t>();
}

void read_double_list(const json& j, const std::string& path, std::vector<double>& out) {
    if (!j.is_array()) throw ConfigError(path + ": expected an array of numbers");
    std::vector<double> values;
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number())
            throw ConfigError(path + "[" + std::to_string(i) + "]: expected a number");
        values.push_back(j[i].get<double>());
    }
    out = std::move(values);
}

Setter num(double& out) {
    return [&out](const json& j, const std::string& p) { read_double(j, p, out); };
}

Setter count(std::size_t& out) {
    return [&out](const json& j, const std::string& p) { read_count(j, p, out); };
}

void apply_net(const json& j, const std::string& path, NetConfig& net) {
    apply_object(j, path,
                 {{"input_dim", count(net.input_dim)},
                  {"hidden", count(net.hidden)},
                  {"fc", count(net.fc)},
                  {"dropout", num(net.dropout)},
                  {"output_scale", num(net.output_scale)}});
}

void apply_train(const json& j, const std::string& path, TrainConfig& train) {
    apply_object(j, path,
                 {{"epochs", count(train.epochs)},
                  {"threads", count(train.threads)},
                  {"adam", [&train](const json& a, const std::string& p) {
                       apply_object(a, p,
                                    {{"lr", num(train.adam.lr)},
                                     {"beta1", num(train.adam.beta1)},
                                     {"beta2", num(train.adam.beta2)},
                                     {"eps", num(train.adam.eps)}});
                   }}});
}

void apply_protocol(const json& j, const std::string& path, ProtocolConfig& pc) {
    apply_object(
        j, path,
        {{"tick_dt", num(pc.tick_dt)},
         {"substeps", count(pc.substeps)},
         {"max_ticks", count(pc.max_ticks)},
         {"head_start_ticks", count(pc.head_start_ticks)},
         {"calibration_time", num(pc.calibration_time)},
         {"separation_limit", num(pc.separation_limit)},
         {"lateral_offset", num(pc.lateral_offset)},
         {"start",
          [&pc](const json& s, const std::string& p) {
              apply_object(s, p, {{"x", num(pc.start.x)}, {"y", num(pc.start.y)}});
          }},
         {"tank",
          [&pc](const json& t, const std::string& p) {
              apply_object(t, p,
                           {{"length", num(pc.tank.length)}, {"width", num(pc.tank.width)}});
          }},
         {"body",
          [&pc](const json& b, const std::string& p) {
              apply_object(b, p,
                           {{"n_links", count(pc.body.n_links)},
                            {"body_length", num(pc.body.body_length)},
                            {"link_width", num(pc.body.link_width)},
                            {"link_mass", num(pc.body.link_mass)},
                            {"drag_tangential", num(pc.body.drag_tangential)},
                            {"drag_normal", num(pc.body.drag_normal)},
                            {"joint_stiffness", num(pc.body.joint_stiffness)},
                            {"joint_damping", num(pc.body.joint_damping)}});
          }},
         {"cpg",
          [&pc](const json& c, const std::string& p) {
              apply_object(c, p,
                           {{"frequency", num(pc.cpg.frequency)},
                            {"target_amplitude",
                             [&pc](const json& a, const std::string& q) {
                                 read_double_list(a, q, pc.cpg.target_amplitude);
                             }},
                            {"coupling_weight", num(pc.cpg.coupling_weight)},
                            {"phase_bias", num(pc.cpg.phase_bias)},
                            {"amplitude_gain", num(pc.cpg.amplitude_gain)},
                            {"torque_limit", num(pc.cpg.torque_limit)},
                            {"clamp_fraction", num(pc.cpg.clamp_fraction)}});
          }},
         {"flow",
          [&pc](const json& f, const std::string& p) {
              apply_object(f, p,
                           {{"dipole_coeff", num(pc.flow.dipole_coeff)},
                            {"decay_exponent", num(pc.flow.decay_exponent)},
                            {"distance_floor", num(pc.flow.distance_floor)},
                            {"propagation_speed", num(pc.flow.propagation_speed)},
                            {"noise_std", num(pc.flow.noise_std)},
                            {"bias_left", num(pc.flow.bias_left)},
                            {"bias_right", num(pc.flow.bias_right)},
                            {"latency", num(pc.flow.latency)},
                            {"pitch_amp", num(pc.flow.pitch_amp)},
                            {"roll_amp", num(pc.flow.roll_amp)},
                            {"euler_noise_std", num(pc.flow.euler_noise_std)}});
          }},
         {"layout",
          [&pc](const json& l, const std::string& p) {
              apply_object(l, p,
                           {{"forward", num(pc.layout.forward)},
                            {"lateral", num(pc.layout.lateral)}});
          }},
         {"guidance", [&pc](const json& g, const std::string& p) {
              apply_object(g, p,
                           {{"lookahead", num(pc.guidance.lookahead)},
                            {"gain", num(pc.guidance.gain)},
                            {"clamp_fraction", num(pc.guidance.clamp_fraction)}});
          }}});
}

void apply_reward(const json& j, const std::string& path, RewardConfig& rc) {
    apply_object(j, path,
                 {{"shape", num(rc.shape)},
                  {"inner", num(rc.inner)},
                  {"outer", num(rc.outer)},
                  {"half_side", num(rc.half_side)}});
}

void apply_fixed_follower(const json& j, const std::string& path, FixedFollowerConfig& fc) {
    apply_object(j, path,
                 {{"lateral",
                   [&fc](const json& a, const std::string& p) {
                       read_double_list(a, p, fc.lateral);
                   }},
                  {"longitudinal",
                   [&fc](const json& a, const std::string& p) {
                       read_double_list(a, p, fc.longitudinal);
                   }},
                  {"duration", num(fc.duration)},
                  {"min_clearance", num(fc.min_clearance)},
                  {"onset_threshold", num(fc.onset_threshold)}});
}

void check_consistency(const SimConfig& cfg) {
    const ProtocolConfig& pc = cfg.imitation.protocol;
    if (pc.body.n_links < 2) throw ConfigError("protocol.body.n_links: need at least 2 links");
    if (pc.cpg.target_amplitude.size() != pc.body.n_links - 1) {
        throw ConfigError("protocol.cpg.target_amplitude: need one entry per joint (" +
                          std::to_string(pc.body.n_links - 1) + ")");
    }
    if (pc.tick_dt <= 0.0) throw ConfigError("protocol.tick_dt: must be positive");
    if (pc.substeps == 0) throw ConfigError("protocol.substeps: must be positive");
    if (pc.max_ticks == 0) throw ConfigError("protocol.max_ticks: must be positive");
    if (pc.head_start_ticks >= pc.max_ticks)
        throw ConfigError("protocol.head_start_ticks: must be below max_ticks");
}

json net_json(const NetConfig& n) {
    return {{"input_dim", n.input_dim},
            {"hidden", n.hidden},
            {"fc", n.fc},
            {"dropout", n.dropout},
            {"output_scale", n.output_scale}};
}

json train_json(const TrainConfig& t) {
    return {{"epochs", t.epochs},
            {"threads", t.threads},
            {"adam",
             {{"lr", t.adam.lr},
              {"beta1", t.adam.beta1},
              {"beta2", t.adam.beta2},
              {"eps", t.adam.eps}}}};
}

json protocol_json(const ProtocolConfig& pc) {
    return {{"tick_dt", pc.tick_dt},
            {"substeps", pc.substeps},
            {"max_ticks", pc.max_ticks},
            {"head_start_ticks", pc.head_start_ticks},
            {"calibration_time", pc.calibration_time},
            {"separation_limit", pc.separation_limit},
            {"lateral_offset", pc.lateral_offset},
            {"start", {{"x", pc.start.x}, {"y", pc.start.y}}},
            {"tank", {{"length", pc.tank.length}, {"width", pc.tank.width}}},
            {"body",
             {{"n_links", pc.body.n_links},
              {"body_length", pc.body.body_length},
              {"link_width", pc.body.link_width},
              {"link_mass", pc.body.link_mass},
              {"drag_tangential", pc.body.drag_tangential},
              {"drag_normal", pc.body.drag_normal},
              {"joint_stiffness", pc.body.joint_stiffness},
              {"joint_damping", pc.body.joint_damping}}},
            {"cpg",
             {{"frequency", pc.cpg.frequency},
              {"target_amplitude", pc.cpg.target_amplitude},
              {"coupling_weight", pc.cpg.coupling_weight},
              {"phase_bias", pc.cpg.phase_bias},
              {"amplitude_gain", pc.cpg.amplitude_gain},
              {"torque_limit", pc.cpg.torque_limit},
              {"clamp_fraction", pc.cpg.clamp_fraction}}},
            {"flow",
             {{"dipole_coeff", pc.flow.dipole_coeff},
              {"decay_exponent", pc.flow.decay_exponent},
              {"distance_floor", pc.flow.distance_floor},
              {"propagation_speed", pc.flow.propagation_speed},
              {"noise_std", pc.flow.noise_std},
              {"bias_left", pc.flow.bias_left},
              {"bias_right", pc.flow.bias_right},
              {"latency", pc.flow.latency},
              {"pitch_amp", pc.flow.pitch_amp},
              {"roll_amp", pc.flow.roll_amp},
              {"euler_noise_std", pc.flow.euler_noise_std}}},
            {"layout", {{"forward", pc.layout.forward}, {"lateral", pc.layout.lateral}}},
            {"guidance",
             {{"lookahead", pc.guidance.lookahead},
              {"gain", pc.guidance.gain},
              {"clamp_fraction", pc.guidance.clamp_fraction}}}};
}

} // namespace

SimConfig parse_config(const std::string& json_text) {
    const json root = json::parse(json_text, nullptr, false);
    if (root.is_discarded()) throw ConfigError("config is not valid json");

    SimConfig cfg;
    ImitationConfig& im = cfg.imitation;
    apply_object(
        root, "config",
        {{"seed",
          [&im](const json& j, const std::string& p) { read_seed(j, p, im.seed); }},
         {"bc_rollouts", count(im.bc_rollouts)},
         {"dagger_iterations", count(im.dagger_iterations)},
         {"dagger_rollouts", count(im.dagger_rollouts)},
         {"eval_rollouts", count(im.eval_rollouts)},
         {"net",
          [&im](const json& j, const std::string& p) { apply_net(j, p, im.net); }},
         {"train",
          [&im](const json& j, const std::string& p) { apply_train(j, p, im.train); }},
         {"protocol",
          [&im](const json& j, const std::string& p) { apply_protocol(j, p, im.protocol); }},
         {"reward",
          [&im](const json& j, const std::string& p) { apply_reward(j, p, im.reward); }},
         {"fixed_follower", [&cfg](const json& j, const std::string& p) {
              apply_fixed_follower(j, p, cfg.fixed_follower);
          }}});

    cfg.fixed_follower.protocol = cfg.imitation.protocol;
    check_consistency(cfg);
    return cfg;
}

SimConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string config_to_json(const SimConfig& cfg) {
    const ImitationConfig& im = cfg.imitation;
    const FixedFollowerConfig& fc = cfg.fixed_follower;
    const json root = {{"seed", im.seed},
                       {"bc_rollouts", im.bc_rollouts},
                       {"dagger_iterations", im.dagger_iterations},
                       {"dagger_rollouts", im.dagger_rollouts},
                       {"eval_rollouts", im.eval_rollouts},
                       {"net", net_json(im.net)},
                       {"train", train_json(im.train)},
                       {"protocol", protocol_json(im.protocol)},
                       {"reward",
                        {{"shape", im.reward.shape},
                         {"inner", im.reward.inner},
                         {"outer", im.reward.outer},
                         {"half_side", im.reward.half_side}}},
                       {"fixed_follower",
                        {{"lateral", fc.lateral},
                         {"longitudinal", fc.longitudinal},
                         {"duration", fc.duration},
                         {"min_clearance", fc.min_clearance},
                         {"onset_threshold", fc.onset_threshold}}}};
    return root.dump(2) + "\n";
}

} // namespace swimfollow
