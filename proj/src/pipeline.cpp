#include "swimfollow/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "swimfollow/checksum.hpp"
#include "swimfollow/csv.hpp"
#include "swimfollow/errors.hpp"
#include "swimfollow/svg.hpp"

namespace swimfollow {
namespace {

using nlohmann::json;

std::string iso_now() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string stage_dir_name(const std::string& stage) { return "rollouts/" + stage; }

std::string rollout_rel(const std::string& stage, std::size_t i) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%03zu", i);
    return stage_dir_name(stage) + "/rollout_" + buf + ".csv";
}

void record_file(RunManifest& manifest, const std::filesystem::path& run_dir,
                 const std::string& rel) {
    manifest.checksums[rel] = hex64(fnv1a64_file(run_dir / rel));
}

void write_history_csv(const TrainResult& result, const std::filesystem::path& file) {
    CsvWriter writer(file, {"epoch", "train_loss", "val_loss"});
    for (std::size_t e = 0; e < result.train_loss.size(); ++e) {
        writer.row({static_cast<double>(e), result.train_loss[e], result.val_loss[e]});
    }
}

/// Stage artifacts for one collection + training round.
StageRecord write_stage(const std::filesystem::path& run_dir, RunManifest& manifest,
                        const std::string& name, const std::vector<RolloutResult>& rollouts,
                        const TrainResult& trained, const SimConfig& cfg) {
    StageRecord stage;
    stage.name = name;
    for (std::size_t i = 0; i < rollouts.size(); ++i) {
        const std::string rel = rollout_rel(name, i);
        write_rollout_csv(rollouts[i], cfg.imitation.protocol.tick_dt, cfg.imitation.reward,
                          run_dir / rel);
        stage.rollouts.push_back(rel);
        record_file(manifest, run_dir, rel);
    }
    stage.checkpoint = "checkpoints/" + name + ".ckpt";
    save_checkpoint((run_dir / stage.checkpoint).string(), trained.checkpoint);
    record_file(manifest, run_dir, stage.checkpoint);
    stage.history = "metrics/" + name + "_history.csv";
    write_history_csv(trained, run_dir / stage.history);
    record_file(manifest, run_dir, stage.history);
    return stage;
}

Sequence sequence_from_log(const std::filesystem::path& file) {
    const CsvTable t = read_csv(file);
    const char* channels[] = {"p_left_pa", "p_right_pa", "yaw_rad",  "pitch_rad",
                              "roll_rad",  "motor0",     "motor1",   "motor2"};
    int cols[8];
    for (int c = 0; c < 8; ++c) {
        cols[c] = t.column(channels[c]);
        if (cols[c] < 0)
            throw IoError("rollout log missing column " + std::string(channels[c]) + ": " +
                          file.string());
    }
    const int label_col = t.column("expert_sigma");
    if (label_col < 0) throw IoError("rollout log missing column expert_sigma: " + file.string());

    Sequence seq;
    seq.steps = t.rows.size();
    seq.inputs.reserve(seq.steps * 8);
    seq.labels.reserve(seq.steps);
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        for (int c = 0; c < 8; ++c) seq.inputs.push_back(t.num(r, cols[c]));
        seq.labels.push_back(t.num(r, label_col));
    }
    return seq;
}

json stage_json(const StageRecord& s) {
    return {{"name", s.name},
            {"rollouts", s.rollouts},
            {"checkpoint", s.checkpoint},
            {"history", s.history}};
}

StageRecord stage_from_json(const json& j) {
    if (!j.is_object() || !j.contains("name") || !j.contains("rollouts") ||
        !j.contains("checkpoint") || !j.contains("history")) {
        throw IoError("manifest stage entry is malformed");
    }
    StageRecord s;
    s.name = j["name"].get<std::string>();
    for (const auto& r : j["rollouts"]) s.rollouts.push_back(r.get<std::string>());
    s.checkpoint = j["checkpoint"].get<std::string>();
    s.history = j["history"].get<std::string>();
    return s;
}

std::string policy_label(const std::string& spec) {
    const std::filesystem::path p(spec);
    return p.has_extension() ? p.stem().string() : spec;
}

void write_eval_tables(const std::vector<EvalResult>& results,
                       const std::vector<std::uint64_t>& seeds,
                       const std::filesystem::path& run_dir) {
    CsvWriter rows(run_dir / "metrics/eval_rollouts.csv",
                   {"policy", "episode", "seed", "side", "termination", "ticks", "mae",
                    "cumulative_reward"});
    for (const EvalResult& er : results) {
        for (std::size_t i = 0; i < er.metrics.size(); ++i) {
            const Metrics& m = er.metrics[i];
            rows.row_raw({er.name, std::to_string(i), std::to_string(seeds[i]),
                          phase_side(i) == Side::left ? "left" : "right",
                          to_string(m.cause), std::to_string(m.ticks), format_double(m.mae),
                          format_double(m.cumulative_reward)});
        }
    }
    rows.close();

    CsvWriter table(run_dir / "metrics/eval_summary.csv",
                    {"policy", "episodes", "timeout", "separated", "contact", "reward_q25",
                     "reward_median", "reward_q75", "mae_q25", "mae_median", "mae_q75"});
    for (const EvalResult& er : results) {
        const MetricsSummary& s = er.summary;
        table.row_raw({er.name, std::to_string(er.metrics.size()),
                       std::to_string(s.n_timeout), std::to_string(s.n_separated),
                       std::to_string(s.n_contact), format_double(s.reward_all.q25),
                       format_double(s.reward_all.median), format_double(s.reward_all.q75),
                       format_double(s.mae_all.q25), format_double(s.mae_all.median),
                       format_double(s.mae_all.q75)});
    }
    table.close();
}

void write_trajectory_svg(const EvalResult& er, const std::filesystem::path& file) {
    std::vector<Axes> panels;
    const std::size_t n = std::min<std::size_t>(er.rollouts.size(), 4);
    for (std::size_t i = 0; i < n; ++i) {
        const RolloutResult& rr = er.rollouts[i];
        Axes ax;
        ax.title = er.name + " episode " + std::to_string(i) + " (" + to_string(rr.cause) + ")";
        ax.xlabel = "x (mm)";
        ax.ylabel = "y (mm)";
        ax.equal = true;
        Series path{"leader path", "#bbbbbb", {}, {}, 1.0};
        for (const auto& smp : rr.leader_path.samples) {
            path.x.push_back(smp.p.x);
            path.y.push_back(smp.p.y);
        }
        Series leader{"leader", "#1f77b4", {}, {}, 1.5};
        Series follower{"follower", "#d62728", {}, {}, 1.5};
        for (const TickRecord& t : rr.ticks) {
            leader.x.push_back(t.leader_center.x);
            leader.y.push_back(t.leader_center.y);
            follower.x.push_back(t.follower_nose.x);
            follower.y.push_back(t.follower_nose.y);
        }
        ax.series = {path, leader, follower};
        panels.push_back(std::move(ax));
    }
    write_svg_panels(file, panels, 2, 560.0, 360.0);
}

void write_learning_curves_svg(const RunManifest& manifest,
                               const std::filesystem::path& run_dir,
                               const std::filesystem::path& file) {
    std::vector<Axes> panels;
    for (const StageRecord& stage : manifest.stages) {
        const CsvTable t = read_csv(run_dir / stage.history);
        const int ec = t.column("epoch"), tc = t.column("train_loss"), vc = t.column("val_loss");
        if (ec < 0 || tc < 0 || vc < 0) throw IoError("history csv malformed: " + stage.history);
        Axes ax;
        ax.title = stage.name;
        ax.xlabel = "epoch";
        ax.ylabel = "normalized mse";
        Series train{"train", "#1f77b4", {}, {}, 1.2};
        Series val{"validation", "#d62728", {}, {}, 1.2};
        for (std::size_t r = 0; r < t.rows.size(); ++r) {
            train.x.push_back(t.num(r, ec));
            train.y.push_back(t.num(r, tc));
            val.x.push_back(t.num(r, ec));
            val.y.push_back(t.num(r, vc));
        }
        ax.series = {train, val};
        panels.push_back(std::move(ax));
    }
    if (panels.empty()) return;
    write_svg_panels(file, panels, 2, 480.0, 320.0);
}

} // namespace

const StageRecord* RunManifest::find_stage(const std::string& name) const {
    for (const StageRecord& s : stages)
        if (s.name == name) return &s;
    return nullptr;
}

std::size_t RunManifest::dagger_stages() const {
    std::size_t n = 0;
    while (find_stage("dagger-" + std::to_string(n + 1)) != nullptr) ++n;
    return n;
}

void save_manifest(const std::filesystem::path& run_dir, const RunManifest& manifest) {
    json stages = json::array();
    for (const StageRecord& s : manifest.stages) stages.push_back(stage_json(s));
    const json root = {{"tool_version", manifest.tool_version},
                       {"created", manifest.created},
                       {"updated", manifest.updated},
                       {"config", json::parse(config_to_json(manifest.config))},
                       {"stages", stages},
                       {"checksums", manifest.checksums}};
    std::error_code ec;
    std::filesystem::create_directories(run_dir, ec);
    const std::filesystem::path file = run_dir / "manifest.json";
    std::ofstream out(file);
    if (!out) throw IoError("cannot write manifest: " + file.string());
    out << root.dump(2) << "\n";
}

RunManifest load_manifest(const std::filesystem::path& run_dir) {
    const std::filesystem::path file = run_dir / "manifest.json";
    std::ifstream in(file);
    if (!in) throw IoError("no manifest in " + run_dir.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    const json root = json::parse(ss.str(), nullptr, false);
    if (root.is_discarded() || !root.is_object()) throw IoError("manifest is not valid json");
    for (const char* key : {"tool_version", "created", "updated", "config", "stages",
                            "checksums"}) {
        if (!root.contains(key)) throw IoError("manifest missing field: " + std::string(key));
    }

    RunManifest m;
    m.tool_version = root["tool_version"].get<std::string>();
    m.created = root["created"].get<std::string>();
    m.updated = root["updated"].get<std::string>();
    m.config = parse_config(root["config"].dump());
    for (const auto& s : root["stages"]) m.stages.push_back(stage_from_json(s));
    for (const auto& [rel, hash] : root["checksums"].items()) {
        m.checksums[rel] = hash.get<std::string>();
    }

    for (const auto& [rel, hash] : m.checksums) {
        const std::filesystem::path p = run_dir / rel;
        if (!std::filesystem::exists(p)) throw IoError("manifest references missing file: " + rel);
        if (hex64(fnv1a64_file(p)) != hash)
            throw IoError("checksum mismatch for " + rel + "; run directory is corrupt");
    }
    return m;
}

Dataset dataset_from_manifest(const std::filesystem::path& run_dir,
                              const RunManifest& manifest) {
    Dataset data;
    data.input_dim = manifest.config.imitation.net.input_dim;
    for (const StageRecord& stage : manifest.stages) {
        for (const std::string& rel : stage.rollouts) {
            data.sequences.push_back(sequence_from_log(run_dir / rel));
        }
    }
    return data;
}

RunManifest cmd_bc(const SimConfig& cfg, const std::filesystem::path& run_dir) {
    const ImitationConfig& im = cfg.imitation;
    if (im.bc_rollouts < 2) throw ConfigError("behavior cloning needs at least two rollouts");
    std::error_code ec;
    std::filesystem::create_directories(run_dir, ec);

    RunManifest manifest;
    manifest.created = iso_now();
    manifest.updated = manifest.created;
    manifest.config = cfg;

    const std::vector<RolloutResult> demos = collect_phase(
        im.protocol, phase_seeds(im.seed, "bc-episodes", im.bc_rollouts), Pilot::expert,
        nullptr);
    Dataset data;
    data.input_dim = im.net.input_dim;
    append_rollouts(data, demos);

    TrainConfig tc = im.train;
    tc.seed = phase_seeds(im.seed, "train-seed", 1, 0)[0];
    const TrainResult trained = train_policy(data, im.net, tc);

    manifest.stages.push_back(write_stage(run_dir, manifest, "bc", demos, trained, cfg));
    save_manifest(run_dir, manifest);
    return manifest;
}

RunManifest cmd_dagger(const SimConfig& cfg, const std::filesystem::path& run_dir) {
    RunManifest manifest = load_manifest(run_dir);
    const ImitationConfig& im = cfg.imitation;
    const StageRecord* bc = manifest.find_stage("bc");
    if (bc == nullptr) throw ConfigError("run has no bc stage; run bc first");

    std::size_t done = manifest.dagger_stages();
    if (done >= im.dagger_iterations) return manifest;  // nothing left to run

    Dataset data = dataset_from_manifest(run_dir, manifest);
    const std::string last_name = done == 0 ? "bc" : "dagger-" + std::to_string(done);
    PolicyCheckpoint pilot =
        load_checkpoint((run_dir / manifest.find_stage(last_name)->checkpoint).string());

    for (std::size_t iter = done; iter < im.dagger_iterations; ++iter) {
        const std::vector<RolloutResult> fresh = collect_phase(
            im.protocol, phase_seeds(im.seed, "dagger-episodes", im.dagger_rollouts, iter),
            Pilot::policy, &pilot);
        append_rollouts(data, fresh);

        TrainConfig tc = im.train;
        tc.seed = phase_seeds(im.seed, "train-seed", 1, iter + 1)[0];
        const TrainResult trained = train_policy(data, im.net, tc);

        const std::string name = "dagger-" + std::to_string(iter + 1);
        manifest.stages.push_back(write_stage(run_dir, manifest, name, fresh, trained, cfg));
        pilot = trained.checkpoint;
    }
    manifest.updated = iso_now();
    save_manifest(run_dir, manifest);
    return manifest;
}

std::vector<EvalResult> cmd_eval(const SimConfig& cfg, const std::filesystem::path& run_dir,
                                 std::vector<std::string> policies) {
    const RunManifest manifest = load_manifest(run_dir);
    if (policies.empty()) {
        policies = {"expert", "none"};
        if (manifest.find_stage("bc")) policies.push_back("bc");
        const std::size_t k = manifest.dagger_stages();
        if (k > 0) policies.push_back("dagger-" + std::to_string(k));
    }

    std::vector<EvalCase> cases;
    std::vector<PolicyCheckpoint> checkpoints;
    checkpoints.reserve(policies.size());
    for (const std::string& spec : policies) {
        EvalCase c;
        c.name = policy_label(spec);
        if (spec == "expert") {
            c.pilot = Pilot::expert;
        } else if (spec == "none") {
            c.pilot = Pilot::none;
        } else {
            std::filesystem::path p;
            if (const StageRecord* stage = manifest.find_stage(spec)) {
                p = run_dir / stage->checkpoint;
            } else if (std::filesystem::exists(spec)) {
                p = spec;
            } else if (std::filesystem::exists(run_dir / spec)) {
                p = run_dir / spec;
            } else {
                throw ConfigError("unknown policy: " + spec +
                                  " (use expert, none, a stage name, or a checkpoint path)");
            }
            c.pilot = Pilot::policy;
            checkpoints.push_back(load_checkpoint(p.string()));
            c.policy = &checkpoints.back();
        }
        cases.push_back(c);
    }
    // vector reallocation would invalidate the checkpoint pointers
    std::size_t ci = 0;
    for (EvalCase& c : cases) {
        if (c.pilot == Pilot::policy) c.policy = &checkpoints[ci++];
    }

    const std::vector<EvalResult> results = evaluate_policies(cfg.imitation, cases);
    write_eval_tables(results, phase_seeds(cfg.imitation.seed, "eval-episodes",
                                           cfg.imitation.eval_rollouts),
                      run_dir);
    for (const EvalResult& er : results) {
        write_trajectory_svg(er, run_dir / ("plots/trajectories_" + er.name + ".svg"));
    }
    write_learning_curves_svg(manifest, run_dir, run_dir / "plots/learning_curves.svg");
    return results;
}

FixedFollowerResult cmd_fixed_follower(const SimConfig& cfg,
                                       const std::filesystem::path& out_dir) {
    FixedFollowerConfig fc = cfg.fixed_follower;
    fc.protocol = cfg.imitation.protocol;
    const FixedFollowerResult result = run_fixed_follower(fc);

    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    write_fixed_follower_summary_csv(result, out_dir / "fixed_follower_summary.csv");
    write_fixed_follower_traces_csv(result, fc.protocol.tick_dt,
                                    out_dir / "fixed_follower_traces.csv");

    std::vector<Axes> panels;
    for (const FixedFollowerCell& cell : result.cells) {
        Axes ax;
        char title[96];
        std::snprintf(title, sizeof(title), "lat %g mm, lon %g mm%s", cell.lateral,
                      cell.longitudinal, cell.valid ? "" : " (overlap)");
        ax.title = title;
        ax.xlabel = "t (s)";
        ax.ylabel = "p (Pa)";
        Series pl{"left", "#1f77b4", {}, {}, 1.0};
        Series pr{"right", "#d62728", {}, {}, 1.0};
        for (std::size_t k = 0; k < cell.p_left.size(); ++k) {
            pl.x.push_back(static_cast<double>(k) * fc.protocol.tick_dt);
            pl.y.push_back(cell.p_left[k]);
            pr.x.push_back(static_cast<double>(k) * fc.protocol.tick_dt);
            pr.y.push_back(cell.p_right[k]);
        }
        ax.series = {pl, pr};
        panels.push_back(std::move(ax));
    }

    std::vector<Axes> rms_panel(1);
    rms_panel[0].title = "pressure rms by placement";
    rms_panel[0].xlabel = "longitudinal offset (mm)";
    rms_panel[0].ylabel = "rms (Pa)";
    for (double lat : fc.lateral) {
        Series s;
        char label[48];
        std::snprintf(label, sizeof(label), "lateral %g mm", lat);
        s.label = label;
        for (const FixedFollowerCell& cell : result.cells) {
            if (cell.lateral == lat && cell.valid) {
                s.x.push_back(cell.longitudinal);
                s.y.push_back(cell.rms);
            }
        }
        rms_panel[0].series.push_back(std::move(s));
    }

    write_svg_panels(out_dir / "fixed_follower_traces.svg", panels,
                     cfg.fixed_follower.longitudinal.size(), 360.0, 260.0);
    write_svg_panels(out_dir / "fixed_follower_rms.svg", rms_panel, 1);
    return result;
}

} // namespace swimfollow
