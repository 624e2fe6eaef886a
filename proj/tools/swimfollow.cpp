#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "swimfollow/csv.hpp"
#include "swimfollow/errors.hpp"
#include "swimfollow/pipeline.hpp"

using namespace swimfollow;

namespace {

struct CommonFlags {
    std::string config_path;
    std::string out_dir = "run";
    long long seed = -1;
    long long threads = -1;
    long long epochs = -1;
    long long rollouts = -1;
};

void add_common(CLI::App* sub, CommonFlags& f, bool with_rollouts = true) {
    sub->add_option("--config", f.config_path, "json config file (defaults when omitted)");
    sub->add_option("--out", f.out_dir, "run directory");
    sub->add_option("--seed", f.seed, "master seed override")->check(CLI::NonNegativeNumber);
    sub->add_option("--threads", f.threads, "training worker threads")
        ->check(CLI::PositiveNumber);
    sub->add_option("--epochs", f.epochs, "training epochs override")
        ->check(CLI::PositiveNumber);
    if (with_rollouts) {
        sub->add_option("--rollouts", f.rollouts, "rollout count override for this command")
            ->check(CLI::PositiveNumber);
    }
}

/// Effective config: --config file, else the run's manifest, else defaults.
SimConfig effective_config(const CommonFlags& f, bool prefer_manifest) {
    SimConfig cfg;
    if (!f.config_path.empty()) {
        cfg = load_config(f.config_path);
    } else if (prefer_manifest && std::filesystem::exists(
                                      std::filesystem::path(f.out_dir) / "manifest.json")) {
        cfg = load_manifest(f.out_dir).config;
    }
    if (f.seed >= 0) cfg.imitation.seed = static_cast<std::uint64_t>(f.seed);
    if (f.threads > 0) cfg.imitation.train.threads = static_cast<std::size_t>(f.threads);
    if (f.epochs > 0) cfg.imitation.train.epochs = static_cast<std::size_t>(f.epochs);
    return cfg;
}

void print_stage(const StageRecord& stage, const std::filesystem::path& run_dir) {
    const CsvTable t = read_csv(run_dir / stage.history);
    const int vc = t.column("val_loss");
    double best = 0.0;
    std::size_t best_epoch = 0;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const double v = t.num(r, vc);
        if (r == 0 || v < best) {
            best = v;
            best_epoch = r;
        }
    }
    std::printf("%s: %zu rollouts, best epoch %zu, validation loss %.6f\n",
                stage.name.c_str(), stage.rollouts.size(), best_epoch, best);
}

int run_bc(const CommonFlags& f) {
    SimConfig cfg = effective_config(f, false);
    if (f.rollouts > 0) cfg.imitation.bc_rollouts = static_cast<std::size_t>(f.rollouts);
    const RunManifest manifest = cmd_bc(cfg, f.out_dir);
    print_stage(manifest.stages.back(), f.out_dir);
    std::printf("manifest: %s\n", (std::filesystem::path(f.out_dir) / "manifest.json").c_str());
    return 0;
}

int run_dagger(const CommonFlags& f) {
    SimConfig cfg = effective_config(f, true);
    if (f.rollouts > 0) cfg.imitation.dagger_rollouts = static_cast<std::size_t>(f.rollouts);
    const std::size_t before = load_manifest(f.out_dir).dagger_stages();
    const RunManifest manifest = cmd_dagger(cfg, f.out_dir);
    if (manifest.dagger_stages() == before) {
        std::printf("all %zu dagger iterations already done\n", before);
        return 0;
    }
    for (const StageRecord& stage : manifest.stages) {
        if (stage.name != "bc") print_stage(stage, f.out_dir);
    }
    return 0;
}

int run_eval(const CommonFlags& f, const std::vector<std::string>& policies) {
    SimConfig cfg = effective_config(f, true);
    if (f.rollouts > 0) cfg.imitation.eval_rollouts = static_cast<std::size_t>(f.rollouts);
    const std::vector<EvalResult> results = cmd_eval(cfg, f.out_dir, policies);
    std::printf("%-12s %9s %8s %9s %8s %8s %8s\n", "policy", "episodes", "timeout",
                "separated", "contact", "reward", "mae");
    for (const EvalResult& er : results) {
        std::printf("%-12s %9zu %8zu %9zu %8zu %8.1f %8.4f\n", er.name.c_str(),
                    er.metrics.size(), er.summary.n_timeout, er.summary.n_separated,
                    er.summary.n_contact, er.summary.reward_all.median,
                    er.summary.mae_all.median);
    }
    std::printf("tables and plots under %s\n", f.out_dir.c_str());
    return 0;
}

int run_fixed_follower(const CommonFlags& f) {
    const SimConfig cfg = effective_config(f, false);
    const FixedFollowerResult result = cmd_fixed_follower(cfg, f.out_dir);

    double stag = 0.0, inline_max = 0.0;
    for (const FixedFollowerCell& c : result.cells) {
        if (!c.valid) continue;
        if (c.lateral > 0.0 && c.longitudinal == 0.0) stag = std::max(stag, c.rms);
        if (c.lateral == 0.0) inline_max = std::max(inline_max, c.rms);
    }
    std::printf("%zu cells, %zu ticks each\n", result.cells.size(), result.ticks);
    std::printf("staggered rms %.2f Pa vs in-line max %.2f Pa: %s\n", stag, inline_max,
                stag > 2.0 * inline_max ? "staggered dominates" : "ordering violated");
    std::printf("tables and plots under %s\n", f.out_dir.c_str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"leader-follower swimming simulator and imitation pipeline"};
    app.require_subcommand(1);

    CommonFlags bc_flags, dagger_flags, eval_flags, ff_flags, print_flags;
    std::vector<std::string> eval_policies;

    CLI::App* bc = app.add_subcommand("bc", "collect expert demonstrations and train policy zero");
    add_common(bc, bc_flags);
    CLI::App* dagger = app.add_subcommand("dagger", "run the remaining dagger iterations");
    add_common(dagger, dagger_flags);
    CLI::App* eval = app.add_subcommand("eval", "paired evaluation of policies on fresh episodes");
    add_common(eval, eval_flags);
    eval->add_option("policies", eval_policies,
                     "expert, none, a stage name, or a checkpoint path");
    CLI::App* ff = app.add_subcommand("fixed-follower", "pressure study with the follower held rigid");
    add_common(ff, ff_flags, false);
    CLI::App* print_cfg = app.add_subcommand("print-config", "dump the effective config as json");
    add_common(print_cfg, print_flags, false);

    try {
        app.parse(argc, argv);
        if (bc->parsed()) return run_bc(bc_flags);
        if (dagger->parsed()) return run_dagger(dagger_flags);
        if (eval->parsed()) return run_eval(eval_flags, eval_policies);
        if (ff->parsed()) return run_fixed_follower(ff_flags);
        if (print_cfg->parsed()) {
            std::fputs(config_to_json(effective_config(print_flags, false)).c_str(), stdout);
            return 0;
        }
        return 2;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const IoError& e) {
        std::fprintf(stderr, "io error: %s\n", e.what());
        return 3;
    } catch (const NumericError& e) {
        std::fprintf(stderr, "numeric error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
}
