#include "swimfollow/protocol.hpp"

#include "swimfollow/errors.hpp"
#include "swimfollow/rng.hpp"

namespace swimfollow {

std::vector<std::uint64_t> phase_seeds(std::uint64_t master, const std::string& phase,
                                       std::size_t count, std::size_t index) {
    Rng rng = Rng::substream(master, phase, index);
    std::vector<std::uint64_t> seeds(count);
    for (std::uint64_t& s : seeds) s = rng.next_u64();
    return seeds;
}

std::vector<RolloutResult> collect_phase(const ProtocolConfig& cfg,
                                         const std::vector<std::uint64_t>& seeds, Pilot pilot,
                                         const PolicyCheckpoint* policy) {
    std::vector<RolloutResult> rollouts;
    rollouts.reserve(seeds.size());
    for (std::size_t i = 0; i < seeds.size(); ++i) {
        rollouts.push_back(run_rollout(cfg, seeds[i], phase_side(i), pilot, policy));
    }
    return rollouts;
}

Sequence sequence_from_rollout(const RolloutResult& rollout) {
    Sequence seq;
    seq.steps = rollout.ticks.size();
    seq.inputs.reserve(seq.steps * 8);
    seq.labels.reserve(seq.steps);
    for (const TickRecord& t : rollout.ticks) {
        const std::array<double, 8> x = frame_to_input(t.frame);
        seq.inputs.insert(seq.inputs.end(), x.begin(), x.end());
        seq.labels.push_back(t.expert_sigma);
    }
    return seq;
}

void append_rollouts(Dataset& dataset, const std::vector<RolloutResult>& rollouts) {
    for (const RolloutResult& r : rollouts) {
        dataset.sequences.push_back(sequence_from_rollout(r));
    }
}

ImitationResult run_imitation(const ImitationConfig& cfg) {
    if (cfg.bc_rollouts < 2) throw ConfigError("behavior cloning needs at least two rollouts");

    ImitationResult result;
    result.dataset.input_dim = cfg.net.input_dim;

    result.bc_rollouts = collect_phase(
        cfg.protocol, phase_seeds(cfg.seed, "bc-episodes", cfg.bc_rollouts), Pilot::expert,
        nullptr);
    append_rollouts(result.dataset, result.bc_rollouts);

    TrainConfig tc = cfg.train;
    tc.seed = phase_seeds(cfg.seed, "train-seed", 1, 0)[0];
    result.bc = train_policy(result.dataset, cfg.net, tc);

    const PolicyCheckpoint* pilot = &result.bc.checkpoint;
    for (std::size_t iter = 0; iter < cfg.dagger_iterations; ++iter) {
        const std::vector<RolloutResult> fresh = collect_phase(
            cfg.protocol, phase_seeds(cfg.seed, "dagger-episodes", cfg.dagger_rollouts, iter),
            Pilot::policy, pilot);
        result.dagger_rollouts.push_back(fresh);
        append_rollouts(result.dataset, fresh);

        tc.seed = phase_seeds(cfg.seed, "train-seed", 1, iter + 1)[0];
        result.dagger.push_back(train_policy(result.dataset, cfg.net, tc));
        pilot = &result.dagger.back().checkpoint;
    }
    return result;
}

std::vector<EvalResult> evaluate_policies(const ImitationConfig& cfg,
                                          const std::vector<EvalCase>& cases) {
    const std::vector<std::uint64_t> seeds =
        phase_seeds(cfg.seed, "eval-episodes", cfg.eval_rollouts);
    std::vector<EvalResult> results;
    results.reserve(cases.size());
    for (const EvalCase& c : cases) {
        if (c.pilot == Pilot::policy && c.policy == nullptr) {
            throw ConfigError("evaluation case '" + c.name + "' needs a checkpoint");
        }
        EvalResult er;
        er.name = c.name;
        er.rollouts = collect_phase(cfg.protocol, seeds, c.pilot, c.policy);
        er.metrics.reserve(er.rollouts.size());
        for (const RolloutResult& r : er.rollouts) {
            er.metrics.push_back(
                rollout_metrics(r, cfg.reward, cfg.protocol.head_start_ticks));
        }
        er.summary = summarize(er.metrics);
        results.push_back(std::move(er));
    }
    return results;
}

} // namespace swimfollow
