#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "swimfollow/metrics.hpp"
#include "swimfollow/rollout.hpp"
#include "swimfollow/train.hpp"

namespace swimfollow {

/// Everything one imitation run needs: episode protocol, network, trainer,
/// phase sizes and the master seed.
struct ImitationConfig {
    std::size_t bc_rollouts = 12;
    std::size_t dagger_iterations = 3;
    std::size_t dagger_rollouts = 8;  // per iteration
    std::size_t eval_rollouts = 20;   // per policy
    NetConfig net;
    TrainConfig train;
    ProtocolConfig protocol;
    RewardConfig reward;
    std::uint64_t seed = 1;
};

/// Deterministic per-phase episode seeds drawn from the master seed.
std::vector<std::uint64_t> phase_seeds(std::uint64_t master, const std::string& phase,
                                       std::size_t count, std::size_t index = 0);

/// Episode i of a phase runs on the left lane when i is even.
inline Side phase_side(std::size_t i) { return i % 2 == 0 ? Side::left : Side::right; }

/// One rollout per seed, sides alternating.
std::vector<RolloutResult> collect_phase(const ProtocolConfig& cfg,
                                         const std::vector<std::uint64_t>& seeds, Pilot pilot,
                                         const PolicyCheckpoint* policy);

/// Sensor frames and expert labels of every tick, in network input order.
Sequence sequence_from_rollout(const RolloutResult& rollout);

void append_rollouts(Dataset& dataset, const std::vector<RolloutResult>& rollouts);

struct ImitationResult {
    TrainResult bc;                          // trained on expert demonstrations
    std::vector<TrainResult> dagger;         // one per aggregation round
    Dataset dataset;                         // final aggregate
    std::vector<RolloutResult> bc_rollouts;
    std::vector<std::vector<RolloutResult>> dagger_rollouts;

    const PolicyCheckpoint& final_policy() const {
        return dagger.empty() ? bc.checkpoint : dagger.back().checkpoint;
    }
};

/// Behavior cloning followed by DAgger rounds: collect with the latest
/// policy, relabel with the expert, retrain from scratch on the aggregate.
ImitationResult run_imitation(const ImitationConfig& cfg);

struct EvalCase {
    std::string name;
    Pilot pilot = Pilot::none;
    const PolicyCheckpoint* policy = nullptr;  // required for Pilot::policy
};

struct EvalResult {
    std::string name;
    std::vector<Metrics> metrics;  // one per rollout, episode order
    MetricsSummary summary;
    std::vector<RolloutResult> rollouts;
};

/// Runs every case on the same (seed, side) episode list for a paired
/// comparison.
std::vector<EvalResult> evaluate_policies(const ImitationConfig& cfg,
                                          const std::vector<EvalCase>& cases);

} // namespace swimfollow
