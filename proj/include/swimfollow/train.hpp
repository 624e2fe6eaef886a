#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "swimfollow/checkpoint.hpp"
#include "swimfollow/net.hpp"

namespace swimfollow {

/// One recorded rollout: raw sensor frames and the expert steering per tick.
struct Sequence {
    std::vector<double> inputs;  // steps * input_dim, raw sensor units
    std::vector<double> labels;  // steps
    std::size_t steps = 0;
};

struct Dataset {
    std::size_t input_dim = 8;
    std::vector<Sequence> sequences;

    std::size_t total_steps() const;
};

struct SplitIndices {
    std::vector<std::size_t> train;
    std::vector<std::size_t> val;
};

/// Shuffled 90/10 split by whole rollouts; n_val = max(1, round(0.1 n)).
SplitIndices split_dataset(std::size_t n, std::uint64_t seed);

/// Channel means and stddevs over the listed sequences plus the label stddev.
/// Channels (or labels) with vanishing spread get stddev 1 and a flag.
NormStats fit_norm_stats(const Dataset& data, const std::vector<std::size_t>& indices);

struct TrainConfig {
    std::size_t epochs = 500;
    AdamConfig adam;
    std::uint64_t seed = 1;
    std::size_t threads = 1;
};

struct TrainResult {
    PolicyCheckpoint checkpoint;        // weights from the best validation epoch
    std::vector<double> train_loss;     // per epoch, normalized mse
    std::vector<double> val_loss;       // per epoch
    std::size_t best_epoch = 0;
    SplitIndices split;
};

/// Full-batch behavior cloning on the dataset. Deterministic for a fixed
/// seed regardless of the thread count.
TrainResult train_policy(const Dataset& data, const NetConfig& net_config,
                         const TrainConfig& train_config);

} // namespace swimfollow
