#include "swimfollow/train.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <thread>

#include "swimfollow/errors.hpp"
#include "swimfollow/kernels.hpp"
#include "swimfollow/rng.hpp"

namespace swimfollow {

std::size_t Dataset::total_steps() const {
    std::size_t n = 0;
    for (const Sequence& s : sequences) n += s.steps;
    return n;
}

SplitIndices split_dataset(std::size_t n, std::uint64_t seed) {
    if (n < 2) throw ConfigError("need at least two rollouts to split");
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    Rng rng = Rng::substream(seed, "split");
    for (std::size_t i = n - 1; i > 0; --i) {
        const std::size_t j = rng.uniform_index(i + 1);
        std::swap(order[i], order[j]);
    }
    const auto n_val = static_cast<std::size_t>(
        std::max(1.0, std::round(0.1 * static_cast<double>(n))));
    SplitIndices split;
    split.val.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_val));
    split.train.assign(order.begin() + static_cast<std::ptrdiff_t>(n_val), order.end());
    std::sort(split.val.begin(), split.val.end());
    std::sort(split.train.begin(), split.train.end());
    return split;
}

NormStats fit_norm_stats(const Dataset& data, const std::vector<std::size_t>& indices) {
    const std::size_t d = data.input_dim;
    NormStats ns;
    ns.mean.assign(d, 0.0);
    ns.stddev.assign(d, 0.0);
    ns.degenerate.assign(d, 0);

    std::size_t count = 0;
    double label_sum = 0.0;
    for (std::size_t idx : indices) {
        const Sequence& s = data.sequences[idx];
        for (std::size_t t = 0; t < s.steps; ++t) {
            for (std::size_t j = 0; j < d; ++j) ns.mean[j] += s.inputs[t * d + j];
            label_sum += s.labels[t];
        }
        count += s.steps;
    }
    if (count == 0) throw ConfigError("cannot fit normalization on an empty split");
    for (std::size_t j = 0; j < d; ++j) ns.mean[j] /= static_cast<double>(count);
    const double label_mean = label_sum / static_cast<double>(count);

    double label_var = 0.0;
    for (std::size_t idx : indices) {
        const Sequence& s = data.sequences[idx];
        for (std::size_t t = 0; t < s.steps; ++t) {
            for (std::size_t j = 0; j < d; ++j) {
                const double e = s.inputs[t * d + j] - ns.mean[j];
                ns.stddev[j] += e * e;
            }
            const double e = s.labels[t] - label_mean;
            label_var += e * e;
        }
    }
    for (std::size_t j = 0; j < d; ++j) {
        ns.stddev[j] = std::sqrt(ns.stddev[j] / static_cast<double>(count));
        if (!(ns.stddev[j] > 1e-12)) {
            ns.stddev[j] = 1.0;
            ns.degenerate[j] = 1;
        }
    }
    ns.label_std = std::sqrt(label_var / static_cast<double>(count));
    if (!(ns.label_std > 1e-12)) ns.label_std = 1.0;
    return ns;
}

namespace {

// Runs fn(i) for i in [0, n) on up to `threads` workers. Each index does
// independent work, so the schedule cannot affect results.
void parallel_indices(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& fn) {
    if (threads <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    const std::size_t workers = std::min(threads, n);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w]() {
            for (std::size_t i = w; i < n; i += workers) fn(i);
        });
    }
    for (std::thread& t : pool) t.join();
}

} // namespace

TrainResult train_policy(const Dataset& data, const NetConfig& net_config,
                         const TrainConfig& train_config) {
    const std::size_t n = data.sequences.size();
    if (n < 2) throw ConfigError("need at least two rollouts to train");
    if (data.input_dim != net_config.input_dim) {
        throw ConfigError("dataset input dim does not match the net config");
    }
    for (const Sequence& s : data.sequences) {
        if (s.steps == 0 || s.inputs.size() != s.steps * data.input_dim ||
            s.labels.size() != s.steps) {
            throw ConfigError("malformed training sequence");
        }
    }

    TrainResult result;
    result.split = split_dataset(n, train_config.seed);
    const NormStats norm = fit_norm_stats(data, result.split.train);
    const double label_var = norm.label_std * norm.label_std;

    // normalized copies of every sequence
    const std::size_t d = data.input_dim;
    std::vector<std::vector<double>> norm_inputs(n);
    for (std::size_t i = 0; i < n; ++i) {
        norm_inputs[i] = data.sequences[i].inputs;
        for (std::size_t t = 0; t < data.sequences[i].steps; ++t) {
            norm.apply(norm_inputs[i].data() + t * d, d);
        }
    }

    std::size_t train_steps = 0;
    for (std::size_t idx : result.split.train) train_steps += data.sequences[idx].steps;
    std::size_t val_steps = 0;
    for (std::size_t idx : result.split.val) val_steps += data.sequences[idx].steps;
    const double loss_weight = 1.0 / static_cast<double>(train_steps);

    Net net(net_config);
    Rng init_rng = Rng::substream(train_config.seed, "init");
    net.init_weights(init_rng);
    const std::size_t np = net_config.param_count();
    Adam adam(np, train_config.adam);

    const std::size_t n_train = result.split.train.size();
    std::vector<std::vector<double>> slots(n_train, std::vector<double>(np, 0.0));
    std::vector<double> seq_sq(n_train, 0.0);
    std::vector<double> val_sq(result.split.val.size(), 0.0);
    std::vector<double> grad(np, 0.0);
    const kernels::Backend& k = kernels::active();

    std::vector<double> best_params = net.params();
    double best_val = std::numeric_limits<double>::infinity();
    result.best_epoch = 0;

    for (std::size_t epoch = 0; epoch < train_config.epochs; ++epoch) {
        parallel_indices(n_train, train_config.threads, [&](std::size_t i) {
            const std::size_t idx = result.split.train[i];
            const Sequence& s = data.sequences[idx];
            std::fill(slots[i].begin(), slots[i].end(), 0.0);
            Rng drop_rng =
                Rng::substream(train_config.seed, "dropout", epoch * n + idx);
            std::vector<double> scales;
            net.fill_dropout(drop_rng, s.steps, scales);
            seq_sq[i] = net.sequence_grad(norm_inputs[idx].data(), s.labels.data(),
                                          s.steps, scales.data(), label_var,
                                          loss_weight, slots[i].data());
        });

        std::fill(grad.begin(), grad.end(), 0.0);
        double train_sq = 0.0;
        for (std::size_t i = 0; i < n_train; ++i) {
            k.axpy(1.0, slots[i].data(), grad.data(), np);
            train_sq += seq_sq[i];
        }
        adam.step(net.params().data(), grad.data(), np);
        result.train_loss.push_back(train_sq / static_cast<double>(train_steps));

        parallel_indices(result.split.val.size(), train_config.threads, [&](std::size_t i) {
            const std::size_t idx = result.split.val[i];
            const Sequence& s = data.sequences[idx];
            val_sq[i] = net.sequence_loss(norm_inputs[idx].data(), s.labels.data(),
                                          s.steps, label_var) *
                        static_cast<double>(s.steps);
        });
        double vsum = 0.0;
        for (double v : val_sq) vsum += v;
        const double val = vsum / static_cast<double>(val_steps);
        result.val_loss.push_back(val);
        if (val < best_val) {
            best_val = val;
            best_params = net.params();
            result.best_epoch = epoch;
        }
    }

    result.checkpoint.config = net_config;
    result.checkpoint.params = std::move(best_params);
    result.checkpoint.norm = norm;
    return result;
}

} // namespace swimfollow
