#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "swimfollow/rng.hpp"

namespace swimfollow {

struct NetConfig {
    std::size_t input_dim = 8;   // 2 pressures, yaw, pitch, roll, 3 motor commands
    std::size_t hidden = 64;     // LSTM units
    std::size_t fc = 64;         // fully connected width
    double dropout = 0.2;        // drop probability after the fc layer
    double output_scale = 0.3;   // steering bound

    std::size_t param_count() const {
        return 4 * hidden * input_dim + 4 * hidden * hidden + 4 * hidden + fc * hidden + fc + fc;
    }
};

/// Per-channel input normalization plus the label scale used by the loss.
struct NormStats {
    std::vector<double> mean;
    std::vector<double> stddev;
    std::vector<std::uint8_t> degenerate;  // stddev was ~0 and replaced by 1
    double label_std = 1.0;

    void apply(double* x, std::size_t dim) const;
};

/// Recurrent steering policy. Parameters live in one flat vector with layout:
///   W_x  [4H x D]  input weights, gate rows ordered i, f, g, o
///   W_h  [4H x H]  recurrent weights, same gate order
///   b    [4H]      gate biases
///   W_fc [F x H]   fc weights
///   b_fc [F]       fc biases
///   W_out[F]       output weights (no bias)
/// Forward: LSTM -> tanh fc -> (inverted dropout) -> dot -> tanh * scale.
class Net {
public:
    explicit Net(const NetConfig& config);

    const NetConfig& config() const { return config_; }
    std::vector<double>& params() { return params_; }
    const std::vector<double>& params() const { return params_; }

    /// Uniform +-1/sqrt(fan_in) per block, drawn in parameter order.
    void init_weights(Rng& rng);

    /// Streaming inference state.
    struct State {
        std::vector<double> h, c;
        std::vector<double> z, a;  // scratch
    };
    State make_state() const;

    /// One control step: normalized input -> steering command. No dropout.
    double step(State& state, const double* x) const;

    /// Mean squared error in normalized label space over one sequence,
    /// forward only, no dropout: mean_t ((sigma_hat - label)^2) / label_var.
    double sequence_loss(const double* xs, const double* labels, std::size_t steps,
                         double label_var) const;

    /// Backpropagation through time over one sequence. dropout_scales has
    /// steps*fc entries, each 0 or 1/(1-p); pass nullptr to disable dropout.
    /// Adds loss_weight * dLoss/dParam into grad (size param_count) and
    /// returns the sequence's summed squared error / label_var (unweighted).
    double sequence_grad(const double* xs, const double* labels, std::size_t steps,
                         const double* dropout_scales, double label_var, double loss_weight,
                         double* grad) const;

    /// Fill steps*fc inverted-dropout scales.
    void fill_dropout(Rng& rng, std::size_t steps, std::vector<double>& scales) const;

private:
    NetConfig config_;
    std::vector<double> params_;

    // offsets into the flat vector
    std::size_t off_wx() const { return 0; }
    std::size_t off_wh() const { return 4 * config_.hidden * config_.input_dim; }
    std::size_t off_b() const { return off_wh() + 4 * config_.hidden * config_.hidden; }
    std::size_t off_wfc() const { return off_b() + 4 * config_.hidden; }
    std::size_t off_bfc() const { return off_wfc() + config_.fc * config_.hidden; }
    std::size_t off_wout() const { return off_bfc() + config_.fc; }

    friend class NetTestPeer;
};

struct AdamConfig {
    double lr = 0.005;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

class Adam {
public:
    Adam(std::size_t n, const AdamConfig& config);
    void step(double* params, const double* grad, std::size_t n);
    std::size_t iterations() const { return t_; }

private:
    AdamConfig config_;
    std::vector<double> m_, v_;
    std::size_t t_ = 0;
};

} // namespace swimfollow
