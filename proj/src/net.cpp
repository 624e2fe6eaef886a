#include "swimfollow/net.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "swimfollow/errors.hpp"
#include "swimfollow/kernels.hpp"

namespace swimfollow {

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

} // namespace

void NormStats::apply(double* x, std::size_t dim) const {
    for (std::size_t i = 0; i < dim; ++i) {
        x[i] = (x[i] - mean[i]) / stddev[i];
    }
}

Net::Net(const NetConfig& config) : config_(config), params_(config.param_count(), 0.0) {
    if (config_.input_dim == 0 || config_.hidden == 0 || config_.fc == 0) {
        throw ConfigError("net dimensions must be positive");
    }
    if (config_.dropout < 0.0 || config_.dropout >= 1.0) {
        throw ConfigError("dropout must be in [0, 1)");
    }
}

void Net::init_weights(Rng& rng) {
    const std::size_t h = config_.hidden;
    const std::size_t d = config_.input_dim;
    const std::size_t f = config_.fc;
    struct Block {
        std::size_t count;
        std::size_t fan_in;
    };
    const Block blocks[] = {
        {4 * h * d, d}, {4 * h * h, h}, {4 * h, h}, {f * h, h}, {f, h}, {f, f},
    };
    std::size_t at = 0;
    for (const Block& blk : blocks) {
        const double bound = 1.0 / std::sqrt(static_cast<double>(blk.fan_in));
        for (std::size_t i = 0; i < blk.count; ++i) {
            params_[at++] = rng.uniform(-bound, bound);
        }
    }
}

Net::State Net::make_state() const {
    State s;
    s.h.assign(config_.hidden, 0.0);
    s.c.assign(config_.hidden, 0.0);
    s.z.assign(4 * config_.hidden, 0.0);
    s.a.assign(config_.fc, 0.0);
    return s;
}

double Net::step(State& state, const double* x) const {
    const std::size_t h = config_.hidden;
    const std::size_t d = config_.input_dim;
    const std::size_t f = config_.fc;
    const kernels::Backend& k = kernels::active();
    const double* wx = params_.data() + off_wx();
    const double* wh = params_.data() + off_wh();
    const double* b = params_.data() + off_b();
    const double* wfc = params_.data() + off_wfc();
    const double* bfc = params_.data() + off_bfc();
    const double* wout = params_.data() + off_wout();

    double* z = state.z.data();
    std::memcpy(z, b, 4 * h * sizeof(double));
    k.gemv_acc(wx, 4 * h, d, x, z);
    k.gemv_acc(wh, 4 * h, h, state.h.data(), z);
    for (std::size_t j = 0; j < h; ++j) {
        const double gi = sigmoid(z[j]);
        const double gf = sigmoid(z[h + j]);
        const double gg = std::tanh(z[2 * h + j]);
        const double go = sigmoid(z[3 * h + j]);
        state.c[j] = gf * state.c[j] + gi * gg;
        state.h[j] = go * std::tanh(state.c[j]);
    }
    double* a = state.a.data();
    std::memcpy(a, bfc, f * sizeof(double));
    k.gemv_acc(wfc, f, h, state.h.data(), a);
    for (std::size_t j = 0; j < f; ++j) a[j] = std::tanh(a[j]);
    const double u = k.dot(wout, a, f);
    const double out = config_.output_scale * std::tanh(u);
    if (!std::isfinite(out)) throw NumericError("policy output is not finite");
    return out;
}

double Net::sequence_loss(const double* xs, const double* labels, std::size_t steps,
                          double label_var) const {
    if (steps == 0) return 0.0;
    State state = make_state();
    double sum = 0.0;
    for (std::size_t t = 0; t < steps; ++t) {
        const double e = step(state, xs + t * config_.input_dim) - labels[t];
        sum += e * e;
    }
    return sum / (label_var * static_cast<double>(steps));
}

double Net::sequence_grad(const double* xs, const double* labels, std::size_t steps,
                          const double* dropout_scales, double label_var, double loss_weight,
                          double* grad) const {
    const std::size_t h = config_.hidden;
    const std::size_t d = config_.input_dim;
    const std::size_t f = config_.fc;
    const kernels::Backend& k = kernels::active();
    const double* wx = params_.data() + off_wx();
    const double* wh = params_.data() + off_wh();
    const double* b = params_.data() + off_b();
    const double* wfc = params_.data() + off_wfc();
    const double* bfc = params_.data() + off_bfc();
    const double* wout = params_.data() + off_wout();
    const double scale = config_.output_scale;

    // forward, recording everything the backward sweep needs
    std::vector<double> gates(steps * 4 * h);  // i, f, g, o per step
    std::vector<double> cs(steps * h);
    std::vector<double> tcs(steps * h);
    std::vector<double> hs(steps * h);
    std::vector<double> as(steps * f);   // post-tanh fc activations
    std::vector<double> outs(steps);
    std::vector<double> z(4 * h);
    std::vector<double> ad(f);

    const double* h_prev = nullptr;
    const double* c_prev = nullptr;
    for (std::size_t t = 0; t < steps; ++t) {
        std::memcpy(z.data(), b, 4 * h * sizeof(double));
        k.gemv_acc(wx, 4 * h, d, xs + t * d, z.data());
        if (h_prev) k.gemv_acc(wh, 4 * h, h, h_prev, z.data());
        double* gt = gates.data() + t * 4 * h;
        double* ct = cs.data() + t * h;
        double* tct = tcs.data() + t * h;
        double* ht = hs.data() + t * h;
        for (std::size_t j = 0; j < h; ++j) {
            const double gi = sigmoid(z[j]);
            const double gf = sigmoid(z[h + j]);
            const double gg = std::tanh(z[2 * h + j]);
            const double go = sigmoid(z[3 * h + j]);
            gt[j] = gi;
            gt[h + j] = gf;
            gt[2 * h + j] = gg;
            gt[3 * h + j] = go;
            ct[j] = gf * (c_prev ? c_prev[j] : 0.0) + gi * gg;
            tct[j] = std::tanh(ct[j]);
            ht[j] = go * tct[j];
        }
        double* at = as.data() + t * f;
        std::memcpy(at, bfc, f * sizeof(double));
        k.gemv_acc(wfc, f, h, ht, at);
        for (std::size_t j = 0; j < f; ++j) at[j] = std::tanh(at[j]);
        if (dropout_scales) {
            const double* sc = dropout_scales + t * f;
            for (std::size_t j = 0; j < f; ++j) ad[j] = at[j] * sc[j];
        } else {
            std::memcpy(ad.data(), at, f * sizeof(double));
        }
        const double u = k.dot(wout, ad.data(), f);
        outs[t] = scale * std::tanh(u);
        if (!std::isfinite(outs[t])) throw NumericError("policy output is not finite");
        h_prev = ht;
        c_prev = ct;
    }

    double* g_wx = grad + off_wx();
    double* g_wh = grad + off_wh();
    double* g_b = grad + off_b();
    double* g_wfc = grad + off_wfc();
    double* g_bfc = grad + off_bfc();
    double* g_wout = grad + off_wout();

    std::vector<double> dh(h, 0.0);
    std::vector<double> dc(h, 0.0);
    std::vector<double> dz(4 * h);
    std::vector<double> dfc(f);
    double sq_sum = 0.0;
    for (std::size_t ti = steps; ti-- > 0;) {
        const double e = outs[ti] - labels[ti];
        sq_sum += e * e;
        const double tanh_u = outs[ti] / scale;
        const double du = loss_weight * (2.0 * e / label_var) * scale * (1.0 - tanh_u * tanh_u);

        const double* at = as.data() + ti * f;
        if (dropout_scales) {
            const double* sc = dropout_scales + ti * f;
            for (std::size_t j = 0; j < f; ++j) {
                ad[j] = at[j] * sc[j];
                dfc[j] = du * wout[j] * sc[j] * (1.0 - at[j] * at[j]);
            }
        } else {
            for (std::size_t j = 0; j < f; ++j) {
                ad[j] = at[j];
                dfc[j] = du * wout[j] * (1.0 - at[j] * at[j]);
            }
        }
        k.axpy(du, ad.data(), g_wout, f);
        const double* ht = hs.data() + ti * h;
        k.ger_acc(g_wfc, f, h, 1.0, dfc.data(), ht);
        k.axpy(1.0, dfc.data(), g_bfc, f);
        k.gemv_t_acc(wfc, f, h, dfc.data(), dh.data());

        const double* gt = gates.data() + ti * 4 * h;
        const double* tct = tcs.data() + ti * h;
        const double* cp = ti > 0 ? cs.data() + (ti - 1) * h : nullptr;
        for (std::size_t j = 0; j < h; ++j) {
            const double gi = gt[j];
            const double gf = gt[h + j];
            const double gg = gt[2 * h + j];
            const double go = gt[3 * h + j];
            const double dcj = dc[j] + dh[j] * go * (1.0 - tct[j] * tct[j]);
            const double do_ = dh[j] * tct[j];
            dz[j] = dcj * gg * gi * (1.0 - gi);
            dz[h + j] = dcj * (cp ? cp[j] : 0.0) * gf * (1.0 - gf);
            dz[2 * h + j] = dcj * gi * (1.0 - gg * gg);
            dz[3 * h + j] = do_ * go * (1.0 - go);
            dc[j] = dcj * gf;
        }
        k.ger_acc(g_wx, 4 * h, d, 1.0, dz.data(), xs + ti * d);
        if (ti > 0) {
            const double* hp = hs.data() + (ti - 1) * h;
            k.ger_acc(g_wh, 4 * h, h, 1.0, dz.data(), hp);
        }
        k.axpy(1.0, dz.data(), g_b, 4 * h);
        std::fill(dh.begin(), dh.end(), 0.0);
        if (ti > 0) k.gemv_t_acc(wh, 4 * h, h, dz.data(), dh.data());
    }
    return sq_sum / label_var;
}

void Net::fill_dropout(Rng& rng, std::size_t steps, std::vector<double>& scales) const {
    const std::size_t f = config_.fc;
    const double p = config_.dropout;
    const double keep_scale = 1.0 / (1.0 - p);
    scales.resize(steps * f);
    for (std::size_t i = 0; i < scales.size(); ++i) {
        scales[i] = rng.uniform() < p ? 0.0 : keep_scale;
    }
}

Adam::Adam(std::size_t n, const AdamConfig& config)
    : config_(config), m_(n, 0.0), v_(n, 0.0) {}

void Adam::step(double* params, const double* grad, std::size_t n) {
    if (n != m_.size()) throw ConfigError("adam size mismatch");
    ++t_;
    const double b1 = config_.beta1;
    const double b2 = config_.beta2;
    const double c1 = 1.0 - std::pow(b1, static_cast<double>(t_));
    const double c2 = 1.0 - std::pow(b2, static_cast<double>(t_));
    for (std::size_t i = 0; i < n; ++i) {
        m_[i] = b1 * m_[i] + (1.0 - b1) * grad[i];
        v_[i] = b2 * v_[i] + (1.0 - b2) * grad[i] * grad[i];
        const double mh = m_[i] / c1;
        const double vh = v_[i] / c2;
        params[i] -= config_.lr * mh / (std::sqrt(vh) + config_.eps);
    }
}

} // namespace swimfollow
