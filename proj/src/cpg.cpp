#include "swimfollow/cpg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "swimfollow/csv.hpp"
#include "swimfollow/errors.hpp"

namespace swimfollow {

double CpgParams::effective_torque_limit() const {
    if (torque_limit > 0.0) return torque_limit;
    double max_r = 0.0;
    for (double a : target_amplitude) max_r = std::max(max_r, a);
    return 1.15 * max_r;
}

CpgParams CpgParams::defaults(std::size_t joints, double amplitude) {
    CpgParams p;
    p.target_amplitude.assign(joints, amplitude);
    return p;
}

CpgState CpgState::rest(const CpgParams& params) {
    CpgState s;
    const std::size_t n = params.joints();
    s.theta.resize(n);
    for (std::size_t i = 0; i < n; ++i) s.theta[i] = static_cast<double>(i) * params.phase_bias;
    s.r.assign(n, 0.0);
    s.r_dot.assign(n, 0.0);
    s.offset.assign(n, 0.0);
    return s;
}

double clamp_steering(double sigma, double clamp_fraction) {
    return std::clamp(sigma, -clamp_fraction, clamp_fraction);
}

double truncate_torque(double raw, double limit) {
    return std::clamp(raw, -limit, limit);
}

TorqueCommand cpg_step(CpgState& state, const CpgParams& params, double sigma, double dt) {
    const std::size_t n = params.joints();
    if (n == 0) throw std::invalid_argument("cpg_step: no joints");
    if (state.theta.size() != n || state.r.size() != n || state.r_dot.size() != n ||
        state.offset.size() != n) {
        throw std::invalid_argument("cpg_step: state size mismatch");
    }
    if (!(dt > 0.0) || dt > 0.02) throw std::invalid_argument("cpg_step: dt out of range");

    const double w = params.coupling_weight;
    const double a = params.amplitude_gain;
    const double bias = params.phase_bias;
    const double sc = clamp_steering(sigma, params.clamp_fraction);
    const double limit = params.effective_torque_limit();

    std::vector<double> dtheta(n), dr_dot(n);
    for (std::size_t i = 0; i < n; ++i) {
        double coupling = 0.0;
        // desired theta_{i+1} - theta_i = bias
        if (i + 1 < n) coupling += w * std::sin(state.theta[i + 1] - state.theta[i] - bias);
        if (i > 0) coupling += w * std::sin(state.theta[i - 1] - state.theta[i] + bias);
        dtheta[i] = 2.0 * kPi * params.frequency + coupling;
        const double target = params.target_amplitude[i];
        dr_dot[i] = a * (a / 4.0 * (target - state.r[i]) - state.r_dot[i]);
    }

    TorqueCommand torque(n);
    for (std::size_t i = 0; i < n; ++i) {
        state.theta[i] += dt * dtheta[i];
        state.r[i] += dt * state.r_dot[i];
        state.r_dot[i] += dt * dr_dot[i];
        state.offset[i] += dt * a * (sc * params.target_amplitude[i] - state.offset[i]);
        const double raw = state.offset[i] + state.r[i] * std::cos(state.theta[i]);
        if (!std::isfinite(raw)) throw NumericError("cpg_step: non-finite torque at joint " + std::to_string(i));
        torque[i] = truncate_torque(raw, limit);
    }
    return torque;
}

void write_gait_csv(const GaitTrace& trace, const std::filesystem::path& file) {
    if (trace.theta.empty()) throw std::invalid_argument("write_gait_csv: empty trace");
    const std::size_t n = trace.theta.front().size();
    std::vector<std::string> header{"t_s"};
    for (const char* base : {"theta", "r", "offset", "torque"}) {
        for (std::size_t i = 0; i < n; ++i) header.push_back(std::string(base) + std::to_string(i));
    }
    CsvWriter out(file, header);
    std::vector<double> row;
    for (std::size_t k = 0; k < trace.t.size(); ++k) {
        row.clear();
        row.push_back(trace.t[k]);
        for (const auto* block : {&trace.theta, &trace.r, &trace.offset, &trace.torque}) {
            for (std::size_t i = 0; i < n; ++i) row.push_back((*block)[k][i]);
        }
        out.row(row);
    }
}

} // namespace swimfollow
