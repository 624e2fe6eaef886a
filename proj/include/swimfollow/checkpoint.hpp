#pragma once

#include <string>
#include <vector>

#include "swimfollow/net.hpp"

namespace swimfollow {

/// Trained policy bundle: architecture, flat weights, input normalization.
struct PolicyCheckpoint {
    NetConfig config;
    std::vector<double> params;
    NormStats norm;
};

/// Binary format, little endian:
///   "SWFL" | u32 version | net config | u64 n_params | f64[n] |
///   u64 dim | f64 mean[dim] | f64 stddev[dim] | u8 degenerate[dim] |
///   f64 label_std | u64 fnv1a of all preceding bytes
void save_checkpoint(const std::string& path, const PolicyCheckpoint& ckpt);
PolicyCheckpoint load_checkpoint(const std::string& path);

inline constexpr std::uint32_t kCheckpointVersion = 1;

} // namespace swimfollow
