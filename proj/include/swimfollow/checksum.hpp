#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>

namespace swimfollow {

/// FNV-1a 64-bit. Used for checkpoint payload integrity and manifest file hashes.
inline std::uint64_t fnv1a64(const void* data, std::size_t n, std::uint64_t h = 1469598103934665603ull) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 1099511628211ull;
    }
    return h;
}

std::uint64_t fnv1a64_file(const std::filesystem::path& path);

} // namespace swimfollow
