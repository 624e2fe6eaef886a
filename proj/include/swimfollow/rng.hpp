#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

namespace swimfollow {

// Deterministic PRNG with named substreams. Every random draw in a run is
// derived from one master seed, so the same seed reproduces the same run
// byte for byte on any platform. std::mt19937 + <random> distributions are
// avoided on purpose: distribution output is implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {
        // decorrelate trivially related seeds
        next_u64();
        next_u64();
    }

    /// Substream keyed by (name, index). Independent of draw order on the parent.
    static Rng substream(std::uint64_t master, std::string_view name, std::uint64_t index = 0) {
        std::uint64_t h = 1469598103934665603ull; // FNV-1a 64
        for (char ch : name) {
            h ^= static_cast<unsigned char>(ch);
            h *= 1099511628211ull;
        }
        return Rng(splitmix(splitmix(master ^ h) + index));
    }

    std::uint64_t next_u64() {
        state_ = splitmix_advance(state_);
        return splitmix_output(state_);
    }

    /// Uniform in [0, 1).
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Integer in [0, n).
    std::uint64_t uniform_index(std::uint64_t n) {
        return next_u64() % n;
    }

    /// Standard normal via Box-Muller (no cached second value, draw order stays obvious).
    double gauss() {
        double u1 = uniform();
        double u2 = uniform();
        if (u1 <= 0.0) u1 = 0x1.0p-53;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
    }

    double gauss(double mean, double std) { return mean + std * gauss(); }

private:
    static std::uint64_t splitmix_advance(std::uint64_t x) { return x + 0x9E3779B97f4A7C15ull; }

    static std::uint64_t splitmix_output(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    static std::uint64_t splitmix(std::uint64_t x) {
        return splitmix_output(splitmix_advance(x));
    }

    std::uint64_t state_;
};

} // namespace swimfollow
