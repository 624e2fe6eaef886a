#include "swimfollow/kernels.hpp"

#include <atomic>
#include <cstdlib>

#include "swimfollow/errors.hpp"

namespace swimfollow::kernels {

const Backend* avx2_backend_impl(); // kernels_avx2.cpp

const Backend* avx2_backend() {
#if defined(__x86_64__) || defined(_M_X64)
    static const bool cpu_ok = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
    if (!cpu_ok) return nullptr;
    return avx2_backend_impl();
#else
    return nullptr;
#endif
}

namespace {

std::atomic<const Backend*> g_active{nullptr};

const Backend* pick(const std::string& name) {
    if (name == "scalar") return &scalar_backend();
    if (name == "avx2") {
        const Backend* b = avx2_backend();
        if (!b) throw ConfigError("avx2 kernels requested but unavailable on this CPU/build");
        return b;
    }
    if (name == "auto" || name.empty()) {
        const Backend* b = avx2_backend();
        return b ? b : &scalar_backend();
    }
    throw ConfigError("unknown simd backend: " + name + " (expected scalar, avx2 or auto)");
}

} // namespace

const Backend& active() {
    const Backend* b = g_active.load(std::memory_order_acquire);
    if (!b) {
        const char* env = std::getenv("SWIMFOLLOW_SIMD");
        b = pick(env ? env : "auto");
        g_active.store(b, std::memory_order_release);
    }
    return *b;
}

void select(const std::string& name) {
    g_active.store(pick(name), std::memory_order_release);
}

} // namespace swimfollow::kernels
