#pragma once

#include <cstddef>
#include <string>

namespace swimfollow::kernels {

// Double-precision dense kernels behind the recurrent-network training loop,
// which dominates the run time of the learning pipeline. Two implementations
// ship: a scalar reference and an AVX2+FMA variant picked at runtime when the
// CPU supports it. Both are exercised by the same equivalence tests; results
// differ only by floating-point reassociation.
//
// Matrices are row-major, no padding. All pointers may be unaligned.
struct Backend {
    const char* name;

    /// y += A * x, A is m x n, x has n entries, y has m.
    void (*gemv_acc)(const double* a, std::size_t m, std::size_t n, const double* x, double* y);

    /// y += A^T * x, A is m x n, x has m entries, y has n.
    void (*gemv_t_acc)(const double* a, std::size_t m, std::size_t n, const double* x, double* y);

    /// A += alpha * x * y^T, A is m x n, x has m entries, y has n.
    void (*ger_acc)(double* a, std::size_t m, std::size_t n, double alpha, const double* x, const double* y);

    double (*dot)(const double* a, const double* b, std::size_t n);

    /// y += alpha * x
    void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
};

const Backend& scalar_backend();

/// Null when this build has no AVX2 variant or the CPU lacks AVX2/FMA.
const Backend* avx2_backend();

/// The selected backend. Honors SWIMFOLLOW_SIMD=scalar|avx2|auto (default auto)
/// read once on first use; select() overrides it programmatically.
const Backend& active();

/// name: "scalar", "avx2" or "auto". Throws ConfigError for unknown names or
/// when avx2 is requested but unavailable.
void select(const std::string& name);

} // namespace swimfollow::kernels
