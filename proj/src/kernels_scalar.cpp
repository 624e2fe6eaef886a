#include "swimfollow/kernels.hpp"

namespace swimfollow::kernels {
namespace {

void gemv_acc_scalar(const double* a, std::size_t m, std::size_t n, const double* x, double* y) {
    for (std::size_t i = 0; i < m; ++i) {
        const double* row = a + i * n;
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) s += row[j] * x[j];
        y[i] += s;
    }
}

void gemv_t_acc_scalar(const double* a, std::size_t m, std::size_t n, const double* x, double* y) {
    for (std::size_t i = 0; i < m; ++i) {
        const double* row = a + i * n;
        const double xi = x[i];
        for (std::size_t j = 0; j < n; ++j) y[j] += xi * row[j];
    }
}

void ger_acc_scalar(double* a, std::size_t m, std::size_t n, double alpha, const double* x, const double* y) {
    for (std::size_t i = 0; i < m; ++i) {
        double* row = a + i * n;
        const double axi = alpha * x[i];
        for (std::size_t j = 0; j < n; ++j) row[j] += axi * y[j];
    }
}

double dot_scalar(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

const Backend kScalar = {
    "scalar", gemv_acc_scalar, gemv_t_acc_scalar, ger_acc_scalar, dot_scalar, axpy_scalar,
};

} // namespace

const Backend& scalar_backend() { return kScalar; }

} // namespace swimfollow::kernels
