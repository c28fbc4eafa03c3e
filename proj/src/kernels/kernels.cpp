#include "idlab/kernels.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace idlab::kernels {

namespace {

constexpr double kInv2Pi = 0.15915494309189533577;
constexpr double kInv4Pi = 0.07957747154594766788;

double dot_scalar(const double* x, const double* y, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
    return s;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void xpby_scalar(const double* x, double beta, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] = x[i] + beta * y[i];
}

void spmv_scalar(std::size_t n_rows, const std::int32_t* row_ptr, const std::int32_t* cols,
                 const double* vals, const double* x, double* y) {
    for (std::size_t r = 0; r < n_rows; ++r) {
        double s = 0.0;
        for (std::int32_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k) s += vals[k] * x[cols[k]];
        y[r] = s;
    }
}

double weighted_abs_pow_scalar(const double* w, const double* v, double p, std::size_t n) {
    double s = 0.0;
    if (p == 1.0) {
        for (std::size_t i = 0; i < n; ++i) s += w[i] * std::fabs(v[i]);
    } else if (p == 2.0) {
        for (std::size_t i = 0; i < n; ++i) s += w[i] * v[i] * v[i];
    } else {
        for (std::size_t i = 0; i < n; ++i) s += w[i] * std::pow(std::fabs(v[i]), p);
    }
    return s;
}

void flat_lambda2_scalar(const double* yt, const double* yn, double* lambda, double* grad_norm,
                         std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        const double inv_r2 = 1.0 / (yt[i] * yt[i] + yn[i] * yn[i]);
        lambda[i] = kInv2Pi * yn[i] * inv_r2;
        grad_norm[i] = kInv2Pi * inv_r2;
    }
}

void flat_lambda3_scalar(const double* yt1, const double* yt2, const double* yn, double* lambda,
                         double* grad_norm, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        const double r2 = yt1[i] * yt1[i] + yt2[i] * yt2[i] + yn[i] * yn[i];
        const double inv_r2 = 1.0 / r2;
        const double inv_r3 = inv_r2 / std::sqrt(r2);
        lambda[i] = kInv4Pi * yn[i] * inv_r3;
        grad_norm[i] = kInv4Pi * std::sqrt(1.0 + 3.0 * yn[i] * yn[i] * inv_r2) * inv_r3;
    }
}

const KernelTable kScalar{Isa::Scalar,       dot_scalar,          axpy_scalar,
                          xpby_scalar,       spmv_scalar,         weighted_abs_pow_scalar,
                          flat_lambda2_scalar, flat_lambda3_scalar};

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(_M_X64)
#if defined(__GNUC__) || defined(__clang__)
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
#else
    return false;
#endif
}

const KernelTable* initial_table() {
    const char* env = std::getenv("IDLAB_SIMD");
    if (env != nullptr && *env != '\0') return &table(parse_isa(env));
    const auto isas = available();
    return &table(isas.back());
}

std::atomic<const KernelTable*>& active_slot() {
    static std::atomic<const KernelTable*> slot{initial_table()};
    return slot;
}

} // namespace

namespace detail {
const KernelTable& scalar_table() { return kScalar; }
} // namespace detail

std::string_view name(Isa isa) {
    switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
    case Isa::Neon: return "neon";
    }
    return "unknown";
}

std::vector<Isa> available() {
    std::vector<Isa> out{Isa::Scalar};
    if (detail::avx2_table() != nullptr && cpu_has_avx2()) out.push_back(Isa::Avx2);
    if (detail::neon_table() != nullptr) out.push_back(Isa::Neon);
    return out;
}

const KernelTable& table(Isa isa) {
    switch (isa) {
    case Isa::Scalar: return kScalar;
    case Isa::Avx2:
        if (detail::avx2_table() != nullptr && cpu_has_avx2()) return *detail::avx2_table();
        break;
    case Isa::Neon:
        if (detail::neon_table() != nullptr) return *detail::neon_table();
        break;
    }
    throw std::runtime_error("SIMD kernels for '" + std::string(name(isa)) + "' are not available here");
}

Isa parse_isa(std::string_view s) {
    if (s == "scalar") return Isa::Scalar;
    if (s == "avx2") return Isa::Avx2;
    if (s == "neon") return Isa::Neon;
    if (s == "auto") return available().back();
    throw std::runtime_error("unknown SIMD selection '" + std::string(s) + "'");
}

const KernelTable& active() { return *active_slot().load(std::memory_order_acquire); }

void select(Isa isa) { active_slot().store(&table(isa), std::memory_order_release); }

} // namespace idlab::kernels
