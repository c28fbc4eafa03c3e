// AVX2 + FMA variants. This translation unit is compiled with -mavx2 -mfma and
// must only be entered after the runtime CPU check in kernels.cpp.

#include "idlab/kernels.hpp"

#include <cmath>
#include <immintrin.h>

namespace idlab::kernels {

namespace {

constexpr double kInv2Pi = 0.15915494309189533577;
constexpr double kInv4Pi = 0.07957747154594766788;

// Fixed-order horizontal sum keeps results reproducible run to run.
inline double hsum(__m256d v) {
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, v);
    return (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
}

double dot_avx2(const double* x, const double* y, std::size_t n) {
    __m256d a0 = _mm256_setzero_pd(), a1 = _mm256_setzero_pd();
    __m256d a2 = _mm256_setzero_pd(), a3 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 16 <= n; i += 16) {
        a0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), a0);
        a1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), a1);
        a2 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 8), _mm256_loadu_pd(y + i + 8), a2);
        a3 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 12), _mm256_loadu_pd(y + i + 12), a3);
    }
    for (; i + 4 <= n; i += 4) a0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), a0);
    double s = hsum(_mm256_add_pd(_mm256_add_pd(a0, a1), _mm256_add_pd(a2, a3)));
    for (; i < n; ++i) s += x[i] * y[i];
    return s;
}

void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
    const __m256d va = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    }
    for (; i < n; ++i) y[i] += alpha * x[i];
}

void xpby_avx2(const double* x, double beta, double* y, std::size_t n) {
    const __m256d vb = _mm256_set1_pd(beta);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(y + i, _mm256_fmadd_pd(vb, _mm256_loadu_pd(y + i), _mm256_loadu_pd(x + i)));
    }
    for (; i < n; ++i) y[i] = x[i] + beta * y[i];
}

void spmv_avx2(std::size_t n_rows, const std::int32_t* row_ptr, const std::int32_t* cols,
               const double* vals, const double* x, double* y) {
    for (std::size_t r = 0; r < n_rows; ++r) {
        std::int32_t k = row_ptr[r];
        const std::int32_t end = row_ptr[r + 1];
        __m256d acc = _mm256_setzero_pd();
        for (; k + 4 <= end; k += 4) {
            const __m128i idx = _mm_loadu_si128(reinterpret_cast<const __m128i*>(cols + k));
            const __m256d xv = _mm256_i32gather_pd(x, idx, 8);
            acc = _mm256_fmadd_pd(_mm256_loadu_pd(vals + k), xv, acc);
        }
        double s = hsum(acc);
        for (; k < end; ++k) s += vals[k] * x[cols[k]];
        y[r] = s;
    }
}

double weighted_abs_pow_avx2(const double* w, const double* v, double p, std::size_t n) {
    if (p != 1.0 && p != 2.0) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += w[i] * std::pow(std::fabs(v[i]), p);
        return s;
    }
    const __m256d sign = _mm256_set1_pd(-0.0);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    if (p == 1.0) {
        for (; i + 4 <= n; i += 4) {
            const __m256d av = _mm256_andnot_pd(sign, _mm256_loadu_pd(v + i));
            acc = _mm256_fmadd_pd(_mm256_loadu_pd(w + i), av, acc);
        }
    } else {
        for (; i + 4 <= n; i += 4) {
            const __m256d vv = _mm256_loadu_pd(v + i);
            acc = _mm256_fmadd_pd(_mm256_mul_pd(_mm256_loadu_pd(w + i), vv), vv, acc);
        }
    }
    double s = hsum(acc);
    for (; i < n; ++i) s += p == 1.0 ? w[i] * std::fabs(v[i]) : w[i] * v[i] * v[i];
    return s;
}

void flat_lambda2_avx2(const double* yt, const double* yn, double* lambda, double* grad_norm,
                       std::size_t n) {
    const __m256d c = _mm256_set1_pd(kInv2Pi);
    const __m256d one = _mm256_set1_pd(1.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d t = _mm256_loadu_pd(yt + i);
        const __m256d d = _mm256_loadu_pd(yn + i);
        const __m256d r2 = _mm256_fmadd_pd(t, t, _mm256_mul_pd(d, d));
        const __m256d inv = _mm256_div_pd(one, r2);
        _mm256_storeu_pd(lambda + i, _mm256_mul_pd(_mm256_mul_pd(c, d), inv));
        _mm256_storeu_pd(grad_norm + i, _mm256_mul_pd(c, inv));
    }
    for (; i < n; ++i) {
        const double inv_r2 = 1.0 / (yt[i] * yt[i] + yn[i] * yn[i]);
        lambda[i] = kInv2Pi * yn[i] * inv_r2;
        grad_norm[i] = kInv2Pi * inv_r2;
    }
}

void flat_lambda3_avx2(const double* yt1, const double* yt2, const double* yn, double* lambda,
                       double* grad_norm, std::size_t n) {
    const __m256d c = _mm256_set1_pd(kInv4Pi);
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d three = _mm256_set1_pd(3.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d a = _mm256_loadu_pd(yt1 + i);
        const __m256d b = _mm256_loadu_pd(yt2 + i);
        const __m256d d = _mm256_loadu_pd(yn + i);
        const __m256d r2 = _mm256_fmadd_pd(a, a, _mm256_fmadd_pd(b, b, _mm256_mul_pd(d, d)));
        const __m256d inv_r2 = _mm256_div_pd(one, r2);
        const __m256d inv_r3 = _mm256_div_pd(inv_r2, _mm256_sqrt_pd(r2));
        _mm256_storeu_pd(lambda + i, _mm256_mul_pd(_mm256_mul_pd(c, d), inv_r3));
        const __m256d ang = _mm256_sqrt_pd(_mm256_fmadd_pd(_mm256_mul_pd(three, _mm256_mul_pd(d, d)), inv_r2, one));
        _mm256_storeu_pd(grad_norm + i, _mm256_mul_pd(_mm256_mul_pd(c, ang), inv_r3));
    }
    for (; i < n; ++i) {
        const double r2 = yt1[i] * yt1[i] + yt2[i] * yt2[i] + yn[i] * yn[i];
        const double inv_r2 = 1.0 / r2;
        const double inv_r3 = inv_r2 / std::sqrt(r2);
        lambda[i] = kInv4Pi * yn[i] * inv_r3;
        grad_norm[i] = kInv4Pi * std::sqrt(1.0 + 3.0 * yn[i] * yn[i] * inv_r2) * inv_r3;
    }
}

const KernelTable kAvx2{Isa::Avx2,        dot_avx2,          axpy_avx2,
                        xpby_avx2,        spmv_avx2,         weighted_abs_pow_avx2,
                        flat_lambda2_avx2, flat_lambda3_avx2};

} // namespace

namespace detail {
const KernelTable* avx2_table() { return &kAvx2; }
} // namespace detail

} // namespace idlab::kernels
