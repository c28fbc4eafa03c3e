// NEON (aarch64) variants. Double-precision lanes are two wide.

#include "idlab/kernels.hpp"

#include <arm_neon.h>
#include <cmath>

namespace idlab::kernels {

namespace {

constexpr double kInv2Pi = 0.15915494309189533577;
constexpr double kInv4Pi = 0.07957747154594766788;

double dot_neon(const double* x, const double* y, std::size_t n) {
    float64x2_t a0 = vdupq_n_f64(0.0), a1 = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        a0 = vfmaq_f64(a0, vld1q_f64(x + i), vld1q_f64(y + i));
        a1 = vfmaq_f64(a1, vld1q_f64(x + i + 2), vld1q_f64(y + i + 2));
    }
    double s = vaddvq_f64(vaddq_f64(a0, a1));
    for (; i < n; ++i) s += x[i] * y[i];
    return s;
}

void axpy_neon(double alpha, const double* x, double* y, std::size_t n) {
    const float64x2_t va = vdupq_n_f64(alpha);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), va, vld1q_f64(x + i)));
    for (; i < n; ++i) y[i] += alpha * x[i];
}

void xpby_neon(const double* x, double beta, double* y, std::size_t n) {
    const float64x2_t vb = vdupq_n_f64(beta);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) vst1q_f64(y + i, vfmaq_f64(vld1q_f64(x + i), vb, vld1q_f64(y + i)));
    for (; i < n; ++i) y[i] = x[i] + beta * y[i];
}

void spmv_neon(std::size_t n_rows, const std::int32_t* row_ptr, const std::int32_t* cols,
               const double* vals, const double* x, double* y) {
    for (std::size_t r = 0; r < n_rows; ++r) {
        std::int32_t k = row_ptr[r];
        const std::int32_t end = row_ptr[r + 1];
        float64x2_t acc = vdupq_n_f64(0.0);
        for (; k + 2 <= end; k += 2) {
            const double pair[2] = {x[cols[k]], x[cols[k + 1]]};
            acc = vfmaq_f64(acc, vld1q_f64(vals + k), vld1q_f64(pair));
        }
        double s = vaddvq_f64(acc);
        for (; k < end; ++k) s += vals[k] * x[cols[k]];
        y[r] = s;
    }
}

double weighted_abs_pow_neon(const double* w, const double* v, double p, std::size_t n) {
    if (p != 1.0 && p != 2.0) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += w[i] * std::pow(std::fabs(v[i]), p);
        return s;
    }
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t vv = vld1q_f64(v + i);
        const float64x2_t term = p == 1.0 ? vabsq_f64(vv) : vmulq_f64(vv, vv);
        acc = vfmaq_f64(acc, vld1q_f64(w + i), term);
    }
    double s = vaddvq_f64(acc);
    for (; i < n; ++i) s += p == 1.0 ? w[i] * std::fabs(v[i]) : w[i] * v[i] * v[i];
    return s;
}

void flat_lambda2_neon(const double* yt, const double* yn, double* lambda, double* grad_norm,
                       std::size_t n) {
    const float64x2_t c = vdupq_n_f64(kInv2Pi);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t t = vld1q_f64(yt + i);
        const float64x2_t d = vld1q_f64(yn + i);
        const float64x2_t inv = vdivq_f64(vdupq_n_f64(1.0), vfmaq_f64(vmulq_f64(d, d), t, t));
        vst1q_f64(lambda + i, vmulq_f64(vmulq_f64(c, d), inv));
        vst1q_f64(grad_norm + i, vmulq_f64(c, inv));
    }
    for (; i < n; ++i) {
        const double inv_r2 = 1.0 / (yt[i] * yt[i] + yn[i] * yn[i]);
        lambda[i] = kInv2Pi * yn[i] * inv_r2;
        grad_norm[i] = kInv2Pi * inv_r2;
    }
}

void flat_lambda3_neon(const double* yt1, const double* yt2, const double* yn, double* lambda,
                       double* grad_norm, std::size_t n) {
    const float64x2_t c = vdupq_n_f64(kInv4Pi);
    const float64x2_t one = vdupq_n_f64(1.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t a = vld1q_f64(yt1 + i);
        const float64x2_t b = vld1q_f64(yt2 + i);
        const float64x2_t d = vld1q_f64(yn + i);
        const float64x2_t r2 = vfmaq_f64(vfmaq_f64(vmulq_f64(d, d), b, b), a, a);
        const float64x2_t inv_r2 = vdivq_f64(one, r2);
        const float64x2_t inv_r3 = vdivq_f64(inv_r2, vsqrtq_f64(r2));
        vst1q_f64(lambda + i, vmulq_f64(vmulq_f64(c, d), inv_r3));
        const float64x2_t ang = vsqrtq_f64(vfmaq_f64(one, vmulq_n_f64(vmulq_f64(d, d), 3.0), inv_r2));
        vst1q_f64(grad_norm + i, vmulq_f64(vmulq_f64(c, ang), inv_r3));
    }
    for (; i < n; ++i) {
        const double r2 = yt1[i] * yt1[i] + yt2[i] * yt2[i] + yn[i] * yn[i];
        const double inv_r2 = 1.0 / r2;
        const double inv_r3 = inv_r2 / std::sqrt(r2);
        lambda[i] = kInv4Pi * yn[i] * inv_r3;
        grad_norm[i] = kInv4Pi * std::sqrt(1.0 + 3.0 * yn[i] * yn[i] * inv_r2) * inv_r3;
    }
}

const KernelTable kNeon{Isa::Neon,        dot_neon,          axpy_neon,
                        xpby_neon,        spmv_neon,         weighted_abs_pow_neon,
                        flat_lambda2_neon, flat_lambda3_neon};

} // namespace

namespace detail {
const KernelTable* neon_table() { return &kNeon; }
} // namespace detail

} // namespace idlab::kernels
