#pragma once

// Data-parallel inner loops shared by the solvers and the singular-function
// quadrature. Every kernel has a scalar reference implementation; AVX2 (x86-64)
// and NEON (aarch64) variants are selected at runtime and must agree with the
// reference to rounding (see tests/unit/test_kernels.cpp).
//
// Selection order: IDLAB_SIMD environment variable (scalar|avx2|neon|auto),
// otherwise the widest ISA the CPU reports.

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

namespace idlab::kernels {

enum class Isa { Scalar, Avx2, Neon };

std::string_view name(Isa isa);

struct KernelTable {
    Isa isa;

    double (*dot)(const double* x, const double* y, std::size_t n);
    /// y += alpha * x
    void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
    /// y = x + beta * y
    void (*xpby)(const double* x, double beta, double* y, std::size_t n);
    /// y = A x for a CSR matrix with 32-bit indices.
    void (*spmv)(std::size_t n_rows, const std::int32_t* row_ptr, const std::int32_t* cols,
                 const double* vals, const double* x, double* y);
    /// sum_i w_i |v_i|^p
    double (*weighted_abs_pow)(const double* w, const double* v, double p, std::size_t n);

    /// Singular harmonic function for a flat boundary with outward normal -e_d,
    /// evaluated at offsets y = x - x̄^eps given as tangential and normal
    /// components (normal component y_d > 0 inside the domain):
    ///   d = 2: lambda = y_d / (2 pi |y|^2),  |grad lambda| = 1 / (2 pi |y|^2)
    void (*flat_lambda2)(const double* yt, const double* yn, double* lambda, double* grad_norm,
                         std::size_t n);
    ///   d = 3: lambda = y_d / (4 pi |y|^3),
    ///          |grad lambda| = sqrt(1 + 3 y_d^2/|y|^2) / (4 pi |y|^3)
    void (*flat_lambda3)(const double* yt1, const double* yt2, const double* yn, double* lambda,
                         double* grad_norm, std::size_t n);
};

/// Kernels currently in use.
const KernelTable& active();

/// Table for a specific ISA; throws std::runtime_error if the CPU or the build
/// does not support it.
const KernelTable& table(Isa isa);

/// ISAs usable on this machine (always contains Scalar).
std::vector<Isa> available();

/// Switch the active table (tests and the --simd flag use this).
void select(Isa isa);

/// Parses "scalar", "avx2", "neon"; "auto" picks the widest available.
Isa parse_isa(std::string_view s);

namespace detail {
const KernelTable& scalar_table();
const KernelTable* avx2_table();  // nullptr when not compiled in
const KernelTable* neon_table();  // nullptr when not compiled in
} // namespace detail

} // namespace idlab::kernels
