#pragma once

// CSR storage and the linear solvers used by each Picard step: Jacobi-PCG and
// BiCGStab on the SIMD kernels, and a cached sparse LDL^T (Eigen) for direct
// solves.

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace idlab {

struct CsrMatrix {
    std::size_t n = 0;
    std::vector<std::int32_t> row_ptr;
    std::vector<std::int32_t> cols;
    std::vector<double> vals;

    [[nodiscard]] std::size_t nnz() const noexcept { return vals.size(); }
    /// y = A x through the active kernel table.
    void multiply(std::span<const double> x, std::span<double> y) const;
    [[nodiscard]] std::vector<double> diagonal() const;
    /// Slot of entry (i, j) in vals, or -1 if outside the pattern.
    [[nodiscard]] std::int64_t find(std::size_t i, std::size_t j) const;
    [[nodiscard]] bool is_symmetric(double tol = 1e-12) const;
};

struct IterativeResult {
    bool converged = false;
    int iterations = 0;
    double residual = 0.0;  ///< final ||b - A x|| / ||b||
};

/// Jacobi-preconditioned conjugate gradients; x holds the initial guess.
IterativeResult pcg(const CsrMatrix& A, std::span<const double> b, std::span<double> x, double tol, int max_iter);

/// Jacobi-preconditioned BiCGStab for nonsymmetric or indefinite systems.
IterativeResult bicgstab(const CsrMatrix& A, std::span<const double> b, std::span<double> x, double tol,
                         int max_iter);

enum class LinearMethod { Direct, Iterative };

std::string to_string(LinearMethod m);
LinearMethod parse_linear_method(const std::string& s);

struct LinearSolveInfo {
    std::string method;  ///< "ldlt", "lu", "pcg" or "bicgstab"
    int iterations = 0;
    double residual = 0.0;
    bool refactored = false;
};

/// Stateful solver for a sequence of systems sharing one sparsity pattern.
/// The direct path keeps its factorization while the matrix values stay
/// unchanged; the iterative path runs PCG and falls back to BiCGStab when
/// CG stalls or breaks down.
class LinearSolver {
public:
    explicit LinearSolver(LinearMethod method = LinearMethod::Direct, double tol = 1e-12, int max_iter = 5000);
    ~LinearSolver();
    LinearSolver(LinearSolver&&) noexcept;
    LinearSolver& operator=(LinearSolver&&) noexcept;

    /// Solves A x = b; x is used as the initial guess on the iterative path.
    /// Throws ConvergenceError if every method fails.
    LinearSolveInfo solve(const CsrMatrix& A, std::span<const double> b, std::span<double> x);

    [[nodiscard]] LinearMethod method() const noexcept { return method_; }
    [[nodiscard]] int factorizations() const noexcept { return factorizations_; }

private:
    struct Direct;
    LinearMethod method_;
    double tol_;
    int max_iter_;
    int factorizations_ = 0;
    std::unique_ptr<Direct> direct_;
};

} // namespace idlab
