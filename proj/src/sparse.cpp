#include "idlab/sparse.hpp"

#include "idlab/error.hpp"
#include "idlab/kernels.hpp"
#include "idlab/log.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>

namespace idlab {

void CsrMatrix::multiply(std::span<const double> x, std::span<double> y) const {
    kernels::active().spmv(n, row_ptr.data(), cols.data(), vals.data(), x.data(), y.data());
}

std::vector<double> CsrMatrix::diagonal() const {
    std::vector<double> d(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (auto k = row_ptr[i]; k < row_ptr[i + 1]; ++k) {
            if (static_cast<std::size_t>(cols[k]) == i) d[i] = vals[k];
        }
    }
    return d;
}

std::int64_t CsrMatrix::find(std::size_t i, std::size_t j) const {
    const auto b = cols.begin() + row_ptr[i], e = cols.begin() + row_ptr[i + 1];
    const auto it = std::lower_bound(b, e, static_cast<std::int32_t>(j));
    if (it == e || static_cast<std::size_t>(*it) != j) return -1;
    return it - cols.begin();
}

bool CsrMatrix::is_symmetric(double tol) const {
    for (std::size_t i = 0; i < n; ++i) {
        for (auto k = row_ptr[i]; k < row_ptr[i + 1]; ++k) {
            const auto t = find(static_cast<std::size_t>(cols[k]), i);
            if (t < 0) {
                if (vals[k] != 0.0) return false;
                continue;
            }
            const double a = vals[k], b = vals[static_cast<std::size_t>(t)];
            if (std::abs(a - b) > tol * std::max({1.0, std::abs(a), std::abs(b)})) return false;
        }
    }
    return true;
}

namespace {

std::vector<double> inverse_diagonal(const CsrMatrix& A) {
    std::vector<double> d = A.diagonal();
    for (double& v : d) v = v != 0.0 ? 1.0 / v : 1.0;
    return d;
}

double norm2(const kernels::KernelTable& k, std::span<const double> v) {
    return std::sqrt(k.dot(v.data(), v.data(), v.size()));
}

} // namespace

IterativeResult pcg(const CsrMatrix& A, std::span<const double> b, std::span<double> x, double tol, int max_iter) {
    const auto& k = kernels::active();
    const std::size_t n = A.n;
    IterativeResult res;
    const double bnorm = norm2(k, b);
    if (bnorm == 0.0) {
        std::fill(x.begin(), x.end(), 0.0);
        res.converged = true;
        return res;
    }
    const std::vector<double> dinv = inverse_diagonal(A);
    std::vector<double> r(n), z(n), p(n), q(n);
    A.multiply(x, r);
    for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - r[i];
    for (std::size_t i = 0; i < n; ++i) z[i] = dinv[i] * r[i];
    p = z;
    double rz = k.dot(r.data(), z.data(), n);
    res.residual = norm2(k, r) / bnorm;
    while (res.residual > tol && res.iterations < max_iter) {
        A.multiply(p, q);
        const double pq = k.dot(p.data(), q.data(), n);
        if (!(pq > 0.0)) return res;  // not SPD along p
        const double alpha = rz / pq;
        k.axpy(alpha, p.data(), x.data(), n);
        k.axpy(-alpha, q.data(), r.data(), n);
        ++res.iterations;
        res.residual = norm2(k, r) / bnorm;
        for (std::size_t i = 0; i < n; ++i) z[i] = dinv[i] * r[i];
        const double rz_new = k.dot(r.data(), z.data(), n);
        k.xpby(z.data(), rz_new / rz, p.data(), n);
        rz = rz_new;
    }
    res.converged = res.residual <= tol;
    return res;
}

IterativeResult bicgstab(const CsrMatrix& A, std::span<const double> b, std::span<double> x, double tol,
                         int max_iter) {
    const auto& k = kernels::active();
    const std::size_t n = A.n;
    IterativeResult res;
    const double bnorm = norm2(k, b);
    if (bnorm == 0.0) {
        std::fill(x.begin(), x.end(), 0.0);
        res.converged = true;
        return res;
    }
    const std::vector<double> dinv = inverse_diagonal(A);
    std::vector<double> r(n), r0(n), p(n, 0.0), v(n, 0.0), s(n), t(n), ph(n), sh(n);
    A.multiply(x, r);
    for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - r[i];
    r0 = r;
    double rho = 1.0, alpha = 1.0, omega = 1.0;
    res.residual = norm2(k, r) / bnorm;
    while (res.residual > tol && res.iterations < max_iter) {
        const double rho_new = k.dot(r0.data(), r.data(), n);
        if (rho_new == 0.0 || omega == 0.0) return res;
        const double beta = (rho_new / rho) * (alpha / omega);
        rho = rho_new;
        for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * (p[i] - omega * v[i]);
        for (std::size_t i = 0; i < n; ++i) ph[i] = dinv[i] * p[i];
        A.multiply(ph, v);
        const double r0v = k.dot(r0.data(), v.data(), n);
        if (r0v == 0.0) return res;
        alpha = rho / r0v;
        for (std::size_t i = 0; i < n; ++i) s[i] = r[i] - alpha * v[i];
        ++res.iterations;
        if (norm2(k, s) / bnorm <= tol) {
            k.axpy(alpha, ph.data(), x.data(), n);
            res.residual = norm2(k, s) / bnorm;
            break;
        }
        for (std::size_t i = 0; i < n; ++i) sh[i] = dinv[i] * s[i];
        A.multiply(sh, t);
        const double tt = k.dot(t.data(), t.data(), n);
        if (tt == 0.0) return res;
        omega = k.dot(t.data(), s.data(), n) / tt;
        k.axpy(alpha, ph.data(), x.data(), n);
        k.axpy(omega, sh.data(), x.data(), n);
        for (std::size_t i = 0; i < n; ++i) r[i] = s[i] - omega * t[i];
        res.residual = norm2(k, r) / bnorm;
    }
    res.converged = res.residual <= tol;
    return res;
}

std::string to_string(LinearMethod m) { return m == LinearMethod::Direct ? "direct" : "iterative"; }

LinearMethod parse_linear_method(const std::string& s) {
    if (s == "direct") return LinearMethod::Direct;
    if (s == "iterative" || s == "pcg") return LinearMethod::Iterative;
    throw PreconditionError("unknown linear method '" + s + "' (expected direct|iterative)");
}

struct LinearSolver::Direct {
    using SpMat = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;
    std::vector<std::int32_t> row_ptr, cols;
    std::vector<double> vals;
    bool symmetric = true;
    Eigen::SimplicialLDLT<SpMat> ldlt;
    Eigen::SparseLU<SpMat> lu;
    bool valid = false;
    bool ldlt_analyzed = false;

    [[nodiscard]] bool same_pattern(const CsrMatrix& A) const { return A.row_ptr == row_ptr && A.cols == cols; }

    [[nodiscard]] bool matches(const CsrMatrix& A) const {
        return valid && A.row_ptr == row_ptr && A.cols == cols && A.vals == vals;
    }

    void factor(const CsrMatrix& A) {
        valid = false;
        const auto n = static_cast<Eigen::Index>(A.n);
        Eigen::Map<const Eigen::SparseMatrix<double, Eigen::RowMajor, int>> map(
            n, n, static_cast<Eigen::Index>(A.nnz()), A.row_ptr.data(), A.cols.data(), A.vals.data());
        const SpMat M = map;
        const bool reuse = ldlt_analyzed && same_pattern(A);
        symmetric = A.is_symmetric();
        if (symmetric) {
            // The fill-reducing ordering depends only on the pattern.
            if (!reuse) ldlt.analyzePattern(M);
            ldlt_analyzed = true;
            ldlt.factorize(M);
            if (ldlt.info() != Eigen::Success) symmetric = false;
        }
        if (!symmetric) {
            lu.analyzePattern(M);
            lu.factorize(M);
            if (lu.info() != Eigen::Success) throw ConvergenceError("sparse LU factorization failed", 0, {});
        }
        row_ptr = A.row_ptr;
        cols = A.cols;
        vals = A.vals;
        valid = true;
    }

    void solve(std::span<const double> b, std::span<double> x) const {
        const auto n = static_cast<Eigen::Index>(b.size());
        Eigen::Map<const Eigen::VectorXd> bb(b.data(), n);
        Eigen::Map<Eigen::VectorXd> xx(x.data(), n);
        if (symmetric) {
            xx = ldlt.solve(bb);
        } else {
            xx = lu.solve(bb);
        }
    }
};

LinearSolver::LinearSolver(LinearMethod method, double tol, int max_iter)
    : method_(method), tol_(tol), max_iter_(max_iter) {}

LinearSolver::~LinearSolver() = default;
LinearSolver::LinearSolver(LinearSolver&&) noexcept = default;
LinearSolver& LinearSolver::operator=(LinearSolver&&) noexcept = default;

LinearSolveInfo LinearSolver::solve(const CsrMatrix& A, std::span<const double> b, std::span<double> x) {
    IDLAB_REQUIRE(b.size() == A.n && x.size() == A.n, "LinearSolver::solve: size mismatch");
    LinearSolveInfo info;
    if (method_ == LinearMethod::Direct) {
        if (!direct_) direct_ = std::make_unique<Direct>();
        if (!direct_->matches(A)) {
            direct_->factor(A);
            ++factorizations_;
            info.refactored = true;
        }
        direct_->solve(b, x);
        info.method = direct_->symmetric ? "ldlt" : "lu";
        return info;
    }
    std::vector<double> x0(x.begin(), x.end());
    IterativeResult r = pcg(A, b, x, tol_, max_iter_);
    info.method = "pcg";
    if (!r.converged) {
        logger().debug("PCG stalled after {} iterations (residual {}), switching to BiCGStab", r.iterations,
                       r.residual);
        std::copy(x0.begin(), x0.end(), x.begin());
        const int first = r.iterations;
        r = bicgstab(A, b, x, tol_, max_iter_);
        r.iterations += first;
        info.method = "bicgstab";
    }
    info.iterations = r.iterations;
    info.residual = r.residual;
    if (!r.converged) {
        throw ConvergenceError("linear solver failed: residual " + std::to_string(r.residual), 0, {r.residual});
    }
    return info;
}

} // namespace idlab
