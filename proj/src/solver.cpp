#include "idlab/solver.hpp"

#include "idlab/error.hpp"
#include "idlab/log.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace idlab {

std::string to_string(Mode m) {
    switch (m) {
    case Mode::Parabolic: return "parabolic";
    case Mode::Elliptic: return "elliptic";
    case Mode::Coupled: return "coupled";
    }
    return "?";
}

Mode parse_mode(const std::string& s) {
    if (s == "parabolic") return Mode::Parabolic;
    if (s == "elliptic") return Mode::Elliptic;
    if (s == "coupled") return Mode::Coupled;
    throw PreconditionError("unknown mode '" + s + "' (expected parabolic|elliptic|coupled)");
}

int ProblemSpec::n_steps() const {
    const double r = T() / tau;
    const int n = static_cast<int>(std::lround(r));
    IDLAB_REQUIRE(n >= 1 && std::abs(r - n) <= 1e-9 * r, "ProblemSpec: T / tau must be a positive integer");
    return n;
}

ProblemSpec make_problem(std::shared_ptr<const Grid> grid, CoefficientSet coeffs, const DirichletDatum& datum,
                         double tau, std::function<double(Point)> u0) {
    ProblemSpec s;
    s.grid = std::move(grid);
    s.coeffs = std::move(coeffs);
    s.g = [datum](Point x, double t) { return datum.value(x, t); };
    const double g1 = datum.g1();
    s.u0 = u0 ? std::move(u0) : std::function<double(Point)>([g1](Point) { return g1; });
    s.tau = tau;
    s.datum = DatumScale{datum.eps(), datum.window()};
    return s;
}

namespace {

void check_spec(const ProblemSpec& spec, bool needs_u0) {
    IDLAB_REQUIRE(spec.grid != nullptr, "ProblemSpec: grid is not set");
    IDLAB_REQUIRE(static_cast<bool>(spec.g), "ProblemSpec: Dirichlet data g is not set");
    IDLAB_REQUIRE(!needs_u0 || static_cast<bool>(spec.u0), "ProblemSpec: initial value u0 is not set");
    IDLAB_REQUIRE(spec.tau > 0.0, "ProblemSpec: tau must be positive");
    IDLAB_REQUIRE(spec.controls.tol > 0.0 && spec.controls.max_iter >= 1, "ProblemSpec: invalid nonlinear controls");
    spec.coeffs.validate();
    if (!spec.datum) return;
    const Grid& g = *spec.grid;
    const DatumScale& d = *spec.datum;
    if (needs_u0) {
        const double wlen = d.window.t2 - d.window.t1;
        if (spec.tau > wlen / 64.0 * (1.0 + 1e-12)) {
            std::ostringstream os;
            os << "time step " << spec.tau << " does not resolve the datum window (need tau <= " << wlen / 64.0
               << ")";
            throw PreconditionError(os.str());
        }
    }
    const double xb = g.domain().xbar.x;
    std::size_t inside = 0;
    for (double x : g.xs()) inside += std::abs(x - xb) < d.eps ? 1 : 0;
    if (inside < 4) {
        std::ostringstream os;
        os << "Gamma_M under-resolved: only " << inside << " nodes across the datum support at eps = " << d.eps;
        throw PreconditionError(os.str());
    }
}

void set_dirichlet(const Grid& g, const std::function<double(Point, double)>& gfun, double t, std::span<double> u) {
    const auto& dir = g.dirichlet_mask();
    for (std::size_t k = 0; k < u.size(); ++k) {
        if (dir[k]) u[k] = gfun(g.point(k), t);
    }
}

using DriftHook = std::function<const std::vector<Point>&(double, std::span<const double>)>;

class Stepper {
public:
    Stepper(const Assembler& asmb, const ProblemSpec& spec)
        : asmb_(asmb), spec_(spec), lin_(spec.linear, spec.controls.linear_tol), K_(asmb.empty_matrix()),
          J_(asmb.empty_reduced()) {}

    /// Solves level n in place; `u` holds the previous level with new
    /// Dirichlet values on entry.
    void step(int n, double t, double tau, std::span<double> u, std::span<const double> s_old, const DriftHook& hook,
              SolveStats& stats) {
        const CoefficientSet& c = spec_.coeffs;
        const Grid& g = asmb_.grid();
        const auto w = g.volume_weights();
        const auto free = asmb_.free_nodes();
        const std::size_t nn = g.n_nodes(), nf = free.size();
        std::vector<double> stiff(nn), B(nn, 0.0), C(nn), s(nn), diag(nf), rhs(nf), delta(nf);
        std::vector<double> history;
        double r0 = 0.0;
        for (int it = 0;; ++it) {
            asmb_.stiffness(asmb_.cell_diffusion(c, t, u), K_);
            K_.multiply(u, stiff);
            if (hook) {
                asmb_.drift_vector(hook(t, u), B);
            } else if (c.has_b()) {
                asmb_.drift_vector(asmb_.cell_drift(c, t, u), B);
            }
            asmb_.reaction_vector(c, t, u, C);
            asmb_.storage_vector(c, t, u, s);
            // K_kk u_k bounds the cancellation in (K u)_k, hence its roundoff.
            const std::vector<double> kd = K_.diagonal();
            double r = 0.0, scale = 0.0;
            for (std::size_t q = 0; q < nf; ++q) {
                const std::size_t k = free[q];
                const double f = stiff[k] + B[k] + C[k] - (s[k] - s_old[k]) / tau;
                rhs[q] = -f;
                r = std::max(r, std::abs(f));
                scale = std::max({scale, std::abs(kd[k] * u[k]), std::abs(B[k]), std::abs(C[k]), std::abs(s[k]) / tau});
            }
            history.push_back(r);
            if (it == 0) r0 = r;
            if (r <= std::max(spec_.controls.tol * r0, spec_.controls.abs_floor * scale)) {
                stats.picard_iterations += it;
                stats.max_picard_per_step = std::max(stats.max_picard_per_step, it);
                stats.max_residual = std::max(stats.max_residual, r);
                stats.last_history = std::move(history);
                return;
            }
            if (it == spec_.controls.max_iter) {
                std::ostringstream os;
                os << "Picard iteration did not converge at step " << n << " (t = " << t << "): residual " << r
                   << " after " << it << " iterations";
                throw ConvergenceError(os.str(), n, std::move(history));
            }
            for (std::size_t q = 0; q < nf; ++q) {
                const std::size_t k = free[q];
                const double dp = c.eval_d_prime(t, u[k]);
                if (!(dp < 0.0)) throw PreconditionError("storage term d(t,u) must be strictly decreasing in u");
                diag[q] = -w[k] * dp / tau;
            }
            asmb_.restrict_to_free(K_, diag, J_);
            std::fill(delta.begin(), delta.end(), 0.0);
            lin_.solve(J_, rhs, delta);
            for (std::size_t q = 0; q < nf; ++q) u[free[q]] += delta[q];
        }
    }

    [[nodiscard]] int factorizations() const { return lin_.factorizations(); }

private:
    const Assembler& asmb_;
    const ProblemSpec& spec_;
    LinearSolver lin_;
    CsrMatrix K_, J_;
};

std::vector<double> uniform_times(double T, int n) {
    std::vector<double> t(static_cast<std::size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) t[static_cast<std::size_t>(k)] = T * k / n;
    return t;
}

FieldST initial_field(const ProblemSpec& spec, int n_steps) {
    const Grid& g = *spec.grid;
    FieldST f(spec.grid, uniform_times(spec.T(), n_steps));
    auto u = f.level(0);
    const auto& dir = g.dirichlet_mask();
    double mismatch = 0.0;
    for (std::size_t k = 0; k < g.n_nodes(); ++k) {
        const Point x = g.point(k);
        u[k] = spec.u0(x);
        if (dir[k]) {
            const double gv = spec.g(x, 0.0);
            mismatch = std::max(mismatch, std::abs(gv - u[k]));
            u[k] = gv;
        }
    }
    if (mismatch > 1e-8) {
        logger().warn("initial value and Dirichlet data differ by up to {} on the boundary; using g(x, 0) there",
                      mismatch);
    }
    return f;
}

FieldST run_parabolic(const ProblemSpec& spec, SolveStats* stats_out, const DriftHook& hook) {
    check_spec(spec, true);
    const int N = spec.n_steps();
    const Assembler asmb(spec.grid);
    const Grid& g = *spec.grid;
    FieldST f = initial_field(spec, N);
    SolveStats stats;
    Stepper stepper(asmb, spec);
    std::vector<double> s_old(g.n_nodes());
    asmb.storage_vector(spec.coeffs, 0.0, f.level(0), s_old);
    for (int n = 1; n <= N; ++n) {
        const double t = f.time(static_cast<std::size_t>(n));
        const double tau = t - f.time(static_cast<std::size_t>(n) - 1);
        auto u = f.level(static_cast<std::size_t>(n));
        const auto prev = f.level(static_cast<std::size_t>(n) - 1);
        std::copy(prev.begin(), prev.end(), u.begin());
        set_dirichlet(g, spec.g, t, u);
        stepper.step(n, t, tau, u, s_old, hook, stats);
        asmb.storage_vector(spec.coeffs, t, u, s_old);
        ++stats.steps;
    }
    stats.factorizations = stepper.factorizations();
    f.reported_bound = f.energy_norm();
    if (stats_out) *stats_out = std::move(stats);
    return f;
}

} // namespace

FieldST solve_parabolic(const ProblemSpec& spec, SolveStats* stats) { return run_parabolic(spec, stats, {}); }

FieldST solve_elliptic(const ProblemSpec& spec, SolveStats* stats_out) {
    check_spec(spec, false);
    const Grid& g = *spec.grid;
    const Assembler asmb(spec.grid);
    const CoefficientSet& c = spec.coeffs;
    FieldST f(spec.grid, {0.0});
    auto u = f.level(0);
    for (std::size_t k = 0; k < g.n_nodes(); ++k) u[k] = spec.u0 ? spec.u0(g.point(k)) : 0.0;
    set_dirichlet(g, spec.g, 0.0, u);

    const auto free = asmb.free_nodes();
    const std::size_t nn = g.n_nodes(), nf = free.size();
    LinearSolver lin(spec.linear, spec.controls.linear_tol);
    CsrMatrix K = asmb.empty_matrix(), J = asmb.empty_reduced();
    std::vector<double> stiff(nn), B(nn, 0.0), C(nn), rhs(nf), delta(nf);
    std::vector<double> history;
    SolveStats stats;
    for (int it = 0;; ++it) {
        asmb.stiffness(asmb.cell_diffusion(c, 0.0, u), K);
        K.multiply(u, stiff);
        if (c.has_b()) asmb.drift_vector(asmb.cell_drift(c, 0.0, u), B);
        asmb.reaction_vector(c, 0.0, u, C);
        double r = 0.0;
        for (std::size_t q = 0; q < nf; ++q) {
            const std::size_t k = free[q];
            rhs[q] = -(stiff[k] + B[k] + C[k]);
            r = std::max(r, std::abs(rhs[q]));
        }
        if (it > 0) {
            double du = 0.0, un = 0.0;
            for (double d : delta) du = std::max(du, std::abs(d));
            for (double v : u) un = std::max(un, std::abs(v));
            history.push_back(un > 0.0 ? du / un : du);
            if (du <= spec.controls.tol * un || du == 0.0) {
                stats.picard_iterations = it;
                stats.max_picard_per_step = it;
                stats.max_residual = r;
                break;
            }
        }
        if (it == spec.controls.max_iter) {
            throw ConvergenceError("elliptic Picard iteration did not converge", 0, std::move(history));
        }
        asmb.restrict_to_free(K, {}, J);
        std::fill(delta.begin(), delta.end(), 0.0);
        lin.solve(J, rhs, delta);
        for (std::size_t q = 0; q < nf; ++q) u[free[q]] += delta[q];
    }
    stats.steps = 1;
    stats.factorizations = lin.factorizations();
    stats.last_history = std::move(history);
    f.reported_bound = f.energy_norm();
    if (stats_out) *stats_out = std::move(stats);
    return f;
}

CoupledResult solve_coupled(const ProblemSpec& spec, const CoupledSpec& second) {
    IDLAB_REQUIRE(static_cast<bool>(second.b) && static_cast<bool>(second.h), "solve_coupled: b and h must be set");
    IDLAB_REQUIRE(std::abs(second.b(0.0)) <= 1e-12 && std::abs(second.b(1.0)) <= 1e-12,
                  "solve_coupled: chemotactic sensitivity must satisfy b(0) = b(1) = 0");
    check_spec(spec, true);
    const Grid& g = *spec.grid;
    for (std::size_t k = 0; k < g.n_nodes(); ++k) {
        const double v = spec.u0(g.point(k));
        IDLAB_REQUIRE(v >= 0.0 && v <= 1.0, "solve_coupled: initial value must lie in [0, 1]");
    }

    // -Lap V + V = h(u) with natural (zero-flux) boundary: every node is free.
    const Assembler asmb(spec.grid);
    CsrMatrix KV = asmb.empty_matrix();
    asmb.stiffness(std::vector<double>(g.n_cells(), 1.0), KV);
    const auto w = g.volume_weights();
    for (std::size_t k = 0; k < g.n_nodes(); ++k) KV.vals[static_cast<std::size_t>(KV.find(k, k))] += w[k];
    LinearSolver vsolver(LinearMethod::Direct);

    std::vector<double> V(g.n_nodes(), 0.0), rhs(g.n_nodes());
    std::vector<Point> drift(g.n_cells());
    auto solve_v = [&](std::span<const double> u) {
        for (std::size_t k = 0; k < u.size(); ++k) rhs[k] = w[k] * second.h(u[k]);
        vsolver.solve(KV, rhs, V);
    };
    const DriftHook hook = [&](double, std::span<const double> u) -> const std::vector<Point>& {
        solve_v(u);
        const std::vector<double> means = asmb.cell_means(u);
        for (std::size_t cj = 0; cj < g.n_cells_y(); ++cj) {
            for (std::size_t ci = 0; ci < g.n_cells_x(); ++ci) {
                const std::size_t c = cj * g.n_cells_x() + ci;
                const double v00 = V[g.node(ci, cj)], v10 = V[g.node(ci + 1, cj)];
                const double v11 = V[g.node(ci + 1, cj + 1)], v01 = V[g.node(ci, cj + 1)];
                const Point gv{0.5 * ((v10 - v00) + (v11 - v01)) / g.hx(ci),
                               0.5 * ((v01 - v00) + (v11 - v10)) / g.hy(cj), 0.0};
                drift[c] = second.b(means[c]) * gv;
            }
        }
        return drift;
    };

    FieldST u = run_parabolic(spec, nullptr, hook);
    // V at each stored level, consistent with the converged u.
    FieldST vf(spec.grid, std::vector<double>(u.times().begin(), u.times().end()));
    for (std::size_t n = 0; n < u.n_levels(); ++n) {
        solve_v(u.level(n));
        std::copy(V.begin(), V.end(), vf.level(n).begin());
    }
    return {std::move(u), std::move(vf)};
}

std::vector<double> level_residual(const Assembler& asmb, const CoefficientSet& c, const FieldST& u, std::size_t n) {
    IDLAB_REQUIRE(n >= 1 && n < u.n_levels(), "level_residual: level out of range");
    const double t = u.time(n), tp = u.time(n - 1), tau = t - tp;
    const LevelTerms cur = asmb.terms(c, t, u.level(n), true);
    std::vector<double> s_old(u.grid().n_nodes());
    asmb.storage_vector(c, tp, u.level(n - 1), s_old);
    std::vector<double> r(cur.stiff.size());
    for (std::size_t k = 0; k < r.size(); ++k) {
        r[k] = cur.stiff[k] + cur.drift[k] + cur.reaction[k] - (cur.storage[k] - s_old[k]) / tau;
    }
    return r;
}

} // namespace idlab
