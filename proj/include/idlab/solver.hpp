#pragma once

// Forward solvers: backward Euler in time, Picard iteration on the lagged
// coefficients with a diagonal Newton step on the storage term.

#include "idlab/assembly.hpp"
#include "idlab/coefficients.hpp"
#include "idlab/field.hpp"
#include "idlab/singular.hpp"
#include "idlab/sparse.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace idlab {

enum class Mode { Parabolic, Elliptic, Coupled };

std::string to_string(Mode m);
Mode parse_mode(const std::string& s);

struct NonlinearControls {
    double tol = 1e-10;         ///< relative residual (parabolic) or update (elliptic)
    int max_iter = 50;
    double abs_floor = 1e-12;   ///< residual floor relative to the size of the terms
    double linear_tol = 1e-12;
};

/// Scale of a localized Dirichlet datum; used to check that (h, tau)
/// resolve it before solving.
struct DatumScale {
    double eps = 0.0;
    TimeWindow window{};
};

struct ProblemSpec {
    std::shared_ptr<const Grid> grid;
    CoefficientSet coeffs;
    std::function<double(Point, double)> g;  ///< Dirichlet data on the whole boundary
    std::function<double(Point)> u0;         ///< initial value (parabolic)
    double tau = 1.0 / 64.0;
    NonlinearControls controls{};
    LinearMethod linear = LinearMethod::Direct;
    Mode mode = Mode::Parabolic;
    std::optional<DatumScale> datum;

    [[nodiscard]] double T() const { return grid->domain().T; }
    [[nodiscard]] int n_steps() const;
};

/// Spec with g from a localized datum (constant g1 off Gamma_M is built in)
/// and u0 = g1 unless given.
ProblemSpec make_problem(std::shared_ptr<const Grid> grid, CoefficientSet coeffs, const DirichletDatum& datum,
                         double tau, std::function<double(Point)> u0 = {});

struct SolveStats {
    int steps = 0;
    int picard_iterations = 0;
    int max_picard_per_step = 0;
    double max_residual = 0.0;  ///< largest final residual over the steps (free rows)
    int factorizations = 0;
    std::vector<double> last_history;
};

/// Throws PreconditionError when the spec is inconsistent or (h, tau) do not
/// resolve the datum; ConvergenceError when Picard fails (step and residual
/// history attached).
FieldST solve_parabolic(const ProblemSpec& spec, SolveStats* stats = nullptr);

/// Single-level field; Picard on a(u) stopping on the relative update.
FieldST solve_elliptic(const ProblemSpec& spec, SolveStats* stats = nullptr);

struct CoupledSpec {
    std::function<double(double)> b;  ///< chemotactic sensitivity, b(0) = b(1) = 0
    std::function<double(double)> h;  ///< production term
};

struct CoupledResult {
    FieldST u;
    FieldST V;
};

/// Parabolic-elliptic system u_t = div(a grad u + b(u) grad V), -Lap V + V = h(u)
/// with homogeneous Neumann data for V. V is recomputed inside every Picard
/// iteration, so a converged step solves the pair.
CoupledResult solve_coupled(const ProblemSpec& spec, const CoupledSpec& second);

/// Discrete weak-form residual vector at level n >= 1 over all nodes
/// (zero at free nodes for a converged solution).
std::vector<double> level_residual(const Assembler& asmb, const CoefficientSet& c, const FieldST& u, std::size_t n);

} // namespace idlab
