#pragma once

// Executable form of the uniqueness argument: antiderivatives A_i, the
// integral identity tested with singular harmonic functions, the eps-sweep
// that separates the principal boundary term (~ eps^{(1-d)/2}) from the
// lower-order terms (~ |ln eps|), and the converse check for identical specs.

#include "idlab/coefficients.hpp"
#include "idlab/field.hpp"
#include "idlab/flux.hpp"
#include "idlab/singular.hpp"
#include "idlab/solver.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace idlab {

/// A_i(t, g) = int_{g_lower}^{g} a_i(t, u) du (adaptive Gauss-Kronrod, 1e-12).
double antiderivative_A(const CoefficientSet& coeffs, double t, double g, double g_lower);

struct Rect {
    double t1 = 0.0, t2 = 1.0;
    double g1 = 0.0, g2 = 1.0;
};

/// Region where orientation * (a1 - a2) >= eta.
struct Disagreement {
    double t_witness = 0.0;
    double g_witness = 0.0;
    double eta = 0.0;
    double max_diff = 0.0;
    Rect rect;
    int orientation = 1;  ///< +1 if a1 > a2 at the witness, -1 otherwise

    /// Time window inside rect for the localized datum; (T/4, 3T/4) when
    /// rect spans all of (0, T).
    [[nodiscard]] TimeWindow window(double T) const;
};

/// Scans an n x n grid of cell centres in (0,T) x (g_lo, g_hi) (the common
/// range of both sets), takes the largest |a1 - a2| with eta = half of it and
/// returns the largest sign-consistent rectangle through the witness on which
/// the gap stays >= eta. std::nullopt if the maximal difference is <= atol.
std::optional<Disagreement> locate_disagreement(const CoefficientSet& a1, const CoefficientSet& a2,
                                                const Domain& domain, int n = 256, double atol = 1e-12);

struct IdentityBreakdown {
    double lhs = 0.0;       ///< int int (A1(t,g) - A2(t,g)) d_n phi ds dt
    double flux = 0.0;      ///< <j1 - j2, phi>
    double storage = 0.0;   ///< (d1(u1) - d2(u2), d_t phi)
    double drift = 0.0;     ///< (b1 - b2, grad phi)
    double reaction = 0.0;  ///< (c1 - c2, phi)
    double rhs_total = 0.0; ///< flux - storage - drift - reaction
    double residual = 0.0;  ///< lhs - rhs_total
};

struct IdentityOptions {
    std::function<double(Point, double)> g;  ///< exact Dirichlet data shared by both sides
    double g_lower = 0.0;                    ///< lower limit of A_i
    double focus_scale = 0.0;                ///< refine the boundary quadrature toward x̄ at this scale (0: none)
    std::vector<double> time_breaks;         ///< kinks in time of g and phi
    bool check_harmonic = true;
};

/// Throws PreconditionError if a spatial factor of phi is not harmonic
/// (Richardson test of 5-point Laplacians) or phi does not vanish at t = 0, T.
IdentityBreakdown evaluate_identity(const FieldST& u1, const FieldST& u2, const CoefficientSet& c1,
                                    const CoefficientSet& c2, const SpaceTimeFn& phi, const IdentityOptions& options);
/// Same, reusing assembled flux functionals of the two solutions.
IdentityBreakdown evaluate_identity(const FluxFunctional& j1, const FluxFunctional& j2, const CoefficientSet& c1,
                                    const CoefficientSet& c2, const SpaceTimeFn& phi, const IdentityOptions& options);

/// int_0^T int_{boundary} (A1(t,g) - A2(t,g)) d_n phi ds dt by composite Gauss
/// quadrature with the exact data g.
double boundary_antiderivative_integral(const CoefficientSet& c1, const CoefficientSet& c2, const SpaceTimeFn& phi,
                                        const Domain& domain, const IdentityOptions& options);

/// Throws PreconditionError unless every spatial factor passes the
/// harmonicity test at interior sample points. `pole_distance_scale` keeps the
/// stencils away from a nearby exterior singularity.
void check_harmonic(const SpaceTimeFn& phi, const Domain& domain, double pole_distance_scale = 0.0);

/// int_0^T int_{Gamma_M ∩ B_eps(x̄)} (A1 - A2)(t, g^eps) chi(t) d_n lambda^eps ds dt.
double principal_term(const CoefficientSet& c1, const CoefficientSet& c2, const DirichletDatum& datum,
                      const SingularTestFn& fn, double g_lower);

struct IdentityStudyOptions {
    double eps_factor = 1.0;                 ///< eps / eps0 of the test function and datum
    std::vector<int> cells{12, 24, 48, 96};  ///< uniform grids; tau shrinks with h from window / 64
    std::function<double(Point)> u0_1;       ///< default: constant g1
    std::function<double(Point)> u0_2;
    NonlinearControls controls{};
};

struct IdentityStudyRow {
    double h = 0.0;
    double tau = 0.0;
    IdentityBreakdown terms;
    double relative = 0.0;  ///< |residual| / max(|lhs|, 1)
};

struct IdentityStudy {
    std::vector<IdentityStudyRow> rows;
    double order = 0.0;  ///< fitted slope of relative residual against h + tau
    double C = 0.0;      ///< max relative / (h + tau)
};

/// Solves both problems for a fixed datum and test function on a sequence of
/// refined grids and tracks the identity residual.
IdentityStudy identity_refinement_study(const CoefficientSet& c1, const CoefficientSet& c2, const Domain& domain,
                                        const IdentityStudyOptions& options);

enum class Verdict { Distinguishable, NotDetected };
std::string to_string(Verdict v);

struct SweepOptions {
    std::vector<double> eps_factors{0.125, 0.0625, 0.03125, 0.015625, 0.0078125};  ///< eps / eps0
    LowerOrderTerms lower1{};
    LowerOrderTerms lower2{};
    bool apply_lower_order = false;          ///< replace b, c, d of both sides by lower1 / lower2
    std::function<double(Point)> u0_1;       ///< default: constant g1 of the datum
    std::function<double(Point)> u0_2;
    double h_coarse = 1.0 / 32.0;
    int tau_divisions = 64;                  ///< tau = T / ceil(tau_divisions T / window length)
    NonlinearControls controls{};
    LinearMethod linear = LinearMethod::Direct;
    int threads = 1;
    bool solve_when_undetected = false;      ///< run the solves even when a1 == a2
};

struct ScalingRow {
    double eps = 0.0;
    double principal = 0.0;
    double lhs = 0.0;
    double flux = 0.0;
    double flux_near = 0.0;  ///< <j1 - j2, chi^{eps0} phi>
    double flux_far = 0.0;   ///< <j1 - j2, (1 - chi^{eps0}) phi>
    double storage = 0.0;
    double drift = 0.0;
    double reaction = 0.0;
    double residual = 0.0;
    double lower_sum = 0.0;  ///< |storage| + |drift| + |reaction|
    double flux_bound = 0.0; ///< C_A (3 + C_U) ||phi||_{H^1(0,T;H^1)}
    double h_min = 0.0;
    double tau = 0.0;
    std::size_t n_nodes = 0;
    bool solved = false;
    std::string status = "ok";
};

struct ScalingReport {
    std::vector<ScalingRow> rows;
    int dim = 2;
    double predicted_slope = -0.5;
    double principal_slope = 0.0;    ///< fitted on |principal|
    double flux_slope = 0.0;         ///< fitted on |flux|
    double lower_ratio_spread = 0.0; ///< max/min of lower_sum / |ln eps|
    double separation = 0.0;         ///< |principal| / lower_sum at the smallest eps
    double C1 = 0.0;                 ///< min |principal| eps^{(d-1)/2}
    double C2 = 0.0;                 ///< max lower_sum / |ln eps|
    Verdict verdict = Verdict::NotDetected;
    std::optional<Disagreement> disagreement;
    std::string note;
};

ScalingReport discrimination_sweep(const CoefficientSet& c1, const CoefficientSet& c2, const Domain& domain,
                                   const SweepOptions& options);

struct ReverseCheckOptions {
    Mode mode = Mode::Parabolic;
    std::size_t battery_size = 8;    ///< Dirichlet data: eps in {eps0, eps0/2} x four levels g1
    std::size_t phi_battery_size = 8;
    int n_cells = 32;
    double tau = 1.0 / 128.0;
    NonlinearControls controls{};
};

struct ReverseCheckReport {
    Mode mode = Mode::Parabolic;
    std::vector<double> gaps;  ///< one per Dirichlet datum
    double max_gap = 0.0;
    double threshold = 0.0;    ///< 10 x nonlinear tolerance
    bool pass = false;
};

/// Solves both sides for every datum of the battery and measures the flux
/// gap on Gamma_M. Requires identical lower-order terms and initial values
/// (checked by sampling); a1 may differ, which turns the check into a
/// sensitivity probe.
ReverseCheckReport reverse_check(const CoefficientSet& c1, const CoefficientSet& c2, const Domain& domain,
                                 const std::function<double(Point)>& u0, const ReverseCheckOptions& options,
                                 bool require_identical_a = true);

/// The default Dirichlet battery used by reverse_check and reconstruction.
std::vector<DirichletDatum> dirichlet_battery(const Domain& domain, std::size_t size, ValueRange range,
                                              TimeWindow window);

} // namespace idlab
