#pragma once

// Recovery of a piecewise-linear a(u) (optionally a(t,u)) from synthetic flux
// pairings by regularized output least squares, and the Kirchhoff transform
// w = A(u).

#include "idlab/coefficients.hpp"
#include "idlab/field.hpp"
#include "idlab/flux.hpp"
#include "idlab/singular.hpp"
#include "idlab/solver.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace idlab {

/// Knot values of a on a uniform u-grid over [lo, hi], optionally times a
/// time-knot grid (row-major in time). Constant extension outside [lo, hi].
struct ParamA {
    double lo = 0.0, hi = 1.0;
    std::vector<double> values;   ///< n_t * n_u entries
    std::vector<double> t_knots;  ///< empty: a independent of t
    double a_lo = 1e-2;           ///< positivity floor

    [[nodiscard]] std::size_t n_u() const;
    [[nodiscard]] std::size_t n_t() const { return t_knots.empty() ? 1 : t_knots.size(); }
    [[nodiscard]] std::vector<double> u_knots() const;
    [[nodiscard]] double eval(double t, double u) const;
    /// A(t, u) = int_0^u a(t, s) ds, exact for the piecewise-linear a.
    [[nodiscard]] double antiderivative(double t, double u) const;
    /// Throws PreconditionError if a knot is below a_lo or a_lo <= 0.
    void validate() const;
    /// `base` with its a replaced by this table.
    [[nodiscard]] CoefficientSet apply(const CoefficientSet& base) const;
};

/// Uniform knots over [lo, hi] sampling f(u).
ParamA sample_param(const std::function<double(double)>& f, double lo, double hi, std::size_t n_knots,
                    double a_lo = 1e-2);

/// w = A(t, u) nodewise on every level.
FieldST kirchhoff_transform(const ParamA& a, const FieldST& u);
/// Inverse by safeguarded Newton on a bisection bracket (tolerance 1e-12).
FieldST inverse_kirchhoff(const ParamA& a, const FieldST& w);
double inverse_kirchhoff(const ParamA& a, double t, double w);

struct DatumSpec {
    double eps = 0.25;
    double g1 = 0.0;
    double g2 = 1.0;
};

struct MeasurementSet {
    Domain domain;
    TimeWindow window;
    ValueRange range;
    std::vector<DatumSpec> data;
    std::size_t phi_battery_size = 8;
    std::vector<std::vector<double>> pairings;  ///< [datum][test function]
    double noise = 0.0;                         ///< relative Gaussian noise level
    std::uint64_t seed = 0;
    int synthesis_cells = 64;
    double synthesis_tau = 1.0 / 256.0;
    int inversion_cells = 32;
    double inversion_tau = 1.0 / 128.0;
    bool inverse_crime = false;  ///< synthesis grid equals inversion grid
    std::string truth;           ///< name of the coefficients used for synthesis
    std::vector<std::string> warnings;

    [[nodiscard]] std::vector<DirichletDatum> datums() const;
    [[nodiscard]] std::vector<BatteryMember> battery() const;
};

struct SynthesisOptions {
    std::size_t battery_size = 8;
    std::size_t phi_battery_size = 8;
    int inversion_cells = 32;
    double inversion_tau = 1.0 / 128.0;
    bool two_grid = true;  ///< synthesize on (h/2, tau/2)
    double noise = 0.0;
    std::uint64_t seed = 1;
    std::function<double(Point)> u0;  ///< default: constant g1 of each datum
    NonlinearControls controls{};
};

MeasurementSet synthesize_measurements(const CoefficientSet& truth, const Domain& domain,
                                       const SynthesisOptions& options);

/// Pairings <j(g_k), phi_m> of the forward model on the given grid.
std::vector<std::vector<double>> forward_pairings(const CoefficientSet& coeffs, const MeasurementSet& ms, int cells,
                                                  double tau, const std::function<double(Point)>& u0 = nullptr,
                                                  const NonlinearControls& controls = {});

struct RecoveryOptions {
    double reg_weight = 1e-6;
    int max_iter = 20;
    double fd_step = 1e-4;         ///< relative central-difference step
    double step_tol = 1e-8;        ///< stop when ||delta||_inf falls below
    double objective_tol = 1e-12;  ///< stop when the relative decrease falls below
    int max_backtracks = 12;
    int threads = 1;
    std::function<double(Point)> u0;
    NonlinearControls controls{};
};

struct RecoveryResult {
    ParamA a;
    std::vector<double> objective_history;
    double misfit = 0.0;  ///< data part of the final objective
    int iterations = 0;
    bool converged = false;
    std::string status;  ///< "CONVERGED" or "NOT-CONVERGED: reason"
};

/// Objective sum (pairing - data)^2 + reg ||D2 knots||^2 (second differences
/// along u within each time row).
double recovery_objective(const std::vector<std::vector<double>>& model, const MeasurementSet& ms,
                          const ParamA& a, double reg_weight, double* misfit = nullptr);

/// Projected Gauss-Newton with central finite-difference Jacobian and Armijo
/// backtracking. `base` supplies b, c, d (known); only a is recovered.
RecoveryResult recover_a(const MeasurementSet& ms, const CoefficientSet& base, const ParamA& init,
                         const RecoveryOptions& options);

/// max |a - a_true| / max |a_true| over the knots.
double relative_knot_error(const ParamA& a, const std::function<double(double, double)>& truth);

} // namespace idlab
