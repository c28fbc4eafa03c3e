#pragma once

// Numerical checks of the singular test function estimates: L^p scaling of
// lambda^eps and its gradient, the normal-derivative constant on Gamma_M, and
// admissibility of the localized Dirichlet data.

#include "idlab/singular.hpp"

#include <string>
#include <vector>

namespace idlab {

enum class Regime { Bounded, Logarithmic, Power };
std::string to_string(Regime r);

/// Predicted behaviour of ||lambda^eps||_p (gradient = false) or
/// ||grad lambda^eps||_p as eps -> 0: exponent of eps for Power, exponent of
/// |ln eps| for Logarithmic.
struct ScalingLaw {
    Regime regime = Regime::Power;
    double eps_exponent = 0.0;
    double log_exponent = 0.0;
};
ScalingLaw scaling_law(bool gradient, double p, int dim);

struct ScalingCheck {
    std::string quantity;  ///< "lambda" or "grad_lambda"
    double p = 1.0;
    int dim = 2;
    ScalingLaw law;
    std::vector<double> eps;
    std::vector<double> values;
    double fitted_slope = 0.0;
    double ratio_spread = 0.0;  ///< max/min of value / |ln eps|^log_exponent (value for Bounded)
    bool pass = false;
};

struct ScalingOptions {
    std::vector<int> dims{2, 3};
    std::vector<double> eps_factors{0.125, 0.0625, 0.03125, 0.015625, 0.0078125, 0.00390625, 0.001953125};
    double slope_tol = 0.05;
    double ratio_limit = 3.0;
};

/// Norms p in {1, d/(d-1), 2, 4} and gradient norms p in {1, 2} per dimension.
std::vector<ScalingCheck> scaling_suite(const ScalingOptions& options = {});

struct GammaConstantRow {
    int dim = 2;
    double eps = 0.0;
    double scaled = 0.0;    ///< eps * int_{Gamma_M ∩ B_eps} d_n lambda
    double expected = 0.0;  ///< 1/(2 pi) or 1/(4 sqrt 2)
    double min_value = 0.0;
    bool pass = false;
};

std::vector<GammaConstantRow> gamma_constant_suite(const ScalingOptions& options = {}, double tol = 1e-6);

struct DatumRow {
    int dim = 2;
    double eps = 0.0;
    double min_value = 0.0;  ///< over a space-time sample grid on the boundary face
    double max_value = 0.0;
    double norm = 0.0;       ///< ||g||_{H^1(0,T;H^1(boundary))}
    bool in_range = false;
};

struct DatumSuite {
    std::vector<DatumRow> rows;
    double norm_spread = 0.0;  ///< max/min norm across the sweep
    bool pass = false;
};

DatumSuite datum_admissibility_suite(const ScalingOptions& options = {}, double g1 = 0.0, double g2 = 1.0);

struct FarFieldRow {
    int dim = 2;
    double eps = 0.0;
    FarFieldBound bound;
    bool pass = false;
};

std::vector<FarFieldRow> far_field_suite(const ScalingOptions& options = {});

} // namespace idlab
