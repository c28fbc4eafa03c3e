#pragma once

// The Neumann flux as a variational functional:
//
//   <j, phi> = int_0^T (a grad u + b, grad phi) + (c, phi) + (d(t,u), d_t phi) dt
//
// evaluated with the discrete operators of the solver, so that it is exactly
// the discrete residual tested against the nodal interpolant of phi. The
// storage part is summed by parts against theta(t_{n+1}) - theta(t_n), which
// integrates d_t phi exactly in time.

#include "idlab/assembly.hpp"
#include "idlab/coefficients.hpp"
#include "idlab/field.hpp"
#include "idlab/solver.hpp"
#include "idlab/spacetime.hpp"

#include <memory>
#include <string>
#include <vector>

namespace idlab {

/// Per-part pairing of a flux functional with a test function.
struct PairingParts {
    double stiff = 0.0;     ///< (a grad u, grad phi)
    double drift = 0.0;     ///< (b, grad phi)
    double reaction = 0.0;  ///< (c, phi)
    double storage = 0.0;   ///< (d, d_t phi)
    [[nodiscard]] double total() const { return stiff + drift + reaction + storage; }
};

class FluxFunctional {
public:
    /// Assembles and caches the per-level terms of `u` (read-only afterwards).
    FluxFunctional(const FieldST& u, const CoefficientSet& coeffs, Mode mode = Mode::Parabolic);

    /// Throws PreconditionError if phi does not vanish at t = 0 and t = T
    /// (parabolic mode).
    [[nodiscard]] double pair(const SpaceTimeFn& phi) const { return parts(phi).total(); }
    [[nodiscard]] PairingParts parts(const SpaceTimeFn& phi) const;

    /// Full-node discrete residual at level n (level 0 in elliptic mode).
    [[nodiscard]] std::vector<double> residual(std::size_t n) const;

    [[nodiscard]] Mode mode() const noexcept { return mode_; }
    [[nodiscard]] const Grid& grid() const noexcept { return *grid_; }
    [[nodiscard]] std::span<const double> times() const noexcept { return times_; }
    [[nodiscard]] const std::vector<LevelTerms>& levels() const noexcept { return levels_; }

private:
    std::shared_ptr<const Grid> grid_;
    Mode mode_;
    std::vector<double> times_;
    std::vector<LevelTerms> levels_;  // index = time level; level 0 carries only storage in parabolic mode
};

/// Weak-form residual of u against a test function that vanishes on the
/// whole boundary and at t = 0, T (PreconditionError otherwise).
double weak_residual(const FieldST& u, const SpaceTimeFn& phi, const CoefficientSet& coeffs,
                     Mode mode = Mode::Parabolic);

/// ||phi||_{H^1(0,T; H^1(Omega))} (parabolic) or ||phi||_{H^1(Omega)}
/// (elliptic), by Gauss quadrature in time and the grid's Q1 interpolant in space.
double h1_h1_norm(const SpaceTimeFn& phi, const Grid& grid, Mode mode = Mode::Parabolic);

struct BatteryMember {
    SpaceTimeFn phi;
    std::string label;
};

/// Nested battery of test functions supported on Gamma_M: hats in x1 on
/// dyadically refined centres, a linear decay in x2 over depth eps0, and a
/// quadratic time factor. battery(n) is a prefix of battery(n + 1).
std::vector<BatteryMember> gamma_m_battery(const Domain& domain, std::size_t size, Mode mode = Mode::Parabolic);

/// Throws PreconditionError unless phi vanishes on the boundary outside
/// Gamma_M (at the grid nodes) and, in parabolic mode, at t = 0, T.
void check_gamma_m_support(const SpaceTimeFn& phi, const Grid& grid, Mode mode);

struct FluxGap {
    double gap = 0.0;          ///< max_m |<j1 - j2, phi_m>| / ||phi_m||
    std::size_t argmax = 0;
    std::vector<double> per_member;
};

FluxGap flux_gap_on_gamma_m(const FluxFunctional& j1, const FluxFunctional& j2,
                            const std::vector<BatteryMember>& battery);

} // namespace idlab
