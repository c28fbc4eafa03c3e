#include "idlab/flux.hpp"

#include "idlab/error.hpp"
#include "idlab/kernels.hpp"
#include "idlab/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace idlab {

namespace {

std::vector<double> nodal(const std::function<double(Point)>& f, const Grid& g) {
    std::vector<double> v(g.n_nodes());
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = f(g.point(k));
    return v;
}

double dotv(const std::vector<double>& a, const std::vector<double>& b) {
    return kernels::active().dot(a.data(), b.data(), a.size());
}

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

/// Nodal values of phi at every time level (single level in elliptic mode).
std::vector<std::vector<double>> nodal_levels(const SpaceTimeFn& phi, const Grid& g, std::span<const double> times,
                                              Mode mode) {
    std::vector<std::vector<double>> sig;
    for (const auto& term : phi.terms()) sig.push_back(nodal(term.space, g));
    const std::size_t nl = mode == Mode::Elliptic ? 1 : times.size();
    std::vector<std::vector<double>> out(nl, std::vector<double>(g.n_nodes(), 0.0));
    for (std::size_t n = 0; n < nl; ++n) {
        for (std::size_t k = 0; k < sig.size(); ++k) {
            const double th = mode == Mode::Elliptic ? 1.0 : phi.terms()[k].theta(times[n]);
            if (th == 0.0) continue;
            kernels::active().axpy(th, sig[k].data(), out[n].data(), g.n_nodes());
        }
    }
    return out;
}

void check_time_vanishing(const std::vector<std::vector<double>>& levels) {
    double scale = 0.0;
    for (const auto& l : levels) scale = std::max(scale, max_abs(l));
    const double tol = 1e-10 * scale;
    if (max_abs(levels.front()) > tol || max_abs(levels.back()) > tol) {
        throw PreconditionError("test function must vanish at t = 0 and t = T");
    }
}

} // namespace

FluxFunctional::FluxFunctional(const FieldST& u, const CoefficientSet& coeffs, Mode mode)
    : grid_(u.grid_ptr()), mode_(mode), times_(u.times().begin(), u.times().end()) {
    IDLAB_REQUIRE(mode != Mode::Coupled, "FluxFunctional: coupled mode is not supported");
    const Assembler asmb(grid_);
    if (mode == Mode::Elliptic) {
        levels_.push_back(asmb.terms(coeffs, 0.0, u.level(0), false));
        return;
    }
    IDLAB_REQUIRE(u.n_levels() >= 2, "FluxFunctional: parabolic field needs at least two levels");
    levels_.resize(u.n_levels());
    levels_[0].storage.resize(grid_->n_nodes());
    asmb.storage_vector(coeffs, times_[0], u.level(0), levels_[0].storage);
    for (std::size_t n = 1; n < u.n_levels(); ++n) levels_[n] = asmb.terms(coeffs, times_[n], u.level(n), true);
}

PairingParts FluxFunctional::parts(const SpaceTimeFn& phi) const {
    const auto phis = nodal_levels(phi, *grid_, times_, mode_);
    PairingParts p;
    if (mode_ == Mode::Elliptic) {
        const LevelTerms& L = levels_[0];
        p.stiff = dotv(L.stiff, phis[0]);
        p.drift = dotv(L.drift, phis[0]);
        p.reaction = dotv(L.reaction, phis[0]);
        return p;
    }
    check_time_vanishing(phis);
    std::vector<double> dphi(grid_->n_nodes());
    for (std::size_t n = 0; n < levels_.size(); ++n) {
        const LevelTerms& L = levels_[n];
        if (n >= 1) {
            const double tau = times_[n] - times_[n - 1];
            p.stiff += tau * dotv(L.stiff, phis[n]);
            p.drift += tau * dotv(L.drift, phis[n]);
            p.reaction += tau * dotv(L.reaction, phis[n]);
        }
        if (n + 1 < levels_.size()) {
            for (std::size_t k = 0; k < dphi.size(); ++k) dphi[k] = phis[n + 1][k] - phis[n][k];
            p.storage += dotv(L.storage, dphi);
        }
    }
    return p;
}

std::vector<double> FluxFunctional::residual(std::size_t n) const {
    const LevelTerms& L = levels_.at(n);
    std::vector<double> r(grid_->n_nodes());
    for (std::size_t k = 0; k < r.size(); ++k) r[k] = L.stiff[k] + L.drift[k] + L.reaction[k];
    if (mode_ == Mode::Elliptic) return r;
    IDLAB_REQUIRE(n >= 1, "FluxFunctional::residual: level 0 has no residual in parabolic mode");
    const double tau = times_[n] - times_[n - 1];
    for (std::size_t k = 0; k < r.size(); ++k) r[k] -= (L.storage[k] - levels_[n - 1].storage[k]) / tau;
    return r;
}

double weak_residual(const FieldST& u, const SpaceTimeFn& phi, const CoefficientSet& coeffs, Mode mode) {
    const Grid& g = u.grid();
    const auto phis = nodal_levels(phi, g, u.times(), mode);
    double scale = 0.0, bnd = 0.0;
    for (const auto& l : phis) {
        scale = std::max(scale, max_abs(l));
        for (std::size_t k = 0; k < l.size(); ++k) {
            if (g.on_boundary(k)) bnd = std::max(bnd, std::abs(l[k]));
        }
    }
    if (bnd > 1e-10 * scale) throw PreconditionError("weak_residual: test function must vanish on the boundary");
    return FluxFunctional(u, coeffs, mode).pair(phi);
}

double h1_h1_norm(const SpaceTimeFn& phi, const Grid& g, Mode mode) {
    const auto& terms = phi.terms();
    const std::size_t m = terms.size();
    std::vector<std::vector<double>> sig;
    for (const auto& t : terms) sig.push_back(nodal(t.space, g));
    const auto w = g.volume_weights();
    // H^1 Gram matrix of the nodal space factors.
    std::vector<double> gram(m * m, 0.0);
    for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t b = a; b < m; ++b) {
            double s = 0.0;
            for (std::size_t k = 0; k < g.n_nodes(); ++k) s += w[k] * sig[a][k] * sig[b][k];
            for (std::size_t cj = 0; cj < g.n_cells_y(); ++cj) {
                for (std::size_t ci = 0; ci < g.n_cells_x(); ++ci) {
                    const std::size_t n00 = g.node(ci, cj), n10 = g.node(ci + 1, cj);
                    const std::size_t n11 = g.node(ci + 1, cj + 1), n01 = g.node(ci, cj + 1);
                    // Polarization of the Q1 energy form.
                    const double hx = g.hx(ci), hy = g.hy(cj);
                    const double ep = q1_cell_energy(hx, hy, sig[a][n00] + sig[b][n00], sig[a][n10] + sig[b][n10],
                                                     sig[a][n11] + sig[b][n11], sig[a][n01] + sig[b][n01]);
                    const double em = q1_cell_energy(hx, hy, sig[a][n00] - sig[b][n00], sig[a][n10] - sig[b][n10],
                                                     sig[a][n11] - sig[b][n11], sig[a][n01] - sig[b][n01]);
                    s += 0.25 * (ep - em);
                }
            }
            gram[a * m + b] = gram[b * m + a] = s;
        }
    }
    if (mode == Mode::Elliptic) {
        double s = 0.0;
        for (double v : gram) s += v;
        return std::sqrt(std::max(s, 0.0));
    }
    const double T = g.domain().T;
    std::vector<double> bp(33);
    for (std::size_t i = 0; i < bp.size(); ++i) bp[i] = T * static_cast<double>(i) / 32.0;
    const Rule1D tr = composite_gauss(bp, 6);
    double total = 0.0;
    for (std::size_t q = 0; q < tr.nodes.size(); ++q) {
        const double t = tr.nodes[q];
        for (std::size_t a = 0; a < m; ++a) {
            for (std::size_t b = 0; b < m; ++b) {
                const double tt = terms[a].theta(t) * terms[b].theta(t) +
                                  terms[a].theta_prime(t) * terms[b].theta_prime(t);
                total += tr.weights[q] * tt * gram[a * m + b];
            }
        }
    }
    return std::sqrt(std::max(total, 0.0));
}

std::vector<BatteryMember> gamma_m_battery(const Domain& domain, std::size_t size, Mode mode) {
    IDLAB_REQUIRE(size >= 1, "gamma_m_battery: size must be positive");
    const double T = domain.T, e0 = domain.eps0, xb = domain.xbar.x;
    struct Profile {
        double a, b;
        const char* name;
    };
    const Profile parabolic[] = {{0.0, T, "full"}, {0.0, 0.5 * T, "early"}, {0.5 * T, T, "late"}};
    const Profile elliptic[] = {{0.0, 0.0, "static"}};
    const std::span<const Profile> profiles =
        mode == Mode::Elliptic ? std::span<const Profile>(elliptic) : std::span<const Profile>(parabolic);

    std::vector<BatteryMember> out;
    for (int level = 0; out.size() < size; ++level) {
        IDLAB_REQUIRE(level <= 20, "gamma_m_battery: size too large");
        const double w = std::ldexp(e0, -level);
        const int half = (1 << level) - 1;
        for (int j = -half; j <= half && out.size() < size; ++j) {
            const double c = xb + j * w;
            for (const Profile& pr : profiles) {
                if (out.size() >= size) break;
                SeparableTerm term;
                term.space = [c, w, e0](Point x) {
                    return std::max(1.0 - std::abs(x.x - c) / w, 0.0) * std::max(1.0 - x.y / e0, 0.0);
                };
                term.space_grad = [c, w, e0](Point x) -> Point {
                    const double hx = 1.0 - std::abs(x.x - c) / w, hy = 1.0 - x.y / e0;
                    if (hx <= 0.0 || hy <= 0.0) return {};
                    const double sx = x.x > c ? -1.0 / w : (x.x < c ? 1.0 / w : 0.0);
                    return {sx * hy, -hx / e0, 0.0};
                };
                if (mode != Mode::Elliptic) {
                    const double a = pr.a, b = pr.b, s = 4.0 / ((b - a) * (b - a));
                    term.time = [a, b, s](double t) { return s * std::max((t - a) * (b - t), 0.0); };
                    term.time_deriv = [a, b, s](double t) { return (t > a && t < b) ? s * (a + b - 2.0 * t) : 0.0; };
                }
                term.label = "hat(l=" + std::to_string(level) + ",j=" + std::to_string(j) + ")*" + pr.name;
                out.push_back({SpaceTimeFn(term), term.label});
            }
        }
    }
    return out;
}

void check_gamma_m_support(const SpaceTimeFn& phi, const Grid& g, Mode mode) {
    const std::size_t nt = mode == Mode::Elliptic ? 1 : 17;
    const double T = g.domain().T;
    double scale = 0.0, off = 0.0;
    for (std::size_t q = 0; q < nt; ++q) {
        const double t = mode == Mode::Elliptic ? 0.0 : T * static_cast<double>(q) / (nt - 1);
        for (std::size_t k = 0; k < g.n_nodes(); ++k) {
            double v = 0.0;
            for (const auto& term : phi.terms()) {
                v += term.space(g.point(k)) * (mode == Mode::Elliptic ? 1.0 : term.theta(t));
            }
            scale = std::max(scale, std::abs(v));
            const bool outside_gm = g.node_class(k) == NodeClass::BoundaryOther;
            const bool end_time = mode != Mode::Elliptic && (q == 0 || q + 1 == nt);
            if (outside_gm || end_time) off = std::max(off, std::abs(v));
        }
    }
    if (off > 1e-10 * scale) {
        throw PreconditionError("battery member must vanish on the boundary outside Gamma_M and at t = 0, T");
    }
}

FluxGap flux_gap_on_gamma_m(const FluxFunctional& j1, const FluxFunctional& j2,
                            const std::vector<BatteryMember>& battery) {
    IDLAB_REQUIRE(j1.mode() == j2.mode(), "flux_gap_on_gamma_m: functionals in different modes");
    FluxGap out;
    for (std::size_t m = 0; m < battery.size(); ++m) {
        const SpaceTimeFn& phi = battery[m].phi;
        check_gamma_m_support(phi, j1.grid(), j1.mode());
        const double norm = h1_h1_norm(phi, j1.grid(), j1.mode());
        IDLAB_REQUIRE(norm > 0.0, "flux_gap_on_gamma_m: battery member with zero norm");
        const double v = std::abs(j1.pair(phi) - j2.pair(phi)) / norm;
        out.per_member.push_back(v);
        if (v > out.gap || m == 0) {
            out.gap = v;
            out.argmax = m;
        }
    }
    return out;
}

} // namespace idlab
