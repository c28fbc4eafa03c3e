#include "idlab/reconstruction.hpp"

#include "idlab/error.hpp"
#include "idlab/identifiability.hpp"
#include "idlab/log.hpp"
#include "idlab/parallel.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace idlab {

namespace {

/// Segment index and local coordinate of x in uniform knots on [lo, hi].
std::pair<std::size_t, double> locate_uniform(double lo, double hi, std::size_t n, double x) {
    const double s = std::clamp((x - lo) / (hi - lo), 0.0, 1.0) * static_cast<double>(n - 1);
    const auto i = std::min(static_cast<std::size_t>(s), n - 2);
    return {i, s - static_cast<double>(i)};
}

std::pair<std::size_t, double> locate_sorted(const std::vector<double>& k, double x) {
    if (x <= k.front()) return {0, 0.0};
    if (x >= k.back()) return {k.size() - 2, 1.0};
    const auto i = static_cast<std::size_t>(std::upper_bound(k.begin(), k.end(), x) - k.begin()) - 1;
    return {i, (x - k[i]) / (k[i + 1] - k[i])};
}

} // namespace

std::size_t ParamA::n_u() const { return values.size() / n_t(); }

std::vector<double> ParamA::u_knots() const {
    const std::size_t n = n_u();
    std::vector<double> k(n);
    for (std::size_t i = 0; i < n; ++i) k[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    return k;
}

void ParamA::validate() const {
    IDLAB_REQUIRE(hi > lo, "ParamA: need lo < hi");
    IDLAB_REQUIRE(a_lo > 0.0, "ParamA: positivity floor must be > 0");
    IDLAB_REQUIRE(t_knots.empty() || t_knots.size() >= 2, "ParamA: need at least two time knots");
    IDLAB_REQUIRE(values.size() % n_t() == 0 && n_u() >= 2, "ParamA: need n_t * n_u values with n_u >= 2");
    for (double v : values) {
        if (!(v >= a_lo)) {
            throw PreconditionError("ParamA: knot value " + std::to_string(v) + " below the floor a_lo = " +
                                    std::to_string(a_lo) + "; A(u) would not be strictly increasing");
        }
    }
}

double ParamA::eval(double t, double u) const {
    const std::size_t nu = n_u();
    const auto [i, f] = locate_uniform(lo, hi, nu, u);
    auto row = [&](std::size_t r) { return (1.0 - f) * values[r * nu + i] + f * values[r * nu + i + 1]; };
    if (t_knots.empty()) return row(0);
    const auto [r, g] = locate_sorted(t_knots, t);
    return (1.0 - g) * row(r) + g * row(r + 1);
}

double ParamA::antiderivative(double t, double u) const {
    const std::size_t nu = n_u();
    const double h = (hi - lo) / static_cast<double>(nu - 1);
    // F(x) = int_lo^x a_row, with constant extension outside [lo, hi].
    auto F = [&](std::size_t r, double x) {
        const double* v = values.data() + r * nu;
        if (x <= lo) return v[0] * (x - lo);
        double acc = 0.0;
        for (std::size_t i = 0; i + 1 < nu; ++i) {
            const double x0 = lo + h * static_cast<double>(i);
            if (x <= x0 + h) {
                const double s = x - x0;
                return acc + v[i] * s + 0.5 * (v[i + 1] - v[i]) * s * s / h;
            }
            acc += 0.5 * h * (v[i] + v[i + 1]);
        }
        return acc + v[nu - 1] * (x - hi);
    };
    auto A = [&](std::size_t r) { return F(r, u) - F(r, 0.0); };
    if (t_knots.empty()) return A(0);
    const auto [r, g] = locate_sorted(t_knots, t);
    return (1.0 - g) * A(r) + g * A(r + 1);
}

CoefficientSet ParamA::apply(const CoefficientSet& base) const {
    validate();
    const auto uk = u_knots();
    CoefficientSet table = table_preset(uk, values, t_knots);
    CoefficientSet out = base;
    out.name = base.name + "+table";
    out.a = std::move(table.a);
    out.a_lo = table.a_lo;
    out.a_kinks = std::move(table.a_kinks);
    out.a_hi = table.a_hi;
    out.C_A = std::max(base.C_A, table.C_A);
    out.a_depends_on_u = table.a_depends_on_u;
    out.a_depends_on_t = table.a_depends_on_t;
    return out;
}

ParamA sample_param(const std::function<double(double)>& f, double lo, double hi, std::size_t n_knots, double a_lo) {
    IDLAB_REQUIRE(n_knots >= 2, "sample_param: need at least two knots");
    ParamA p;
    p.lo = lo;
    p.hi = hi;
    p.a_lo = a_lo;
    for (std::size_t i = 0; i < n_knots; ++i) {
        p.values.push_back(f(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n_knots - 1)));
    }
    return p;
}

FieldST kirchhoff_transform(const ParamA& a, const FieldST& u) {
    a.validate();
    FieldST w(u.grid_ptr(), std::vector<double>(u.times().begin(), u.times().end()));
    for (std::size_t n = 0; n < u.n_levels(); ++n) {
        const auto src = u.level(n);
        auto dst = w.level(n);
        for (std::size_t k = 0; k < src.size(); ++k) dst[k] = a.antiderivative(u.time(n), src[k]);
    }
    return w;
}

double inverse_kirchhoff(const ParamA& a, double t, double w) {
    const auto [mn, mx] = std::minmax_element(a.values.begin(), a.values.end());
    // A(0) = 0 and a in [mn, mx] bracket the root between w / mx and w / mn.
    double lo = std::min(w / *mx, w / *mn), hi = std::max(w / *mx, w / *mn);
    double u = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        const double r = a.antiderivative(t, u) - w;
        if (r > 0.0) {
            hi = u;
        } else {
            lo = u;
        }
        if (std::abs(r) <= 1e-14 * std::max(1.0, std::abs(w)) || hi - lo <= 1e-12 * std::max(1.0, std::abs(u))) {
            return u;
        }
        const double next = u - r / a.eval(t, u);
        u = next > lo && next < hi ? next : 0.5 * (lo + hi);
    }
    throw ConvergenceError("inverse_kirchhoff: no convergence", 0, {});
}

FieldST inverse_kirchhoff(const ParamA& a, const FieldST& w) {
    a.validate();
    FieldST u(w.grid_ptr(), std::vector<double>(w.times().begin(), w.times().end()));
    for (std::size_t n = 0; n < w.n_levels(); ++n) {
        const auto src = w.level(n);
        auto dst = u.level(n);
        for (std::size_t k = 0; k < src.size(); ++k) dst[k] = inverse_kirchhoff(a, w.time(n), src[k]);
    }
    return u;
}

std::vector<DirichletDatum> MeasurementSet::datums() const {
    std::vector<DirichletDatum> out;
    for (const DatumSpec& s : data) out.push_back(make_dirichlet_datum(domain, s.eps, s.g1, s.g2, window, range));
    return out;
}

std::vector<BatteryMember> MeasurementSet::battery() const {
    return gamma_m_battery(domain, phi_battery_size, Mode::Parabolic);
}

std::vector<std::vector<double>> forward_pairings(const CoefficientSet& coeffs, const MeasurementSet& ms, int cells,
                                                  double tau, const std::function<double(Point)>& u0,
                                                  const NonlinearControls& controls) {
    auto grid = std::make_shared<const Grid>(build_grid(ms.domain, cells));
    const auto phis = ms.battery();
    std::vector<std::vector<double>> out;
    for (const DirichletDatum& datum : ms.datums()) {
        ProblemSpec p = make_problem(grid, coeffs, datum, tau, u0);
        p.controls = controls;
        const FieldST f = solve_parabolic(p);
        const FluxFunctional j(f, coeffs);
        std::vector<double> row;
        for (const BatteryMember& m : phis) row.push_back(j.pair(m.phi));
        out.push_back(std::move(row));
    }
    return out;
}

MeasurementSet synthesize_measurements(const CoefficientSet& truth, const Domain& domain,
                                       const SynthesisOptions& o) {
    IDLAB_REQUIRE(o.noise >= 0.0, "synthesize_measurements: noise must be >= 0");
    MeasurementSet ms;
    ms.domain = domain;
    ms.window = {0.25 * domain.T, 0.75 * domain.T};
    ms.range = truth.range;
    for (const DirichletDatum& d : dirichlet_battery(domain, o.battery_size, truth.range, ms.window)) {
        ms.data.push_back({d.eps(), d.g1(), d.g2()});
    }
    ms.phi_battery_size = o.phi_battery_size;
    ms.noise = o.noise;
    ms.seed = o.seed;
    ms.inversion_cells = o.inversion_cells;
    ms.inversion_tau = o.inversion_tau;
    ms.synthesis_cells = o.two_grid ? 2 * o.inversion_cells : o.inversion_cells;
    ms.synthesis_tau = o.two_grid ? 0.5 * o.inversion_tau : o.inversion_tau;
    ms.inverse_crime = !o.two_grid;
    ms.truth = truth.name;
    if (ms.inverse_crime) {
        ms.warnings.push_back("inverse crime: data synthesized on the inversion grid");
        logger().warn("synthesize_measurements: data synthesized on the inversion grid (inverse crime)");
    }
    ms.pairings = forward_pairings(truth, ms, ms.synthesis_cells, ms.synthesis_tau, o.u0, o.controls);
    if (o.noise > 0.0) {
        std::mt19937_64 rng(o.seed);
        std::normal_distribution<double> z(0.0, 1.0);
        for (auto& row : ms.pairings) {
            for (double& p : row) p += o.noise * std::abs(p) * z(rng);
        }
    }
    return ms;
}

double recovery_objective(const std::vector<std::vector<double>>& model, const MeasurementSet& ms, const ParamA& a,
                          double reg_weight, double* misfit) {
    double m = 0.0;
    for (std::size_t k = 0; k < model.size(); ++k) {
        for (std::size_t j = 0; j < model[k].size(); ++j) {
            const double r = model[k][j] - ms.pairings[k][j];
            m += r * r;
        }
    }
    double reg = 0.0;
    const std::size_t nu = a.n_u();
    for (std::size_t r = 0; r < a.n_t(); ++r) {
        for (std::size_t i = 1; i + 1 < nu; ++i) {
            const double* v = a.values.data() + r * nu;
            const double d2 = v[i - 1] - 2.0 * v[i] + v[i + 1];
            reg += d2 * d2;
        }
    }
    if (misfit) *misfit = m;
    return m + reg_weight * reg;
}

namespace {

std::vector<double> flatten(const std::vector<std::vector<double>>& m) {
    std::vector<double> out;
    for (const auto& row : m) out.insert(out.end(), row.begin(), row.end());
    return out;
}

Eigen::MatrixXd second_difference(const ParamA& a) {
    const std::size_t nu = a.n_u(), nt = a.n_t();
    const std::size_t rows = nt * (nu - 2);
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(nt * nu));
    std::size_t q = 0;
    for (std::size_t r = 0; r < nt; ++r) {
        for (std::size_t i = 1; i + 1 < nu; ++i, ++q) {
            const auto c = static_cast<Eigen::Index>(r * nu + i);
            const auto qq = static_cast<Eigen::Index>(q);
            D(qq, c - 1) = 1.0;
            D(qq, c) = -2.0;
            D(qq, c + 1) = 1.0;
        }
    }
    return D;
}

} // namespace

RecoveryResult recover_a(const MeasurementSet& ms, const CoefficientSet& base, const ParamA& init,
                         const RecoveryOptions& o) {
    init.validate();
    IDLAB_REQUIRE(init.values.size() <= 16, "recover_a: at most 16 knots");
    IDLAB_REQUIRE(o.reg_weight >= 0.0, "recover_a: reg_weight must be >= 0");
    IDLAB_REQUIRE(!ms.pairings.empty(), "recover_a: empty measurement set");

    auto model = [&](const ParamA& a) {
        return forward_pairings(a.apply(base), ms, ms.inversion_cells, ms.inversion_tau, o.u0, o.controls);
    };
    const std::size_t p = init.values.size();
    const Eigen::MatrixXd D = second_difference(init);

    RecoveryResult res;
    res.a = init;
    std::vector<std::vector<double>> current = model(res.a);
    double f = recovery_objective(current, ms, res.a, o.reg_weight, &res.misfit);
    res.objective_history.push_back(f);
    const double f0 = f;
    res.status = "NOT-CONVERGED: iteration limit";

    for (int it = 0; it < o.max_iter; ++it) {
        res.iterations = it + 1;
        const std::vector<double> r = flatten(current);
        const std::size_t m = r.size();
        Eigen::MatrixXd J(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(p));
        std::vector<std::vector<double>> cols(p);
        try {
            parallel_for(p, o.threads, [&](std::size_t i) {
                const double h = o.fd_step * std::max(1.0, std::abs(res.a.values[i]));
                ParamA plus = res.a, minus = res.a;
                plus.values[i] += h;
                minus.values[i] -= h;
                minus.a_lo = std::min(minus.a_lo, minus.values[i]);
                const auto fp = flatten(model(plus)), fm = flatten(model(minus));
                cols[i].resize(m);
                for (std::size_t k = 0; k < m; ++k) cols[i][k] = (fp[k] - fm[k]) / (2.0 * h);
            });
        } catch (const std::exception& ex) {
            res.status = std::string("NOT-CONVERGED: forward failure in the Jacobian: ") + ex.what();
            return res;
        }
        for (std::size_t i = 0; i < p; ++i) {
            for (std::size_t k = 0; k < m; ++k) J(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i)) = cols[i][k];
        }
        const std::vector<double> data = flatten(ms.pairings);
        Eigen::VectorXd resid(static_cast<Eigen::Index>(m));
        for (std::size_t k = 0; k < m; ++k) resid(static_cast<Eigen::Index>(k)) = r[k] - data[k];
        const Eigen::Map<const Eigen::VectorXd> theta(res.a.values.data(), static_cast<Eigen::Index>(p));

        const Eigen::VectorXd grad = J.transpose() * resid + o.reg_weight * (D.transpose() * (D * theta));
        Eigen::MatrixXd H = J.transpose() * J + o.reg_weight * (D.transpose() * D);
        H.diagonal().array() += 1e-14 * std::max(H.diagonal().maxCoeff(), 1e-300);
        const Eigen::VectorXd delta = H.ldlt().solve(-grad);

        bool accepted = false;
        double alpha = 1.0;
        for (int bt = 0; bt <= o.max_backtracks; ++bt, alpha *= 0.5) {
            ParamA trial = res.a;
            for (std::size_t i = 0; i < p; ++i) {
                trial.values[i] = std::max(res.a.values[i] + alpha * delta(static_cast<Eigen::Index>(i)), res.a.a_lo);
            }
            Eigen::VectorXd step(static_cast<Eigen::Index>(p));
            for (std::size_t i = 0; i < p; ++i) step(static_cast<Eigen::Index>(i)) = trial.values[i] - res.a.values[i];
            try {
                auto trial_model = model(trial);
                double trial_misfit = 0.0;
                const double ft = recovery_objective(trial_model, ms, trial, o.reg_weight, &trial_misfit);
                // grad is half the objective gradient.
                if (ft <= f + 1e-4 * 2.0 * grad.dot(step)) {
                    const double decrease = f - ft;
                    res.a = std::move(trial);
                    current = std::move(trial_model);
                    f = ft;
                    res.misfit = trial_misfit;
                    res.objective_history.push_back(f);
                    accepted = true;
                    if (step.lpNorm<Eigen::Infinity>() <= o.step_tol || decrease <= o.objective_tol * f0) {
                        res.converged = true;
                        res.status = "CONVERGED";
                        return res;
                    }
                    break;
                }
            } catch (const std::exception& ex) {
                logger().info("recover_a: trial rejected ({})", ex.what());
            }
        }
        if (!accepted) {
            // No descent left at the resolution of the forward model.
            if (std::abs(grad.dot(delta)) <= o.objective_tol * f0) {
                res.converged = true;
                res.status = "CONVERGED";
            } else {
                res.status = "NOT-CONVERGED: line search failed";
            }
            return res;
        }
    }
    return res;
}

double relative_knot_error(const ParamA& a, const std::function<double(double, double)>& truth) {
    const auto uk = a.u_knots();
    const std::size_t nu = uk.size();
    double err = 0.0, scale = 0.0;
    for (std::size_t r = 0; r < a.n_t(); ++r) {
        const double t = a.t_knots.empty() ? 0.0 : a.t_knots[r];
        for (std::size_t i = 0; i < nu; ++i) {
            const double ref = truth(t, uk[i]);
            err = std::max(err, std::abs(a.values[r * nu + i] - ref));
            scale = std::max(scale, std::abs(ref));
        }
    }
    return err / scale;
}

} // namespace idlab
