#include "idlab/spacetime.hpp"

#include "idlab/error.hpp"

namespace idlab {

double SeparableTerm::theta_prime(double t) const {
    if (!time) return 0.0;
    if (time_deriv) return time_deriv(t);
    constexpr double dt = 1e-6;
    return (time(t + dt) - time(t - dt)) / (2.0 * dt);
}

double SpaceTimeFn::value(Point x, double t) const {
    double s = 0.0;
    for (const auto& term : terms_) s += term.space(x) * term.theta(t);
    return s;
}

Point SpaceTimeFn::grad(Point x, double t) const {
    Point g{};
    for (const auto& term : terms_) {
        IDLAB_REQUIRE(static_cast<bool>(term.space_grad), "SpaceTimeFn::grad: term without analytic gradient");
        g = g + term.theta(t) * term.space_grad(x);
    }
    return g;
}

double SpaceTimeFn::time_derivative(Point x, double t) const {
    double s = 0.0;
    for (const auto& term : terms_) s += term.space(x) * term.theta_prime(t);
    return s;
}

bool SpaceTimeFn::has_gradient() const {
    for (const auto& term : terms_) {
        if (!term.space_grad) return false;
    }
    return true;
}

SpaceTimeFn operator*(double s, const SpaceTimeFn& f) {
    SpaceTimeFn out;
    for (const auto& term : f.terms_) {
        SeparableTerm scaled = term;
        scaled.space = [s, fn = term.space](Point x) { return s * fn(x); };
        if (term.space_grad) scaled.space_grad = [s, fn = term.space_grad](Point x) { return s * fn(x); };
        out.terms_.push_back(std::move(scaled));
    }
    return out;
}

SpaceTimeFn operator+(const SpaceTimeFn& a, const SpaceTimeFn& b) {
    SpaceTimeFn out = a;
    for (const auto& term : b.terms_) out.terms_.push_back(term);
    return out;
}

} // namespace idlab
