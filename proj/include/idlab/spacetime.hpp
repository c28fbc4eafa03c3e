#pragma once

#include "idlab/geometry.hpp"

#include <functional>
#include <string>
#include <vector>

namespace idlab {

/// sigma(x) * theta(t). An empty `time` means theta == 1 (elliptic use).
struct SeparableTerm {
    std::function<double(Point)> space;
    std::function<Point(Point)> space_grad;    ///< optional analytic gradient
    std::function<double(double)> time;
    std::function<double(double)> time_deriv;  ///< optional analytic theta'
    std::string label;

    [[nodiscard]] double theta(double t) const { return time ? time(t) : 1.0; }
    /// Analytic theta' when given, else a central difference.
    [[nodiscard]] double theta_prime(double t) const;
};

/// Space-time test function as a finite sum of separable terms. Pairings and
/// norms work term by term, which keeps them exact in time.
class SpaceTimeFn {
public:
    SpaceTimeFn() = default;
    explicit SpaceTimeFn(std::vector<SeparableTerm> terms) : terms_(std::move(terms)) {}
    explicit SpaceTimeFn(SeparableTerm term) { terms_.push_back(std::move(term)); }

    [[nodiscard]] double value(Point x, double t) const;
    [[nodiscard]] Point grad(Point x, double t) const;
    [[nodiscard]] double time_derivative(Point x, double t) const;
    [[nodiscard]] bool has_gradient() const;

    [[nodiscard]] const std::vector<SeparableTerm>& terms() const noexcept { return terms_; }
    SpaceTimeFn& add(SeparableTerm term) {
        terms_.push_back(std::move(term));
        return *this;
    }

    friend SpaceTimeFn operator*(double s, const SpaceTimeFn& f);
    friend SpaceTimeFn operator+(const SpaceTimeFn& a, const SpaceTimeFn& b);

private:
    std::vector<SeparableTerm> terms_;
};

} // namespace idlab
