#include "idlab/geometry.hpp"

#include "idlab/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace idlab {

double norm(Point a) { return std::sqrt(dot(a, a)); }

void Domain::validate() const {
    IDLAB_REQUIRE(dim == 2 || dim == 3, "domain.dim must be 2 or 3");
    IDLAB_REQUIRE(eps0 > 0.0, "domain.eps0 must be positive");
    IDLAB_REQUIRE(T > 0.0, "domain.T must be positive");
    const double normal_coord = dim == 2 ? xbar.y : xbar.z;
    IDLAB_REQUIRE(normal_coord == 0.0, "domain.xbar must lie on the bottom face");
    IDLAB_REQUIRE(xbar.x - eps0 >= -1e-14 && xbar.x + eps0 <= 1.0 + 1e-14,
                  "Gamma_M = B_eps0(xbar) must stay inside the bottom face (x direction)");
    if (dim == 3) {
        IDLAB_REQUIRE(xbar.y - eps0 >= -1e-14 && xbar.y + eps0 <= 1.0 + 1e-14,
                      "Gamma_M = B_eps0(xbar) must stay inside the bottom face (y direction)");
    }
    IDLAB_REQUIRE(bc[static_cast<int>(Edge::Bottom)] == BoundaryKind::Dirichlet,
                  "the bottom edge carries Gamma_M and must be Dirichlet-controlled");
}

Point Domain::normal() const { return dim == 2 ? Point{0.0, -1.0, 0.0} : Point{0.0, 0.0, -1.0}; }

double Domain::gamma_m_measure() const {
    constexpr double pi = 3.14159265358979323846;
    return dim == 2 ? 2.0 * eps0 : pi * eps0 * eps0;
}

Domain default_domain(int dim) {
    Domain d;
    d.dim = dim;
    d.xbar = dim == 2 ? Point{0.5, 0.0, 0.0} : Point{0.5, 0.5, 0.0};
    return d;
}

Point exterior_point(const Domain& domain, double eps) {
    IDLAB_REQUIRE(eps > 0.0 && eps <= domain.eps0 * (1.0 + 1e-12),
                  "exterior_point: eps must lie in (0, eps0]");
    return domain.xbar + eps * domain.normal();
}

double distance_to_domain(const Domain& domain, Point p) {
    auto gap = [](double v) { return v < 0.0 ? -v : (v > 1.0 ? v - 1.0 : 0.0); };
    const double gx = gap(p.x), gy = gap(p.y), gz = domain.dim == 3 ? gap(p.z) : 0.0;
    return std::sqrt(gx * gx + gy * gy + gz * gz);
}

namespace {

std::vector<double> uniform_axis(int n) {
    std::vector<double> v(static_cast<std::size_t>(n) + 1);
    for (int i = 0; i <= n; ++i) v[static_cast<std::size_t>(i)] = static_cast<double>(i) / n;
    return v;
}

void check_axis(const std::vector<double>& a, const char* name) {
    IDLAB_REQUIRE(a.size() >= 2, std::string("grid axis ") + name + " needs at least two nodes");
    IDLAB_REQUIRE(a.front() == 0.0 && a.back() == 1.0,
                  std::string("grid axis ") + name + " must span [0, 1]");
    for (std::size_t i = 1; i < a.size(); ++i) {
        IDLAB_REQUIRE(a[i] > a[i - 1], std::string("grid axis ") + name + " must be increasing");
    }
}

// Dual interval of node i on an axis: [x_i - h_{i-1}/2, x_i + h_i/2].
std::pair<double, double> dual_interval(std::span<const double> a, std::size_t i) {
    const double lo = i == 0 ? a[0] : 0.5 * (a[i - 1] + a[i]);
    const double hi = i + 1 == a.size() ? a[i] : 0.5 * (a[i] + a[i + 1]);
    return {lo, hi};
}

} // namespace

Grid::Grid(Domain domain, std::vector<double> xs, std::vector<double> ys)
    : domain_(domain), xs_(std::move(xs)), ys_(std::move(ys)) {
    domain_.validate();
    IDLAB_REQUIRE(domain_.dim == 2, "grids are two-dimensional only");
    check_axis(xs_, "x");
    check_axis(ys_, "y");

    const std::size_t n = n_nodes();
    classes_.assign(n, NodeClass::Interior);
    dirichlet_.assign(n, false);
    vol_w_.assign(n, 0.0);
    bnd_w_.assign(n, 0.0);
    gm_w_.assign(n, 0.0);

    h_min_ = 1.0;
    h_max_ = 0.0;
    for (std::size_t i = 0; i + 1 < nx(); ++i) {
        h_min_ = std::min(h_min_, hx(i));
        h_max_ = std::max(h_max_, hx(i));
    }
    for (std::size_t j = 0; j + 1 < ny(); ++j) {
        h_min_ = std::min(h_min_, hy(j));
        h_max_ = std::max(h_max_, hy(j));
    }

    const auto& bc = domain_.bc;
    const double gm_lo = domain_.xbar.x - domain_.eps0;
    const double gm_hi = domain_.xbar.x + domain_.eps0;
    constexpr double tol = 1e-12;

    for (std::size_t j = 0; j < ny(); ++j) {
        const auto [ylo, yhi] = dual_interval(ys_, j);
        for (std::size_t i = 0; i < nx(); ++i) {
            const auto [xlo, xhi] = dual_interval(xs_, i);
            const std::size_t k = node(i, j);
            vol_w_[k] = (xhi - xlo) * (yhi - ylo);

            const bool bottom = j == 0, top = j + 1 == ny(), left = i == 0, right = i + 1 == nx();
            if (!(bottom || top || left || right)) {
                interior_.push_back(k);
                continue;
            }
            double w = 0.0;
            if (bottom) w += xhi - xlo;
            if (top) w += xhi - xlo;
            if (left) w += yhi - ylo;
            if (right) w += yhi - ylo;
            bnd_w_[k] = w;

            bool dir = false;
            if (bottom) dir |= bc[static_cast<int>(Edge::Bottom)] == BoundaryKind::Dirichlet;
            if (right) dir |= bc[static_cast<int>(Edge::Right)] == BoundaryKind::Dirichlet;
            if (top) dir |= bc[static_cast<int>(Edge::Top)] == BoundaryKind::Dirichlet;
            if (left) dir |= bc[static_cast<int>(Edge::Left)] == BoundaryKind::Dirichlet;
            dirichlet_[k] = dir;

            const double x = xs_[i];
            if (bottom && x >= gm_lo - tol && x <= gm_hi + tol) {
                classes_[k] = NodeClass::GammaM;
                gamma_m_.push_back(k);
                gm_w_[k] = std::max(0.0, std::min(xhi, gm_hi) - std::max(xlo, gm_lo));
            } else {
                classes_[k] = NodeClass::BoundaryOther;
                other_.push_back(k);
            }
        }
    }
}

double Grid::h() const {
    const double h0 = hx(0);
    IDLAB_REQUIRE(h_max_ - h_min_ <= 1e-12 * h0, "Grid::h() called on a graded grid");
    return h0;
}

Grid build_grid(const Domain& domain, int n_cells) {
    domain.validate();
    IDLAB_REQUIRE(domain.dim == 2, "build_grid: PDE grids are two-dimensional");
    IDLAB_REQUIRE(n_cells >= 8, "build_grid: n_cells must be >= 8");
    const double h = 1.0 / n_cells;
    // Nodes i*h with |i*h - xbar.x| <= eps0.
    const auto lo = static_cast<long>(std::ceil((domain.xbar.x - domain.eps0) / h - 1e-9));
    const auto hi = static_cast<long>(std::floor((domain.xbar.x + domain.eps0) / h + 1e-9));
    IDLAB_REQUIRE(hi - lo + 1 >= 4, "build_grid: Gamma_M under-resolved (fewer than 4 nodes across Gamma_M); "
                                    "increase n_cells");
    return Grid(domain, uniform_axis(n_cells), uniform_axis(n_cells));
}

std::vector<double> graded_axis(double lo, double hi, double focus, const GradingOptions& o) {
    IDLAB_REQUIRE(o.h_fine > 0.0 && o.h_coarse >= o.h_fine && o.ratio > 1.0,
                  "graded_axis: need 0 < h_fine <= h_coarse and ratio > 1");
    IDLAB_REQUIRE(focus >= lo && focus <= hi, "graded_axis: focus outside the interval");

    // March outward from the focus in one direction; returns offsets > 0.
    auto march = [&](double length) {
        std::vector<double> offs;
        double p = 0.0, h = o.h_fine;
        while (true) {
            h = p + 0.5 * o.h_fine < o.fine_halfwidth ? o.h_fine : std::min(h * o.ratio, o.h_coarse);
            if (p + h >= length - 0.5 * h) break;
            p += h;
            offs.push_back(p);
        }
        if (length > 0.0) offs.push_back(length);
        return offs;
    };

    std::vector<double> pts;
    for (double off : march(focus - lo)) pts.push_back(focus - off);
    std::reverse(pts.begin(), pts.end());
    pts.push_back(focus);
    for (double off : march(hi - focus)) pts.push_back(focus + off);
    pts.front() = lo;
    pts.back() = hi;
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

Grid build_graded_grid(const Domain& domain, const GradingOptions& options) {
    domain.validate();
    IDLAB_REQUIRE(domain.dim == 2, "build_graded_grid: PDE grids are two-dimensional");
    auto xs = graded_axis(0.0, 1.0, domain.xbar.x, options);
    auto ys = graded_axis(0.0, 1.0, 0.0, options);
    return Grid(domain, std::move(xs), std::move(ys));
}

Grid build_grid_for_scale(const Domain& domain, double eps, double h_coarse) {
    IDLAB_REQUIRE(eps > 0.0, "build_grid_for_scale: eps must be positive");
    GradingOptions o;
    o.h_fine = std::min(eps / 8.0, h_coarse);
    o.fine_halfwidth = 2.0 * eps;
    o.h_coarse = h_coarse;
    o.ratio = 1.15;
    return build_graded_grid(domain, o);
}

} // namespace idlab
