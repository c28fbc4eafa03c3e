#include "idlab/assembly.hpp"

#include "idlab/error.hpp"

#include <algorithm>

namespace idlab {

namespace {

constexpr std::array<double, 4> kSx{-1.0, 1.0, 1.0, -1.0};
constexpr std::array<double, 4> kSy{-1.0, -1.0, 1.0, 1.0};

std::array<std::size_t, 4> cell_nodes(const Grid& g, std::size_t ci, std::size_t cj) {
    return {g.node(ci, cj), g.node(ci + 1, cj), g.node(ci + 1, cj + 1), g.node(ci, cj + 1)};
}

} // namespace

std::array<double, 16> q1_element_stiffness(double hx, double hy) {
    static constexpr std::array<double, 16> ax{2, -2, -1, 1, -2, 2, 1, -1, -1, 1, 2, -2, 1, -1, -2, 2};
    static constexpr std::array<double, 16> ay{2, 1, -1, -2, 1, 2, -2, -1, -1, -2, 2, 1, -2, -1, 1, 2};
    const double fx = hy / (6.0 * hx), fy = hx / (6.0 * hy);
    std::array<double, 16> k{};
    for (std::size_t i = 0; i < 16; ++i) k[i] = fx * ax[i] + fy * ay[i];
    return k;
}

Assembler::Assembler(std::shared_ptr<const Grid> grid) : grid_(std::move(grid)) {
    IDLAB_REQUIRE(grid_ != nullptr, "Assembler: null grid");
    const Grid& g = *grid_;
    const std::size_t nx = g.nx(), ny = g.ny(), n = g.n_nodes();
    IDLAB_REQUIRE(n < static_cast<std::size_t>(INT32_MAX / 9), "Assembler: grid too large for 32-bit indices");

    pattern_.n = n;
    pattern_.row_ptr.assign(1, 0);
    for (std::size_t j = 0; j < ny; ++j) {
        for (std::size_t i = 0; i < nx; ++i) {
            for (int dj = -1; dj <= 1; ++dj) {
                for (int di = -1; di <= 1; ++di) {
                    const auto ii = static_cast<std::int64_t>(i) + di, jj = static_cast<std::int64_t>(j) + dj;
                    if (ii < 0 || jj < 0 || ii >= static_cast<std::int64_t>(nx) || jj >= static_cast<std::int64_t>(ny))
                        continue;
                    pattern_.cols.push_back(static_cast<std::int32_t>(jj * static_cast<std::int64_t>(nx) + ii));
                }
            }
            pattern_.row_ptr.push_back(static_cast<std::int32_t>(pattern_.cols.size()));
        }
    }
    pattern_.vals.assign(pattern_.cols.size(), 0.0);

    cell_slots_.resize(g.n_cells());
    for (std::size_t cj = 0; cj < g.n_cells_y(); ++cj) {
        for (std::size_t ci = 0; ci < g.n_cells_x(); ++ci) {
            const auto L = cell_nodes(g, ci, cj);
            auto& slots = cell_slots_[cj * g.n_cells_x() + ci];
            for (std::size_t a = 0; a < 4; ++a) {
                for (std::size_t b = 0; b < 4; ++b) slots[a * 4 + b] = pattern_.find(L[a], L[b]);
            }
        }
    }

    const auto& dir = g.dirichlet_mask();
    std::vector<std::int64_t> reduced_index(n, -1);
    for (std::size_t k = 0; k < n; ++k) {
        if (!dir[k]) {
            reduced_index[k] = static_cast<std::int64_t>(free_.size());
            free_.push_back(k);
        }
    }
    reduced_pattern_.n = free_.size();
    reduced_pattern_.row_ptr.assign(1, 0);
    for (std::size_t r = 0; r < free_.size(); ++r) {
        const std::size_t k = free_[r];
        for (auto s = pattern_.row_ptr[k]; s < pattern_.row_ptr[k + 1]; ++s) {
            const auto c = reduced_index[static_cast<std::size_t>(pattern_.cols[s])];
            if (c < 0) continue;
            if (static_cast<std::size_t>(c) == r) reduced_diag_.push_back(static_cast<std::int64_t>(reduced_pattern_.cols.size()));
            reduced_pattern_.cols.push_back(static_cast<std::int32_t>(c));
            reduced_to_full_.push_back(s);
        }
        reduced_pattern_.row_ptr.push_back(static_cast<std::int32_t>(reduced_pattern_.cols.size()));
    }
    reduced_pattern_.vals.assign(reduced_pattern_.cols.size(), 0.0);
}

CsrMatrix Assembler::empty_matrix() const { return pattern_; }
CsrMatrix Assembler::empty_reduced() const { return reduced_pattern_; }

void Assembler::stiffness(std::span<const double> cell_a, CsrMatrix& K) const {
    const Grid& g = *grid_;
    IDLAB_REQUIRE(cell_a.size() == g.n_cells(), "Assembler::stiffness: one coefficient per cell expected");
    std::fill(K.vals.begin(), K.vals.end(), 0.0);
    for (std::size_t cj = 0; cj < g.n_cells_y(); ++cj) {
        for (std::size_t ci = 0; ci < g.n_cells_x(); ++ci) {
            const std::size_t c = cj * g.n_cells_x() + ci;
            const auto ke = q1_element_stiffness(g.hx(ci), g.hy(cj));
            const auto& slots = cell_slots_[c];
            for (std::size_t q = 0; q < 16; ++q) K.vals[static_cast<std::size_t>(slots[q])] += cell_a[c] * ke[q];
        }
    }
}

std::vector<double> Assembler::cell_means(std::span<const double> u) const {
    const Grid& g = *grid_;
    std::vector<double> m(g.n_cells());
    for (std::size_t cj = 0; cj < g.n_cells_y(); ++cj) {
        for (std::size_t ci = 0; ci < g.n_cells_x(); ++ci) {
            const auto L = cell_nodes(g, ci, cj);
            m[cj * g.n_cells_x() + ci] = 0.25 * (u[L[0]] + u[L[1]] + u[L[2]] + u[L[3]]);
        }
    }
    return m;
}

std::vector<double> Assembler::cell_diffusion(const CoefficientSet& c, double t, std::span<const double> u) const {
    std::vector<double> m = cell_means(u);
    for (double& v : m) v = c.eval_a(t, v);
    return m;
}

std::vector<Point> Assembler::cell_drift(const CoefficientSet& c, double t, std::span<const double> u) const {
    const Grid& g = *grid_;
    std::vector<Point> out(g.n_cells());
    if (!c.has_b()) return out;
    const std::vector<double> m = cell_means(u);
    for (std::size_t cj = 0; cj < g.n_cells_y(); ++cj) {
        for (std::size_t ci = 0; ci < g.n_cells_x(); ++ci) {
            const std::size_t k = cj * g.n_cells_x() + ci;
            out[k] = c.eval_b(g.cell_center(ci, cj), t, m[k]);
        }
    }
    return out;
}

void Assembler::drift_vector(std::span<const Point> cell_b, std::span<double> out) const {
    const Grid& g = *grid_;
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t cj = 0; cj < g.n_cells_y(); ++cj) {
        for (std::size_t ci = 0; ci < g.n_cells_x(); ++ci) {
            const Point b = cell_b[cj * g.n_cells_x() + ci];
            if (b.x == 0.0 && b.y == 0.0) continue;
            const double hx = g.hx(ci), hy = g.hy(cj);
            const auto L = cell_nodes(g, ci, cj);
            for (std::size_t a = 0; a < 4; ++a) out[L[a]] += b.x * kSx[a] * 0.5 * hy + b.y * kSy[a] * 0.5 * hx;
        }
    }
}

Point Assembler::nodal_gradient(std::span<const double> u, std::size_t node) const {
    const Grid& g = *grid_;
    const std::size_t i = node % g.nx(), j = node / g.nx();
    const auto xs = g.xs(), ys = g.ys();
    const std::size_t il = i == 0 ? 0 : i - 1, ir = i + 1 == g.nx() ? i : i + 1;
    const std::size_t jl = j == 0 ? 0 : j - 1, jr = j + 1 == g.ny() ? j : j + 1;
    return {(u[g.node(ir, j)] - u[g.node(il, j)]) / (xs[ir] - xs[il]),
            (u[g.node(i, jr)] - u[g.node(i, jl)]) / (ys[jr] - ys[jl]), 0.0};
}

void Assembler::reaction_vector(const CoefficientSet& c, double t, std::span<const double> u,
                                std::span<double> out) const {
    std::fill(out.begin(), out.end(), 0.0);
    if (!c.has_c()) return;
    const Grid& g = *grid_;
    const auto w = g.volume_weights();
    for (std::size_t k = 0; k < g.n_nodes(); ++k) {
        out[k] = w[k] * c.eval_c(g.point(k), t, u[k], nodal_gradient(u, k));
    }
}

void Assembler::storage_vector(const CoefficientSet& c, double t, std::span<const double> u,
                               std::span<double> out) const {
    const auto w = grid_->volume_weights();
    for (std::size_t k = 0; k < u.size(); ++k) out[k] = w[k] * c.eval_d(t, u[k]);
}

LevelTerms Assembler::terms(const CoefficientSet& c, double t, std::span<const double> u, bool with_storage,
                            std::span<const Point> drift_override) const {
    const std::size_t n = grid_->n_nodes();
    LevelTerms out;
    CsrMatrix K = pattern_;
    stiffness(cell_diffusion(c, t, u), K);
    out.stiff.resize(n);
    K.multiply(u, out.stiff);
    out.drift.resize(n);
    if (!drift_override.empty()) {
        drift_vector(drift_override, out.drift);
    } else if (c.has_b()) {
        drift_vector(cell_drift(c, t, u), out.drift);
    }
    out.reaction.resize(n);
    reaction_vector(c, t, u, out.reaction);
    if (with_storage) {
        out.storage.resize(n);
        storage_vector(c, t, u, out.storage);
    }
    return out;
}

void Assembler::restrict_to_free(const CsrMatrix& K, std::span<const double> diag_add, CsrMatrix& J) const {
    for (std::size_t s = 0; s < reduced_to_full_.size(); ++s) {
        J.vals[s] = K.vals[static_cast<std::size_t>(reduced_to_full_[s])];
    }
    if (!diag_add.empty()) {
        for (std::size_t r = 0; r < reduced_diag_.size(); ++r) J.vals[static_cast<std::size_t>(reduced_diag_[r])] += diag_add[r];
    }
}

} // namespace idlab
