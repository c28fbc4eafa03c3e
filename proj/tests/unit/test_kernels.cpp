#include "idlab/kernels.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

namespace k = idlab::kernels;

namespace {

std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n, double lo, double hi) {
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> v(n);
    for (double& x : v) x = u(rng);
    return v;
}

// Lengths straddling every vector width and remainder.
const std::size_t kLengths[] = {0, 1, 2, 3, 4, 5, 7, 8, 9, 15, 16, 17, 31, 33, 64, 1000, 1023};

double rel(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

} // namespace

TEST(Kernels, ScalarAlwaysAvailable) {
    const auto av = k::available();
    ASSERT_FALSE(av.empty());
    EXPECT_EQ(av.front(), k::Isa::Scalar);
    EXPECT_EQ(k::parse_isa("scalar"), k::Isa::Scalar);
    EXPECT_THROW(k::parse_isa("sse9"), std::exception);
}

TEST(Kernels, SelectSwitchesActiveTable) {
    const k::Isa before = k::active().isa;
    for (k::Isa isa : k::available()) {
        k::select(isa);
        EXPECT_EQ(k::active().isa, isa);
    }
    k::select(before);
}

TEST(Kernels, VariantsMatchScalarReference) {
    const k::KernelTable& ref = k::table(k::Isa::Scalar);
    std::mt19937_64 rng(7);
    for (k::Isa isa : k::available()) {
        if (isa == k::Isa::Scalar) continue;
        const k::KernelTable& t = k::table(isa);
        SCOPED_TRACE(std::string(k::name(isa)));
        for (std::size_t n : kLengths) {
            const auto x = random_vector(rng, n, -1.0, 1.0), y = random_vector(rng, n, -1.0, 1.0);
            const auto w = random_vector(rng, n, 0.0, 1.0);
            double sum_abs = 0.0;
            for (std::size_t i = 0; i < n; ++i) sum_abs += std::abs(x[i] * y[i]);
            EXPECT_NEAR(t.dot(x.data(), y.data(), n), ref.dot(x.data(), y.data(), n), 1e-15 * (sum_abs + 1.0));

            auto y1 = y, y2 = y;
            t.axpy(0.37, x.data(), y1.data(), n);
            ref.axpy(0.37, x.data(), y2.data(), n);
            for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(y1[i], y2[i], 1e-15);
            y1 = y;
            y2 = y;
            t.xpby(x.data(), -1.3, y1.data(), n);
            ref.xpby(x.data(), -1.3, y2.data(), n);
            for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(y1[i], y2[i], 1e-15);

            for (double p : {1.0, 1.5, 2.0, 4.0}) {
                EXPECT_LE(rel(t.weighted_abs_pow(w.data(), x.data(), p, n), ref.weighted_abs_pow(w.data(), x.data(), p, n)),
                          1e-13);
            }

            const auto yt = random_vector(rng, n, -0.5, 0.5), yn = random_vector(rng, n, 1e-4, 1.0);
            const auto yt2 = random_vector(rng, n, -0.5, 0.5);
            std::vector<double> l1(n), g1(n), l2(n), g2(n);
            t.flat_lambda2(yt.data(), yn.data(), l1.data(), g1.data(), n);
            ref.flat_lambda2(yt.data(), yn.data(), l2.data(), g2.data(), n);
            for (std::size_t i = 0; i < n; ++i) {
                EXPECT_LE(rel(l1[i], l2[i]), 1e-14);
                EXPECT_LE(rel(g1[i], g2[i]), 1e-14);
            }
            t.flat_lambda3(yt.data(), yt2.data(), yn.data(), l1.data(), g1.data(), n);
            ref.flat_lambda3(yt.data(), yt2.data(), yn.data(), l2.data(), g2.data(), n);
            for (std::size_t i = 0; i < n; ++i) {
                EXPECT_LE(rel(l1[i], l2[i]), 1e-14);
                EXPECT_LE(rel(g1[i], g2[i]), 1e-14);
            }
        }
    }
}

TEST(Kernels, SpmvMatchesScalarOnRandomCsr) {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> nnz(0, 12);
    const std::size_t n = 97;
    std::vector<std::int32_t> row_ptr{0}, cols;
    std::vector<double> vals;
    std::uniform_int_distribution<int> col(0, static_cast<int>(n) - 1);
    std::uniform_real_distribution<double> v(-1.0, 1.0);
    for (std::size_t r = 0; r < n; ++r) {
        const int m = nnz(rng);
        for (int j = 0; j < m; ++j) {
            cols.push_back(col(rng));
            vals.push_back(v(rng));
        }
        row_ptr.push_back(static_cast<std::int32_t>(cols.size()));
    }
    std::vector<double> x(n);
    for (double& e : x) e = v(rng);
    std::vector<double> y_ref(n);
    k::table(k::Isa::Scalar).spmv(n, row_ptr.data(), cols.data(), vals.data(), x.data(), y_ref.data());
    for (std::size_t r = 0; r < n; ++r) {
        double s = 0.0;
        for (auto j = row_ptr[r]; j < row_ptr[r + 1]; ++j) s += vals[j] * x[cols[j]];
        EXPECT_NEAR(y_ref[r], s, 1e-14);
    }
    for (k::Isa isa : k::available()) {
        std::vector<double> y(n);
        k::table(isa).spmv(n, row_ptr.data(), cols.data(), vals.data(), x.data(), y.data());
        for (std::size_t r = 0; r < n; ++r) EXPECT_NEAR(y[r], y_ref[r], 1e-14);
    }
}

TEST(Kernels, FlatLambdaMatchesClosedForm) {
    constexpr double pi = 3.14159265358979323846;
    const double yt = 0.3, yn = 0.4;
    double l = 0.0, g = 0.0;
    k::table(k::Isa::Scalar).flat_lambda2(&yt, &yn, &l, &g, 1);
    EXPECT_NEAR(l, yn / (2.0 * pi * 0.25), 1e-15);
    EXPECT_NEAR(g, 1.0 / (2.0 * pi * 0.25), 1e-15);
    const double yt2 = 0.0, r3 = std::pow(0.25, 1.5);
    k::table(k::Isa::Scalar).flat_lambda3(&yt, &yt2, &yn, &l, &g, 1);
    EXPECT_NEAR(l, yn / (4.0 * pi * r3), 1e-14);
    EXPECT_NEAR(g, std::sqrt(1.0 + 3.0 * yn * yn / 0.25) / (4.0 * pi * r3), 1e-14);
}
