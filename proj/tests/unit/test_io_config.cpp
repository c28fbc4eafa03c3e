#include "idlab/config.hpp"
#include "idlab/error.hpp"
#include "idlab/io.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>

using namespace idlab;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("idlab_unit_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string config_error_path(const std::string& text, const std::function<void(const ConfigNode&)>& f) {
    const nlohmann::json j = parse_json(text, "test");
    try {
        f(ConfigNode(j, "$"));
    } catch (const ConfigError& e) {
        return e.path();
    }
    return "";
}

} // namespace

TEST(Io, GitBlobHashMatchesGit) {
    // `printf 'hello\n' | git hash-object --stdin`
    EXPECT_EQ(git_blob_hash("hello\n"), "ce013625030ba8dba906f756967f9e9ca394464a");
    EXPECT_EQ(git_blob_hash(""), "e69de29bb2d1d6434b8b29ae775ad8c2e48c5391");
}

TEST(Io, NumbersRoundTripShortest) {
    for (double v : {0.1, 1.0 / 3.0, 1e-300, -2.5e17}) EXPECT_EQ(std::stod(format_number(v)), v);
    EXPECT_EQ(format_number(0.5), "0.5");
    EXPECT_EQ(format_number(std::nan("")), "nan");
}

TEST(Io, CsvQuotesCellsWithCommas) {
    CsvTable t({"a", "b"});
    t.row().add(1).add(std::string_view("x,y"));
    t.row().add(true).add(0.25);
    EXPECT_EQ(t.str(), "a,b\n1,\"x,y\"\npass,0.25\n");
}

TEST(Io, FieldRoundTripIsBitExact) {
    const fs::path dir = temp_dir("field");
    auto grid = std::make_shared<const Grid>(build_grid(default_domain(2), 8));
    FieldST f(grid, {0.0, 0.25, 1.0});
    for (std::size_t n = 0; n < 3; ++n) {
        auto lv = f.level(n);
        for (std::size_t k = 0; k < lv.size(); ++k) lv[k] = std::sin(0.1 * static_cast<double>(k) + n) / 3.0;
    }
    write_field(dir / "u.bin", f);
    EXPECT_TRUE(fs::exists(dir / "u.bin.json"));
    const FieldST g = read_field(dir / "u.bin");
    ASSERT_EQ(g.data().size(), f.data().size());
    for (std::size_t i = 0; i < f.data().size(); ++i) EXPECT_EQ(g.data()[i], f.data()[i]);
    EXPECT_EQ(g.times()[1], 0.25);
    EXPECT_EQ(g.grid().nx(), 9u);
}

TEST(Io, AtomicWriteLeavesNoTemporary) {
    const fs::path dir = temp_dir("atomic");
    write_atomic(dir / "sub" / "x.txt", "abc");
    EXPECT_EQ(read_file(dir / "sub" / "x.txt"), "abc");
    EXPECT_FALSE(fs::exists(dir / "sub" / "x.txt.tmp"));
    write_failed_marker(dir / "sub" / "x.txt", "boom");
    EXPECT_EQ(read_file(dir / "sub" / "x.txt.FAILED"), "FAILED: boom\n");
}

TEST(Config, MissingEps0ReportsPath) {
    const std::string path = config_error_path(R"({"domain": {"dim": 2, "xbar": [0.5, 0.0], "T": 1.0}})",
                                               [](const ConfigNode& r) { (void)parse_domain(r.at("domain")); });
    EXPECT_EQ(path, "$.domain.eps0");
}

TEST(Config, TypeErrorsReportPath) {
    EXPECT_EQ(config_error_path(R"({"dim": 2, "xbar": [0.5, "zero"], "eps0": 0.25, "T": 1})",
                                [](const ConfigNode& r) { (void)parse_domain(r); }),
              "$.xbar[1]");
    EXPECT_EQ(config_error_path(R"({"preset": "cubic"})", [](const ConfigNode& r) { (void)parse_coefficients(r); }),
              "$.preset");
    EXPECT_EQ(config_error_path(R"({"preset": "affine", "alpha": 1, "beta": -3})",
                                [](const ConfigNode& r) { (void)parse_coefficients(r); }),
              "$");
    EXPECT_EQ(config_error_path(R"({"dim": 2, "xbar": [0.5, 0], "eps0": 0.25, "T": 1, "n_cells": 4})",
                                [](const ConfigNode& r) { (void)parse_domain(r); }),
              "$.n_cells");
}

TEST(Config, SyntaxErrorIsConfigError) { EXPECT_THROW(parse_json("{\"a\": ", "x"), ConfigError); }

TEST(Config, CoefficientObjectWithLowerOrder) {
    const nlohmann::json j = parse_json(
        R"({"preset": "constant", "value": 2.0, "lower_order": {"b": [0.1, 0.2], "c1": 0.5, "d_scale": 2}})", "t");
    const CoefficientSet c = parse_coefficients(ConfigNode(j, "$"));
    EXPECT_DOUBLE_EQ(c.eval_a(0.0, 0.3), 2.0);
    EXPECT_DOUBLE_EQ(c.eval_b({}, 0.0, 0.0).y, 0.2);
    EXPECT_DOUBLE_EQ(c.eval_c({}, 0.0, 1.0, {}), 0.5);
    EXPECT_DOUBLE_EQ(c.eval_d(0.0, 1.0), -2.0);
}

TEST(Config, MeasurementSetRoundTrip) {
    MeasurementSet ms;
    ms.data = {{0.25, 0.0, 1.0}, {0.125, 0.5, 1.0}};
    ms.phi_battery_size = 2;
    ms.pairings = {{0.1, 0.2}, {0.3, 1.0 / 3.0}};
    ms.seed = 9;
    ms.truth = "affine";
    const nlohmann::json j = to_json(ms);
    const MeasurementSet back = parse_measurements(ConfigNode(j, "$"));
    EXPECT_EQ(back.pairings, ms.pairings);
    EXPECT_EQ(back.data.size(), 2u);
    EXPECT_EQ(back.data[1].g1, 0.5);
    EXPECT_EQ(back.seed, 9u);
    EXPECT_EQ(back.truth, "affine");
}

TEST(Config, ParamRoundTrip) {
    const ParamA a = sample_param([](double u) { return 1.0 + u; }, 0.0, 1.0, 4);
    const nlohmann::json j = to_json(a);
    const ParamA b = parse_param(ConfigNode(j, "$"));
    EXPECT_EQ(a.values, b.values);
}
