#include "idlab/io.hpp"

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <string>

namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("idlab_cli_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

/// Runs the CLI with stdout and stderr captured into dir/out.txt.
int run(const std::string& args, const fs::path& dir) {
    const std::string cmd = std::string("\"") + IDLAB_CLI + "\" " + args + " > \"" + (dir / "out.txt").string() + "\" 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string configs(const std::string& name) { return (fs::path(IDLAB_CONFIGS) / name).string(); }

} // namespace

TEST(Cli, UsageErrorsExitTwo) {
    const fs::path d = temp_dir("usage");
    EXPECT_EQ(run("", d), 2);
    EXPECT_EQ(run("solve", d), 2);
    EXPECT_EQ(run("--simd sse9 verify-scaling", d), 2);
    EXPECT_EQ(run("--help", d), 0);
    EXPECT_EQ(run("examples heat --out " + d.string(), d), 2);
}

TEST(Cli, MissingEps0ExitsTwoWithFieldPath) {
    const fs::path d = temp_dir("eps0");
    idlab::write_atomic(d / "bad.json", R"({"domain": {"dim": 2, "xbar": [0.5, 0.0], "T": 1.0}, "coefficients": "affine"})");
    EXPECT_EQ(run("solve --config " + (d / "bad.json").string() + " --out " + (d / "f.bin").string(), d), 2);
    EXPECT_NE(idlab::read_file(d / "out.txt").find("domain.eps0"), std::string::npos);
    EXPECT_FALSE(fs::exists(d / "f.bin"));
}

TEST(Cli, NumericalFailureExitsThreeWithMarker) {
    const fs::path d = temp_dir("numerical");
    idlab::write_atomic(d / "cfg.json", R"({"domain": {"dim": 2, "xbar": [0.5, 0.0], "eps0": 0.25, "T": 1.0, "n_cells": 16},
        "coefficients": "affine", "tau": 0.0078125, "controls": {"tol": 1e-16, "max_iter": 1, "abs_floor": 0}})");
    EXPECT_EQ(run("solve --config " + (d / "cfg.json").string() + " --out " + (d / "f.bin").string(), d), 3);
    EXPECT_TRUE(fs::exists(d / "f.bin.FAILED"));
}

TEST(Cli, ExamplesBioheatWritesTraceAndPasses) {
    const fs::path d = temp_dir("bioheat");
    EXPECT_EQ(run("--threads 1 examples bioheat --out " + d.string(), d), 0);
    EXPECT_TRUE(fs::exists(d / "trace.csv"));
    EXPECT_NE(idlab::read_file(d / "summary.json").find("\"maximum_principle\": \"pass\""), std::string::npos);
}

TEST(Cli, VerifyScalingPassesOnDefaults) {
    const fs::path d = temp_dir("scaling");
    EXPECT_EQ(run("--simd scalar verify-scaling --out " + (d / "scaling.csv").string(), d), 0);
    const std::string csv = idlab::read_file(d / "scaling.csv");
    EXPECT_EQ(csv.rfind("quantity,p,dim,eps,value,", 0), 0u);
    EXPECT_EQ(csv.find(",fail"), std::string::npos);
}

TEST(Cli, SolveThenFluxGapOfFieldWithItselfIsZero) {
    const fs::path d = temp_dir("flux");
    const std::string f = (d / "f.bin").string();
    ASSERT_EQ(run("solve --config " + configs("solve.json") + " --out " + f + " --trace " + (d / "t.csv").string(), d), 0);
    ASSERT_EQ(run("flux --field " + f + " --coeffs " + configs("solve.json") + " --battery " + configs("battery.json") +
                      " --field2 " + f + " --coeffs2 " + configs("solve.json") + " --out " + (d / "gaps.csv").string(),
                  d),
              0);
    EXPECT_NE(idlab::read_file(d / "out.txt").find("gap 0"), std::string::npos);
}
