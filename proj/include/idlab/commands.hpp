#pragma once

// Subcommand implementations behind the idlab CLI. Each returns the process
// exit status: 0 when every declared assertion passes, 1 when an assertion
// fails, 2 on a schema or precondition violation, 3 on a numerical failure
// (the partial artifact is kept and a .FAILED marker written beside it).

#include "idlab/field.hpp"
#include "idlab/solver.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

namespace idlab {

enum ExitCode : int { kExitOk = 0, kExitAssertion = 1, kExitConfig = 2, kExitNumerical = 3 };

struct RunContext {
    int threads = 1;
    std::optional<std::uint64_t> seed;  ///< overrides the config seed
};

using Path = std::filesystem::path;

int cmd_verify_scaling(const std::optional<Path>& config, const Path& out, const RunContext& ctx);
int cmd_solve(const Path& config, const Path& out, const std::optional<Path>& trace, const RunContext& ctx);
int cmd_flux(const Path& field, const Path& coeffs, const std::optional<Path>& battery, const Path& out,
             const std::optional<Path>& field2, const std::optional<Path>& coeffs2, const RunContext& ctx);
int cmd_discriminate(const Path& config, const Path& out, const std::optional<Path>& manifest, const RunContext& ctx);
int cmd_reverse_check(const Path& config, const Path& out, const RunContext& ctx);
int cmd_synthesize(const Path& config, const Path& out, const RunContext& ctx);
int cmd_reconstruct(const Path& data, const Path& init, double reg, const Path& out, std::optional<double> tol,
                    const RunContext& ctx);
int cmd_examples(const std::string& name, const Path& out_dir, const RunContext& ctx);

/// Outcome of a preset scenario: the solution, its range, and the bounds the
/// maximum principle prescribes.
struct ExampleReport {
    std::string name;
    FieldST u;
    double min_value = 0.0;
    double max_value = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    bool pass = false;
};

ExampleReport run_bioheat_example(int n_cells = 32, double tau = 1.0 / 128.0);
ExampleReport run_chemotaxis_example(int n_cells = 32, double tau = 1.0 / 128.0);
ExampleReport run_elliptic_example(int n_cells = 32);

/// Rows (step, t, x, u) of the solution on the Gamma_M nodes.
std::string gamma_m_trace_csv(const FieldST& u);

} // namespace idlab
