#include "idlab/commands.hpp"
#include "idlab/kernels.hpp"
#include "idlab/log.hpp"
#include "idlab/parallel.hpp"

#include "CLI11.hpp"

#include <iostream>

int main(int argc, char** argv) {
    using idlab::Path;
    CLI::App app{"idlab: identifiability experiments for quasilinear parabolic equations"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Expand all help");

    idlab::RunContext ctx;
    ctx.threads = idlab::default_threads();
    std::uint64_t seed = 0;
    std::string simd = "auto";
    std::string log_level;
    app.add_option("--threads", ctx.threads, "Worker threads (default IDLAB_THREADS or 1)")
        ->check(CLI::PositiveNumber);
    auto* seed_opt = app.add_option("--seed", seed, "RNG seed, overrides any config seed");
    app.add_option("--simd", simd, "Kernel ISA")->check(CLI::IsMember({"auto", "scalar", "avx2", "neon"}));
    app.add_option("--log-level", log_level, "trace|debug|info|warn|err|off");

    std::function<int()> run;

    auto* vs = app.add_subcommand("verify-scaling", "Singular-function scaling, Gamma constants and datum checks");
    std::optional<Path> vs_config;
    Path vs_out = "scaling.csv";
    vs->add_option("--config", vs_config, "Optional JSON overriding dims, eps_factors and tolerances");
    vs->add_option("--out", vs_out, "CSV output");
    vs->callback([&] { run = [&] { return idlab::cmd_verify_scaling(vs_config, vs_out, ctx); }; });

    auto* so = app.add_subcommand("solve", "Forward solve with a Dirichlet datum");
    Path so_config, so_out = "field.bin";
    std::optional<Path> so_trace;
    so->add_option("--config", so_config, "Experiment JSON")->required();
    so->add_option("--out", so_out, "Field output (raw float64 plus .json sidecar)");
    so->add_option("--trace", so_trace, "CSV of the solution on Gamma_M");
    so->callback([&] { run = [&] { return idlab::cmd_solve(so_config, so_out, so_trace, ctx); }; });

    auto* fl = app.add_subcommand("flux", "Weak boundary flux against the Gamma_M battery");
    Path fl_field, fl_coeffs, fl_out = "flux.csv";
    std::optional<Path> fl_battery, fl_field2, fl_coeffs2;
    fl->add_option("--field", fl_field, "Field written by solve")->required();
    fl->add_option("--coeffs", fl_coeffs, "Coefficient JSON")->required();
    fl->add_option("--battery", fl_battery, "Battery JSON {\"size\": n}");
    fl->add_option("--field2", fl_field2, "Second field for a flux gap");
    fl->add_option("--coeffs2", fl_coeffs2, "Coefficients of the second field");
    fl->add_option("--out", fl_out, "CSV output");
    fl->callback([&] {
        run = [&] { return idlab::cmd_flux(fl_field, fl_coeffs, fl_battery, fl_out, fl_field2, fl_coeffs2, ctx); };
    });

    auto* di = app.add_subcommand("discriminate", "Singular-datum sweep separating two coefficient sets");
    Path di_config, di_out = "report.csv";
    std::optional<Path> di_manifest;
    di->add_option("--config", di_config, "Experiment JSON")->required();
    di->add_option("--out", di_out, "CSV report");
    di->add_option("--manifest", di_manifest, "Run manifest JSON");
    di->callback([&] { run = [&] { return idlab::cmd_discriminate(di_config, di_out, di_manifest, ctx); }; });

    auto* rc = app.add_subcommand("reverse-check", "Flux gaps for coefficient sets expected to agree");
    Path rc_config, rc_out = "reverse.csv";
    rc->add_option("--config", rc_config, "Experiment JSON")->required();
    rc->add_option("--out", rc_out, "CSV output");
    rc->callback([&] { run = [&] { return idlab::cmd_reverse_check(rc_config, rc_out, ctx); }; });

    auto* sy = app.add_subcommand("synthesize", "Synthetic flux measurements from a known coefficient");
    Path sy_config, sy_out = "meas.json";
    sy->add_option("--config", sy_config, "Experiment JSON")->required();
    sy->add_option("--out", sy_out, "Measurement JSON");
    sy->callback([&] { run = [&] { return idlab::cmd_synthesize(sy_config, sy_out, ctx); }; });

    auto* re = app.add_subcommand("reconstruct", "Gauss-Newton recovery of a(t, u) from flux measurements");
    Path re_data, re_init, re_out = "recovered.json";
    double re_reg = 1e-6;
    std::optional<double> re_tol;
    re->add_option("--data", re_data, "Measurement JSON")->required();
    re->add_option("--init", re_init, "Initial knot JSON")->required();
    re->add_option("--reg", re_reg, "Smoothness penalty weight")->check(CLI::NonNegativeNumber);
    re->add_option("--tol", re_tol, "Pass threshold on the relative knot error");
    re->add_option("--out", re_out, "Recovered knot JSON");
    re->callback([&] { run = [&] { return idlab::cmd_reconstruct(re_data, re_init, re_reg, re_out, re_tol, ctx); }; });

    auto* ex = app.add_subcommand("examples", "Preset scenarios with maximum-principle checks");
    std::string ex_name;
    Path ex_out = "examples";
    ex->add_option("name", ex_name, "bioheat | chemotaxis | elliptic")->required();
    ex->add_option("--out", ex_out, "Output directory");
    ex->callback([&] { run = [&] { return idlab::cmd_examples(ex_name, ex_out, ctx); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc_parse = app.exit(e);
        return rc_parse == 0 ? 0 : idlab::kExitConfig;
    }

    if (*seed_opt) ctx.seed = seed;
    if (!log_level.empty()) {
        const auto lvl = spdlog::level::from_str(log_level);
        if (lvl == spdlog::level::off && log_level != "off") {
            std::cerr << "unknown --log-level '" << log_level << "'\n";
            return idlab::kExitConfig;
        }
        idlab::logger().set_level(lvl);
    }
    try {
        idlab::kernels::select(idlab::kernels::parse_isa(simd));
    } catch (const std::exception& e) {
        std::cerr << "--simd: " << e.what() << "\n";
        return idlab::kExitConfig;
    }
    idlab::logger().info("kernels: {}, threads: {}", idlab::kernels::name(idlab::kernels::active().isa), ctx.threads);
    return run();
}
