// Command-line front end. Exit codes: 0 success, 2 invalid configuration or
// arguments, 3 when the run completed but at least one output row failed.

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <oumax/experiment.hpp>

namespace {

struct SubcommandSpec {
    CLI::App* app = nullptr;
    oumax::CsvTable (*run)(const oumax::ExperimentConfig&) = nullptr;
    std::vector<double> default_ln_n;
    double default_alpha = 2.0;
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"oumax: cut-off laboratory for the maximum of n stable "
                 "Ornstein-Uhlenbeck processes"};
    app.require_subcommand(1);

    oumax::ExperimentConfig cfg;
    auto* opt_alpha = app.add_option("--alpha", cfg.alpha, "stability index in (0,2]");
    app.add_option("--c", cfg.c, "noise scale parameter c > 0");
    app.add_option("--lambda", cfg.lambda, "drift rate lambda > 0");
    app.add_option("--x0", cfg.x0, "common initial condition");
    app.add_option("--kappa", cfg.kappa, "window width multiplier kappa > 0");
    auto* opt_ln_n =
        app.add_option("--ln-n", cfg.ln_n_list, "comma list of ln(n) values")->delimiter(',');
    app.add_option("--b-grid", cfg.b_grid, "comma list of window offsets b")->delimiter(',');
    app.add_option("--delta-grid", cfg.delta_grid, "comma list of time multipliers delta")
        ->delimiter(',');
    app.add_option("--time-schedule", cfg.time_schedule,
                   "comma list of evaluation times (no-cutoff: one per ln-n; mc-check: grid)")
        ->delimiter(',');
    app.add_option("--seed", cfg.seed, "master RNG seed");
    app.add_option("--abs-tol", cfg.quadrature.abs_tol, "quadrature absolute tolerance");
    app.add_option("--rel-tol", cfg.quadrature.rel_tol, "quadrature relative tolerance");
    app.add_option("--threads", cfg.threads, "worker threads (output is thread-count invariant)");
    app.add_option("--samples", cfg.samples, "Monte Carlo samples per side (mc-check)");
    app.add_option("--bins", cfg.bins, "histogram bins (mc-check)");
    auto* opt_out = app.add_option("--out", cfg.output_path, "output CSV path");
    app.set_config("--config", "", "key=value config file; command-line flags override");

    std::vector<SubcommandSpec> subs;
    auto add_sub = [&](const char* name, const char* desc,
                       oumax::CsvTable (*run)(const oumax::ExperimentConfig&),
                       std::vector<double> default_ln_n, double default_alpha) {
        CLI::App* s = app.add_subcommand(name, desc);
        s->fallthrough();
        subs.push_back({s, run, std::move(default_ln_n), default_alpha});
    };
    add_sub("profile", "cut-off window profile: d_n, D_n, theta_n, G(b) over (ln_n, b)",
            oumax::run_profile, {100.0, 1000.0, 10000.0}, 2.0);
    add_sub("shape", "d_n at multiples delta of the cut-off time", oumax::run_shape, {1e6}, 2.0);
    add_sub("no-cutoff", "d_n along a time schedule in the heavy-tailed regime",
            oumax::run_no_cutoff,
            {std::log(1e2), std::log(1e4), std::log(1e8)}, 1.0);
    add_sub("evt-gap", "TV distance between the normalized maximum and its EVT limit",
            oumax::run_evt_gap, {10.0, 100.0, 1000.0, 10000.0}, 2.0);
    add_sub("oracle-check", "closed-form TV formulas vs direct quadrature", oumax::run_oracle_check,
            {}, 2.0);
    add_sub("mc-check", "sampled maxima vs quadrature TV", oumax::run_mc_check,
            {std::log(10.0)}, 2.0);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    const SubcommandSpec* chosen = nullptr;
    for (const auto& s : subs)
        if (s.app->parsed()) chosen = &s;
    if (!chosen) {
        std::fprintf(stderr, "error: no subcommand selected\n");
        return 2;
    }
    if (opt_ln_n->count() == 0) cfg.ln_n_list = chosen->default_ln_n;
    if (opt_alpha->count() == 0) cfg.alpha = chosen->default_alpha;
    if (cfg.b_grid.empty()) cfg.b_grid = {-2.0, -1.0, 0.0, 1.0, 2.0};
    if (cfg.delta_grid.empty()) cfg.delta_grid = {0.25, 0.5, 1.0, 2.0, 4.0};
    if (opt_out->count() == 0) cfg.output_path = chosen->app->get_name() + ".csv";

    try {
        const oumax::CsvTable table = chosen->run(cfg);
        table.write(cfg.output_path);
        std::printf("wrote %s: %zu rows\n", cfg.output_path.c_str(), table.rows.size());
        if (table.any_error()) {
            std::fprintf(stderr, "error: one or more rows failed; see error column\n");
            return 3;
        }
        return 0;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
