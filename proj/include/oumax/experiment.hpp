#pragma once

// Reproducible experiment runner behind the CLI. Every subcommand produces a
// CSV whose first line is a '#' comment recording the full configuration and
// artifact version; numbers carry 17 significant digits so files round-trip
// exactly. Grid points may be computed in parallel; each row lands in its own
// slot and output assembly is ordered, so byte-identical reruns are
// guaranteed for any thread count. Per-row numeric failures fill the trailing
// error column instead of aborting the run.

#include <cinttypes>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cutoff.hpp"
#include "extremes.hpp"
#include "ou.hpp"
#include "parallel.hpp"
#include "random.hpp"
#include "stable.hpp"
#include "tvd.hpp"

namespace oumax {

inline constexpr const char* kVersion = "1.0.0";

struct ExperimentConfig {
    double alpha = 2.0;
    double c = 0.5;
    double lambda = 1.0;
    double x0 = 1.0;
    double kappa = 1.0;
    std::vector<double> ln_n_list;
    std::vector<double> b_grid;
    std::vector<double> delta_grid;
    std::vector<double> time_schedule;  // empty: t = ln(ln n) per count
    std::uint64_t seed = 0x9e3779b97f4a7c15ull;
    QuadratureSpec quadrature;
    std::string output_path;
    int threads = 1;
    std::int64_t samples = 100000;
    int bins = 64;

    StableLaw noise() const { return StableLaw(alpha, c); }
    OUParams ou() const { return OUParams(lambda, x0, noise()); }

    void validate() const {
        quadrature.validate();
        if (threads < 1) throw std::invalid_argument("config: threads must be >= 1");
        if (samples < 1) throw std::invalid_argument("config: samples must be >= 1");
        if (bins < 2) throw std::invalid_argument("config: bins must be >= 2");
        if (!(kappa > 0.0)) throw std::invalid_argument("config: kappa must be positive");
        noise();
        ou();
    }
};

namespace detail {

inline std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string join17(const std::vector<double>& vs) {
    std::string out;
    for (std::size_t i = 0; i < vs.size(); ++i) {
        if (i) out += ',';
        out += fmt17(vs[i]);
    }
    return out;
}

}  // namespace detail

struct CsvTable {
    std::string comment;  // single '#' line with config + version
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    bool any_error() const {
        for (const auto& r : rows)
            if (!r.empty() && !r.back().empty()) return true;
        return false;
    }

    std::string to_string() const {
        std::string out = comment;
        out += '\n';
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (i) out += ',';
            out += header[i];
        }
        out += '\n';
        for (const auto& r : rows) {
            for (std::size_t i = 0; i < r.size(); ++i) {
                if (i) out += ',';
                out += r[i];
            }
            out += '\n';
        }
        return out;
    }

    void write(const std::string& path) const {
        std::ofstream f(path, std::ios::binary);  // LF line endings everywhere
        if (!f) throw std::runtime_error("cannot open output file: " + path);
        f << to_string();
        if (!f) throw std::runtime_error("failed writing output file: " + path);
    }
};

namespace detail {

inline std::string config_comment(const char* subcommand, const ExperimentConfig& cfg) {
    std::string s = "# oumax ";
    s += kVersion;
    s += " subcommand=";
    s += subcommand;
    s += " alpha=" + fmt17(cfg.alpha);
    s += " c=" + fmt17(cfg.c);
    s += " lambda=" + fmt17(cfg.lambda);
    s += " x0=" + fmt17(cfg.x0);
    s += " kappa=" + fmt17(cfg.kappa);
    s += " ln_n=" + join17(cfg.ln_n_list);
    s += " b_grid=" + join17(cfg.b_grid);
    s += " delta_grid=" + join17(cfg.delta_grid);
    s += " time_schedule=" + join17(cfg.time_schedule);
    char seedbuf[32];
    std::snprintf(seedbuf, sizeof seedbuf, "0x%" PRIx64, cfg.seed);
    s += " seed=";
    s += seedbuf;
    s += " abs_tol=" + fmt17(cfg.quadrature.abs_tol);
    s += " rel_tol=" + fmt17(cfg.quadrature.rel_tol);
    s += " samples=" + std::to_string(cfg.samples);
    s += " bins=" + std::to_string(cfg.bins);
    return s;
}

}  // namespace detail

inline CsvTable run_profile(const ExperimentConfig& cfg) {
    cfg.validate();
    if (cfg.alpha != 2.0) throw std::invalid_argument("profile: requires alpha = 2");
    if (cfg.ln_n_list.empty() || cfg.b_grid.empty())
        throw std::invalid_argument("profile: needs --ln-n and --b-grid");
    std::vector<LogCount> counts;
    for (double l : cfg.ln_n_list) counts.push_back(LogCount(l));
    const auto points =
        profile_scan(cfg.ou(), counts, cfg.b_grid, cfg.kappa, cfg.quadrature, cfg.threads);
    CsvTable t;
    t.comment = detail::config_comment("profile", cfg);
    t.header = {"ln_n", "b", "t_eval", "d_n", "d_n_err", "D_n", "theta_n", "G_b", "error"};
    for (const auto& pt : points)
        t.rows.push_back({detail::fmt17(pt.ln_n), detail::fmt17(pt.b), detail::fmt17(pt.t_eval),
                          detail::fmt17(pt.d_n.value), detail::fmt17(pt.d_n.error_bound),
                          detail::fmt17(pt.D_n.value), detail::fmt17(pt.theta_n),
                          detail::fmt17(pt.G_b), pt.error});
    return t;
}

inline CsvTable run_shape(const ExperimentConfig& cfg) {
    cfg.validate();
    if (cfg.ln_n_list.empty() || cfg.delta_grid.empty())
        throw std::invalid_argument("shape: needs --ln-n and --delta-grid");
    const LogCount count(cfg.ln_n_list.front());
    if (!(count.ln_n > 1.0)) throw std::invalid_argument("shape: requires ln_n > 1");
    const OUParams p = cfg.ou();
    const double t_n = std::log(count.ln_n) / (2.0 * cfg.lambda);
    CsvTable t;
    t.comment = detail::config_comment("shape", cfg);
    t.header = {"delta", "t_eval", "d_n", "d_n_err", "error"};
    t.rows.resize(cfg.delta_grid.size());
    parallel_for(cfg.delta_grid.size(), cfg.threads, [&](std::size_t i) {
        const double delta = cfg.delta_grid[i];
        std::string err;
        TvEstimate d;
        try {
            if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
            d = distance_dn(p, count, delta * t_n, cfg.quadrature);
        } catch (const std::exception& ex) {
            err = ex.what();
        }
        t.rows[i] = {detail::fmt17(delta), detail::fmt17(delta * t_n), detail::fmt17(d.value),
                     detail::fmt17(d.error_bound), err};
    });
    return t;
}

inline CsvTable run_no_cutoff(const ExperimentConfig& cfg) {
    cfg.validate();
    if (cfg.alpha >= 2.0) throw std::invalid_argument("no-cutoff: requires alpha < 2");
    if (cfg.ln_n_list.empty()) throw std::invalid_argument("no-cutoff: needs --ln-n");
    if (!cfg.time_schedule.empty() && cfg.time_schedule.size() != cfg.ln_n_list.size())
        throw std::invalid_argument("no-cutoff: --time-schedule must match --ln-n in length");
    const OUParams p = cfg.ou();
    CsvTable t;
    t.comment = detail::config_comment("no-cutoff", cfg);
    t.header = {"ln_n", "t_n", "d_n", "d_n_err", "error"};
    t.rows.resize(cfg.ln_n_list.size());
    parallel_for(cfg.ln_n_list.size(), cfg.threads, [&](std::size_t i) {
        const double ln_n = cfg.ln_n_list[i];
        std::string err;
        TvEstimate d;
        double tt = 0.0;
        try {
            const LogCount count(ln_n);
            tt = cfg.time_schedule.empty() ? std::log(ln_n) : cfg.time_schedule[i];
            d = distance_dn(p, count, tt, cfg.quadrature);
        } catch (const std::exception& ex) {
            err = ex.what();
        }
        t.rows[i] = {detail::fmt17(ln_n), detail::fmt17(tt), detail::fmt17(d.value),
                     detail::fmt17(d.error_bound), err};
    });
    return t;
}

inline CsvTable run_evt_gap(const ExperimentConfig& cfg) {
    cfg.validate();
    if (cfg.ln_n_list.empty()) throw std::invalid_argument("evt-gap: needs --ln-n");
    const StableLaw noise = cfg.noise();
    CsvTable t;
    t.comment = detail::config_comment("evt-gap", cfg);
    t.header = {"ln_n", "gap", "gap_err", "error"};
    t.rows.resize(cfg.ln_n_list.size());
    parallel_for(cfg.ln_n_list.size(), cfg.threads, [&](std::size_t i) {
        std::string err;
        TvEstimate g;
        try {
            g = evt_gap(noise, LogCount(cfg.ln_n_list[i]), cfg.quadrature);
        } catch (const std::exception& ex) {
            err = ex.what();
        }
        t.rows[i] = {detail::fmt17(cfg.ln_n_list[i]), detail::fmt17(g.value),
                     detail::fmt17(g.error_bound), err};
    });
    return t;
}

inline CsvTable run_oracle_check(const ExperimentConfig& cfg) {
    cfg.validate();
    const std::vector<double> thetas{0.01, 0.1, 0.5, 1.0, 2.0, 5.0};
    struct Row {
        const char* family;
        double theta;
    };
    std::vector<Row> grid;
    for (const char* fam : {"gaussian", "cauchy", "gumbel"})
        for (double th : thetas) grid.push_back({fam, th});

    CsvTable t;
    t.comment = detail::config_comment("oracle-check", cfg);
    t.header = {"family", "theta", "closed_form", "quadrature", "abs_delta", "error"};
    t.rows.resize(grid.size());
    const std::vector<double> levels = detail::ladder_levels(cfg.quadrature.tail_quantile_eps);
    parallel_for(grid.size(), cfg.threads, [&](std::size_t i) {
        const auto [family, theta] = grid[i];
        std::string err;
        double closed = 0.0, quad = 0.0;
        try {
            std::string fam = family;
            std::vector<double> qf, qg;
            TvEstimate e;
            if (fam == "gaussian") {
                closed = tv_gaussian_shift(theta, 1.0);
                const StableLaw std_normal(2.0, 0.5);
                auto f = [&](double x) { return density(std_normal, x - theta); };
                auto g = [&](double x) { return density(std_normal, x); };
                for (double pl : levels) {
                    const double q = quantile(std_normal, pl);
                    qf.push_back(theta + q);
                    qg.push_back(q);
                }
                std::vector<double> interior = qf;
                interior.insert(interior.end(), qg.begin(), qg.end());
                e = tv_quadrature(f, g, Interval{qf.front(), qf.back()},
                                  Interval{qg.front(), qg.back()}, cfg.quadrature, interior);
            } else if (fam == "cauchy") {
                closed = tv_cauchy_shift(theta, 1.0);
                const StableLaw cauchy(1.0, 1.0);
                auto f = [&](double x) { return density(cauchy, x - theta); };
                auto g = [&](double x) { return density(cauchy, x); };
                for (double pl : levels) {
                    const double q = quantile(cauchy, pl);
                    qf.push_back(theta + q);
                    qg.push_back(q);
                }
                std::vector<double> interior = qf;
                interior.insert(interior.end(), qg.begin(), qg.end());
                e = tv_quadrature(f, g, Interval{qf.front(), qf.back()},
                                  Interval{qg.front(), qg.back()}, cfg.quadrature, interior);
            } else {
                closed = tv_gumbel_shift(theta);
                const LimitLaw gum = LimitLaw::gumbel();
                auto f = [&](double x) { return limit_density(gum, x - theta); };
                auto g = [&](double x) { return limit_density(gum, x); };
                for (double pl : levels) {
                    const double q = limit_quantile(gum, pl);
                    qf.push_back(theta + q);
                    qg.push_back(q);
                }
                std::vector<double> interior = qf;
                interior.insert(interior.end(), qg.begin(), qg.end());
                e = tv_quadrature(f, g, Interval{qf.front(), qf.back()},
                                  Interval{qg.front(), qg.back()}, cfg.quadrature, interior);
            }
            quad = e.value;
        } catch (const std::exception& ex) {
            err = ex.what();
        }
        t.rows[i] = {family, detail::fmt17(theta), detail::fmt17(closed), detail::fmt17(quad),
                     detail::fmt17(std::abs(closed - quad)), err};
    });
    return t;
}

// empirical TV of sampled maxima (time t vs stationary) against distance_dn;
// n must be an exact integer. Substreams 2i/2i+1 feed row i, so results are
// independent of the thread count.
inline CsvTable run_mc_check(const ExperimentConfig& cfg) {
    cfg.validate();
    if (cfg.ln_n_list.empty()) throw std::invalid_argument("mc-check: needs --ln-n");
    std::vector<double> times = cfg.time_schedule;
    if (times.empty()) times.push_back(1.0);
    struct Point {
        double ln_n;
        double t;
    };
    std::vector<Point> grid;
    for (double l : cfg.ln_n_list)
        for (double tt : times) grid.push_back({l, tt});
    const OUParams p = cfg.ou();

    CsvTable t;
    t.comment = detail::config_comment("mc-check", cfg);
    t.header = {"n", "t", "samples", "bins", "empirical", "quadrature", "abs_diff", "error"};
    t.rows.resize(grid.size());
    parallel_for(grid.size(), cfg.threads, [&](std::size_t i) {
        const auto [ln_n, tt] = grid[i];
        std::string err;
        double n_int = 0.0, emp = 0.0, quad = 0.0;
        try {
            const LogCount count(ln_n);
            const std::int64_t n = count.exact_integer();
            n_int = static_cast<double>(n);
            if (!(tt > 0.0)) throw std::invalid_argument("time must be positive");
            const LocScale at_t = marginal_law(p, tt);
            const LocScale at_inf = stationary_law(p);
            RandomStream sa = RandomStream::substream(cfg.seed, 2 * i);
            RandomStream sb = RandomStream::substream(cfg.seed, 2 * i + 1);
            auto draw_max = [&](const LocScale& law, RandomStream& st) {
                double m = -std::numeric_limits<double>::infinity();
                for (std::int64_t j = 0; j < n; ++j)
                    m = std::max(m, sample_one(law.base, st));
                return law.location + law.scale * m;
            };
            std::vector<double> xs, ys;
            xs.reserve(static_cast<std::size_t>(cfg.samples));
            ys.reserve(static_cast<std::size_t>(cfg.samples));
            for (std::int64_t s = 0; s < cfg.samples; ++s) xs.push_back(draw_max(at_t, sa));
            for (std::int64_t s = 0; s < cfg.samples; ++s) ys.push_back(draw_max(at_inf, sb));
            emp = tv_empirical(xs, ys, cfg.bins).value;
            quad = distance_dn(p, count, tt, cfg.quadrature).value;
        } catch (const std::exception& ex) {
            err = ex.what();
        }
        t.rows[i] = {detail::fmt17(n_int), detail::fmt17(tt), std::to_string(cfg.samples),
                     std::to_string(cfg.bins), detail::fmt17(emp), detail::fmt17(quad),
                     detail::fmt17(std::abs(emp - quad)), err};
    });
    return t;
}

}  // namespace oumax
