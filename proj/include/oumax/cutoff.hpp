#pragma once

// The headline quantities: d^(n)(t) between the time-t and stationary laws of
// the maximum of n OU processes, its EVT approximation D^(n)(t), the cut-off
// time ln(ln n)/(2 lambda), the window quantity theta^(n)_t, the Gaussian
// profile G, the union bound, the no-cut-off scan for alpha < 2, and the
// reflection x0 -> -x0 that turns every max statement into a min statement.

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "extremes.hpp"
#include "numerics.hpp"
#include "ou.hpp"
#include "parallel.hpp"
#include "tvd.hpp"

namespace oumax {

struct CutoffSchedule {
    double t_n;
    double kappa = 1.0;
    double window_correction = 0.0;  // the o_n(1) term; 0 is the simplest admissible choice
};

// one profile row; d_n/D_n/theta_n are finite-n, G_b is the limit curve
struct ProfilePoint {
    double ln_n = 0.0;
    double b = 0.0;
    double t_eval = 0.0;
    TvEstimate d_n;
    TvEstimate D_n;
    double theta_n = 0.0;
    double G_b = 0.0;
    std::string error;  // empty on success; scans continue past failed points
};

namespace detail {

inline TvEstimate tv_between_max_laws(const MaxLaw& a, const MaxLaw& b,
                                      const QuadratureSpec& spec) {
    auto fa = [&](double x) { return max_density(a, x); };
    auto fb = [&](double x) { return max_density(b, x); };
    const std::vector<double> levels = ladder_levels(spec.tail_quantile_eps);
    std::vector<double> qa, qb;
    qa.reserve(levels.size());
    qb.reserve(levels.size());
    for (double p : levels) {
        qa.push_back(max_quantile(a, p));
        qb.push_back(max_quantile(b, p));
    }
    const Interval ha{qa.front(), qa.back()};
    const Interval hb{qb.front(), qb.back()};
    std::vector<double> interior = qa;
    interior.insert(interior.end(), qb.begin(), qb.end());
    return tv_quadrature(fa, fb, ha, hb, spec, interior);
}

}  // namespace detail

// d^(n)(t) = d_TV(e^{-lambda t} x0 + s_t zeta^(n), s_inf zeta^(n)); entirely
// log-domain, so ln_n is limited only by double range.
inline TvEstimate distance_dn(const OUParams& p, LogCount count, double t,
                              const QuadratureSpec& spec) {
    if (!(t > 0.0)) throw std::invalid_argument("distance_dn: t must be positive");
    const MaxLaw a{marginal_law(p, t), count};
    const MaxLaw b{stationary_law(p), count};
    return detail::tv_between_max_laws(a, b, spec);
}

// theta^(n)_t = (2 lambda)^{1/2} e^{-lambda t} x0 / b_n - (a_n/b_n) phi_t with
// phi_t = 1 - (1 - e^{-2 lambda t})^{1/2} = u/(1 + sqrt(1-u)), u = e^{-2 lambda t};
// the rewritten phi keeps e^{2 lambda t} phi_t -> 1/2 numerically exact.
inline double theta_window(const OUParams& p, LogCount count, double t) {
    if (p.noise.alpha != 2.0) throw std::domain_error("theta_window: requires alpha = 2");
    if (!(t > 0.0)) throw std::invalid_argument("theta_window: t must be positive");
    const Normalization norm = normalization_gaussian(p.noise.c, count);
    const double u = std::exp(-2.0 * p.lambda * t);
    const double phi = u / (1.0 + std::sqrt(1.0 - u));
    return std::sqrt(2.0 * p.lambda) * std::exp(-p.lambda * t) * p.x0 / norm.b_n -
           (norm.a_n / norm.b_n) * phi;
}

// D^(n)(t) = d_TV(e^{-lambda t} x0 + s_t (b_n xi + a_n), s_inf (b_n xi + a_n));
// by translation/scaling invariance this is d_TV(theta + gamma xi, xi) with
// gamma = s_t/s_inf, computed by quadrature on the limit densities.
inline TvEstimate distance_Dn(const OUParams& p, LogCount count, double t,
                              const QuadratureSpec& spec) {
    if (!(t > 0.0)) throw std::invalid_argument("distance_Dn: t must be positive");
    const double alpha = p.noise.alpha;
    const double gamma = std::exp(std::log(-std::expm1(-p.lambda * alpha * t)) / alpha);

    double theta;
    LimitLaw limit = LimitLaw::gumbel();
    if (alpha == 2.0) {
        theta = theta_window(p, count, t);
    } else {
        limit = LimitLaw::frechet(alpha);
        const Normalization norm = normalization_stable(p.noise, count);
        const double s_inf = std::pow(1.0 / (p.lambda * alpha), 1.0 / alpha);
        theta = std::exp(-p.lambda * t) * p.x0 / (s_inf * norm.b_n);
    }

    auto f = [&](double y) {
        return std::exp(limit_log_density(limit, (y - theta) / gamma) - std::log(gamma));
    };
    auto g = [&](double y) { return limit_density(limit, y); };
    const std::vector<double> levels = detail::ladder_levels(spec.tail_quantile_eps);
    std::vector<double> qf, qg;
    for (double pl : levels) {
        const double q = limit_quantile(limit, pl);
        qf.push_back(theta + gamma * q);
        qg.push_back(q);
    }
    const Interval hf{qf.front(), qf.back()};
    const Interval hg{qg.front(), qg.back()};
    std::vector<double> interior = qf;
    interior.insert(interior.end(), qg.begin(), qg.end());
    return tv_quadrature(f, g, hf, hg, spec, interior);
}

// G(b) = d_TV(theta_inf(b) + xi, xi), theta_inf(b) = (2 lambda/c)^{1/2} e^{-lambda kappa b} x0
// - e^{-2 lambda kappa b}. The constant is often quoted as 2 sqrt(lambda),
// which assumes c = 1/2 (the default configuration); this is the general-c form.
inline double profile_G(const OUParams& p, double kappa, double b) {
    if (p.noise.alpha != 2.0) throw std::domain_error("profile_G: requires alpha = 2");
    if (!(kappa > 0.0)) throw std::invalid_argument("profile_G: kappa must be positive");
    const double e1 = std::exp(-p.lambda * kappa * b);
    const double theta_inf = std::sqrt(2.0 * p.lambda / p.noise.c) * e1 * p.x0 - e1 * e1;
    if (!std::isfinite(theta_inf)) return 1.0;  // |theta| overflow; TV saturates
    return tv_gumbel_shift(theta_inf);
}

inline CutoffSchedule cutoff_time(const OUParams& p, LogCount count) {
    if (p.noise.alpha != 2.0) throw std::domain_error("cutoff_time: requires alpha = 2");
    if (!(count.ln_n > 1.0)) throw std::domain_error("cutoff_time: requires ln_n > 1");
    return {std::log(count.ln_n) / (2.0 * p.lambda), 1.0, 0.0};
}

// n * d_TV(X_t, X_inf): the single-particle union bound on d^(n)(t); may
// exceed 1, and overflows of n are reported as +infinity (still a bound).
inline double union_bound(const OUParams& p, LogCount count, double t,
                          const QuadratureSpec& spec) {
    if (!(t > 0.0)) throw std::invalid_argument("union_bound: t must be positive");
    const double n = std::exp(count.ln_n);
    if (!std::isfinite(n)) return std::numeric_limits<double>::infinity();
    const MaxLaw a{marginal_law(p, t), LogCount(0.0)};
    const MaxLaw b{stationary_law(p), LogCount(0.0)};
    return n * detail::tv_between_max_laws(a, b, spec).value;
}

// min_j X_j = -max_j(-X_j); the noise is symmetric, so the min process is the
// max process with x0 reflected.
inline OUParams reflect_min(const OUParams& p) { return OUParams(p.lambda, -p.x0, p.noise); }

inline std::vector<ProfilePoint> profile_scan(const OUParams& p,
                                              const std::vector<LogCount>& counts,
                                              const std::vector<double>& bs, double kappa,
                                              const QuadratureSpec& spec, int threads = 1) {
    if (p.noise.alpha != 2.0) throw std::domain_error("profile_scan: requires alpha = 2");
    std::vector<ProfilePoint> rows(counts.size() * bs.size());
    parallel_for(rows.size(), threads, [&](std::size_t idx) {
        const LogCount count = counts[idx / bs.size()];
        const double b = bs[idx % bs.size()];
        ProfilePoint& row = rows[idx];
        row.ln_n = count.ln_n;
        row.b = b;
        try {
            const CutoffSchedule sched = cutoff_time(p, count);
            row.t_eval = sched.t_n + b * kappa;
            row.G_b = profile_G(p, kappa, b);
            row.theta_n = theta_window(p, count, row.t_eval);
            row.d_n = distance_dn(p, count, row.t_eval, spec);
            row.D_n = distance_Dn(p, count, row.t_eval, spec);
        } catch (const std::exception& ex) {
            row.error = ex.what();
        }
    });
    return rows;
}

// d^(n)(delta * t^(n)) per delta; t^(n) = ln(ln n)/(2 lambda) is formed
// directly so alpha < 2 can be scanned exploratorily (cutoff_time itself is
// Gaussian-only).
inline std::vector<std::pair<double, TvEstimate>> cutoff_shape_scan(
    const OUParams& p, LogCount count, const std::vector<double>& deltas,
    const QuadratureSpec& spec, int threads = 1) {
    if (!(count.ln_n > 1.0)) throw std::invalid_argument("cutoff_shape_scan: requires ln_n > 1");
    for (double delta : deltas)
        if (!(delta > 0.0)) throw std::invalid_argument("cutoff_shape_scan: deltas must be positive");
    const double t_n = std::log(count.ln_n) / (2.0 * p.lambda);
    std::vector<std::pair<double, TvEstimate>> rows(deltas.size());
    parallel_for(rows.size(), threads, [&](std::size_t i) {
        rows[i] = {deltas[i], distance_dn(p, count, deltas[i] * t_n, spec)};
    });
    return rows;
}

struct NoCutoffRow {
    LogCount count;
    double t;
    TvEstimate d_n;
};

// d^(n)(t^(n)) along a divergent schedule; typical usage passes
// t^(n) = ln ln n or any slower divergent sequence. The no-cut-off statement
// only concerns divergent schedules, so a non-increasing one is rejected.
inline std::vector<NoCutoffRow> no_cutoff_scan(const OUParams& p,
                                               const std::vector<LogCount>& counts,
                                               const std::vector<double>& times,
                                               const QuadratureSpec& spec, int threads = 1) {
    if (p.noise.alpha >= 2.0) throw std::domain_error("no_cutoff_scan: requires alpha < 2");
    if (counts.size() != times.size())
        throw std::invalid_argument("no_cutoff_scan: counts and times must align");
    for (std::size_t i = 0; i < counts.size(); ++i) {
        if (!(times[i] > 0.0))
            throw std::invalid_argument("no_cutoff_scan: schedule times must be positive");
        if (i > 0 && !(times[i] > times[i - 1]))
            throw std::invalid_argument(
                "no_cutoff_scan: schedule must diverge (strictly increasing times)");
        if (i > 0 && !(counts[i].ln_n > counts[i - 1].ln_n))
            throw std::invalid_argument("no_cutoff_scan: counts must be strictly increasing");
    }
    std::vector<NoCutoffRow> rows;
    rows.reserve(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i)
        rows.push_back({counts[i], times[i], TvEstimate{}});
    parallel_for(rows.size(), threads, [&](std::size_t i) {
        rows[i].d_n = distance_dn(p, rows[i].count, rows[i].t, spec);
    });
    return rows;
}

}  // namespace oumax
