#pragma once

// Law of the maximum of n i.i.d. variables, kept in log-domain throughout:
// F_max = F^n and f_max = n F^{n-1} f are evaluated via ln(-ln F), so n enters
// only as ln_n and stays exact far beyond integer range (ln_n up to 1e9).
// Also: the normalizing sequences (a_n, b_n), the Gumbel/Frechet limit laws,
// and the EVT gap d_TV((zeta^(n) - a_n)/b_n, xi).

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "numerics.hpp"
#include "ou.hpp"
#include "stable.hpp"
#include "tvd.hpp"

namespace oumax {

struct LogCount {
    double ln_n;

    explicit LogCount(double ln_n_) : ln_n(ln_n_) {
        if (!(ln_n >= 0.0)) throw std::invalid_argument("LogCount: ln_n must be >= 0");
    }
    static LogCount from_n(double n) {
        if (!(n >= 1.0)) throw std::invalid_argument("LogCount: n must be >= 1");
        LogCount c(std::log(n));
        c.n_hint_ = n;  // keep n itself: exp(log(n)) drifts by ~n ln_n eps
        return c;
    }

    // Monte Carlo over n processes needs an actual integer n <= 2^53.
    bool has_exact_integer() const {
        const double n = std::isnan(n_hint_) ? std::exp(ln_n) : n_hint_;
        if (!(n <= 9007199254740992.0)) return false;
        const double r = std::round(n);
        return std::abs(n - r) <= 1e-12 * r;
    }
    std::int64_t exact_integer() const {
        if (!has_exact_integer())
            throw std::domain_error("LogCount: exp(ln_n) is not an exact integer <= 2^53");
        const double n = std::isnan(n_hint_) ? std::exp(ln_n) : n_hint_;
        return static_cast<std::int64_t>(std::round(n));
    }

  private:
    double n_hint_ = std::numeric_limits<double>::quiet_NaN();
};

struct MaxLaw {
    LocScale base;
    LogCount count;
};

struct Normalization {
    double a_n;
    double b_n;  // > 0
};

enum class LimitKind { gumbel, frechet };

// Gumbel CDF e^{-e^{-x}} on R; Frechet CDF e^{-x^{-alpha}} on x > 0 (the
// paper labels the latter "Pareto").
struct LimitLaw {
    LimitKind kind;
    double alpha;  // used by frechet only, in (0,2)

    static LimitLaw gumbel() { return {LimitKind::gumbel, 0.0}; }
    static LimitLaw frechet(double alpha) {
        if (!(alpha > 0.0) || !(alpha < 2.0))
            throw std::invalid_argument("LimitLaw: frechet alpha must lie in (0,2)");
        return {LimitKind::frechet, alpha};
    }
};

namespace detail {

// ln(n-1) represented so that (n-1) = exp(lnm1); beyond ln_n = 700 the -1 is
// below one ulp of n
inline double log_n_minus_1(double ln_n) {
    if (ln_n > 700.0) return ln_n;
    return std::log(std::expm1(ln_n));
}

}  // namespace detail

// ln F_max(x) = n ln F(x') = -exp(ln_n + ln(-ln F(x')))
inline double max_log_cdf(const MaxLaw& m, double x) {
    if (m.base.scale == 0.0)
        return x < m.base.location ? -std::numeric_limits<double>::infinity() : 0.0;
    const double xp = (x - m.base.location) / m.base.scale;
    const double e = m.count.ln_n + ln_neg_ln_cdf(m.base.base, xp);
    if (e > 709.0) return -std::numeric_limits<double>::infinity();
    return -std::exp(e);
}

inline double max_log_density(const MaxLaw& m, double x) {
    if (m.base.scale == 0.0) throw std::domain_error("max_density: point mass has no density");
    const double xp = (x - m.base.location) / m.base.scale;
    const double log_base = log_density(m.base.base, xp) - std::log(m.base.scale);
    if (m.count.ln_n == 0.0) return log_base;
    const double e = detail::log_n_minus_1(m.count.ln_n) + ln_neg_ln_cdf(m.base.base, xp);
    const double pow_term = e > 709.0 ? -std::numeric_limits<double>::infinity() : -std::exp(e);
    return m.count.ln_n + pow_term + log_base;
}

inline double max_density(const MaxLaw& m, double x) { return std::exp(max_log_density(m, x)); }

// solves F_max(y) = p via ln(-ln F(x')) = ln(-ln p) - ln_n
inline double max_quantile(const MaxLaw& m, double p) {
    if (!(p > 0.0) || !(p < 1.0)) throw std::domain_error("max_quantile: p must lie in (0,1)");
    if (m.base.scale == 0.0) return m.base.location;
    const double tau = std::log(-std::log(p)) - m.count.ln_n;
    return m.base.location + m.base.scale * detail::solve_ln_neg_ln_cdf(m.base.base, tau);
}

// Explicit Gaussian normalization:
// a_n = sqrt(2c) [ (2 ln n)^{1/2} - (ln ln n + ln 4pi) / (2 (2 ln n)^{1/2}) ],
// b_n = sqrt(2c) (2 ln n)^{-1/2}. Needs ln_n > 1.
inline Normalization normalization_gaussian(double c, LogCount count) {
    if (!(c > 0.0)) throw std::invalid_argument("normalization_gaussian: c must be positive");
    if (!(count.ln_n > 1.0))
        throw std::domain_error("normalization_gaussian: requires ln_n > 1");
    const double s2c = std::sqrt(2.0 * c);
    const double r = std::sqrt(2.0 * count.ln_n);
    const double a =
        s2c * (r - (std::log(count.ln_n) + std::log(4.0 * std::numbers::pi_v<double>)) / (2.0 * r));
    return {a, s2c / r};
}

// Exact variant: solves 2 pi a^2 exp(a^2/(2c)) = 2 c n^2 in log form,
// b_n = 2c / a_n.
inline Normalization normalization_gaussian_exact(double c, LogCount count) {
    if (!(c > 0.0)) throw std::invalid_argument("normalization_gaussian_exact: c must be positive");
    if (!(count.ln_n > 1.0))
        throw std::domain_error("normalization_gaussian_exact: requires ln_n > 1");
    const double target = std::log(2.0 * c) + 2.0 * count.ln_n;
    auto h = [&](double a) {
        return std::log(2.0 * std::numbers::pi_v<double>) + 2.0 * std::log(a) +
               a * a / (2.0 * c) - target;
    };
    const double seed = normalization_gaussian(c, count).a_n;
    auto [lo, hi] = expand_bracket(h, 0.5 * seed, 2.0 * seed);
    const double a = (lo == hi) ? lo : find_root(h, lo, hi, 1e-13 * std::max(1.0, hi));
    return {a, 2.0 * c / a};
}

// Stable normalization (alpha < 2): a_n = 0, b_n = (c C_alpha n)^{1/alpha}
// evaluated in logs. Needs n >= 2.
inline Normalization normalization_stable(const StableLaw& law, LogCount count) {
    if (law.alpha >= 2.0)
        throw std::domain_error("normalization_stable: requires alpha < 2");
    if (!(count.ln_n >= std::numbers::ln2_v<double>))
        throw std::domain_error("normalization_stable: requires n >= 2");
    const double pi = std::numbers::pi_v<double>;
    const double c_alpha = std::sin(0.5 * pi * law.alpha) * gamma_fn(law.alpha) / pi;
    const double b = std::exp((std::log(law.c) + std::log(c_alpha) + count.ln_n) / law.alpha);
    return {0.0, b};
}

inline double limit_log_density(const LimitLaw& l, double x) {
    if (l.kind == LimitKind::gumbel) return -x - std::exp(-x);
    if (x <= 0.0) return -std::numeric_limits<double>::infinity();
    const double xa = std::pow(x, -l.alpha);
    return std::log(l.alpha) - (l.alpha + 1.0) * std::log(x) - xa;
}

inline double limit_density(const LimitLaw& l, double x) { return std::exp(limit_log_density(l, x)); }

inline double limit_cdf(const LimitLaw& l, double x) {
    if (l.kind == LimitKind::gumbel) return std::exp(-std::exp(-x));
    if (x <= 0.0) return 0.0;
    return std::exp(-std::pow(x, -l.alpha));
}

inline double limit_quantile(const LimitLaw& l, double p) {
    if (!(p > 0.0) || !(p < 1.0)) throw std::domain_error("limit_quantile: p must lie in (0,1)");
    if (l.kind == LimitKind::gumbel) return -std::log(-std::log(p));
    return std::exp(-std::log(-std::log(p)) / l.alpha);
}

namespace detail {

// probability levels for support hints and interior breakpoints; the extreme
// levels come from spec.tail_quantile_eps
inline std::vector<double> ladder_levels(double eps) {
    std::vector<double> ls{eps,  1e-9, 1e-6, 1e-4, 1e-3, 0.01, 0.05,       0.15,
                           0.3,  0.5,  0.7,  0.85, 0.95, 0.99, 1.0 - 1e-3, 1.0 - 1e-4,
                           1.0 - 1e-6, 1.0 - 1e-9, 1.0 - eps};
    std::sort(ls.begin(), ls.end());
    ls.erase(std::unique(ls.begin(), ls.end()), ls.end());
    return ls;
}

}  // namespace detail

// d_TV((zeta^(n) - a_n)/b_n, xi): the right side of the coupling inequality.
// n = 1 is allowed for alpha < 2 as a pre-asymptotic diagnostic (flagged in
// the note; the Lemma normalization formula is extended down to n = 1).
inline TvEstimate evt_gap(const StableLaw& base, LogCount count, const QuadratureSpec& spec) {
    spec.validate();
    Normalization norm{};
    LimitLaw limit = LimitLaw::gumbel();
    std::string note;
    if (base.alpha == 2.0) {
        norm = normalization_gaussian(base.c, count);
    } else {
        limit = LimitLaw::frechet(base.alpha);
        if (count.ln_n >= std::numbers::ln2_v<double>) {
            norm = normalization_stable(base, count);
        } else {
            const double pi = std::numbers::pi_v<double>;
            const double c_alpha = std::sin(0.5 * pi * base.alpha) * gamma_fn(base.alpha) / pi;
            norm = {0.0, std::exp((std::log(base.c) + std::log(c_alpha) + count.ln_n) / base.alpha)};
            note = "pre-asymptotic";
        }
    }

    const MaxLaw m{LocScale(base, 0.0, 1.0), count};
    auto fn = [&](double y) {
        return std::exp(std::log(norm.b_n) + max_log_density(m, norm.b_n * y + norm.a_n));
    };
    auto gn = [&](double y) { return limit_density(limit, y); };

    const std::vector<double> levels = detail::ladder_levels(spec.tail_quantile_eps);
    std::vector<double> qf, qg;
    for (double p : levels) {
        qf.push_back((max_quantile(m, p) - norm.a_n) / norm.b_n);
        qg.push_back(limit_quantile(limit, p));
    }
    const Interval hf{qf.front(), qf.back()};
    const Interval hg{qg.front(), qg.back()};
    std::vector<double> interior = qf;
    interior.insert(interior.end(), qg.begin(), qg.end());

    TvEstimate e = tv_quadrature(fn, gn, hf, hg, spec, interior);
    e.note = note;
    return e;
}

}  // namespace oumax
