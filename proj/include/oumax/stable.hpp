#pragma once

// Symmetric strictly alpha-stable law with characteristic function
// exp(-c|z|^alpha). Parameterized by the exponent constant c itself, not the
// conventional scale sigma = c^(1/alpha); conversion helpers are provided.
// alpha = 2 is the centered Gaussian with variance 2c, alpha = 1 the centered
// Cauchy with scale c; other alphas go through Fourier inversion with a
// Bergstroem tail series past a cached per-law crossover.

#include <cmath>
#include <cstdint>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "numerics.hpp"
#include "random.hpp"

namespace oumax {

struct StableLaw {
    double alpha;
    double c;

    StableLaw(double alpha_, double c_) : alpha(alpha_), c(c_) {
        if (!(alpha > 0.0) || !(alpha <= 2.0))
            throw std::invalid_argument("StableLaw: alpha must lie in (0, 2]");
        if (!(c > 0.0)) throw std::invalid_argument("StableLaw: c must be positive");
    }

    // conventional scale sigma with cf exp(-|sigma z|^alpha)
    double sigma() const { return std::pow(c, 1.0 / alpha); }
    static StableLaw from_sigma(double alpha_, double sigma_) {
        if (!(sigma_ > 0.0)) throw std::invalid_argument("StableLaw: sigma must be positive");
        return StableLaw(alpha_, std::pow(sigma_, alpha_));
    }
};

inline double char_fn(const StableLaw& law, double z) {
    return std::exp(-law.c * std::pow(std::abs(z), law.alpha));
}

// c*alpha*C_alpha with C_alpha = sin(pi alpha/2)Gamma(alpha)/pi: the constant
// with f(x)*x^(1+alpha) -> c*alpha*C_alpha as x -> infinity.
inline double tail_constant(const StableLaw& law) {
    if (law.alpha >= 2.0) throw std::domain_error("tail_constant: Gaussian has no Pareto tail");
    const double pi = std::numbers::pi_v<double>;
    const double c_alpha = std::sin(0.5 * pi * law.alpha) * gamma_fn(law.alpha) / pi;
    return law.c * law.alpha * c_alpha;
}

namespace detail {

// ---- Bergstroem asymptotic series for x -> +infinity ----------------------
// density:  f(x) = (1/pi) sum_{k>=1} (-1)^{k+1} (c^k/k!) Gamma(alpha k + 1) sin(k pi alpha/2) x^{-alpha k - 1}
// survival: S(x) = (1/pi) sum_{k>=1} (-1)^{k+1} (c^k/k!) Gamma(alpha k) sin(k pi alpha/2) x^{-alpha k}
// Divergent for alpha > 1; truncated at the smallest term, error ~ first
// omitted term. Returned in log form (the first term is positive and
// dominates), so deep-tail values never underflow.

struct LogSeriesResult {
    double log_value;  // ln of the (positive) sum
    double rel_err;    // first omitted term relative to the sum
    bool ok;
};

inline LogSeriesResult stable_tail_log_series(double alpha, double c, double x, bool density) {
    // compactified integrators probe x = inf, where the tail vanishes exactly
    if (std::isinf(x)) return {-std::numeric_limits<double>::infinity(), 0.0, true};
    const double pi = std::numbers::pi_v<double>;
    const double lnx = std::log(x);
    const double lnc = std::log(c);
    const double shift = density ? 1.0 : 0.0;

    double lt1 = 0.0;           // log magnitude of the k=1 term
    double ratio_sum = 0.0;     // sum_{k>=2} term_k / term_1
    double prev_mag = 0.0;      // last nonzero |term_k / term_1|
    double omitted = 0.0;
    bool have_first = false;

    for (int k = 1; k <= 120; ++k) {
        const double s = std::sin(0.5 * pi * alpha * static_cast<double>(k));
        if (s == 0.0) continue;
        const double kk = static_cast<double>(k);
        const double lt = kk * lnc - std::lgamma(kk + 1.0) + std::lgamma(alpha * kk + shift) +
                          std::log(std::abs(s)) - (alpha * kk + shift) * lnx - std::log(pi);
        const double sign = ((k % 2 == 1) ? 1.0 : -1.0) * (s > 0.0 ? 1.0 : -1.0);
        if (!have_first) {
            lt1 = lt;
            have_first = true;
            prev_mag = 1.0;
            continue;
        }
        const double mag = std::exp(lt - lt1);
        if (mag >= prev_mag) {  // divergence onset: stop, error = this term
            omitted = mag;
            break;
        }
        ratio_sum += sign * mag;
        prev_mag = mag;
        omitted = mag;
        if (mag < 1e-18) break;
    }
    if (!have_first || 1.0 + ratio_sum <= 0.0) return {0.0, 1.0, false};
    const double log_value = lt1 + std::log1p(ratio_sum);
    const double rel_err = omitted / (1.0 + ratio_sum);
    return {log_value, rel_err, rel_err < 1e-9};
}

// ---- oscillatory half-line integrals for the Fourier inversion ------------
// Integrand g must decay under the envelope exp(-c t^alpha). Zeros of the
// trigonometric factor sit at (first_zero + k)*pi/x. Few lobes: plain
// adaptive quadrature seeded at the zeros. Many lobes: direct head summation
// followed by van Wijngaarden (repeated-averaging) acceleration of the
// alternating lobe series.

template <class G>
double oscillatory_halfline(G&& g, double x, double T, double first_zero) {
    const double pi = std::numbers::pi_v<double>;
    const double lobes_in_range = x * T / pi - first_zero;

    QuadratureSpec qs;
    qs.abs_tol = 5e-14;
    qs.rel_tol = 1e-12;
    qs.max_subdivisions = 4000;

    if (lobes_in_range <= 600.0) {
        std::vector<double> zeros;
        for (double k = 0.0; (first_zero + k) * pi / x < T; k += 1.0)
            zeros.push_back((first_zero + k) * pi / x);
        const IntegralResult r = integrate_adaptive(g, 0.0, T, qs, zeros);
        if (!r.converged)
            throw std::runtime_error("stable: inversion quadrature did not converge (x below crossover)");
        return r.value;
    }

    auto zero_at = [&](int k) { return (first_zero + static_cast<double>(k)) * pi / x; };
    auto lobe = [&](double a, double b) {
        const double m = 0.5 * (a + b);
        return gk15_panel(g, a, m).value + gk15_panel(g, m, b).value;
    };

    constexpr int kHead = 8;
    constexpr int kAccel = 48;
    // the head carries the t -> 0 cusp of the envelope, so it gets full
    // adaptive treatment; only the clean alternating remainder is averaged
    std::vector<double> head_zeros;
    for (int k = 0; k < kHead; ++k) head_zeros.push_back(zero_at(k));
    const IntegralResult rh = integrate_adaptive(g, 0.0, zero_at(kHead), qs, head_zeros);
    if (!rh.converged)
        throw std::runtime_error("stable: inversion head quadrature did not converge");

    std::vector<double> partial;
    partial.reserve(kAccel);
    double acc = rh.value;
    for (int k = kHead; k < kHead + kAccel; ++k) {
        acc += lobe(zero_at(k), zero_at(k + 1));
        partial.push_back(acc);
    }
    // repeated averaging of partial sums of the alternating remainder; the
    // change across the last contraction levels bounds the acceleration error
    double prev = partial.front();
    while (partial.size() > 1) {
        for (std::size_t j = 0; j + 1 < partial.size(); ++j)
            partial[j] = 0.5 * (partial[j] + partial[j + 1]);
        partial.pop_back();
        if (partial.size() > 1) prev = partial.front();
    }
    const double value = partial.front();
    if (std::abs(value - prev) > 1e-10 * std::max(1e-3, std::abs(value)))
        throw std::runtime_error("stable: lobe-series acceleration did not converge");
    return value;
}

// envelope truncation: exp(-c T^alpha) = exp(-60), remainder provably < 1e-20
inline double envelope_cutoff(double alpha, double c) {
    return std::pow(60.0 / c, 1.0 / alpha);
}

inline double inversion_density(double alpha, double c, double x) {
    const double pi = std::numbers::pi_v<double>;
    const double T = envelope_cutoff(alpha, c);
    auto g = [&](double t) { return std::exp(-c * std::pow(t, alpha)) * std::cos(t * x); };
    return oscillatory_halfline(g, x, T, 0.5) / pi;
}

// F(x) - 1/2 for x > 0
inline double inversion_cdf_delta(double alpha, double c, double x) {
    const double pi = std::numbers::pi_v<double>;
    const double T = envelope_cutoff(alpha, c);
    auto g = [&](double t) { return std::exp(-c * std::pow(t, alpha)) * std::sin(t * x) / t; };
    return oscillatory_halfline(g, x, T, 1.0) / pi;
}

// ---- crossover between inversion integral and tail series -----------------
// Smallest grid point where both routes agree to 1e-8 and the series is
// internally converged; cached per (alpha, c, kind).

enum class TailKind : int { pdf = 0, cdf = 1 };

inline double stable_crossover(double alpha, double c, TailKind kind) {
    static std::map<std::tuple<double, double, int>, double> cache;
    static std::mutex mu;
    thread_local std::map<std::tuple<double, double, int>, double> local;
    const auto key = std::make_tuple(alpha, c, static_cast<int>(kind));
    if (auto it = local.find(key); it != local.end()) return it->second;
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(key);
        if (it != cache.end()) {
            local.emplace(key, it->second);
            return it->second;
        }
    }
    double x = 2.0 * std::pow(c, 1.0 / alpha);
    double found = std::numeric_limits<double>::infinity();
    for (int step = 0; step < 120; ++step) {
        const bool density = (kind == TailKind::pdf);
        const auto ser = stable_tail_log_series(alpha, c, x, density);
        if (ser.ok) {
            const double sv = std::exp(ser.log_value);
            const double iv = density ? inversion_density(alpha, c, x)
                                      : 0.5 - inversion_cdf_delta(alpha, c, x);
            // relative agreement, with an absolute floor for values that sit
            // at the quadrature noise level
            if (std::abs(iv - sv) <= 3e-8 * std::abs(iv) + 1e-12) {
                found = x;
                break;
            }
        }
        x *= 1.35;
    }
    if (!std::isfinite(found))
        throw std::runtime_error("stable: inversion integral and tail series never agreed");
    local.emplace(key, found);
    std::lock_guard<std::mutex> lock(mu);
    cache.emplace(key, found);
    return found;
}

inline constexpr double kLn2SqrtPi = 1.26551212348464539649;  // ln(2 sqrt(pi))

}  // namespace detail

inline double density(const StableLaw& law, double x);

inline double log_density(const StableLaw& law, double x) {
    const double ax = std::abs(x);
    if (law.alpha == 2.0)
        return -ax * ax / (4.0 * law.c) - 0.5 * std::log(law.c) - detail::kLn2SqrtPi;
    if (law.alpha == 1.0)
        return std::log(law.c / std::numbers::pi_v<double>) - 2.0 * std::log(std::hypot(ax, law.c));
    if (ax >= detail::stable_crossover(law.alpha, law.c, detail::TailKind::pdf))
        return detail::stable_tail_log_series(law.alpha, law.c, ax, true).log_value;
    return std::log(density(law, ax));
}

inline double density(const StableLaw& law, double x) {
    const double ax = std::abs(x);
    if (law.alpha == 2.0 || law.alpha == 1.0) return std::exp(log_density(law, ax));
    if (ax == 0.0)
        return gamma_fn(1.0 + 1.0 / law.alpha) /
               (std::numbers::pi_v<double> * std::pow(law.c, 1.0 / law.alpha));
    if (ax >= detail::stable_crossover(law.alpha, law.c, detail::TailKind::pdf))
        return std::exp(detail::stable_tail_log_series(law.alpha, law.c, ax, true).log_value);
    const double v = detail::inversion_density(law.alpha, law.c, ax);
    return v > 0.0 ? v : 0.0;
}

// ln F with full relative accuracy in the deep left tail; by symmetry
// log-survival(x) = log_cdf(-x).
inline double log_cdf(const StableLaw& law, double x) {
    const double pi = std::numbers::pi_v<double>;
    if (law.alpha == 2.0) return log_normal_cdf(x / std::sqrt(2.0 * law.c));
    if (law.alpha == 1.0) {
        if (x < 0.0) return std::log(std::atan(law.c / -x) / pi);
        if (x == 0.0) return -std::numbers::ln2_v<double>;
        return std::log1p(-std::atan(law.c / x) / pi);
    }
    const double cross = detail::stable_crossover(law.alpha, law.c, detail::TailKind::cdf);
    if (x <= -cross)
        return detail::stable_tail_log_series(law.alpha, law.c, -x, false).log_value;
    if (x >= cross) {
        const double s =
            std::exp(detail::stable_tail_log_series(law.alpha, law.c, x, false).log_value);
        return std::log1p(-s);
    }
    const double delta = detail::inversion_cdf_delta(law.alpha, law.c, std::abs(x));
    return std::log(x >= 0.0 ? 0.5 + delta : 0.5 - delta);
}

inline double cdf(const StableLaw& law, double x) {
    if (law.alpha == 1.0) {
        const double pi = std::numbers::pi_v<double>;
        if (x < 0.0) return std::atan(law.c / -x) / pi;
        if (x == 0.0) return 0.5;
        return 1.0 - std::atan(law.c / x) / pi;
    }
    if (x <= 0.0) return std::exp(log_cdf(law, x));
    return -std::expm1(log_cdf(law, -x));  // 1 - S(x) without cancellation
}

// ln(-ln F(x)): the quantity every max-of-n computation consumes. Decreasing
// in x; right tail switches to the survival expansion -ln F = S + S^2/2 + ...
// where S = survival(x), so ln_n up to 1e9 stays in working precision.
inline double ln_neg_ln_cdf(const StableLaw& law, double x) {
    if (x <= 0.0) {
        const double lf = log_cdf(law, x);
        return std::log(-lf);
    }
    const double ls = log_cdf(law, -x);  // log survival by symmetry
    if (ls > std::log(1e-8)) {
        const double s = std::exp(ls);
        return std::log(-std::log1p(-s));
    }
    const double s = std::exp(ls);
    return ls + std::log1p(s * (0.5 + s / 3.0));
}

namespace detail {

// solves ln(-ln F(x)) = tau by geometric bracket expansion + Brent; the
// target can be as steep as d/dx ~ x (Gaussian right tail), so the solve runs
// to machine closure rather than a fixed x-space tolerance
inline double solve_ln_neg_ln_cdf(const StableLaw& law, double tau) {
    const double s0 = std::max(1.0, law.sigma());
    auto g = [&](double x) { return ln_neg_ln_cdf(law, x) - tau; };
    auto [lo, hi] = expand_bracket(g, -s0, s0);
    if (lo == hi) return lo;
    return find_root(g, lo, hi, 0.0);
}

}  // namespace detail

inline double quantile(const StableLaw& law, double p) {
    if (!(p > 0.0) || !(p < 1.0)) throw std::domain_error("quantile: p must lie in (0,1)");
    return detail::solve_ln_neg_ln_cdf(law, std::log(-std::log(p)));
}

// Chambers-Mallows-Stuck; exact in distribution, fixed draw count per variate.
inline double sample_one(const StableLaw& law, RandomStream& stream) {
    const double pi = std::numbers::pi_v<double>;
    if (law.alpha == 2.0) return std::sqrt(2.0 * law.c) * stream.gaussian();
    const double u = pi * (stream.uniform01() - 0.5);  // uniform angle in (-pi/2, pi/2)
    if (law.alpha == 1.0) {
        stream.exponential();  // burn to keep the per-variate draw count uniform
        return law.c * std::tan(u);
    }
    const double w = stream.exponential();
    const double a = law.alpha;
    const double x_std = std::sin(a * u) / std::pow(std::cos(u), 1.0 / a) *
                         std::pow(std::cos(u - a * u) / w, (1.0 - a) / a);
    return std::pow(law.c, 1.0 / a) * x_std;
}

inline std::vector<double> sample(const StableLaw& law, RandomStream& stream, std::int64_t count) {
    if (count < 0) throw std::invalid_argument("sample: count must be >= 0");
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(count));
    for (std::int64_t i = 0; i < count; ++i) out.push_back(sample_one(law, stream));
    return out;
}

}  // namespace oumax
