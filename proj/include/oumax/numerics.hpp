#pragma once

// Shared numerical kernels: adaptive Gauss-Kronrod quadrature, Brent root
// finding, and the special functions every other module leans on.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace oumax {

struct QuadratureSpec {
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    int max_subdivisions = 2000;
    double tail_quantile_eps = 1e-12;  // in (0, 1e-6]

    void validate() const {
        if (!(abs_tol > 0.0) || !(rel_tol > 0.0))
            throw std::invalid_argument("QuadratureSpec: tolerances must be positive");
        if (max_subdivisions < 1)
            throw std::invalid_argument("QuadratureSpec: max_subdivisions must be >= 1");
        if (!(tail_quantile_eps > 0.0) || tail_quantile_eps > 1e-6)
            throw std::invalid_argument("QuadratureSpec: tail_quantile_eps must lie in (0, 1e-6]");
    }
};

struct IntegralResult {
    double value = 0.0;
    double error_bound = 0.0;  // >= 0
    int subdivisions_used = 0;
    bool converged = false;  // non-convergence is reported, never silently dropped
};

namespace detail {

// 15-point Kronrod rule with embedded 7-point Gauss rule (QUADPACK qk15).
inline constexpr double kGk15Nodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
inline constexpr double kGk15KronrodW[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
inline constexpr double kGk15GaussW[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct PanelResult {
    double value;
    double error;
};

// One Kronrod panel on [a,b] with the QUADPACK error heuristic.
template <class F>
PanelResult gk15_panel(F&& f, double a, double b) {
    const double h = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);

    double fv[15];
    fv[7] = f(mid);
    for (int j = 0; j < 7; ++j) {
        const double dx = h * kGk15Nodes[j];
        fv[j] = f(mid - dx);
        fv[14 - j] = f(mid + dx);
    }

    double resk = kGk15KronrodW[7] * fv[7];
    double resabs = std::abs(resk);
    double resg = kGk15GaussW[3] * fv[7];
    for (int j = 0; j < 7; ++j) {
        resk += kGk15KronrodW[j] * (fv[j] + fv[14 - j]);
        resabs += kGk15KronrodW[j] * (std::abs(fv[j]) + std::abs(fv[14 - j]));
    }
    for (int j = 0; j < 3; ++j)
        resg += kGk15GaussW[j] * (fv[2 * j + 1] + fv[13 - 2 * j]);

    const double reskh = 0.5 * resk;
    double resasc = kGk15KronrodW[7] * std::abs(fv[7] - reskh);
    for (int j = 0; j < 7; ++j)
        resasc += kGk15KronrodW[j] * (std::abs(fv[j] - reskh) + std::abs(fv[14 - j] - reskh));

    resabs *= std::abs(h);
    resasc *= std::abs(h);
    double err = std::abs((resk - resg) * h);
    if (resasc != 0.0 && err != 0.0)
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    const double eps = std::numeric_limits<double>::epsilon();
    const double uflow = std::numeric_limits<double>::min();
    if (resabs > uflow / (50.0 * eps)) err = std::max(50.0 * eps * resabs, err);
    return {resk * h, err};
}

}  // namespace detail

// Globally adaptive quadrature over [a,b]; `breakpoints` seed the initial
// subdivision so that localized mass (spikes, kinks, lobes) is never missed by
// the refinement heuristic. Worst-error interval is bisected first.
template <class F>
IntegralResult integrate_adaptive(F&& f, double a, double b, const QuadratureSpec& spec,
                                  const std::vector<double>& breakpoints = {}) {
    spec.validate();
    if (!(a < b)) throw std::invalid_argument("integrate_adaptive: requires a < b");

    struct Seg {
        double a, b, value, error;
    };
    std::vector<double> edges;
    edges.push_back(a);
    for (double p : breakpoints)
        if (p > a && p < b) edges.push_back(p);
    edges.push_back(b);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    std::vector<Seg> segs;
    segs.reserve(edges.size() - 1 + static_cast<std::size_t>(spec.max_subdivisions));
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        auto [v, e] = detail::gk15_panel(f, edges[i], edges[i + 1]);
        segs.push_back({edges[i], edges[i + 1], v, e});
    }

    auto totals = [&segs] {
        double v = 0.0, e = 0.0;
        for (const Seg& s : segs) {
            v += s.value;
            e += s.error;
        }
        return std::pair{v, e};
    };

    int used = 0;
    for (;;) {
        auto [total, err] = totals();
        // NaN would compare false against the tolerance and fake convergence
        if (!std::isfinite(total) || !std::isfinite(err)) return {total, err, used, false};
        if (err <= std::max(spec.abs_tol, spec.rel_tol * std::abs(total)))
            return {total, err, used, true};
        if (used >= spec.max_subdivisions) return {total, err, used, false};
        std::size_t worst = 0;
        for (std::size_t i = 1; i < segs.size(); ++i)
            if (segs[i].error > segs[worst].error) worst = i;
        const Seg s = segs[worst];
        const double mid = 0.5 * (s.a + s.b);
        if (!(s.a < mid && mid < s.b)) return {total, err, used, false};  // interval exhausted
        auto [v1, e1] = detail::gk15_panel(f, s.a, mid);
        auto [v2, e2] = detail::gk15_panel(f, mid, s.b);
        segs[worst] = {s.a, mid, v1, e1};
        segs.push_back({mid, s.b, v2, e2});
        ++used;
    }
}

// ∫_a^∞ f via the quadratic compactification x = a + t/(1-t)^2, t in [0,1).
// The quadratic map keeps the transformed integrand smooth for any tail
// f ~ x^(-q-1) with q >= 1/2, where the linear x = a + t/(1-t) would leave a
// (1-t)^(q-1) endpoint singularity that bisection cannot resolve past sqrt(eps).
template <class F>
IntegralResult integrate_to_infinity(F&& f, double a, const QuadratureSpec& spec,
                                     const std::vector<double>& breakpoints = {}) {
    auto mapped = [&f, a](double t) {
        const double om = 1.0 - t;
        if (om <= 0.0) return 0.0;  // t rounded up to 1: measure-zero boundary sample
        // sequential divisions: om^3 can underflow/overflow as an intermediate
        // while the product itself is still representable
        return f(a + t / om / om) * (1.0 + t) / om / om / om;
    };
    std::vector<double> tb;
    tb.reserve(breakpoints.size());
    for (double x : breakpoints)
        if (x > a && std::isfinite(x)) {
            // inverse of r = t/(1-t)^2, the root of r t^2 - (2r+1) t + r in [0,1)
            const double r = x - a;
            tb.push_back((2.0 * r + 1.0 - std::sqrt(4.0 * r + 1.0)) / (2.0 * r));
        }
    return integrate_adaptive(mapped, 0.0, 1.0, spec, tb);
}

// ∫_{-∞}^{∞} f via x = t/(1-t^2), t in (-1,1).
template <class F>
IntegralResult integrate_real_line(F&& f, const QuadratureSpec& spec,
                                   const std::vector<double>& breakpoints = {}) {
    auto mapped = [&f](double t) {
        const double d = 1.0 - t * t;
        if (d <= 0.0) return 0.0;  // t rounded to +-1: measure-zero boundary sample
        return f(t / d) * (1.0 + t * t) / d / d;
    };
    auto to_t = [](double x) {
        if (x == 0.0) return 0.0;
        return (std::sqrt(1.0 + 4.0 * x * x) - 1.0) / (2.0 * x);
    };
    std::vector<double> tb;
    tb.reserve(breakpoints.size());
    for (double x : breakpoints)
        if (std::isfinite(x)) tb.push_back(to_t(x));
    return integrate_adaptive(mapped, -1.0, 1.0, spec, tb);
}

// Brent's method. Requires a sign change on [lo,hi]; returns a point with
// bracket width <= tol, always inside the initial bracket. tol = 0 runs to
// machine closure (the 2 eps |b| floor below).
template <class F>
double find_root(F&& f, double lo, double hi, double tol) {
    if (!(tol >= 0.0)) throw std::invalid_argument("find_root: tol must be >= 0");
    double a = lo, b = hi, c = hi;
    double fa = f(a), fb = f(b), fc = fb;
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if ((fa > 0.0) == (fb > 0.0))
        throw std::invalid_argument("find_root: no sign change over the bracket");

    double d = b - a, e = d;
    const double eps = std::numeric_limits<double>::epsilon();
    for (int iter = 0; iter < 200; ++iter) {
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a;
            fc = fa;
            e = d = b - a;
        }
        if (std::abs(fc) < std::abs(fb)) {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        const double tol1 = 2.0 * eps * std::abs(b) + 0.5 * tol;
        const double xm = 0.5 * (c - b);
        if (std::abs(xm) <= tol1 || fb == 0.0) return b;
        if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
            double p, q, r;
            const double s = fb / fa;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                q = fa / fc;
                r = fb / fc;
                p = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0));
                q = (q - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            p = std::abs(p);
            const double min1 = 3.0 * xm * q - std::abs(tol1 * q);
            const double min2 = std::abs(e * q);
            if (2.0 * p < std::min(min1, min2)) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += (std::abs(d) > tol1) ? d : (xm > 0.0 ? tol1 : -tol1);
        fb = f(b);
    }
    return b;
}

// Grows [lo,hi] geometrically toward the side where |f| is closer to zero
// until a sign change appears; feeds find_root for quantiles and the exact
// Gaussian normalization.
template <class F>
std::pair<double, double> expand_bracket(F&& f, double lo, double hi) {
    if (!(lo < hi)) throw std::invalid_argument("expand_bracket: requires lo < hi");
    double fl = f(lo), fh = f(hi);
    for (int iter = 0; iter < 400; ++iter) {
        if (fl == 0.0) return {lo, lo};
        if (fh == 0.0) return {hi, hi};
        if ((fl > 0.0) != (fh > 0.0)) return {lo, hi};
        const double w = hi - lo;
        if (std::abs(fh) < std::abs(fl)) {
            hi += w;
            fh = f(hi);
        } else {
            lo -= w;
            fl = f(lo);
        }
        if (!std::isfinite(lo) || !std::isfinite(hi)) break;
    }
    throw std::runtime_error("expand_bracket: no sign change found");
}

namespace detail {

// Laplace continued fraction for the Mills ratio denominator: for x > 0,
// Phi(-x) = phi(x)/v with v = x + 1/(x + 2/(x + 3/(...))). 60 bottom-up
// levels are ample for x >= 8.
inline double mills_denominator(double x) {
    double v = x;
    for (int k = 60; k >= 1; --k) v = x + static_cast<double>(k) / v;
    return v;
}

inline constexpr double kLnSqrt2Pi = 0.91893853320467274178032973640562;

}  // namespace detail

// ln Phi(y) for the standard normal CDF; asymptotic branches keep relative
// accuracy in ln-space deep into both tails (true value is subnormal-zero in
// IEEE doubles once y exceeds ~38.5, where the identity ln Phi ~ -Phi(-y)
// still holds in exact arithmetic).
inline double log_normal_cdf(double y) {
    if (std::isnan(y)) throw std::invalid_argument("log_normal_cdf: y must be finite");
    if (y < -8.0) {
        const double x = -y;
        return -0.5 * x * x - detail::kLnSqrt2Pi - std::log(detail::mills_denominator(x));
    }
    if (y > 8.0) {
        // survival Phi(-y) ~ 1e-16 and below; log1p keeps full precision
        const double q =
            std::exp(-0.5 * y * y - detail::kLnSqrt2Pi - std::log(detail::mills_denominator(y)));
        return std::log1p(-q);
    }
    if (y > 0.0) {
        // ln(1 - Phi(-y)) through the accurate upper tail; direct log of
        // 0.5*erfc(-y/sqrt2) would eat ~6 digits near y = 5
        return std::log1p(-0.5 * std::erfc(y / std::numbers::sqrt2_v<double>));
    }
    return std::log(0.5 * std::erfc(-y / std::numbers::sqrt2_v<double>));
}

inline double gamma_fn(double x) {
    if (!(x > 0.0)) throw std::domain_error("gamma_fn: requires x > 0");
    return std::tgamma(x);
}

}  // namespace oumax
