#pragma once

// Total variation engines. tv_quadrature integrates |f-g| between detected
// density crossings over quantile-truncated supports; the closed forms are
// the oracles every acceptance test leans on. The empirical estimator is a
// histogram smoke test, documented upward-biased, never used for tolerances
// tighter than 0.03.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "numerics.hpp"

namespace oumax {

enum class TvMethod { quadrature, empirical, closed_form };

struct TvEstimate {
    double value = 0.0;  // clamped to [0,1]
    TvMethod method = TvMethod::quadrature;
    double error_bound = 0.0;
    bool converged = true;
    double raw_value = 0.0;  // pre-clamp, for diagnostics
    std::string note;

    // Clamping is legal only when the raw value is within error_bound of [0,1];
    // anything else is a computation bug, not noise.
    static TvEstimate make(double raw, TvMethod method, double error_bound, bool converged,
                           std::string note = {}) {
        const double slack = error_bound + 1e-9;
        if (!(raw >= -slack) || !(raw <= 1.0 + slack))
            throw std::logic_error("TvEstimate: raw value outside [0,1] beyond its error bound");
        TvEstimate e;
        e.value = std::clamp(raw, 0.0, 1.0);
        e.method = method;
        e.error_bound = error_bound;
        e.converged = converged;
        e.raw_value = raw;
        e.note = std::move(note);
        return e;
    }
};

struct Interval {
    double lo;
    double hi;
};

namespace detail {

// Scans f-g for sign changes over each cell, refining each hit by Brent.
// Caps at max_crossings+1 results so callers can detect overflow cheaply.
// The comparison runs against the last strictly nonzero sample, not the
// adjacent one: when the two laws concentrate on disjoint regions, both
// densities underflow to exact zero in between and the flip would otherwise
// hide behind the +,0,...,0,- plateau, collapsing the signed integral.
template <class H>
std::vector<double> find_crossings(H&& h, const std::vector<double>& edges, int max_crossings) {
    constexpr int kSamplesPerCell = 33;
    std::vector<double> crossings;
    if (edges.size() < 2) return crossings;
    double last_x = edges.front();
    double last_h = h(last_x);
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        const double a = edges[i], b = edges[i + 1];
        for (int j = 1; j <= kSamplesPerCell; ++j) {
            const double x = a + (b - a) * j / kSamplesPerCell;
            const double hx = h(x);
            if (hx == 0.0) continue;
            if ((last_h > 0.0 && hx < 0.0) || (last_h < 0.0 && hx > 0.0)) {
                const double tol = 1e-10 * std::max(1.0, std::abs(x)) + 1e-300;
                crossings.push_back(find_root(h, last_x, x, tol));
                if (static_cast<int>(crossings.size()) > max_crossings) return crossings;
            }
            last_x = x;
            last_h = hx;
        }
    }
    return crossings;
}

}  // namespace detail

// f, g: density callables; hint_f/hint_g: their tail_quantile_eps-truncated
// supports; interior: extra breakpoints (quantile ladders) so that mass far
// inside a huge truncated range is still found. Heavy-tailed laws need them:
// their 1-eps quantile can sit ~1e12 scales away from the bulk.
template <class F, class G>
TvEstimate tv_quadrature(F&& f, G&& g, Interval hint_f, Interval hint_g,
                         const QuadratureSpec& spec, const std::vector<double>& interior = {}) {
    spec.validate();
    const double lo = std::min(hint_f.lo, hint_g.lo);
    const double hi = std::max(hint_f.hi, hint_g.hi);
    if (!(lo < hi)) throw std::invalid_argument("tv_quadrature: empty support union");

    std::vector<double> edges{lo, hi, hint_f.lo, hint_f.hi, hint_g.lo, hint_g.hi,
                              0.5 * (hint_f.lo + hint_f.hi), 0.5 * (hint_g.lo + hint_g.hi)};
    for (double x : interior) edges.push_back(x);
    std::erase_if(edges, [&](double x) { return !(x >= lo) || !(x <= hi); });
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    auto h = [&](double x) { return f(x) - g(x); };
    constexpr int kMaxCrossings = 8;
    std::vector<double> crossings = detail::find_crossings(h, edges, kMaxCrossings);

    const double tail_mass = 2.0 * spec.tail_quantile_eps;
    double raw, err;
    bool converged = true;

    if (static_cast<int>(crossings.size()) <= kMaxCrossings) {
        // fixed sign between consecutive crossings: |integral| per region
        std::vector<double> cuts{lo};
        cuts.insert(cuts.end(), crossings.begin(), crossings.end());
        cuts.push_back(hi);
        std::sort(cuts.begin(), cuts.end());
        QuadratureSpec piece = spec;
        piece.abs_tol = spec.abs_tol / static_cast<double>(cuts.size());
        double total_abs = 0.0, total_signed = 0.0;
        err = 0.0;
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
            if (!(cuts[i] < cuts[i + 1])) continue;
            std::vector<double> inner;
            for (double e : edges)
                if (e > cuts[i] && e < cuts[i + 1]) inner.push_back(e);
            const IntegralResult r = integrate_adaptive(h, cuts[i], cuts[i + 1], piece, inner);
            total_abs += std::abs(r.value);
            total_signed += r.value;
            err += r.error_bound;
            converged = converged && r.converged;
        }
        raw = 0.5 * total_abs;
        err = 0.5 * err + tail_mass;
        // opportunistic normalization check: the signed total is the mass
        // difference over [lo,hi], which must vanish up to truncated tails
        const double defect = std::abs(total_signed);
        if (defect > 1e-6 + 2.0 * tail_mass + err) {
            err += defect;
            converged = false;
        }
    } else {
        auto habs = [&](double x) { return std::abs(f(x) - g(x)); };
        const IntegralResult r = integrate_adaptive(habs, lo, hi, spec, edges);
        raw = 0.5 * r.value;
        err = 0.5 * r.error_bound + tail_mass;
        converged = r.converged;
    }
    return TvEstimate::make(raw, TvMethod::quadrature, err, converged);
}

// d_TV(N(theta, sigma^2), N(0, sigma^2)) = 2 Phi(|theta|/(2 sigma)) - 1
inline double tv_gaussian_shift(double theta, double sigma) {
    if (!(sigma > 0.0)) throw std::invalid_argument("tv_gaussian_shift: sigma must be positive");
    return std::erf(std::abs(theta) / (2.0 * sigma * std::numbers::sqrt2_v<double>));
}

// d_TV(theta + xi, xi) for standard Gumbel xi. Densities cross once at
// x* = -ln(theta/(e^theta - 1)); with a = theta/(e^theta-1), b = a + theta the
// distance is e^{-a} - e^{-b}, symmetric in theta; theta -> 0 limit is |theta|/e.
inline double tv_gumbel_shift(double theta) {
    const double t = std::abs(theta);
    if (t < 1e-8) return t / std::numbers::e_v<double>;
    const double a = t / std::expm1(t);
    const double b = a + t;
    return std::exp(-a) - std::exp(-b);
}

// d_TV(Cauchy(theta, gamma), Cauchy(0, gamma)) = (2/pi) arctan(|theta|/(2 gamma))
inline double tv_cauchy_shift(double theta, double gamma) {
    if (!(gamma > 0.0)) throw std::invalid_argument("tv_cauchy_shift: gamma must be positive");
    return 2.0 / std::numbers::pi_v<double> * std::atan(std::abs(theta) / (2.0 * gamma));
}

// Histogram TV over equal-width bins spanning the pooled range; upward-biased,
// smoke-test quality only.
inline TvEstimate tv_empirical(const std::vector<double>& xs, const std::vector<double>& ys, int bins) {
    if (xs.empty() || ys.empty()) throw std::invalid_argument("tv_empirical: empty sample");
    if (bins < 2) throw std::invalid_argument("tv_empirical: bins must be >= 2");
    double lo = xs[0], hi = xs[0];
    for (double v : xs) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    for (double v : ys) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    const std::size_t nb = static_cast<std::size_t>(bins);
    std::vector<double> p(nb, 0.0), q(nb, 0.0);
    const double width = hi - lo;
    auto bin_of = [&](double v) {
        if (width == 0.0) return std::size_t{0};
        const auto i = static_cast<std::size_t>((v - lo) / width * static_cast<double>(nb));
        return std::min(i, nb - 1);
    };
    for (double v : xs) p[bin_of(v)] += 1.0 / static_cast<double>(xs.size());
    for (double v : ys) q[bin_of(v)] += 1.0 / static_cast<double>(ys.size());
    double tv = 0.0;
    for (std::size_t i = 0; i < nb; ++i) tv += std::abs(p[i] - q[i]);
    const double err =
        std::sqrt(static_cast<double>(bins) / static_cast<double>(std::min(xs.size(), ys.size())));
    return TvEstimate::make(0.5 * tv, TvMethod::empirical, err, true);
}

}  // namespace oumax
