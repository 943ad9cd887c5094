#pragma once

// Exact marginal, stationary, and transition laws of dX = -lambda X dt + dL
// with L symmetric alpha-stable: X_t =(d) e^{-lambda t} x0 + s_t L_1 where
// s_t = ((1 - e^{-lambda alpha t})/(lambda alpha))^{1/alpha}. Path sampling
// chains exact transitions, so there is no discretization bias.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "random.hpp"
#include "stable.hpp"

namespace oumax {

struct OUParams {
    double lambda;
    double x0;
    StableLaw noise;

    OUParams(double lambda_, double x0_, StableLaw noise_)
        : lambda(lambda_), x0(x0_), noise(noise_) {
        if (!(lambda > 0.0)) throw std::invalid_argument("OUParams: lambda must be positive");
    }
};

// location + scale * base; scale = 0 is the point mass at location (t = 0).
struct LocScale {
    StableLaw base;
    double location;
    double scale;

    LocScale(StableLaw base_, double location_, double scale_)
        : base(base_), location(location_), scale(scale_) {
        if (!(scale >= 0.0)) throw std::invalid_argument("LocScale: scale must be >= 0");
    }
};

inline double density(const LocScale& ls, double x) {
    if (ls.scale == 0.0) throw std::domain_error("LocScale: point mass has no density");
    return density(ls.base, (x - ls.location) / ls.scale) / ls.scale;
}

inline double log_density(const LocScale& ls, double x) {
    if (ls.scale == 0.0) throw std::domain_error("LocScale: point mass has no density");
    return log_density(ls.base, (x - ls.location) / ls.scale) - std::log(ls.scale);
}

inline double cdf(const LocScale& ls, double x) {
    if (ls.scale == 0.0) return x < ls.location ? 0.0 : 1.0;
    return cdf(ls.base, (x - ls.location) / ls.scale);
}

inline double quantile(const LocScale& ls, double p) {
    if (ls.scale == 0.0) return ls.location;
    return ls.location + ls.scale * quantile(ls.base, p);
}

namespace detail {

// ((1 - e^{-lambda alpha t})/(lambda alpha))^{1/alpha}, cancellation-free for
// small lambda*alpha*t
inline double marginal_scale(double lambda, double alpha, double t) {
    const double la = lambda * alpha;
    const double num = -std::expm1(-la * t);
    if (num == 0.0) return 0.0;
    return std::pow(num / la, 1.0 / alpha);
}

}  // namespace detail

inline LocScale marginal_law(const OUParams& p, double t) {
    if (!(t >= 0.0)) throw std::invalid_argument("marginal_law: t must be >= 0");
    return LocScale(p.noise, std::exp(-p.lambda * t) * p.x0,
                    detail::marginal_scale(p.lambda, p.noise.alpha, t));
}

inline LocScale stationary_law(const OUParams& p) {
    return LocScale(p.noise, 0.0, std::pow(1.0 / (p.lambda * p.noise.alpha), 1.0 / p.noise.alpha));
}

inline double transition_sample(const OUParams& p, double x_now, double dt, RandomStream& stream) {
    if (!(dt > 0.0)) throw std::invalid_argument("transition_sample: dt must be positive");
    const double s_dt = detail::marginal_scale(p.lambda, p.noise.alpha, dt);
    return std::exp(-p.lambda * dt) * x_now + s_dt * sample_one(p.noise, stream);
}

inline std::vector<double> sample_path(const OUParams& p, const std::vector<double>& grid,
                                       RandomStream& stream) {
    std::vector<double> out;
    out.reserve(grid.size());
    double prev_t = 0.0;
    double x = p.x0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double t = grid[i];
        if (i == 0) {
            if (!(t >= 0.0)) throw std::invalid_argument("sample_path: grid must start at t >= 0");
        } else if (!(t > prev_t)) {
            throw std::invalid_argument("sample_path: grid must be strictly increasing");
        }
        if (t > prev_t) x = transition_sample(p, x, t - prev_t, stream);
        out.push_back(x);
        prev_t = t;
    }
    return out;
}

}  // namespace oumax
