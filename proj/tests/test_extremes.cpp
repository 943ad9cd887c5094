#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <vector>

#include <oumax/extremes.hpp>
#include <oumax/numerics.hpp>

using namespace oumax;

namespace {
const QuadratureSpec kSpec{};

LocScale std_normal() { return LocScale{StableLaw(2.0, 0.5), 0.0, 1.0}; }
LocScale std_cauchy() { return LocScale{StableLaw(1.0, 1.0), 0.0, 1.0}; }
}  // namespace

TEST_CASE("log count") {
    REQUIRE_THROWS_AS(LogCount(-0.1), std::invalid_argument);
    REQUIRE(LogCount(0.0).ln_n == 0.0);
    const LogCount ten = LogCount::from_n(10);
    REQUIRE_THAT(ten.ln_n, Catch::Matchers::WithinRel(std::log(10.0), 1e-15));
    REQUIRE(ten.has_exact_integer());
    REQUIRE(ten.exact_integer() == 10);
    REQUIRE(LogCount::from_n(12345).exact_integer() == 12345);
    REQUIRE(LogCount::from_n(1125899906842624LL).exact_integer() == 1125899906842624LL);  // 2^50
    REQUIRE_FALSE(LogCount(10.0).has_exact_integer());   // n = e^10
    REQUIRE_FALSE(LogCount(100.0).has_exact_integer());  // far beyond 2^53
    REQUIRE_THROWS_AS(LogCount(10.0).exact_integer(), std::domain_error);
    REQUIRE_THROWS_AS(LogCount::from_n(0), std::invalid_argument);
}

TEST_CASE("max law closed forms at n = 2") {
    const MaxLaw normal2{std_normal(), LogCount::from_n(2)};
    REQUIRE_THAT(max_density(normal2, 0.0),
                 Catch::Matchers::WithinRel(0.3989422804014327, 1e-12));
    const MaxLaw cauchy2{std_cauchy(), LogCount::from_n(2)};
    REQUIRE_THAT(max_density(cauchy2, 0.0),
                 Catch::Matchers::WithinRel(1.0 / std::numbers::pi, 1e-12));
}

TEST_CASE("n = 1 reduces to the base law") {
    const MaxLaw one{std_normal(), LogCount(0.0)};
    for (double x : {-2.0, -0.3, 0.0, 1.7})
        REQUIRE_THAT(max_density(one, x),
                     Catch::Matchers::WithinRel(density(std_normal(), x), 1e-13));
}

TEST_CASE("max log cdf is a log cdf") {
    const MaxLaw m{std_normal(), LogCount(std::log(50.0))};
    double prev = -std::numeric_limits<double>::infinity();
    for (double x = -3.0; x <= 6.0; x += 0.25) {
        const double cur = max_log_cdf(m, x);
        REQUIRE(cur >= prev);
        REQUIRE(cur <= 0.0);
        prev = cur;
    }
    REQUIRE(std::exp(max_log_cdf(m, 30.0)) > 1.0 - 1e-12);
    REQUIRE(max_log_cdf(m, -8.0) < -1500.0);  // 50 * lnPhi(-8) ~ -1750
}

TEST_CASE("max density stays normalized in log domain") {
    for (double ln_n : {0.0, std::log(10.0), 10.0, 1000.0}) {
        const MaxLaw m{std_normal(), LogCount(ln_n)};
        std::vector<double> cuts;
        for (double p : detail::ladder_levels(1e-12)) cuts.push_back(max_quantile(m, p));
        auto r = integrate_adaptive([&](double x) { return max_density(m, x); }, cuts.front(),
                                    cuts.back(), kSpec,
                                    std::vector<double>(cuts.begin() + 1, cuts.end() - 1));
        REQUIRE(r.converged);
        REQUIRE_THAT(r.value, Catch::Matchers::WithinAbs(1.0, 1e-6));
    }
    // heavy-tailed base as well
    const MaxLaw mc{std_cauchy(), LogCount(10.0)};
    std::vector<double> cuts;
    for (double p : detail::ladder_levels(1e-12)) cuts.push_back(max_quantile(mc, p));
    auto r = integrate_adaptive([&](double x) { return max_density(mc, x); }, cuts.front(),
                                cuts.back(), kSpec,
                                std::vector<double>(cuts.begin() + 1, cuts.end() - 1));
    REQUIRE_THAT(r.value, Catch::Matchers::WithinAbs(1.0, 1e-6));
}

TEST_CASE("max quantile inverts the cdf even for astronomical n") {
    for (double ln_n : {0.0, std::log(10.0), 1000.0, 1e9}) {
        // at ln_n = 1e9 the quantile sits near 44721 where one ulp of x moves
        // ln(-ln F) by x^2 eps ~ 4e-7, so demanding better is not meaningful
        const double tol = ln_n > 1e6 ? 1e-6 : 1e-9;
        const MaxLaw m{std_normal(), LogCount(ln_n)};
        for (double p : {1e-9, 0.01, 0.5, 0.99, 1.0 - 1e-9}) {
            const double q = max_quantile(m, p);
            REQUIRE(std::isfinite(q));
            REQUIRE_THAT(max_log_cdf(m, q), Catch::Matchers::WithinRel(std::log(p), tol));
        }
    }
}

TEST_CASE("degenerate base") {
    const MaxLaw point{LocScale{StableLaw(2.0, 0.5), 1.0, 0.0}, LogCount::from_n(3)};
    REQUIRE_THROWS_AS(max_log_density(point, 1.0), std::domain_error);
    REQUIRE(max_log_cdf(point, 0.5) == -std::numeric_limits<double>::infinity());
    REQUIRE(max_log_cdf(point, 1.5) == 0.0);
}

TEST_CASE("gaussian normalization of lemma form") {
    const Normalization n8 = normalization_gaussian(0.5, LogCount(8.0));
    REQUIRE_THAT(n8.a_n, Catch::Matchers::WithinRel(3.4236917764188592, 1e-14));
    REQUIRE_THAT(n8.b_n, Catch::Matchers::WithinRel(0.25, 1e-14));
    const Normalization n50 = normalization_gaussian(0.5, LogCount(50.0));
    REQUIRE_THAT(n50.a_n, Catch::Matchers::WithinRel(9.6778476373801290, 1e-14));
    REQUIRE_THAT(n50.b_n, Catch::Matchers::WithinRel(0.1, 1e-14));
    // doubling c scales both sequences by sqrt(2)
    const Normalization d8 = normalization_gaussian(1.0, LogCount(8.0));
    REQUIRE_THAT(d8.a_n, Catch::Matchers::WithinRel(n8.a_n * std::sqrt(2.0), 1e-14));
    REQUIRE_THAT(d8.b_n, Catch::Matchers::WithinRel(n8.b_n * std::sqrt(2.0), 1e-14));
    REQUIRE_THROWS_AS(normalization_gaussian(0.5, LogCount(1.0)), std::domain_error);
}

TEST_CASE("exact gaussian normalization") {
    const Normalization e8 = normalization_gaussian_exact(0.5, LogCount(8.0));
    REQUIRE_THAT(e8.a_n, Catch::Matchers::WithinAbs(3.4208675179459960, 1e-10));
    REQUIRE_THAT(e8.b_n, Catch::Matchers::WithinAbs(0.29232350997340980, 1e-10));
    REQUIRE(e8.a_n > 3.0);
    REQUIRE(e8.a_n < 4.0);
    SECTION("solves the defining equation") {
        const double a = e8.a_n;
        REQUIRE_THAT(std::log(2.0 * std::numbers::pi) + 2.0 * std::log(a) + a * a,
                     Catch::Matchers::WithinAbs(16.0, 1e-9));
    }
    SECTION("asymptotically equivalent to the lemma form") {
        for (double ln_n : {8.0, 50.0, 500.0}) {
            const Normalization lem = normalization_gaussian(0.5, LogCount(ln_n));
            const Normalization ex = normalization_gaussian_exact(0.5, LogCount(ln_n));
            REQUIRE(std::abs(ex.a_n - lem.a_n) * std::sqrt(2.0 * ln_n) < 2.0);
        }
    }
    SECTION("c scaling") {
        const Normalization e2 = normalization_gaussian_exact(2.0, LogCount(8.0));
        REQUIRE_THAT(e2.a_n, Catch::Matchers::WithinRel(2.0 * e8.a_n, 1e-10));
    }
}

TEST_CASE("stable normalization") {
    const Normalization n1 = normalization_stable(StableLaw(1.0, 1.0), LogCount::from_n(100));
    REQUIRE(n1.a_n == 0.0);
    REQUIRE_THAT(n1.b_n, Catch::Matchers::WithinRel(31.830988618379067, 1e-13));
    const Normalization npi = normalization_stable(StableLaw(1.0, std::numbers::pi),
                                                   LogCount::from_n(100));
    REQUIRE_THAT(npi.b_n, Catch::Matchers::WithinRel(100.0, 1e-13));
    const Normalization nh = normalization_stable(StableLaw(0.5, 1.0), LogCount::from_n(10));
    REQUIRE_THAT(nh.b_n, Catch::Matchers::WithinRel(15.915494309189532, 1e-13));
    REQUIRE_THROWS_AS(normalization_stable(StableLaw(2.0, 1.0), LogCount::from_n(10)),
                      std::domain_error);
}

TEST_CASE("limit laws") {
    const LimitLaw gum = LimitLaw::gumbel();
    REQUIRE_THAT(limit_density(gum, 0.0), Catch::Matchers::WithinRel(std::exp(-1.0), 1e-14));
    REQUIRE_THAT(limit_cdf(gum, 0.0), Catch::Matchers::WithinRel(std::exp(-1.0), 1e-14));
    const LimitLaw fre = LimitLaw::frechet(1.0);
    REQUIRE_THAT(limit_density(fre, 1.0), Catch::Matchers::WithinRel(std::exp(-1.0), 1e-14));
    REQUIRE_THAT(limit_cdf(fre, 1.0), Catch::Matchers::WithinRel(std::exp(-1.0), 1e-14));
    REQUIRE(limit_density(fre, -1.0) == 0.0);
    REQUIRE(limit_cdf(fre, -1.0) == 0.0);
    REQUIRE_THROWS_AS(LimitLaw::frechet(2.0), std::invalid_argument);

    SECTION("density is the derivative of the cdf") {
        const double h = 1e-5;
        for (double x = -2.0; x <= 4.0; x += 0.5) {
            const double fd = (limit_cdf(gum, x + h) - limit_cdf(gum, x - h)) / (2.0 * h);
            REQUIRE_THAT(limit_density(gum, x), Catch::Matchers::WithinAbs(fd, 1e-6));
        }
        const LimitLaw fre15 = LimitLaw::frechet(1.5);
        for (double x : {0.4, 1.0, 2.5, 6.0}) {
            const double fd = (limit_cdf(fre15, x + h) - limit_cdf(fre15, x - h)) / (2.0 * h);
            REQUIRE_THAT(limit_density(fre15, x), Catch::Matchers::WithinAbs(fd, 1e-6));
        }
    }
    SECTION("quantile inverts") {
        for (double p : {0.01, 0.5, 0.99}) {
            REQUIRE_THAT(limit_cdf(gum, limit_quantile(gum, p)),
                         Catch::Matchers::WithinAbs(p, 1e-12));
            REQUIRE_THAT(limit_cdf(fre, limit_quantile(fre, p)),
                         Catch::Matchers::WithinAbs(p, 1e-12));
        }
    }
}

TEST_CASE("evt gap against oracle values") {
    SECTION("gaussian case") {
        const StableLaw law(2.0, 0.5);
        REQUIRE_THAT(evt_gap(law, LogCount(10.0), kSpec).value,
                     Catch::Matchers::WithinAbs(0.038630064116324, 1e-7));
        REQUIRE_THAT(evt_gap(law, LogCount(100.0), kSpec).value,
                     Catch::Matchers::WithinAbs(0.0083047467162605, 1e-7));
    }
    SECTION("cauchy case") {
        const StableLaw law(1.0, 1.0);
        REQUIRE_THAT(evt_gap(law, LogCount(std::log(100.0)), kSpec).value,
                     Catch::Matchers::WithinAbs(0.0023733042645758, 1e-7));
        REQUIRE_THAT(evt_gap(law, LogCount(std::log(10000.0)), kSpec).value,
                     Catch::Matchers::WithinAbs(2.7032353017718e-05, 1e-8));
    }
    SECTION("nonincreasing along a ladder, both regimes") {
        const StableLaw g(2.0, 0.5);
        double prev = 2.0;
        for (double ln_n : {10.0, 100.0, 1000.0}) {
            const double v = evt_gap(g, LogCount(ln_n), kSpec).value;
            REQUIRE(v < prev);
            prev = v;
        }
        const StableLaw c15(1.5, 1.0);
        prev = 2.0;
        for (double n : {100.0, 1000.0, 10000.0}) {
            const double v = evt_gap(c15, LogCount(std::log(n)), kSpec).value;
            REQUIRE(v <= prev);
            prev = v;
        }
    }
    SECTION("n = 1 is flagged pre-asymptotic") {
        const TvEstimate e = evt_gap(StableLaw(1.0, 1.0), LogCount(0.0), kSpec);
        REQUIRE(e.value >= 0.0);
        REQUIRE(e.value <= 1.0);
        REQUIRE(e.note.find("pre-asymptotic") != std::string::npos);
    }
}
