#include "basket/commensurate.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

using namespace basket;

TEST_CASE("WeightMatrix validation") {
    CHECK_NOTHROW(WeightMatrix(2, {0.0, 0.3, 0.3, 0.0}));
    CHECK_THROWS_AS(WeightMatrix(2, {0.0, 0.3, 0.31, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(WeightMatrix(2, {0.1, 0.3, 0.3, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(WeightMatrix(2, {0.0, 1.3, 1.3, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(WeightMatrix(2, {0.0, 0.3, 0.3}), std::invalid_argument);
}

TEST_CASE("WeightMatrix permutation relabels rows and columns together") {
    const WeightMatrix w = fixtures::oacs_design().weights;
    const std::vector<std::size_t> perm{2, 0, 1};
    const WeightMatrix pw = w.permuted(perm);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) CHECK(pw(i, j) == w(perm[i], perm[j]));
}

TEST_CASE("Hellinger-derived matrix is symmetric with entries in (0, 1)") {
    const WeightMatrix w = fixtures::summit_design().weights;
    REQUIRE(w.size() == 7);
    int above = 0;
    for (std::size_t q = 0; q < 7; ++q) {
        CHECK(w(q, q) == 0.0);
        for (std::size_t k = 0; k < 7; ++k) {
            CHECK(w(q, k) == w(k, q));
            if (q != k) {
                CHECK(w(q, k) > 0.0);
                CHECK(w(q, k) < 1.0);
                above += w(q, k) > 0.30;
            }
        }
    }
    CHECK(above > 21);  // most of the 42 off-diagonal entries
}

TEST_CASE("BasketDesign validation") {
    BasketDesign d = fixtures::oacs_design();
    CHECK_NOTHROW(d.validate());

    BasketDesign one = d;
    one.subtrials.resize(1);
    one.weights = WeightMatrix(1, {0.0});
    CHECK_THROWS_WITH_AS(one.validate(), "subtrials: at least 2 required", std::invalid_argument);

    BasketDesign swapped = d;
    swapped.hyper = {54.0, 3.0, 1.1, 1.1};
    CHECK_THROWS_AS(swapped.validate(), std::invalid_argument);

    BasketDesign bad_r = d;
    bad_r.subtrials[1].R = 1.0;
    CHECK_THROWS_WITH_AS(bad_r.validate(), "subtrials[1]: R must lie in (0, 1)",
                         std::invalid_argument);

    BasketDesign bad_c0 = d;
    bad_c0.c0 = 0.0;
    CHECK_THROWS_AS(bad_c0.validate(), std::invalid_argument);
}

TEST_CASE("synthesis_weights examples") {
    SUBCASE("equal w gives equal weights") {
        for (double w : {0.0, 0.2, 0.9}) {
            for (double c0 : {0.01, 0.05, 3.0}) {
                const std::vector<double> p = synthesis_weights(WeightMatrix::uniform(5, w), c0, 2);
                REQUIRE(p.size() == 4);
                for (double v : p) CHECK(v == doctest::Approx(0.25).epsilon(1e-15));
            }
        }
    }
    SUBCASE("first OACS column") {
        const std::vector<double> p = synthesis_weights(fixtures::oacs_design().weights, 0.05, 0);
        REQUIRE(p.size() == 2);
        CHECK(std::abs(p[0] - 0.9117635059000829) < 1e-13);
        CHECK(std::abs(p[1] - 0.0882364940999171) < 1e-13);
    }
    SUBCASE("large c0 flattens the weights") {
        const std::vector<double> p = synthesis_weights(fixtures::oacs_design().weights, 1e6, 1);
        for (double v : p) CHECK(std::abs(v - 0.5) < 1e-4);
    }
    SUBCASE("tiny c0 does not underflow") {
        const std::vector<double> p = synthesis_weights(fixtures::oacs_design().weights, 1e-6, 0);
        CHECK(p[0] == doctest::Approx(1.0));
        CHECK(std::isfinite(p[1]));
    }
}

TEST_CASE("synthesis_weights decrease in their own w") {
    std::vector<double> e{0.0, 0.1, 0.4, 0.6, 0.1, 0.0, 0.2, 0.3, 0.4, 0.2, 0.0, 0.5,
                          0.6, 0.3, 0.5, 0.0};
    double prev = synthesis_weights(WeightMatrix(4, e), 0.05, 0)[0];
    for (double w = 0.12; w <= 1.0; w += 0.02) {
        e[1] = e[4] = w;  // w_{1,0}
        const double p = synthesis_weights(WeightMatrix(4, e), 0.05, 0)[0];
        CHECK(p < prev);
        prev = p;
    }
}

TEST_CASE("commensurate_prior_variance examples") {
    const BasketDesign d = fixtures::homoscedastic_design(3, 1.0, 0.0);
    CHECK(commensurate_prior_variance(d, 0.0, 1, 0) ==
          doctest::Approx(100.05660377358491).epsilon(1e-14));
    CHECK(commensurate_prior_variance(d, 1e15, 1, 0) ==
          doctest::Approx(3.0 / 53.0).epsilon(1e-9));

    // 1 / (1/100 + 25 * 0.24 / 5.134) + 0.145 * 11 + 0.855 * 3/53
    const BasketDesign oacs = fixtures::oacs_design();
    CHECK(commensurate_prior_variance(oacs, 25.0, 1, 2) ==
          doctest::Approx(2.491803356075632).epsilon(1e-13));
    CHECK_THROWS_AS(commensurate_prior_variance(oacs, 25.0, 1, 1), std::out_of_range);
}

TEST_CASE("commensurate_prior_variance is monotone in n_q and w") {
    BasketDesign d = fixtures::oacs_design();
    double prev = commensurate_prior_variance(d, 0.0, 0, 1);
    for (double n = 0.5; n < 500.0; n *= 1.5) {
        const double v = commensurate_prior_variance(d, n, 0, 1);
        CHECK(v < prev);
        prev = v;
    }
    prev = commensurate_prior_variance(fixtures::homoscedastic_design(3, 1.0, 0.0), 10.0, 0, 1);
    for (double w = 0.05; w <= 1.0; w += 0.05) {
        const double v =
            commensurate_prior_variance(fixtures::homoscedastic_design(3, 1.0, w), 10.0, 0, 1);
        CHECK(v > prev);
        prev = v;
    }
}

TEST_CASE("collective_prior examples") {
    SUBCASE("one complementary subtrial") {
        BasketDesign d = fixtures::homoscedastic_design(2, 0.8, 0.3);
        const std::vector<double> n{12.0, 7.0};
        const std::vector<double> lam{0.4, -1.2};
        const NormalSummary p = collective_prior(d, n, lam, 0);
        CHECK(p.mean == doctest::Approx(-1.2).epsilon(1e-15));
        CHECK(p.variance == doctest::Approx(commensurate_prior_variance(d, 7.0, 1, 0)).epsilon(1e-15));
    }
    SUBCASE("zero lambdas") {
        const BasketDesign d = fixtures::oacs_design();
        const std::vector<double> n{10, 20, 30};
        const std::vector<double> lam{5.0, 0.0, 0.0};
        CHECK(collective_prior(d, n, lam, 0).mean == 0.0);
    }
    SUBCASE("equal weights average the lambdas") {
        const BasketDesign d = fixtures::homoscedastic_design(3, 0.5, 0.4);
        const std::vector<double> n{0.0, 4.0, 9.0};
        const std::vector<double> lam{0.0, 1.0, 3.0};
        const NormalSummary p = collective_prior(d, n, lam, 0);
        CHECK(p.mean == doctest::Approx(2.0).epsilon(1e-15));
        const double x1 = commensurate_prior_variance(d, 4.0, 1, 0);
        const double x2 = commensurate_prior_variance(d, 9.0, 2, 0);
        CHECK(p.variance == doctest::Approx((x1 + x2) / 4.0).epsilon(1e-15));
    }
}

TEST_CASE("complementary_posterior examples") {
    const SubtrialDesign sub{4.0, 0.5, 0.0, 100.0};
    const NormalSummary none = complementary_posterior(sub, 0.0, 3.0);
    CHECK(none.mean == 0.0);
    CHECK(none.variance == 100.0);

    const NormalSummary p = complementary_posterior(sub, 16.0, 1.0);
    CHECK(p.mean == doctest::Approx(1.0 / 1.01).epsilon(1e-14));
    CHECK(p.variance == doctest::Approx(1.0 / 1.01).epsilon(1e-14));

    const SubtrialDesign flat{4.0, 0.5, 2.0, 1e14};
    CHECK(complementary_posterior(flat, 16.0, 1.0).mean == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("complementary_posterior agrees with a conjugate Monte Carlo oracle") {
    // theta ~ N(m0, s02); xbar | theta ~ N(theta, sigma2 / (n R (1 - R))).
    // Self-normalized importance sampling of the posterior at the observed xbar.
    const SubtrialDesign sub{4.0, 0.5, 0.3, 2.0};
    const double n = 16.0;
    const double xbar = 1.0;
    const double dv = 1.0 / sub.data_precision(n);
    std::mt19937_64 rng(99);
    std::normal_distribution<double> prior(sub.m0, std::sqrt(sub.s02));
    double sw = 0, sw2 = 0, s1 = 0, s2 = 0;
    std::vector<std::pair<double, double>> draws(400000);
    for (auto& [t, w] : draws) {
        t = prior(rng);
        w = std::exp(-0.5 * (xbar - t) * (xbar - t) / dv);
        sw += w;
        sw2 += w * w;
        s1 += w * t;
    }
    const double mean = s1 / sw;
    for (auto& [t, w] : draws) s2 += w * (t - mean) * (t - mean);
    const double var = s2 / sw;
    const double ess = sw * sw / sw2;
    const NormalSummary p = complementary_posterior(sub, n, xbar);
    CHECK(std::abs(p.mean - mean) < 3.0 * std::sqrt(var / ess));
    CHECK(std::abs(p.variance - var) < 3.0 * var * std::sqrt(2.0 / ess));
}

TEST_CASE("full_posterior limits and additivity") {
    SUBCASE("uninformative collective prior") {
        BasketDesign d = fixtures::homoscedastic_design(3, 0.3, 0.0);
        for (auto& s : d.subtrials) s.s02 = 1e14;
        const std::vector<double> n{9.0, 0.0, 0.0};
        const std::vector<double> lam{0.0, 5.0, 5.0};
        const NormalSummary p = full_posterior(d, n, 0, -0.4, lam);
        CHECK(p.mean == doctest::Approx(-0.4).epsilon(1e-10));
        CHECK(p.variance == doctest::Approx(0.3 / (9.0 * 0.25)).epsilon(1e-10));
    }
    SUBCASE("data equal to the prior mean") {
        const BasketDesign d = fixtures::oacs_design();
        const std::vector<double> n{30.0, 12.0, 18.0};
        const std::vector<double> lam{0.0, 1.7, 1.7};
        CHECK(full_posterior(d, n, 0, 1.7, lam).mean == doctest::Approx(1.7).epsilon(1e-14));
    }
    SUBCASE("n_k must be positive") {
        const BasketDesign d = fixtures::oacs_design();
        const std::vector<double> n{0.0, 12.0, 18.0};
        const std::vector<double> lam{0.0, 1.0, 2.0};
        CHECK_THROWS_AS(full_posterior(d, n, 0, 1.0, lam), std::domain_error);
    }
}

TEST_CASE("full_posterior is a precision-weighted convex combination") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    std::uniform_real_distribution<double> size(0.5, 60.0);
    const BasketDesign designs[] = {fixtures::oacs_design(), fixtures::summit_design(),
                                    fixtures::homoscedastic_design(4, 0.7, 0.2)};
    for (const BasketDesign& d : designs) {
        const std::size_t K = d.size();
        for (int rep = 0; rep < 200; ++rep) {
            std::vector<double> n(K), lam(K);
            for (std::size_t q = 0; q < K; ++q) {
                n[q] = size(rng);
                lam[q] = u(rng);
            }
            const std::size_t k = static_cast<std::size_t>(rep) % K;
            const double xbar = u(rng);
            const NormalSummary prior = collective_prior(d, n, lam, k);
            const NormalSummary post = full_posterior(d, n, k, xbar, lam);
            const double data_prec = d.subtrials[k].data_precision(n[k]);
            CHECK(1.0 / post.variance ==
                  doctest::Approx(1.0 / prior.variance + data_prec).epsilon(1e-13));
            const double lo = std::min(prior.mean, xbar);
            const double hi = std::max(prior.mean, xbar);
            CHECK(post.mean >= lo - 1e-12);
            CHECK(post.mean <= hi + 1e-12);
        }
    }
}

TEST_CASE("full_posterior agrees with a two-stage Monte Carlo oracle") {
    struct Fixture {
        BasketDesign design;
        std::vector<double> n;
        std::vector<double> lambdas;
        std::size_t k;
        double xbar;
    };
    const Fixture fixtures_[] = {
        {fixtures::oacs_design(), {20.0, 10.0, 15.0}, {0.0, 2.1, 1.4}, 0, 2.6},
        {fixtures::homoscedastic_design(3, 0.3, 0.0), {9.0, 9.0, 9.0}, {0.0, -0.3, -0.5}, 0, -0.1},
        {fixtures::homoscedastic_design(2, 1.5, 0.8), {4.0, 30.0}, {0.7, 0.0}, 1, 2.0},
    };
    std::mt19937_64 rng(2024);
    for (const Fixture& f : fixtures_) {
        const NormalSummary prior = collective_prior(f.design, f.n, f.lambdas, f.k);
        const double dv = 1.0 / f.design.subtrials[f.k].data_precision(f.n[f.k]);
        std::normal_distribution<double> theta(prior.mean, std::sqrt(prior.variance));
        double sw = 0, sw2 = 0, s1 = 0;
        std::vector<std::pair<double, double>> draws(400000);
        for (auto& [t, w] : draws) {
            t = theta(rng);
            w = std::exp(-0.5 * (f.xbar - t) * (f.xbar - t) / dv);
            sw += w;
            sw2 += w * w;
            s1 += w * t;
        }
        const double mean = s1 / sw;
        double s2 = 0;
        for (auto& [t, w] : draws) s2 += w * (t - mean) * (t - mean);
        const double var = s2 / sw;
        const double ess = sw * sw / sw2;
        const NormalSummary post = full_posterior(f.design, f.n, f.k, f.xbar, f.lambdas);
        CHECK(std::abs(post.mean - mean) < 3.0 * std::sqrt(var / ess));
        CHECK(std::abs(post.variance - var) < 3.0 * var * std::sqrt(2.0 / ess));
    }
}
