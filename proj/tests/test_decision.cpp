#include "basket/decision.hpp"
#include "support/oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <stdexcept>

using namespace basket;

namespace {
const double kZ95 = 1.6448536269514727;
const double kZ80 = 0.8416212335729142;
}  // namespace

TEST_CASE("decide examples") {
    const DecisionSpec spec = make_decision_spec(0.95, {0.80}, 2.3);
    CHECK(spec.direction == EffectDirection::greater_is_better);

    CHECK(decide({0.0, 1.0}, spec, 0).efficacy_prob == doctest::Approx(0.5).epsilon(1e-15));
    for (double sd : {0.01, 0.5, 3.0, 40.0}) {
        CHECK(decide({2.3, sd * sd}, spec, 0).futility_prob == doctest::Approx(0.5).epsilon(1e-15));
    }

    // Design boundary: sd = delta / (z_eta + z_zeta) and mean = z_eta * sd put
    // both probabilities exactly on their thresholds.
    const double sd = 2.3 / (kZ95 + kZ80);
    const TrialDecision b = decide({kZ95 * sd, sd * sd}, spec, 0);
    CHECK(b.efficacy_prob == doctest::Approx(0.95).epsilon(1e-12));
    CHECK(b.futility_prob == doctest::Approx(0.80).epsilon(1e-12));

    // at the design mean d = delta the efficacy probability is far above eta
    const TrialDecision at_delta = decide({2.3, sd * sd}, spec, 0);
    CHECK(at_delta.efficacy_prob == doctest::Approx(oracle::normal_cdf(kZ95 + kZ80)).epsilon(1e-14));
    CHECK(at_delta.verdict == Verdict::efficacious);
}

TEST_CASE("efficacy wins when both thresholds are met") {
    const DecisionSpec spec = make_decision_spec(0.95, {0.80}, 2.3);
    const double sd = 2.3 / (kZ95 + kZ80 + 0.1);
    const TrialDecision d = decide({(kZ95 + 0.05) * sd, sd * sd}, spec, 0);
    CHECK(d.efficacy_prob >= 0.95);
    CHECK(d.futility_prob >= 0.80);
    CHECK(d.verdict == Verdict::efficacious);
}

TEST_CASE("verdicts away from the boundary") {
    const DecisionSpec spec = make_decision_spec(0.95, {0.80}, 2.3);
    CHECK(decide({5.0, 1.0}, spec, 0).verdict == Verdict::efficacious);
    CHECK(decide({-1.0, 1.0}, spec, 0).verdict == Verdict::futile);
    CHECK(decide({1.0, 1.0}, spec, 0).verdict == Verdict::futile);
    CHECK(decide({1.5, 1.0}, spec, 0).verdict == Verdict::inconclusive);
}

TEST_CASE("decisive at or above the required precision") {
    for (double eta : {0.9, 0.95, 0.975}) {
        for (double zeta : {0.6, 0.8, 0.9}) {
            for (double delta : {-0.4, 0.25, 2.3}) {
                const DecisionSpec spec = make_decision_spec(eta, {zeta}, delta);
                const double z_sum =
                    oracle::normal_quantile_bisect(eta) + oracle::normal_quantile_bisect(zeta);
                for (double margin : {1.0 + 1e-9, 1.01, 1.5, 3.0}) {
                    const double sd = std::abs(delta) / (z_sum * margin);
                    int inconclusive = 0;
                    for (int i = -4000; i <= 4000; ++i) {
                        const double mean = delta * (0.5 + i / 1000.0);
                        inconclusive += decide({mean, sd * sd}, spec, 0).verdict == Verdict::inconclusive;
                    }
                    CAPTURE(eta);
                    CAPTURE(zeta);
                    CAPTURE(delta);
                    CAPTURE(margin);
                    CHECK(inconclusive == 0);
                }
            }
        }
    }
}

TEST_CASE("below the required precision an inconclusive band appears") {
    const DecisionSpec spec = make_decision_spec(0.95, {0.80}, 2.3);
    const double sd = 2.3 / ((kZ95 + kZ80) * 0.8);
    CHECK(decide({1.8, sd * sd}, spec, 0).verdict == Verdict::inconclusive);
}

TEST_CASE("direction symmetry") {
    for (double delta : {0.4, 2.3}) {
        const DecisionSpec up = make_decision_spec(0.95, {0.8}, delta);
        const DecisionSpec down = make_decision_spec(0.95, {0.8}, -delta);
        CHECK(down.direction == EffectDirection::smaller_is_better);
        for (double mean = -3.0; mean <= 3.0; mean += 0.01) {
            for (double var : {0.01, 0.3, 2.0}) {
                const TrialDecision a = decide({mean, var}, up, 0);
                const TrialDecision b = decide({-mean, var}, down, 0);
                CHECK(a.verdict == b.verdict);
                CHECK(a.efficacy_prob == b.efficacy_prob);
                CHECK(a.futility_prob == b.futility_prob);
            }
        }
    }
}

TEST_CASE("per-subtrial zeta") {
    const DecisionSpec spec = make_decision_spec(0.95, {0.90, 0.80, 0.80}, 2.3);
    CHECK_NOTHROW(spec.validate(3));
    CHECK_THROWS_AS(spec.validate(4), std::invalid_argument);
    CHECK(spec.zeta_for(0) == 0.90);
    CHECK(spec.zeta_for(2) == 0.80);
    // futility probability 0.85 is futile for zeta 0.80 but not 0.90
    const double mean = 2.3 - 1.0364333894937898;  // z_0.85
    CHECK(decide({mean, 1.0}, spec, 0).verdict == Verdict::inconclusive);
    CHECK(decide({mean, 1.0}, spec, 1).verdict == Verdict::futile);
}

TEST_CASE("spec validation") {
    CHECK_THROWS_AS(make_decision_spec(0.4, {0.8}, 1.0).validate(2), std::invalid_argument);
    CHECK_THROWS_AS(make_decision_spec(0.95, {1.0}, 1.0).validate(2), std::invalid_argument);
    CHECK_THROWS_AS(make_decision_spec(0.95, {0.8}, 0.0).validate(2), std::invalid_argument);
    DecisionSpec s = make_decision_spec(0.95, {0.8}, 1.0);
    s.direction = EffectDirection::smaller_is_better;
    CHECK_THROWS_AS(s.validate(2), std::invalid_argument);
    CHECK(parse_direction("smaller_is_better") == EffectDirection::smaller_is_better);
    CHECK_THROWS_AS(parse_direction("up"), std::invalid_argument);
}
