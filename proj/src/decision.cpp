#include "basket/decision.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace basket {

std::string_view to_string(EffectDirection d) {
    return d == EffectDirection::greater_is_better ? "greater_is_better" : "smaller_is_better";
}

EffectDirection parse_direction(std::string_view s) {
    if (s == "greater_is_better") {
        return EffectDirection::greater_is_better;
    }
    if (s == "smaller_is_better") {
        return EffectDirection::smaller_is_better;
    }
    throw std::invalid_argument("decision.direction: expected greater_is_better or "
                                "smaller_is_better, got '" + std::string(s) + "'");
}

std::string_view to_string(Verdict v) {
    switch (v) {
        case Verdict::efficacious: return "efficacious";
        case Verdict::futile: return "futile";
        case Verdict::inconclusive: return "inconclusive";
    }
    return "unknown";
}

void DecisionSpec::validate(std::size_t K) const {
    if (!(eta > 0.5 && eta < 1.0)) {
        throw std::invalid_argument("decision.eta: must lie in (0.5, 1)");
    }
    if (zeta.empty() || (zeta.size() != 1 && zeta.size() != K)) {
        throw std::invalid_argument("decision.zeta: expected 1 or " + std::to_string(K) +
                                    " values, got " + std::to_string(zeta.size()));
    }
    for (double z : zeta) {
        if (!(z > 0.5 && z < 1.0)) {
            throw std::invalid_argument("decision.zeta: every value must lie in (0.5, 1)");
        }
    }
    if (direction == EffectDirection::greater_is_better && !(delta > 0.0)) {
        throw std::invalid_argument("decision.delta: must be positive when greater_is_better");
    }
    if (direction == EffectDirection::smaller_is_better && !(delta < 0.0)) {
        throw std::invalid_argument("decision.delta: must be negative when smaller_is_better");
    }
}

DecisionSpec make_decision_spec(double eta, std::vector<double> zeta, double delta) {
    const auto dir =
        delta < 0.0 ? EffectDirection::smaller_is_better : EffectDirection::greater_is_better;
    return {eta, std::move(zeta), delta, dir};
}

TrialDecision decide(const NormalSummary& posterior, const DecisionSpec& spec, std::size_t k) {
    const double sd = posterior.sd();
    // Reflect smaller-is-better problems so one rule covers both directions.
    const double sign = spec.direction == EffectDirection::greater_is_better ? 1.0 : -1.0;
    const double mean = sign * posterior.mean;
    const double delta = sign * spec.delta;

    TrialDecision d{};
    d.efficacy_prob = std_normal_cdf(mean / sd);
    d.futility_prob = std_normal_cdf((delta - mean) / sd);
    if (d.efficacy_prob >= spec.eta) {
        d.verdict = Verdict::efficacious;
    } else if (d.futility_prob >= spec.zeta_for(k)) {
        d.verdict = Verdict::futile;
    } else {
        d.verdict = Verdict::inconclusive;
    }
    return d;
}

}  // namespace basket
