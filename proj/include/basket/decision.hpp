#ifndef BASKET_DECISION_HPP
#define BASKET_DECISION_HPP

#include "basket/stats_core.hpp"

#include <cstddef>
#include <string_view>
#include <vector>

namespace basket {

enum class EffectDirection { greater_is_better, smaller_is_better };

std::string_view to_string(EffectDirection d);
EffectDirection parse_direction(std::string_view s);

/// Posterior-probability thresholds and clinically relevant margin.
struct DecisionSpec {
    double eta;                 ///< efficacy threshold
    std::vector<double> zeta;   ///< futility threshold, one per subtrial (or a single shared value)
    double delta;               ///< margin; sign agrees with direction
    EffectDirection direction;

    double zeta_for(std::size_t k) const { return zeta.size() == 1 ? zeta[0] : zeta.at(k); }

    /// Throws std::invalid_argument. `K` checks the zeta length (1 or K).
    void validate(std::size_t K) const;
};

/// Builds a spec with the direction implied by the sign of delta.
DecisionSpec make_decision_spec(double eta, std::vector<double> zeta, double delta);

enum class Verdict { efficacious, futile, inconclusive };

std::string_view to_string(Verdict v);

struct TrialDecision {
    double efficacy_prob;
    double futility_prob;
    Verdict verdict;
};

/// Evaluates both posterior tail probabilities for subtrial k. When both
/// thresholds are met the verdict is efficacious.
TrialDecision decide(const NormalSummary& posterior, const DecisionSpec& spec, std::size_t k);

}  // namespace basket

#endif  // BASKET_DECISION_HPP
