#include "basket/sim_engine.hpp"

#include "sim_internal.hpp"

namespace basket {

OperatingCharacteristics run_study_serial(const ScenarioConfig& scenario,
                                          const BasketDesign& design, const DecisionSpec& spec,
                                          AnalysisModel model) {
    detail::check_study_inputs(scenario, design, spec);
    const std::size_t K = design.size();
    const std::vector<double> n(scenario.n.begin(), scenario.n.end());

    std::vector<SubtrialRates> rates(K);
    std::uint64_t any_fp = 0;
    std::vector<double> lambda(K);
    for (std::uint64_t r = 0; r < scenario.replicates; ++r) {
        ReplicateStream stream(scenario.seed, r);
        const std::vector<double> diffs = simulate_replicate(scenario, stream);
        for (std::size_t q = 0; q < K; ++q) {
            lambda[q] = complementary_posterior(design.subtrials[q], n[q], diffs[q]).mean;
        }
        bool fp = false;
        for (std::size_t k = 0; k < K; ++k) {
            const NormalSummary post =
                model == AnalysisModel::borrowing
                    ? full_posterior(design, n, k, diffs[k], lambda)
                    : complementary_posterior(design.subtrials[k], n[k], diffs[k]);
            const Verdict v = decide(post, spec, k).verdict;
            if (v == Verdict::efficacious) {
                ++rates[k].efficacious;
                fp = fp || scenario.mu_E[k] - scenario.mu_C[k] == 0.0;
            } else if (v == Verdict::futile) {
                ++rates[k].futile;
            } else {
                ++rates[k].inconclusive;
            }
        }
        any_fp += fp ? 1 : 0;
    }
    return detail::finish(scenario, model, std::move(rates), any_fp);
}

}  // namespace basket
