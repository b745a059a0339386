#ifndef BASKET_SIM_INTERNAL_HPP
#define BASKET_SIM_INTERNAL_HPP

#include "basket/sim_engine.hpp"

namespace basket::detail {

void check_study_inputs(const ScenarioConfig& scenario, const BasketDesign& design,
                        const DecisionSpec& spec);

OperatingCharacteristics finish(const ScenarioConfig& scenario, AnalysisModel model,
                                std::vector<SubtrialRates> rates, std::uint64_t any_fp);

}  // namespace basket::detail

#endif  // BASKET_SIM_INTERNAL_HPP
