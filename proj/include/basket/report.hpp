#ifndef BASKET_REPORT_HPP
#define BASKET_REPORT_HPP

#include "basket/config.hpp"
#include "basket/sim_engine.hpp"
#include "basket/ssd_solver.hpp"

#include <json.hpp>

#include <string>
#include <string_view>
#include <vector>

namespace basket {

enum class OutputFormat { table, json, csv };

OutputFormat parse_format(std::string_view s);

/// Fixed CSV headers.
inline constexpr std::string_view kSsdCsvHeader =
    "mode,subtrial,label,n_fractional,n_integer,residual,prior_sufficient";
inline constexpr std::string_view kWeightsCsvHeader = "q,k,w,p";
inline constexpr std::string_view kSimulateCsvHeader =
    "scenario,model,subtrial,n,rate_efficacious,rate_futile,rate_inconclusive,overall_fp,seed,"
    "replicates";

nlohmann::json ssd_json(const DesignConfig& cfg, const SampleSizeSolution& sol);
std::string format_ssd(const DesignConfig& cfg, const SampleSizeSolution& sol, OutputFormat fmt);

nlohmann::json weights_json(const DesignConfig& cfg);
std::string format_weights(const DesignConfig& cfg, OutputFormat fmt);

struct SimulationRun {
    ScenarioConfig scenario;
    std::vector<OperatingCharacteristics> results;  ///< one per analysis model
};

nlohmann::json simulate_json(const DesignConfig& cfg, const SimulationRun& run);
std::string format_simulation(const DesignConfig& cfg, const SimulationRun& run, OutputFormat fmt);

/// Design summary: weights, both sizing modes side by side, totals, and
/// optionally the simulated operating characteristics.
std::string format_design_report(const DesignConfig& cfg, const SampleSizeSolution& no_borrowing,
                                 const SampleSizeSolution& borrowing, const SimulationRun* run,
                                 OutputFormat fmt);

}  // namespace basket

#endif  // BASKET_REPORT_HPP
