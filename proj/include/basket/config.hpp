#ifndef BASKET_CONFIG_HPP
#define BASKET_CONFIG_HPP

#include "basket/commensurate.hpp"
#include "basket/decision.hpp"
#include "basket/sim_engine.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace basket {

/// Malformed or inconsistent design file. The message starts with the
/// offending field path, e.g. "subtrials[2].R: must lie in (0, 1)".
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct HellingerSource {
    std::vector<double> arm_means;
    std::vector<double> arm_sds;
};

struct SimulationSection {
    std::vector<double> mu_E;
    std::vector<double> mu_C;
    std::vector<double> sigma2;
    std::optional<std::vector<long>> n;
    std::uint64_t replicates = 100000;
    std::uint64_t seed = 1;
    AllocationRule allocation = AllocationRule::truncate;
};

struct DesignConfig {
    std::string name;
    std::vector<std::string> labels;
    BasketDesign design;
    DecisionSpec decision;
    std::optional<HellingerSource> hellinger;  ///< set when weights were derived
    std::optional<SimulationSection> simulation;

    /// Scenario for the simulation section using the given per-subtrial sizes.
    ScenarioConfig scenario(const std::vector<long>& n) const;
};

DesignConfig parse_config(const nlohmann::json& doc);
DesignConfig load_config(const std::filesystem::path& path);

/// Normalized document with every default written out. Parsing it again
/// yields an identical DesignConfig.
nlohmann::json dump_config(const DesignConfig& cfg);

}  // namespace basket

#endif  // BASKET_CONFIG_HPP
