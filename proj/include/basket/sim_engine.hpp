#ifndef BASKET_SIM_ENGINE_HPP
#define BASKET_SIM_ENGINE_HPP

#include "basket/commensurate.hpp"
#include "basket/decision.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace basket {

/// How n_k patients are split between arms in a simulated subtrial.
///   truncate         E = floor(n R), C = floor(n (1 - R))
///   round_remainder  E = round(n R), C = n - E
///   random           E ~ Binomial(n, R) conditioned on 1 <= E <= n - 1, C = n - E
/// The analysis model always uses the nominal n_k.
enum class AllocationRule { truncate, round_remainder, random };

std::string_view to_string(AllocationRule a);
AllocationRule parse_allocation(std::string_view s);

enum class AnalysisModel { borrowing, stand_alone };

std::string_view to_string(AnalysisModel m);

struct ScenarioConfig {
    std::string name = "scenario";
    std::vector<double> mu_E;
    std::vector<double> mu_C;
    std::vector<double> sigma2;
    std::vector<long> n;
    std::vector<double> R;
    std::uint64_t replicates = 100000;
    std::uint64_t seed = 1;
    AllocationRule allocation = AllocationRule::truncate;

    std::size_t size() const { return mu_E.size(); }

    /// Throws std::invalid_argument on inconsistent lengths, empty arms, or
    /// non-positive variances.
    void validate() const;
};

/// Independent random stream for one replicate. Streams for distinct
/// (seed, replicate) pairs are decorrelated through splitmix64 so results do
/// not depend on how replicates are scheduled.
class ReplicateStream {
public:
    ReplicateStream(std::uint64_t seed, std::uint64_t replicate);

    double normal(double mean, double sd);
    long binomial(long n, double p);

private:
    std::mt19937_64 engine_;
};

struct ArmSizes {
    long experimental;
    long control;
};

/// Fixed arm sizes for the deterministic rules. Throws for AllocationRule::random.
ArmSizes fixed_arm_sizes(long n, double R, AllocationRule rule);

/// Per-subtrial sample-mean differences xbar_E - xbar_C for one replicate.
std::vector<double> simulate_replicate(const ScenarioConfig& scenario, ReplicateStream& stream);

struct SubtrialRates {
    long n = 0;
    std::uint64_t efficacious = 0;
    std::uint64_t futile = 0;
    std::uint64_t inconclusive = 0;

    std::uint64_t total() const { return efficacious + futile + inconclusive; }
    double rate_efficacious() const;
    double rate_futile() const;
    double rate_inconclusive() const;
    double decisive_rate() const;
};

struct OperatingCharacteristics {
    AnalysisModel model = AnalysisModel::borrowing;
    std::vector<SubtrialRates> per_subtrial;
    /// Replicates with at least one efficacy verdict among null subtrials.
    std::uint64_t any_false_positive = 0;
    /// Absent when no subtrial has a true effect of exactly zero.
    std::optional<double> overall_false_positive;
    std::uint64_t replicates_used = 0;
};

bool operator==(const SubtrialRates& a, const SubtrialRates& b);
bool operator==(const OperatingCharacteristics& a, const OperatingCharacteristics& b);

/// OpenMP kernel. `threads` <= 0 uses the OpenMP default.
OperatingCharacteristics run_study(const ScenarioConfig& scenario, const BasketDesign& design,
                                   const DecisionSpec& spec, AnalysisModel model,
                                   int threads = 0);

/// Serial reference built directly on the per-subtrial posterior functions.
/// Slow; kept for cross-checking run_study.
OperatingCharacteristics run_study_serial(const ScenarioConfig& scenario,
                                          const BasketDesign& design, const DecisionSpec& spec,
                                          AnalysisModel model);

struct SweepRow {
    double sigma2;
    std::size_t subtrial;
    double n_fractional;
    long n;
    double true_positive;
    double false_positive;
};

struct SweepOptions {
    std::uint64_t replicates = 100000;
    std::uint64_t seed = 1;
    int threads = 0;
    AllocationRule allocation = AllocationRule::truncate;
};

/// For each homoscedastic variance, solves borrowing sizes, then simulates
/// every subtrial at theta = delta and at theta = 0. `base` must have all
/// off-diagonal weights equal to zero.
std::vector<SweepRow> tp_fp_sweep(const std::vector<double>& sigma2_grid, const BasketDesign& base,
                                  const DecisionSpec& spec, const SweepOptions& options = {});

}  // namespace basket

#endif  // BASKET_SIM_ENGINE_HPP
