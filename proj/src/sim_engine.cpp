#include "basket/sim_engine.hpp"

#include "basket/ssd_solver.hpp"
#include "sim_internal.hpp"

#include <omp.h>

#include <cmath>
#include <stdexcept>

namespace basket {

std::string_view to_string(AllocationRule a) {
    switch (a) {
        case AllocationRule::truncate: return "truncate";
        case AllocationRule::round_remainder: return "round_remainder";
        case AllocationRule::random: return "random";
    }
    return "unknown";
}

AllocationRule parse_allocation(std::string_view s) {
    if (s == "truncate") return AllocationRule::truncate;
    if (s == "round_remainder") return AllocationRule::round_remainder;
    if (s == "random") return AllocationRule::random;
    throw std::invalid_argument("simulation.allocation: expected truncate, round_remainder or "
                                "random, got '" + std::string(s) + "'");
}

std::string_view to_string(AnalysisModel m) {
    return m == AnalysisModel::borrowing ? "borrowing" : "standalone";
}

void ScenarioConfig::validate() const {
    const std::size_t K = mu_E.size();
    if (K == 0) {
        throw std::invalid_argument("simulation.mu_E: at least one subtrial required");
    }
    if (mu_C.size() != K || sigma2.size() != K || n.size() != K || R.size() != K) {
        throw std::invalid_argument("simulation: mu_E, mu_C, sigma2, n and R must all have " +
                                    std::to_string(K) + " entries");
    }
    if (replicates < 1) {
        throw std::invalid_argument("simulation.replicates: must be at least 1");
    }
    for (std::size_t k = 0; k < K; ++k) {
        if (!(sigma2[k] > 0.0)) {
            throw std::invalid_argument("simulation.sigma2[" + std::to_string(k) + "]: must be positive");
        }
        if (!(R[k] > 0.0 && R[k] < 1.0)) {
            throw std::invalid_argument("simulation.R[" + std::to_string(k) + "]: must lie in (0, 1)");
        }
        if (allocation == AllocationRule::random) {
            if (n[k] < 2) {
                throw std::invalid_argument("simulation.n[" + std::to_string(k) +
                                            "]: random allocation needs at least 2 patients");
            }
        } else {
            const ArmSizes arms = fixed_arm_sizes(n[k], R[k], allocation);
            if (arms.experimental < 1 || arms.control < 1) {
                throw std::invalid_argument("simulation.n[" + std::to_string(k) +
                                            "]: an arm would have no patients");
            }
        }
    }
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

}  // namespace

ReplicateStream::ReplicateStream(std::uint64_t seed, std::uint64_t replicate)
    : engine_(splitmix64(splitmix64(seed) ^ splitmix64(replicate + 0x632BE59BD9B4E019ULL))) {}

double ReplicateStream::normal(double mean, double sd) {
    std::normal_distribution<double> dist(mean, sd);
    return dist(engine_);
}

long ReplicateStream::binomial(long n, double p) {
    std::binomial_distribution<long> dist(n, p);
    return dist(engine_);
}

ArmSizes fixed_arm_sizes(long n, double R, AllocationRule rule) {
    const double expected = static_cast<double>(n) * R;
    switch (rule) {
        case AllocationRule::truncate:
            return {static_cast<long>(std::floor(expected)),
                    static_cast<long>(std::floor(static_cast<double>(n) * (1.0 - R)))};
        case AllocationRule::round_remainder: {
            const long e = std::lround(expected);
            return {e, n - e};
        }
        case AllocationRule::random:
            break;
    }
    throw std::invalid_argument("fixed_arm_sizes: random allocation has no fixed arm sizes");
}

std::vector<double> simulate_replicate(const ScenarioConfig& scenario, ReplicateStream& stream) {
    const std::size_t K = scenario.size();
    std::vector<double> diffs(K);
    for (std::size_t k = 0; k < K; ++k) {
        ArmSizes arms{};
        if (scenario.allocation == AllocationRule::random) {
            long e = 0;
            do {
                e = stream.binomial(scenario.n[k], scenario.R[k]);
            } while (e < 1 || e > scenario.n[k] - 1);
            arms = {e, scenario.n[k] - e};
        } else {
            arms = fixed_arm_sizes(scenario.n[k], scenario.R[k], scenario.allocation);
        }
        if (arms.experimental < 1 || arms.control < 1) {
            throw std::invalid_argument("simulate_replicate: empty arm in subtrial " +
                                        std::to_string(k));
        }
        const double sd = std::sqrt(scenario.sigma2[k]);
        double sum_e = 0.0;
        for (long i = 0; i < arms.experimental; ++i) {
            sum_e += stream.normal(scenario.mu_E[k], sd);
        }
        double sum_c = 0.0;
        for (long i = 0; i < arms.control; ++i) {
            sum_c += stream.normal(scenario.mu_C[k], sd);
        }
        diffs[k] = sum_e / static_cast<double>(arms.experimental) -
                   sum_c / static_cast<double>(arms.control);
    }
    return diffs;
}

double SubtrialRates::rate_efficacious() const {
    return static_cast<double>(efficacious) / static_cast<double>(total());
}
double SubtrialRates::rate_futile() const {
    return static_cast<double>(futile) / static_cast<double>(total());
}
double SubtrialRates::rate_inconclusive() const {
    return static_cast<double>(inconclusive) / static_cast<double>(total());
}
double SubtrialRates::decisive_rate() const {
    return static_cast<double>(efficacious + futile) / static_cast<double>(total());
}

bool operator==(const SubtrialRates& a, const SubtrialRates& b) {
    return a.n == b.n && a.efficacious == b.efficacious && a.futile == b.futile &&
           a.inconclusive == b.inconclusive;
}

bool operator==(const OperatingCharacteristics& a, const OperatingCharacteristics& b) {
    return a.model == b.model && a.per_subtrial == b.per_subtrial &&
           a.any_false_positive == b.any_false_positive &&
           a.overall_false_positive == b.overall_false_positive &&
           a.replicates_used == b.replicates_used;
}

namespace detail {

void check_study_inputs(const ScenarioConfig& scenario, const BasketDesign& design,
                        const DecisionSpec& spec) {
    scenario.validate();
    design.validate();
    spec.validate(design.size());
    if (scenario.size() != design.size()) {
        throw std::invalid_argument("simulation: scenario has " + std::to_string(scenario.size()) +
                                    " subtrials but the design has " +
                                    std::to_string(design.size()));
    }
}

OperatingCharacteristics finish(const ScenarioConfig& scenario, AnalysisModel model,
                                std::vector<SubtrialRates> rates, std::uint64_t any_fp) {
    OperatingCharacteristics oc;
    oc.model = model;
    oc.per_subtrial = std::move(rates);
    oc.any_false_positive = any_fp;
    oc.replicates_used = scenario.replicates;
    for (std::size_t k = 0; k < scenario.size(); ++k) {
        oc.per_subtrial[k].n = scenario.n[k];
        if (scenario.mu_E[k] - scenario.mu_C[k] == 0.0) {
            oc.overall_false_positive =
                static_cast<double>(any_fp) / static_cast<double>(scenario.replicates);
        }
    }
    return oc;
}

}  // namespace detail

namespace {

// Quantities of the analysis model that are fixed once n is fixed.
struct AnalysisPlan {
    std::size_t K;
    AnalysisModel model;
    std::vector<double> data_variance;    // sigma_k^2 / (n_k R_k (1 - R_k))
    std::vector<double> p;                // K x K, p_qk at (q, k)
    std::vector<double> collective_var;   // sum_q p_qk^2 xi_qk^2
    std::vector<char> is_null;

    AnalysisPlan(const ScenarioConfig& scenario, const BasketDesign& design, AnalysisModel m)
        : K(design.size()), model(m), data_variance(K), p(K * K, 0.0), collective_var(K, 0.0),
          is_null(K) {
        std::vector<double> n(scenario.n.begin(), scenario.n.end());
        for (std::size_t k = 0; k < K; ++k) {
            data_variance[k] = 1.0 / design.subtrials[k].data_precision(n[k]);
            is_null[k] = scenario.mu_E[k] - scenario.mu_C[k] == 0.0;
            const std::vector<double> pk = synthesis_weights(design.weights, design.c0, k);
            std::size_t j = 0;
            for (std::size_t q = 0; q < K; ++q) {
                if (q == k) {
                    continue;
                }
                p[q * K + k] = pk[j];
                collective_var[k] +=
                    pk[j] * pk[j] * commensurate_prior_variance(design, n[q], q, k);
                ++j;
            }
        }
    }
};

}  // namespace

OperatingCharacteristics run_study(const ScenarioConfig& scenario, const BasketDesign& design,
                                   const DecisionSpec& spec, AnalysisModel model, int threads) {
    detail::check_study_inputs(scenario, design, spec);
    const AnalysisPlan plan(scenario, design, model);
    const std::size_t K = plan.K;
    const auto reps = static_cast<std::int64_t>(scenario.replicates);

    std::vector<SubtrialRates> rates(K);
    std::uint64_t any_fp = 0;

    const int team = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel num_threads(team)
    {
        std::vector<SubtrialRates> local(K);
        std::uint64_t local_fp = 0;
        std::vector<double> lambda(K);

#pragma omp for schedule(static)
        for (std::int64_t r = 0; r < reps; ++r) {
            ReplicateStream stream(scenario.seed, static_cast<std::uint64_t>(r));
            const std::vector<double> diffs = simulate_replicate(scenario, stream);
            for (std::size_t q = 0; q < K; ++q) {
                lambda[q] = complementary_posterior(design.subtrials[q],
                                                    static_cast<double>(scenario.n[q]), diffs[q])
                                .mean;
            }
            bool fp = false;
            for (std::size_t k = 0; k < K; ++k) {
                NormalSummary post{};
                if (plan.model == AnalysisModel::borrowing) {
                    double prior_mean = 0.0;
                    for (std::size_t q = 0; q < K; ++q) {
                        prior_mean += plan.p[q * K + k] * lambda[q];
                    }
                    post = update_with_data({prior_mean, plan.collective_var[k]},
                                            plan.data_variance[k], diffs[k]);
                } else {
                    post = complementary_posterior(design.subtrials[k],
                                                   static_cast<double>(scenario.n[k]), diffs[k]);
                }
                const Verdict v = decide(post, spec, k).verdict;
                switch (v) {
                    case Verdict::efficacious: ++local[k].efficacious; break;
                    case Verdict::futile: ++local[k].futile; break;
                    case Verdict::inconclusive: ++local[k].inconclusive; break;
                }
                fp = fp || (plan.is_null[k] && v == Verdict::efficacious);
            }
            local_fp += fp ? 1 : 0;
        }

#pragma omp critical
        {
            for (std::size_t k = 0; k < K; ++k) {
                rates[k].efficacious += local[k].efficacious;
                rates[k].futile += local[k].futile;
                rates[k].inconclusive += local[k].inconclusive;
            }
            any_fp += local_fp;
        }
    }
    return detail::finish(scenario, model, std::move(rates), any_fp);
}

std::vector<SweepRow> tp_fp_sweep(const std::vector<double>& sigma2_grid, const BasketDesign& base,
                                  const DecisionSpec& spec, const SweepOptions& options) {
    base.validate();
    const std::size_t K = base.size();
    for (std::size_t q = 0; q < K; ++q) {
        for (std::size_t k = 0; k < K; ++k) {
            if (base.weights(q, k) != 0.0) {
                throw std::invalid_argument("tp_fp_sweep: base design must have all w_qk = 0");
            }
        }
    }

    std::vector<SweepRow> rows;
    for (std::size_t g = 0; g < sigma2_grid.size(); ++g) {
        BasketDesign design = base;
        for (SubtrialDesign& s : design.subtrials) {
            s.sigma2 = sigma2_grid[g];
        }
        const SampleSizeSolution sol = sample_size_borrowing(design, spec);

        ScenarioConfig sc;
        sc.mu_C.assign(K, 0.0);
        sc.sigma2.assign(K, sigma2_grid[g]);
        sc.n = sol.n_integer;
        for (const SubtrialDesign& s : design.subtrials) {
            sc.R.push_back(s.R);
        }
        sc.replicates = options.replicates;
        sc.allocation = options.allocation;

        sc.name = "tp";
        sc.mu_E.assign(K, spec.delta);
        sc.seed = options.seed + 2 * g;
        const OperatingCharacteristics tp =
            run_study(sc, design, spec, AnalysisModel::borrowing, options.threads);

        sc.name = "fp";
        sc.mu_E.assign(K, 0.0);
        sc.seed = options.seed + 2 * g + 1;
        const OperatingCharacteristics fp =
            run_study(sc, design, spec, AnalysisModel::borrowing, options.threads);

        for (std::size_t k = 0; k < K; ++k) {
            rows.push_back({sigma2_grid[g], k, sol.n_fractional[k], sol.n_integer[k],
                            tp.per_subtrial[k].rate_efficacious(),
                            fp.per_subtrial[k].rate_efficacious()});
        }
    }
    return rows;
}

}  // namespace basket
