#include "basket/report.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace basket {

using nlohmann::json;

namespace {

std::string fmt(const char* spec, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

std::string pad(std::string s, std::size_t width) {
    if (s.size() < width) {
        s.insert(0, width - s.size(), ' ');
    }
    return s;
}

std::string padr(std::string s, std::size_t width) {
    if (s.size() < width) {
        s.append(width - s.size(), ' ');
    }
    return s;
}

// RFC 4180: quote fields containing separators, quotes or line breaks.
std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    return out + "\"";
}

std::string full(double v) { return fmt("%.17g", v); }

}  // namespace

OutputFormat parse_format(std::string_view s) {
    if (s == "table") return OutputFormat::table;
    if (s == "json") return OutputFormat::json;
    if (s == "csv") return OutputFormat::csv;
    throw std::invalid_argument("--format: expected table, json or csv");
}

json ssd_json(const DesignConfig& cfg, const SampleSizeSolution& sol) {
    json subs = json::array();
    for (std::size_t k = 0; k < sol.n_fractional.size(); ++k) {
        subs.push_back({{"subtrial", k + 1},
                        {"label", cfg.labels[k]},
                        {"n_fractional", sol.n_fractional[k]},
                        {"n_integer", sol.n_integer[k]},
                        {"residual", sol.residuals[k]},
                        {"prior_sufficient", static_cast<bool>(sol.prior_sufficient[k])}});
    }
    return {{"design", cfg.name},
            {"mode", std::string(to_string(sol.mode))},
            {"subtrials", subs},
            {"total_fractional", sol.total_fractional()},
            {"total_integer", sol.total_integer()},
            {"iterations", sol.iterations},
            {"converged", sol.converged}};
}

std::string format_ssd(const DesignConfig& cfg, const SampleSizeSolution& sol, OutputFormat f) {
    std::ostringstream os;
    switch (f) {
        case OutputFormat::json:
            os << ssd_json(cfg, sol).dump(2) << '\n';
            break;
        case OutputFormat::csv:
            os << kSsdCsvHeader << "\r\n";
            for (std::size_t k = 0; k < sol.n_fractional.size(); ++k) {
                os << to_string(sol.mode) << ',' << k + 1 << ',' << csv_field(cfg.labels[k]) << ','
                   << full(sol.n_fractional[k]) << ',' << sol.n_integer[k] << ','
                   << fmt("%.3e", sol.residuals[k]) << ','
                   << (sol.prior_sufficient[k] ? "true" : "false") << "\r\n";
            }
            break;
        case OutputFormat::table: {
            os << "design: " << cfg.name << "   mode: " << to_string(sol.mode) << '\n';
            os << padr("subtrial", 10) << padr("label", 14) << pad("n", 8) << pad("n_int", 8)
               << pad("residual", 12) << "\n";
            for (std::size_t k = 0; k < sol.n_fractional.size(); ++k) {
                os << padr(std::to_string(k + 1), 10) << padr(cfg.labels[k], 14)
                   << pad(fmt("%.1f", sol.n_fractional[k]), 8)
                   << pad(std::to_string(sol.n_integer[k]), 8)
                   << pad(fmt("%.1e", sol.residuals[k]), 12)
                   << (sol.prior_sufficient[k] ? "  (prior sufficient)" : "") << '\n';
            }
            os << padr("total", 24) << pad(fmt("%.1f", sol.total_fractional()), 8)
               << pad(std::to_string(sol.total_integer()), 8) << '\n';
            if (sol.mode == SizingMode::borrowing) {
                os << "newton iterations: " << sol.iterations
                   << (sol.converged ? " (converged)" : " (not converged)") << '\n';
            }
            break;
        }
    }
    return os.str();
}

json weights_json(const DesignConfig& cfg) {
    const std::size_t K = cfg.design.size();
    json w = json::array();
    json p = json::array();
    for (std::size_t q = 0; q < K; ++q) {
        json row = json::array();
        for (std::size_t k = 0; k < K; ++k) {
            row.push_back(cfg.design.weights(q, k));
        }
        w.push_back(row);
    }
    // p[k] lists p_qk over all q for column k, with 0 at q == k
    for (std::size_t k = 0; k < K; ++k) {
        const auto pk = synthesis_weights(cfg.design.weights, cfg.design.c0, k);
        json col = json::array();
        std::size_t j = 0;
        for (std::size_t q = 0; q < K; ++q) {
            col.push_back(q == k ? 0.0 : pk[j++]);
        }
        p.push_back(col);
    }
    return {{"design", cfg.name}, {"c0", cfg.design.c0}, {"weights", w}, {"synthesis_weights", p}};
}

std::string format_weights(const DesignConfig& cfg, OutputFormat f) {
    const std::size_t K = cfg.design.size();
    std::ostringstream os;
    if (f == OutputFormat::json) {
        os << weights_json(cfg).dump(2) << '\n';
        return os.str();
    }
    std::vector<std::vector<double>> p(K);
    for (std::size_t k = 0; k < K; ++k) {
        p[k] = synthesis_weights(cfg.design.weights, cfg.design.c0, k);
    }
    auto p_at = [&](std::size_t q, std::size_t k) { return p[k][q < k ? q : q - 1]; };

    if (f == OutputFormat::csv) {
        os << kWeightsCsvHeader << "\r\n";
        for (std::size_t k = 0; k < K; ++k) {
            for (std::size_t q = 0; q < K; ++q) {
                if (q != k) {
                    os << q + 1 << ',' << k + 1 << ',' << full(cfg.design.weights(q, k)) << ','
                       << full(p_at(q, k)) << "\r\n";
                }
            }
        }
        return os.str();
    }
    os << "w_qk (row q, column k):\n";
    for (std::size_t q = 0; q < K; ++q) {
        for (std::size_t k = 0; k < K; ++k) {
            os << pad(fmt("%.3f", cfg.design.weights(q, k)), 8);
        }
        os << '\n';
    }
    os << "synthesis weights p_qk, c0 = " << cfg.design.c0 << " (each column sums to 1):\n";
    for (std::size_t q = 0; q < K; ++q) {
        for (std::size_t k = 0; k < K; ++k) {
            os << pad(q == k ? std::string("-") : fmt("%.3f", p_at(q, k)), 8);
        }
        os << '\n';
    }
    return os.str();
}

json simulate_json(const DesignConfig& cfg, const SimulationRun& run) {
    json results = json::array();
    for (const OperatingCharacteristics& oc : run.results) {
        json subs = json::array();
        for (std::size_t k = 0; k < oc.per_subtrial.size(); ++k) {
            const SubtrialRates& r = oc.per_subtrial[k];
            subs.push_back({{"subtrial", k + 1},
                            {"label", cfg.labels[k]},
                            {"n", r.n},
                            {"theta", run.scenario.mu_E[k] - run.scenario.mu_C[k]},
                            {"rate_efficacious", r.rate_efficacious()},
                            {"rate_futile", r.rate_futile()},
                            {"rate_inconclusive", r.rate_inconclusive()},
                            {"decisive_rate", r.decisive_rate()}});
        }
        results.push_back({{"model", std::string(to_string(oc.model))},
                           {"overall_fp", oc.overall_false_positive ? json(*oc.overall_false_positive)
                                                                    : json(nullptr)},
                           {"subtrials", subs}});
    }
    return {{"scenario", run.scenario.name},
            {"seed", run.scenario.seed},
            {"replicates", run.scenario.replicates},
            {"allocation", std::string(to_string(run.scenario.allocation))},
            {"results", results}};
}

std::string format_simulation(const DesignConfig& cfg, const SimulationRun& run, OutputFormat f) {
    std::ostringstream os;
    switch (f) {
        case OutputFormat::json:
            os << simulate_json(cfg, run).dump(2) << '\n';
            break;
        case OutputFormat::csv:
            os << kSimulateCsvHeader << "\r\n";
            for (const OperatingCharacteristics& oc : run.results) {
                const std::string fp =
                    oc.overall_false_positive ? fmt("%.6f", *oc.overall_false_positive) : "NA";
                for (std::size_t k = 0; k < oc.per_subtrial.size(); ++k) {
                    const SubtrialRates& r = oc.per_subtrial[k];
                    os << csv_field(run.scenario.name) << ',' << to_string(oc.model) << ',' << k + 1
                       << ',' << r.n << ',' << fmt("%.6f", r.rate_efficacious()) << ','
                       << fmt("%.6f", r.rate_futile()) << ',' << fmt("%.6f", r.rate_inconclusive())
                       << ',' << fp << ',' << run.scenario.seed << ',' << run.scenario.replicates
                       << "\r\n";
                }
            }
            break;
        case OutputFormat::table:
            os << "scenario: " << run.scenario.name << "   replicates: " << run.scenario.replicates
               << "   seed: " << run.scenario.seed
               << "   allocation: " << to_string(run.scenario.allocation) << '\n';
            for (const OperatingCharacteristics& oc : run.results) {
                os << "model: " << to_string(oc.model) << '\n';
                os << padr("subtrial", 10) << padr("label", 14) << pad("theta", 8) << pad("n", 6)
                   << pad("efficacious", 13) << pad("futile", 9) << pad("inconcl.", 10)
                   << pad("decisive", 10) << '\n';
                for (std::size_t k = 0; k < oc.per_subtrial.size(); ++k) {
                    const SubtrialRates& r = oc.per_subtrial[k];
                    os << padr(std::to_string(k + 1), 10) << padr(cfg.labels[k], 14)
                       << pad(fmt("%.3f", run.scenario.mu_E[k] - run.scenario.mu_C[k]), 8)
                       << pad(std::to_string(r.n), 6) << pad(fmt("%.4f", r.rate_efficacious()), 13)
                       << pad(fmt("%.4f", r.rate_futile()), 9)
                       << pad(fmt("%.4f", r.rate_inconclusive()), 10)
                       << pad(fmt("%.4f", r.decisive_rate()), 10) << '\n';
                }
                os << "overall false positive: "
                   << (oc.overall_false_positive ? fmt("%.4f", *oc.overall_false_positive)
                                                 : std::string("n/a (no null subtrials)"))
                   << '\n';
            }
            break;
    }
    return os.str();
}

std::string format_design_report(const DesignConfig& cfg, const SampleSizeSolution& no_borrowing,
                                 const SampleSizeSolution& borrowing, const SimulationRun* run,
                                 OutputFormat f) {
    if (f == OutputFormat::csv) {
        throw std::invalid_argument("--format: report supports table or json");
    }
    if (f == OutputFormat::json) {
        json doc = {{"design", cfg.name},
                    {"weights", weights_json(cfg)},
                    {"no_borrowing", ssd_json(cfg, no_borrowing)},
                    {"borrowing", ssd_json(cfg, borrowing)}};
        if (run) {
            doc["simulation"] = simulate_json(cfg, *run);
        }
        return doc.dump(2) + "\n";
    }
    std::ostringstream os;
    os << "design: " << cfg.name << "   K = " << cfg.design.size() << "   eta = " << cfg.decision.eta
       << "   delta = " << cfg.decision.delta << "   c0 = " << cfg.design.c0 << "\n\n";
    os << format_weights(cfg, OutputFormat::table) << '\n';
    os << padr("", 26);
    for (std::size_t k = 0; k < cfg.design.size(); ++k) {
        os << pad("k=" + std::to_string(k + 1), 8);
    }
    os << pad("total", 9) << '\n';
    auto row = [&](const char* title, const SampleSizeSolution& s) {
        os << padr(title, 26);
        for (double v : s.n_fractional) {
            os << pad(fmt("%.1f", v), 8);
        }
        os << pad(fmt("%.1f", s.total_fractional()), 9) << '\n';
    };
    row("n0_k (no borrowing)", no_borrowing);
    row("n_k (borrowing)", borrowing);
    if (run) {
        os << '\n' << format_simulation(cfg, *run, OutputFormat::table);
    }
    return os.str();
}

}  // namespace basket
