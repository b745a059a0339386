#include "basket/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace basket {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
    throw ConfigError(path + ": " + msg);
}

const json& require(const json& obj, const char* key, const std::string& path) {
    if (!obj.is_object() || !obj.contains(key)) {
        fail(path.empty() ? key : path + "." + key, "required field missing");
    }
    return obj.at(key);
}

double as_number(const json& v, const std::string& path) {
    if (!v.is_number()) {
        fail(path, "expected a number");
    }
    const double x = v.get<double>();
    if (!std::isfinite(x)) {
        fail(path, "expected a finite number");
    }
    return x;
}

double number_or(const json& obj, const char* key, const std::string& path, double fallback) {
    return obj.contains(key) ? as_number(obj.at(key), path + "." + key) : fallback;
}

std::vector<double> as_numbers(const json& v, const std::string& path) {
    if (!v.is_array()) {
        fail(path, "expected an array of numbers");
    }
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        out.push_back(as_number(v[i], path + "[" + std::to_string(i) + "]"));
    }
    return out;
}

std::vector<double> expect_length(std::vector<double> v, std::size_t K, const std::string& path) {
    if (v.size() != K) {
        fail(path, "expected " + std::to_string(K) + " values, got " + std::to_string(v.size()));
    }
    return v;
}

std::uint64_t as_count(const json& v, const std::string& path) {
    if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
        fail(path, "expected a non-negative integer");
    }
    return v.get<std::uint64_t>();
}

// Library messages that already name the field are passed through unchanged.
[[noreturn]] void prefixed(const std::string& path, const std::string& msg) {
    if (path.empty() || msg.rfind(path, 0) == 0) {
        throw ConfigError(msg);
    }
    fail(path, msg);
}

// Re-throws library validation errors as ConfigError with a field prefix.
template <class F>
void checked(const std::string& path, F&& f) {
    try {
        f();
    } catch (const ConfigError&) {
        throw;
    } catch (const std::invalid_argument& e) {
        prefixed(path, e.what());
    } catch (const std::domain_error& e) {
        prefixed(path, e.what());
    } catch (const json::exception& e) {
        fail(path, e.what());
    }
}

}  // namespace

ScenarioConfig DesignConfig::scenario(const std::vector<long>& n) const {
    if (!simulation) {
        throw ConfigError("simulation: section missing");
    }
    ScenarioConfig sc;
    sc.name = name;
    sc.mu_E = simulation->mu_E;
    sc.mu_C = simulation->mu_C;
    sc.sigma2 = simulation->sigma2;
    sc.n = n;
    for (const SubtrialDesign& s : design.subtrials) {
        sc.R.push_back(s.R);
    }
    sc.replicates = simulation->replicates;
    sc.seed = simulation->seed;
    sc.allocation = simulation->allocation;
    return sc;
}

DesignConfig parse_config(const json& doc) {
    if (!doc.is_object()) {
        fail("(root)", "expected a JSON object");
    }
    DesignConfig cfg;
    cfg.name = doc.value("name", std::string("design"));

    const json& subs = require(doc, "subtrials", "");
    if (!subs.is_array()) {
        fail("subtrials", "expected an array");
    }
    if (subs.size() < 2) {
        fail("subtrials", "at least 2 required");
    }
    const std::size_t K = subs.size();
    for (std::size_t k = 0; k < K; ++k) {
        const std::string path = "subtrials[" + std::to_string(k) + "]";
        const json& s = subs[k];
        if (!s.is_object()) {
            fail(path, "expected an object");
        }
        SubtrialDesign sd{};
        sd.sigma2 = as_number(require(s, "sigma2", path), path + ".sigma2");
        sd.R = number_or(s, "R", path, 0.5);
        sd.m0 = number_or(s, "m0", path, 0.0);
        sd.s02 = number_or(s, "s02", path, 100.0);
        checked(path, [&] { sd.validate(); });
        cfg.design.subtrials.push_back(sd);
        cfg.labels.push_back(s.value("label", std::to_string(k + 1)));
    }

    const json& hyper = doc.contains("hyper") ? doc.at("hyper") : json::object();
    cfg.design.hyper = {number_or(hyper, "a1", "hyper", 1.1), number_or(hyper, "b1", "hyper", 1.1),
                        number_or(hyper, "a2", "hyper", 54.0), number_or(hyper, "b2", "hyper", 3.0)};
    cfg.design.c0 = number_or(doc, "c0", "", 0.05);

    const json& w = require(doc, "weights", "");
    if (w.is_array()) {
        std::vector<double> entries;
        if (w.size() != K) {
            fail("weights", "expected " + std::to_string(K) + " rows, got " + std::to_string(w.size()));
        }
        for (std::size_t q = 0; q < K; ++q) {
            const auto row = expect_length(as_numbers(w[q], "weights[" + std::to_string(q) + "]"), K,
                                           "weights[" + std::to_string(q) + "]");
            entries.insert(entries.end(), row.begin(), row.end());
        }
        checked("weights", [&] { cfg.design.weights = WeightMatrix(K, std::move(entries)); });
    } else if (w.is_object()) {
        const json& mode = require(w, "mode", "weights");
        if (mode != "hellinger") {
            fail("weights.mode", "expected \"hellinger\"");
        }
        HellingerSource src;
        src.arm_means = expect_length(as_numbers(require(w, "arm_means", "weights"), "weights.arm_means"),
                                      K, "weights.arm_means");
        if (w.contains("arm_sds")) {
            src.arm_sds = expect_length(as_numbers(w.at("arm_sds"), "weights.arm_sds"), K, "weights.arm_sds");
        } else if (w.contains("arm_variances")) {
            const auto v = expect_length(as_numbers(w.at("arm_variances"), "weights.arm_variances"), K,
                                         "weights.arm_variances");
            for (double x : v) {
                src.arm_sds.push_back(std::sqrt(x));
            }
        } else {
            for (const SubtrialDesign& s : cfg.design.subtrials) {
                src.arm_sds.push_back(std::sqrt(s.sigma2));
            }
        }
        checked("weights", [&] {
            cfg.design.weights = WeightMatrix::from_hellinger(src.arm_means, src.arm_sds);
        });
        cfg.hellinger = std::move(src);
    } else {
        fail("weights", "expected a matrix or {\"mode\": \"hellinger\", ...}");
    }
    checked("", [&] { cfg.design.validate(); });

    const json& dec = require(doc, "decision", "");
    const double eta = as_number(require(dec, "eta", "decision"), "decision.eta");
    const json& zj = require(dec, "zeta", "decision");
    std::vector<double> zeta =
        zj.is_array() ? as_numbers(zj, "decision.zeta") : std::vector<double>{as_number(zj, "decision.zeta")};
    const double delta = as_number(require(dec, "delta", "decision"), "decision.delta");
    cfg.decision = make_decision_spec(eta, std::move(zeta), delta);
    if (dec.contains("direction")) {
        if (!dec.at("direction").is_string()) {
            fail("decision.direction", "expected a string");
        }
        checked("decision", [&] { cfg.decision.direction = parse_direction(dec.at("direction").get<std::string>()); });
    }
    checked("decision", [&] { cfg.decision.validate(K); });

    if (doc.contains("simulation")) {
        const json& sim = doc.at("simulation");
        if (!sim.is_object()) {
            fail("simulation", "expected an object");
        }
        SimulationSection ss;
        ss.mu_E = expect_length(as_numbers(require(sim, "mu_E", "simulation"), "simulation.mu_E"), K,
                                "simulation.mu_E");
        ss.mu_C = sim.contains("mu_C")
                      ? expect_length(as_numbers(sim.at("mu_C"), "simulation.mu_C"), K, "simulation.mu_C")
                      : std::vector<double>(K, 0.0);
        if (sim.contains("sigma2")) {
            ss.sigma2 = expect_length(as_numbers(sim.at("sigma2"), "simulation.sigma2"), K, "simulation.sigma2");
        } else {
            for (const SubtrialDesign& s : cfg.design.subtrials) {
                ss.sigma2.push_back(s.sigma2);
            }
        }
        if (sim.contains("n")) {
            const json& nj = sim.at("n");
            if (!nj.is_array() || nj.size() != K) {
                fail("simulation.n", "expected " + std::to_string(K) + " integers");
            }
            std::vector<long> n;
            for (std::size_t k = 0; k < K; ++k) {
                n.push_back(static_cast<long>(as_count(nj[k], "simulation.n[" + std::to_string(k) + "]")));
            }
            ss.n = std::move(n);
        }
        if (sim.contains("replicates")) {
            ss.replicates = as_count(sim.at("replicates"), "simulation.replicates");
            if (ss.replicates < 1) {
                fail("simulation.replicates", "must be at least 1");
            }
        }
        if (sim.contains("seed")) {
            ss.seed = as_count(sim.at("seed"), "simulation.seed");
        }
        if (sim.contains("allocation")) {
            checked("simulation", [&] { ss.allocation = parse_allocation(sim.at("allocation").get<std::string>()); });
        }
        cfg.simulation = std::move(ss);
    }
    return cfg;
}

DesignConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError(path.string() + ": cannot open file");
    }
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(path.string() + ": invalid JSON: " + e.what());
    }
    return parse_config(doc);
}

json dump_config(const DesignConfig& cfg) {
    json doc;
    doc["name"] = cfg.name;
    json subs = json::array();
    for (std::size_t k = 0; k < cfg.design.size(); ++k) {
        const SubtrialDesign& s = cfg.design.subtrials[k];
        subs.push_back({{"label", cfg.labels[k]}, {"sigma2", s.sigma2}, {"R", s.R}, {"m0", s.m0}, {"s02", s.s02}});
    }
    doc["subtrials"] = subs;
    if (cfg.hellinger) {
        doc["weights"] = {{"mode", "hellinger"},
                          {"arm_means", cfg.hellinger->arm_means},
                          {"arm_sds", cfg.hellinger->arm_sds}};
    } else {
        const std::size_t K = cfg.design.size();
        json rows = json::array();
        for (std::size_t q = 0; q < K; ++q) {
            json row = json::array();
            for (std::size_t k = 0; k < K; ++k) {
                row.push_back(cfg.design.weights(q, k));
            }
            rows.push_back(row);
        }
        doc["weights"] = rows;
    }
    const GammaMixtureHyper& h = cfg.design.hyper;
    doc["hyper"] = {{"a1", h.a1}, {"b1", h.b1}, {"a2", h.a2}, {"b2", h.b2}};
    doc["c0"] = cfg.design.c0;
    json dec = {{"eta", cfg.decision.eta}, {"delta", cfg.decision.delta},
                {"direction", std::string(to_string(cfg.decision.direction))}};
    if (cfg.decision.zeta.size() == 1) {
        dec["zeta"] = cfg.decision.zeta[0];
    } else {
        dec["zeta"] = cfg.decision.zeta;
    }
    doc["decision"] = dec;
    if (cfg.simulation) {
        const SimulationSection& s = *cfg.simulation;
        json sim = {{"mu_E", s.mu_E},
                    {"mu_C", s.mu_C},
                    {"sigma2", s.sigma2},
                    {"replicates", s.replicates},
                    {"seed", s.seed},
                    {"allocation", std::string(to_string(s.allocation))}};
        if (s.n) {
            sim["n"] = *s.n;
        }
        doc["simulation"] = sim;
    }
    return doc;
}

}  // namespace basket
