#include "cli_app.hpp"

#include "basket/config.hpp"
#include "basket/report.hpp"
#include "basket/sim_engine.hpp"
#include "basket/ssd_solver.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>

namespace basket::cli {

namespace {

struct CommonOptions {
    std::string config;
    std::string out;
    std::string format = "table";
};

void emit(const std::string& text, const std::string& out_path, std::ostream& out) {
    if (out_path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!f) {
        throw ConfigError("--out: cannot write " + out_path);
    }
    f << text;
}

int resolve_threads(int flag) {
    if (const char* env = std::getenv("BASKET_SSD_THREADS")) {
        try {
            const int t = std::stoi(env);
            if (t > 0) {
                return t;
            }
        } catch (const std::exception&) {
        }
        throw ConfigError(std::string("BASKET_SSD_THREADS: expected a positive integer, got '") +
                          env + "'");
    }
    return flag;
}

std::vector<AnalysisModel> parse_models(const std::string& s) {
    if (s == "borrowing") return {AnalysisModel::borrowing};
    if (s == "standalone") return {AnalysisModel::stand_alone};
    if (s == "both") return {AnalysisModel::borrowing, AnalysisModel::stand_alone};
    throw ConfigError("--model: expected borrowing, standalone or both");
}

SimulationRun simulate(const DesignConfig& cfg, const std::vector<AnalysisModel>& models,
                       bool solve_n, std::optional<std::uint64_t> replicates,
                       std::optional<std::uint64_t> seed, int threads) {
    if (!cfg.simulation) {
        throw ConfigError("simulation: section missing");
    }
    std::vector<long> n;
    if (solve_n) {
        n = sample_size_borrowing(cfg.design, cfg.decision).n_integer;
    } else if (cfg.simulation->n) {
        n = *cfg.simulation->n;
    } else {
        throw ConfigError("simulation.n: required unless --solve-n is given");
    }
    SimulationRun run{cfg.scenario(n), {}};
    if (replicates) {
        run.scenario.replicates = *replicates;
    }
    if (seed) {
        run.scenario.seed = *seed;
    }
    try {
        run.scenario.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    for (AnalysisModel m : models) {
        run.results.push_back(run_study(run.scenario, cfg.design, cfg.decision, m, threads));
    }
    return run;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Bayesian sample size determination for randomised basket trials"};
    app.require_subcommand(1);

    CommonOptions ssd_opt;
    bool no_borrowing = false;
    std::string dump_path;
    auto* ssd = app.add_subcommand("ssd", "Solve per-subtrial sample sizes");
    ssd->add_option("config", ssd_opt.config, "Design file (JSON)")->required();
    ssd->add_flag("--no-borrowing", no_borrowing, "Stand-alone closed-form sizes");
    ssd->add_option("--out", ssd_opt.out, "Write the report to this file");
    ssd->add_option("--format", ssd_opt.format, "table, json or csv");
    ssd->add_option("--dump-config", dump_path, "Write the normalized design file");

    CommonOptions w_opt;
    auto* weights = app.add_subcommand("weights", "Show the w-matrix and synthesis weights");
    weights->add_option("config", w_opt.config, "Design file (JSON)")->required();
    weights->add_option("--out", w_opt.out, "Write the report to this file");
    weights->add_option("--format", w_opt.format, "table, json or csv");

    CommonOptions sim_opt;
    std::string model = "both";
    std::optional<std::uint64_t> replicates;
    std::optional<std::uint64_t> seed;
    bool solve_n = false;
    int threads = 0;
    auto* sim = app.add_subcommand("simulate", "Monte Carlo operating characteristics");
    sim->add_option("config", sim_opt.config, "Design file (JSON) with a simulation section")->required();
    sim->add_option("--model", model, "borrowing, standalone or both");
    sim->add_option("--replicates", replicates, "Number of simulated basket trials");
    sim->add_option("--seed", seed, "Master seed");
    sim->add_flag("--solve-n", solve_n, "Use ceil of the borrowing sizes as n");
    sim->add_option("--threads", threads, "Worker threads (BASKET_SSD_THREADS overrides)");
    sim->add_option("--out", sim_opt.out, "Write the report to this file");
    sim->add_option("--format", sim_opt.format, "table, json or csv");

    CommonOptions rep_opt;
    bool rep_simulate = false;
    std::optional<std::uint64_t> rep_replicates;
    std::optional<std::uint64_t> rep_seed;
    int rep_threads = 0;
    auto* rep = app.add_subcommand("report", "Design summary: weights, both sizing modes, totals");
    rep->add_option("config", rep_opt.config, "Design file (JSON)")->required();
    rep->add_flag("--simulate", rep_simulate, "Append operating characteristics for both models");
    rep->add_option("--replicates", rep_replicates, "Number of simulated basket trials");
    rep->add_option("--seed", rep_seed, "Master seed");
    rep->add_option("--threads", rep_threads, "Worker threads (BASKET_SSD_THREADS overrides)");
    rep->add_option("--out", rep_opt.out, "Write the report to this file");
    rep->add_option("--format", rep_opt.format, "table or json");

    std::vector<const char*> argv;
    for (const std::string& a : args) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kConfigError;
    }

    try {
        if (*ssd) {
            const DesignConfig cfg = load_config(ssd_opt.config);
            const OutputFormat f = parse_format(ssd_opt.format);
            if (!dump_path.empty()) {
                emit(dump_config(cfg).dump(2) + "\n", dump_path, out);
            }
            const SampleSizeSolution sol = no_borrowing
                                               ? sample_size_no_borrowing(cfg.design, cfg.decision)
                                               : sample_size_borrowing(cfg.design, cfg.decision);
            emit(format_ssd(cfg, sol, f), ssd_opt.out, out);
        } else if (*weights) {
            const DesignConfig cfg = load_config(w_opt.config);
            emit(format_weights(cfg, parse_format(w_opt.format)), w_opt.out, out);
        } else if (*sim) {
            const DesignConfig cfg = load_config(sim_opt.config);
            const OutputFormat f = parse_format(sim_opt.format);
            const SimulationRun run = simulate(cfg, parse_models(model), solve_n, replicates, seed,
                                               resolve_threads(threads));
            emit(format_simulation(cfg, run, f), sim_opt.out, out);
        } else if (*rep) {
            const DesignConfig cfg = load_config(rep_opt.config);
            const OutputFormat f = parse_format(rep_opt.format);
            const SampleSizeSolution n0 = sample_size_no_borrowing(cfg.design, cfg.decision);
            const SampleSizeSolution nb = sample_size_borrowing(cfg.design, cfg.decision);
            std::optional<SimulationRun> run;
            if (rep_simulate) {
                const bool have_n = cfg.simulation && cfg.simulation->n;
                run = simulate(cfg, parse_models("both"), !have_n, rep_replicates, rep_seed,
                               resolve_threads(rep_threads));
            }
            emit(format_design_report(cfg, n0, nb, run ? &*run : nullptr, f), rep_opt.out, out);
        }
    } catch (const NonConvergenceError& e) {
        err << "error: " << e.what() << "\nlast iterate:";
        for (double v : e.last_iterate()) {
            err << ' ' << v;
        }
        err << "\nresiduals:";
        for (double v : e.residuals()) {
            err << ' ' << v;
        }
        err << '\n';
        return kNonConvergence;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kConfigError;
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << '\n';
        return kConfigError;
    }
    return kOk;
}

}  // namespace basket::cli
