// ogplab: generate instances, solve them, and run overlap-gap experiments.

#include "ogplab/error.hpp"
#include "ogplab/experiment.hpp"
#include "ogplab/instance.hpp"
#include "ogplab/solve.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitConfig = 2;
constexpr int kExitPartial = 3;

/// stdout unless a path is given.
class Output {
public:
    explicit Output(const std::string& path) {
        if (!path.empty() && path != "-") {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_) {
                throw ogplab::ConfigError(fmt::format("cannot open output '{}'", path));
            }
        }
    }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }

private:
    std::unique_ptr<std::ofstream> file_;
};

ogplab::ExperimentConfig config_with_seed(const std::string& path, std::optional<ogplab::Seed> seed) {
    auto cfg = ogplab::load_config(path);
    if (seed) {
        cfg.base_seed = *seed;
    }
    return cfg;
}

int exit_for(const std::vector<ogplab::RunRecord>& runs) {
    for (const auto& r : runs) {
        if (r.failed > 0) {
            return kExitPartial;
        }
    }
    return kExitOk;
}

void report(const ogplab::RunRecord& r) {
    fmt::print(stderr, "{} trials: {} completed, {} failed, gap fraction {}\n", r.trials.size(), r.completed,
               r.failed, r.gap_fraction ? fmt::format("{:.3f}", *r.gap_fraction) : std::string("n/a"));
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Overlap-gap laboratory for Max-q-XORSAT and spin-glass instances"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<ogplab::Seed> seed;
    unsigned workers = 1;
    std::string out_path;

    auto add_common = [&](CLI::App* sub, bool needs_config) {
        auto* c = sub->add_option("--config", config_path, "Experiment config (YAML)");
        if (needs_config) {
            c->required()->check(CLI::ExistingFile);
        }
        sub->add_option("--seed", seed, "Base seed; overrides the config");
        sub->add_option("--workers", workers, "Worker threads")->envname("OGPLAB_WORKERS")->check(CLI::Range(1U, 1024U));
        sub->add_option("--out", out_path, "Output path (default stdout)");
    };

    auto* gen = app.add_subcommand("generate", "Write the instance of one trial seed");
    add_common(gen, true);

    auto* solve = app.add_subcommand("solve", "Enumerate near-optimal configurations of one instance");
    add_common(solve, false);
    std::string instance_path;
    double threshold = 0.95;
    std::string mode = "ratio";
    std::string backend = "auto";
    std::uint64_t node_budget = 0;
    solve->add_option("--instance", instance_path, "Instance file")->check(CLI::ExistingFile);
    solve->add_option("--threshold", threshold, "Threshold value");
    solve->add_option("--mode", mode, "Threshold mode")->check(CLI::IsMember({"ratio", "additive"}));
    solve->add_option("--backend", backend, "Solver backend")->check(CLI::IsMember({"auto", "exhaustive", "bnb"}));
    solve->add_option("--node-budget", node_budget, "Branch-and-bound node budget (0 = unlimited)");

    auto* run = app.add_subcommand("run", "Run an experiment and write JSONL");
    add_common(run, true);

    auto* sweep = app.add_subcommand("sweep", "Run an experiment once per axis value");
    add_common(sweep, true);
    std::string axis;
    std::vector<double> values;
    sweep->add_option("--axis", axis, "Numeric config field")->required();
    sweep->add_option("--values", values, "Axis values")->required()->delimiter(',');

    auto* exp = app.add_subcommand("export", "Export one trial's overlap spectrum as CSV");
    std::string record_path;
    std::size_t index = 0;
    exp->add_option("--record", record_path, "Run JSONL file")->required();
    exp->add_option("--index", index, "Trial index")->required();
    exp->add_option("--out", out_path, "Output path (default stdout)");

    auto* check = app.add_subcommand("validate-config", "Check a config and print its normalized form");
    check->add_option("--config", config_path, "Experiment config (YAML)")->required()->check(CLI::ExistingFile);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (*gen) {
            auto cfg = config_with_seed(config_path, seed);
            std::optional<ogplab::RegularizeReport> rep;
            const auto inst = ogplab::make_instance(cfg, cfg.base_seed, &rep);
            Output out(out_path);
            ogplab::write_instance(out.stream(), inst);
            if (rep) {
                nlohmann::json j = {{"record", "regularize"},
                                    {"lambda_prime", rep->lambda_prime},
                                    {"edges_removed", rep->edges_removed},
                                    {"edges_added", rep->edges_added},
                                    {"removed_fraction", rep->removed_fraction},
                                    {"treelike_before", rep->treelike_before},
                                    {"treelike_after", rep->treelike_after},
                                    {"leftover_deficit", rep->leftover_deficit}};
                fmt::print(stderr, "{}\n", j.dump());
            }
            return kExitOk;
        }
        if (*solve) {
            std::optional<ogplab::Instance> inst;
            ogplab::SolveOptions so;
            so.workers = workers;
            so.node_budget = node_budget;
            ogplab::ThresholdSpec thr{mode == "ratio" ? ogplab::ThresholdMode::Ratio
                                                      : ogplab::ThresholdMode::AdditivePerSite,
                                      threshold};
            if (!instance_path.empty()) {
                std::ifstream in(instance_path);
                inst = ogplab::read_instance(in);
            } else if (!config_path.empty()) {
                auto cfg = config_with_seed(config_path, seed);
                inst = ogplab::make_instance(cfg, cfg.base_seed);
                so.seed = ogplab::derive_seed(cfg.base_seed, "search");
                if (solve->count("--threshold") == 0 && solve->count("--mode") == 0) {
                    thr = cfg.threshold;
                }
            } else {
                throw ogplab::ConfigError("solve needs --instance or --config");
            }
            try {
                thr.validate();
            } catch (const ogplab::ParameterError& e) {
                throw ogplab::ConfigError(e.what());
            }
            auto s = ogplab::solve_near_optimal(*inst, thr, ogplab::parse_backend(backend), so);
            Output out(out_path);
            ogplab::write_solution_set(out.stream(), s);
            fmt::print(stderr, "optimum {} threshold {} members {} exhaustive {}\n", s.optimum, s.threshold,
                       s.size(), s.exhaustive);
            return kExitOk;
        }
        if (*run) {
            auto cfg = config_with_seed(config_path, seed);
            if (!out_path.empty()) {
                cfg.output = out_path;
            }
            Output out(cfg.output);
            const auto rec = ogplab::run_experiment(cfg, out.stream(), {workers, nlohmann::json::object()});
            report(rec);
            return exit_for({rec});
        }
        if (*sweep) {
            auto cfg = config_with_seed(config_path, seed);
            if (!out_path.empty()) {
                cfg.output = out_path;
            }
            Output out(cfg.output);
            const auto runs = ogplab::sweep(cfg, axis, values, out.stream(), {workers, nlohmann::json::object()});
            for (std::size_t i = 0; i < runs.size(); ++i) {
                fmt::print(stderr, "{} = {}: ", axis, values[i]);
                report(runs[i]);
            }
            return exit_for(runs);
        }
        if (*exp) {
            Output out(out_path);
            ogplab::export_spectrum(record_path, index, out.stream());
            return kExitOk;
        }
        if (*check) {
            const auto cfg = ogplab::load_config(config_path);
            fmt::print("{}\n", ogplab::config_json(cfg).dump(2));
            return kExitOk;
        }
    } catch (const ogplab::ConfigError& e) {
        fmt::print(stderr, "config error: {}\n", e.what());
        return kExitConfig;
    } catch (const std::exception& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return kExitError;
    }
    return kExitOk;
}
