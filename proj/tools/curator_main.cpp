#include <cstdint>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "curator/corpus_io.hpp"
#include "curator/errors.hpp"
#include "curator/pipeline.hpp"
#include "curator/planner.hpp"
#include "curator/quality.hpp"

namespace {

struct CommonOpts {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> jobs;
    bool json = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool config_required = true) {
    auto* c = cmd->add_option("--config", opts.config_path,
                              "pipeline config file (JSON)");
    if (config_required) c->required();
    cmd->add_option("--seed", opts.seed, "override the config's global seed");
    cmd->add_option("--jobs", opts.jobs, "worker threads per stage");
    cmd->add_flag("--json", opts.json, "machine-readable output");
}

curator::PipelineConfig load_config(const CommonOpts& opts) {
    auto cfg = curator::load_pipeline_config(opts.config_path);
    if (opts.seed) cfg.seed = *opts.seed;
    if (opts.jobs) cfg.jobs = *opts.jobs;
    return cfg;
}

void print_stats_text(const curator::CorpusStats& stats) {
    for (const auto& [name, d] : stats.by_dataset) {
        std::cout << name << ": " << d.input_docs << " in, " << d.kept_docs
                  << " kept";
        for (int r = 0; r < 6; ++r) {
            if (d.drops[r] == 0) continue;
            std::cout << ", " << d.drops[r] << " "
                      << curator::drop_reason_name(
                             static_cast<curator::DropReason>(r));
        }
        std::cout << "\n";
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "curator: corpus cleanup, quality filtering, fuzzy dedup, "
        "decontamination, blending, and training capacity planning"};
    app.require_subcommand(1);

    // Stage subcommands share the config-driven plumbing; "filter" is the
    // quality filter.
    const std::vector<std::pair<std::string, std::string>> stage_commands = {
        {"clean", "clean"},
        {"score", "score"},
        {"filter", "quality_filter"},
        {"dedup", "dedup"},
        {"decontaminate", "decontaminate"},
        {"blend", "blend"},
    };
    struct StageInvocation {
        CommonOpts opts;
        std::string stage;
        std::vector<std::string> tasks;  // decontaminate: name=path[,n=13]
    };
    std::vector<std::shared_ptr<StageInvocation>> invocations;
    for (const auto& [command, stage] : stage_commands) {
        auto inv = std::make_shared<StageInvocation>();
        inv->stage = stage;
        auto* cmd = app.add_subcommand(command, "run the " + stage + " stage");
        add_common(cmd, inv->opts);
        if (stage == "decontaminate") {
            cmd->add_option("--task", inv->tasks,
                            "task index as name=path[,n=13]; repeatable, "
                            "overrides the config's task list");
        }
        cmd->callback([inv] {
            auto cfg = load_config(inv->opts);
            if (!inv->tasks.empty()) {
                cfg.tasks.clear();
                for (const auto& spec : inv->tasks) {
                    cfg.tasks.push_back(curator::parse_task_argument(spec));
                }
            }
            curator::run_stage(cfg, inv->stage);
        });
        invocations.push_back(inv);
    }

    CommonOpts run_opts;
    auto* run_cmd = app.add_subcommand("run", "run the full configured pipeline");
    add_common(run_cmd, run_opts);
    run_cmd->callback([&run_opts] {
        const auto cfg = load_config(run_opts);
        const auto stats = curator::execute_pipeline(cfg);
        if (run_opts.json) {
            std::cout << curator::render_stats_json(stats);
        } else {
            print_stats_text(stats);
        }
    });

    CommonOpts stats_opts;
    auto* stats_cmd =
        app.add_subcommand("stats", "report stats of completed stages");
    add_common(stats_cmd, stats_opts);
    stats_cmd->callback([&stats_opts] {
        const auto cfg = load_config(stats_opts);
        const auto stats = curator::collect_stats(cfg);
        if (stats_opts.json) {
            std::cout << curator::render_stats_json(stats);
        } else {
            print_stats_text(stats);
        }
    });

    std::string plan_config;
    bool plan_json = false;
    auto* plan_cmd = app.add_subcommand(
        "plan", "memory/efficiency/throughput report from a planner config");
    plan_cmd->add_option("--config", plan_config,
                         "planner config (key = value text file)")
        ->required();
    plan_cmd->add_flag("--json", plan_json, "machine-readable output");
    plan_cmd->callback([&plan_config, &plan_json] {
        const auto inputs = curator::parse_planner_config(plan_config);
        const auto report = curator::build_plan_report(inputs);
        std::cout << curator::render_plan_report(inputs, report, plan_json);
    });

    std::string train_pos, train_neg, train_out;
    double train_holdout = 0.1;
    std::uint64_t train_seed = 0;
    bool train_json = false;
    auto* train_cmd = app.add_subcommand(
        "train", "train the quality classifier from labeled corpora");
    train_cmd->add_option("--positives", train_pos, "positive-class JSONL file")
        ->required();
    train_cmd->add_option("--negatives", train_neg, "negative-class JSONL file")
        ->required();
    train_cmd->add_option("--output", train_out, "model file to write")
        ->required();
    train_cmd->add_option("--holdout", train_holdout,
                          "held-out fraction per class (default 0.1)");
    train_cmd->add_option("--seed", train_seed, "training seed");
    train_cmd->add_flag("--json", train_json, "machine-readable output");
    train_cmd->callback([&] {
        const auto pos = curator::ingest_shard(train_pos, 0, "positive");
        const auto neg = curator::ingest_shard(train_neg, 1, "negative");
        curator::TrainOptions options;
        options.seed = train_seed;
        const auto result = curator::train_quality_classifier(
            pos.records, neg.records, train_holdout, options);
        curator::save_quality_model(result.model, train_out);
        if (train_json) {
            std::cout << "{\"holdout_accuracy\": " << result.holdout_accuracy
                      << ", \"model\": \"" << train_out << "\"}\n";
        } else {
            std::cout << "holdout accuracy " << result.holdout_accuracy
                      << ", model written to " << train_out << "\n";
        }
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const curator::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const curator::DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
