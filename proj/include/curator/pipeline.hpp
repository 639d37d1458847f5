#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "curator/corpus_io.hpp"
#include "curator/minhash.hpp"
#include "curator/planner.hpp"

namespace curator {

// Stage names, in canonical dependency order. "plan" is corpus-independent
// and may appear anywhere in the list.
inline const std::vector<std::string> kPipelineStages = {
    "clean", "score", "quality_filter", "dedup",
    "decontaminate", "blend", "plan"};

struct PipelineConfig {
    std::string config_dir;  // directory of the config file, for relative paths
    std::uint64_t seed = 0;
    int jobs = 1;
    std::string work_dir;
    std::vector<std::string> stages;

    struct DatasetInput {
        std::string name;
        double weight = 0.0;
        std::vector<std::string> paths;
    };
    std::vector<DatasetInput> datasets;
    std::vector<std::string> priority;  // dedup representative selection

    std::string quality_model;  // model file for the score stage
    double pareto_alpha = 3.0;
    std::string language_model;  // optional detector override for clean

    LshParams lsh;  // rng_seed is derived from the global seed per run

    struct TaskSpec {
        std::string name;
        std::string path;
        int n = 13;
    };
    std::vector<TaskSpec> tasks;

    struct BlendParams {
        std::uint64_t batch_size = 1920;
        std::uint64_t steps = 0;
        bool shuffle = false;
    };
    BlendParams blend;

    std::optional<PlannerInputs> planner;
};

// Parses and validates a JSON pipeline config. Throws ConfigError with the
// offending field named; a stage list violating the dependency order names
// both stages.
PipelineConfig load_pipeline_config(const std::string& path);

// Parses a command-line task index argument of the form name=path[,n=13].
PipelineConfig::TaskSpec parse_task_argument(const std::string& arg);

// Stage order validation, exposed for tests. Dependencies: clean < score,
// score < quality_filter, dedup < decontaminate, decontaminate < blend.
void validate_stage_order(const std::vector<std::string>& stages);

// Seed for one stage of one run, derived from the global seed.
std::uint64_t stage_seed(std::uint64_t global_seed,
                         const std::string& stage_name);

// Runs the configured stages in order. Each stage writes its output shards,
// its report, and finally its manifest; a stage whose manifest and outputs
// already exist is skipped, which makes re-runs resume after the last
// complete stage. Returns the merged stats, which are also written to
// <work_dir>/stats.json.
CorpusStats execute_pipeline(const PipelineConfig& config);

// Runs one stage (its inputs must already exist). Used by the per-stage CLI
// subcommands.
void run_stage(const PipelineConfig& config, const std::string& stage);

// Merged stats of all complete corpus stages, as execute_pipeline reports
// them.
CorpusStats collect_stats(const PipelineConfig& config);

std::string render_stats_json(const CorpusStats& stats);

}  // namespace curator
