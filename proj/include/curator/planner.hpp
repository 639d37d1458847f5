#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace curator {

struct ModelShape {
    double parameters = 0.0;  // P
    int layers = 0;           // L
    int hidden = 0;           // h
    int heads = 0;
    int sequence = 0;         // s
    int vocab = 50257;        // V
};

struct ParallelConfig {
    int tensor = 1;         // TP ways
    int pipeline = 1;       // PP stages
    int data = 1;           // DP replicas
    int batch = 1;          // global batch, samples
    int micro_batches = 1;  // MB
};

struct ClusterTopology {
    int nodes = 0;
    int gpus_per_node = 8;
    double intra_node_bw = 600e9;       // bytes/s
    double inter_node_bw = 25e9;        // bytes/s
    double peak_flops_per_gpu = 312e12; // 16-bit peak

    std::int64_t total_gpus() const {
        return static_cast<std::int64_t>(nodes) * gpus_per_node;
    }
};

// Schedule constants for the training recipe calculators.
struct TrainingRecipe {
    double lr_peak = 5.0e-5;
    double warmup_tokens = 1e9;
    double decay_tokens = 3.4e11;
    double decay_floor_fraction = 0.1;
    int batch_start = 32;
    int batch_step = 32;
    int batch_final = 1920;
    double ramp_tokens = 1.2e10;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.95;
    double adam_eps = 1e-8;
    double grad_clip = 1.0;
    double weight_decay = 0.1;
};

// Mixed-precision Adam training state: 20 bytes per parameter
// (2+4 weights, 2+4 gradients, 4+4 optimizer moments).
double model_state_bytes(double parameters);

// Per-layer boundary activations: batch * layers * seq * hidden * 2 bytes.
double activation_bytes(double batch, double layers, double sequence,
                        double hidden);

// Pipeline fill/drain efficiency: MB / (MB + PP - 1).
double pipeline_efficiency(int micro_batches, int pipeline_stages);

// sqrt(1 / (3 * hidden)).
double weight_init_std(double hidden);

// Achieved TFLOP/s per GPU for one iteration, using the recompute-inclusive
// transformer cost model 96*B*s*L*h^2*(1 + s/(6h) + V/(16*L*h)).
double estimated_tflops_per_gpu(const ModelShape& shape,
                                const ParallelConfig& parallel,
                                const ClusterTopology& topo,
                                double iteration_seconds);

// Linear warmup from 0 to lr_peak over warmup_tokens, then cosine decay to
// decay_floor_fraction * lr_peak over decay_tokens, clamped at the floor.
double lr_at(double tokens_seen, const TrainingRecipe& recipe = {});

// Batch ramp: 60 levels (32, 64, ..., 1920) over equal token intervals of
// ramp_tokens/60, then flat at batch_final.
int batch_size_at(double tokens_seen, const TrainingRecipe& recipe = {});

struct RankPlacement {
    int data = 0;      // dp coordinate
    int pipeline = 0;  // pp coordinate
    int tensor = 0;    // tp coordinate
    int node = 0;
    int gpu = 0;       // gpu index within the node
};

// Topology-aware rank layout: tensor groups always sit inside one node;
// data-parallel peers of a stage pack into the node first and then onto
// contiguous nodes; pipeline stages span the remaining node dimension.
// Index of the result is the global rank. Throws std::invalid_argument
// naming the violated constraint.
std::vector<RankPlacement> map_topology(const ClusterTopology& topo,
                                        const ParallelConfig& parallel);

// Inputs for the plan report, parsed from a key = value text file.
struct PlannerInputs {
    ModelShape shape;
    ParallelConfig parallel;
    ClusterTopology topo;
    double iteration_seconds = 0.0;  // 0 = no throughput row
};

PlannerInputs parse_planner_config(const std::string& path);

struct PlanReport {
    double model_state_total_bytes = 0.0;
    double model_state_bytes_per_gpu = 0.0;
    double activation_total_bytes = 0.0;
    double activation_micro_batch_bytes = 0.0;
    double bubble_efficiency = 0.0;
    double tflops_per_gpu = 0.0;  // 0 when iteration_seconds missing
    int micro_batch_size = 0;
    std::int64_t total_ranks = 0;
    int replica_nodes = 0;  // nodes per model replica
    bool tensor_groups_intra_node = false;
};

PlanReport build_plan_report(const PlannerInputs& inputs);

std::string render_plan_report(const PlannerInputs& inputs,
                               const PlanReport& report, bool as_json);

}  // namespace curator
