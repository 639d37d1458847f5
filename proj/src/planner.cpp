#include "curator/planner.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "curator/errors.hpp"
#include "json.hpp"

namespace curator {

double model_state_bytes(double parameters) {
    if (parameters < 0) throw std::invalid_argument("negative parameter count");
    return 20.0 * parameters;
}

double activation_bytes(double batch, double layers, double sequence,
                        double hidden) {
    if (batch < 0 || layers < 0 || sequence < 0 || hidden < 0)
        throw std::invalid_argument("negative activation dimension");
    return batch * layers * sequence * hidden * 2.0;
}

double pipeline_efficiency(int micro_batches, int pipeline_stages) {
    if (micro_batches < 1 || pipeline_stages < 1)
        throw std::invalid_argument("micro_batches and stages must be >= 1");
    const double mb = micro_batches;
    return mb / (mb + pipeline_stages - 1.0);
}

double weight_init_std(double hidden) {
    if (hidden <= 0) throw std::invalid_argument("hidden must be positive");
    return std::sqrt(1.0 / (3.0 * hidden));
}

double estimated_tflops_per_gpu(const ModelShape& shape,
                                const ParallelConfig& parallel,
                                const ClusterTopology& topo,
                                double iteration_seconds) {
    if (iteration_seconds <= 0)
        throw std::invalid_argument("iteration_seconds must be positive");
    if (topo.total_gpus() <= 0)
        throw std::invalid_argument("topology has no GPUs");
    const double b = parallel.batch;
    const double s = shape.sequence;
    const double l = shape.layers;
    const double h = shape.hidden;
    const double v = shape.vocab;
    const double flops_per_iteration =
        96.0 * b * s * l * h * h *
        (1.0 + s / (6.0 * h) + v / (16.0 * l * h));
    return flops_per_iteration /
           (static_cast<double>(topo.total_gpus()) * iteration_seconds * 1e12);
}

double lr_at(double tokens_seen, const TrainingRecipe& recipe) {
    if (tokens_seen < 0) throw std::invalid_argument("negative token count");
    if (tokens_seen < recipe.warmup_tokens) {
        return recipe.lr_peak * tokens_seen / recipe.warmup_tokens;
    }
    const double floor = recipe.decay_floor_fraction * recipe.lr_peak;
    const double t = tokens_seen - recipe.warmup_tokens;
    if (t >= recipe.decay_tokens) return floor;
    const double cosine =
        0.5 * (1.0 + std::cos(std::numbers::pi * t / recipe.decay_tokens));
    return floor + (recipe.lr_peak - floor) * cosine;
}

int batch_size_at(double tokens_seen, const TrainingRecipe& recipe) {
    if (tokens_seen < 0) throw std::invalid_argument("negative token count");
    const int levels =
        (recipe.batch_final - recipe.batch_start) / recipe.batch_step + 1;
    if (tokens_seen >= recipe.ramp_tokens) return recipe.batch_final;
    const auto level = static_cast<int>(
        std::floor(static_cast<double>(levels) * tokens_seen /
                   recipe.ramp_tokens));
    const int batch = recipe.batch_start + recipe.batch_step * level;
    return std::min(batch, recipe.batch_final);
}

std::vector<RankPlacement> map_topology(const ClusterTopology& topo,
                                        const ParallelConfig& parallel) {
    const std::int64_t gpus = topo.total_gpus();
    const std::int64_t ways = static_cast<std::int64_t>(parallel.tensor) *
                              parallel.pipeline * parallel.data;
    if (parallel.tensor < 1 || parallel.pipeline < 1 || parallel.data < 1)
        throw std::invalid_argument("parallel degrees must be >= 1");
    if (ways != gpus)
        throw std::invalid_argument(
            "TP*PP*DP (" + std::to_string(ways) + ") != nodes*gpus_per_node (" +
            std::to_string(gpus) + ")");
    if (parallel.tensor > topo.gpus_per_node)
        throw std::invalid_argument(
            "TP (" + std::to_string(parallel.tensor) +
            ") exceeds gpus_per_node (" + std::to_string(topo.gpus_per_node) +
            ")");
    if (topo.gpus_per_node % parallel.tensor != 0)
        throw std::invalid_argument(
            "gpus_per_node (" + std::to_string(topo.gpus_per_node) +
            ") not divisible by TP (" + std::to_string(parallel.tensor) + ")");

    const int groups_per_node = topo.gpus_per_node / parallel.tensor;
    std::vector<RankPlacement> ranks(static_cast<std::size_t>(gpus));
    // Tensor group index g enumerates dp fastest, so the data-parallel peers
    // of a stage occupy consecutive groups: packed within a node first, then
    // on adjacent nodes.
    for (int pp = 0; pp < parallel.pipeline; ++pp) {
        for (int dp = 0; dp < parallel.data; ++dp) {
            const std::int64_t g =
                static_cast<std::int64_t>(pp) * parallel.data + dp;
            for (int tp = 0; tp < parallel.tensor; ++tp) {
                const std::int64_t rank = g * parallel.tensor + tp;
                RankPlacement& r = ranks[static_cast<std::size_t>(rank)];
                r.data = dp;
                r.pipeline = pp;
                r.tensor = tp;
                r.node = static_cast<int>(g / groups_per_node);
                r.gpu = static_cast<int>(g % groups_per_node) *
                            parallel.tensor +
                        tp;
            }
        }
    }
    return ranks;
}

PlannerInputs parse_planner_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path + ": cannot open planner config");
    PlannerInputs inputs;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            bool blank = true;
            for (char c : line) blank &= std::isspace(static_cast<unsigned char>(c)) != 0;
            if (blank) continue;
            throw ConfigError(path + ": line " + std::to_string(line_no) +
                              ": expected key = value");
        }
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string{}
                                          : s.substr(b, e - b + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError(path + ": line " + std::to_string(line_no) +
                              ": empty key or value");
        double v = 0;
        try {
            std::size_t pos = 0;
            v = std::stod(value, &pos);
            if (pos != value.size()) throw std::invalid_argument(value);
        } catch (...) {
            throw ConfigError(path + ": line " + std::to_string(line_no) +
                              ": \"" + value + "\" is not a number");
        }
        if (key == "parameters") inputs.shape.parameters = v;
        else if (key == "layers") inputs.shape.layers = static_cast<int>(v);
        else if (key == "hidden") inputs.shape.hidden = static_cast<int>(v);
        else if (key == "heads") inputs.shape.heads = static_cast<int>(v);
        else if (key == "sequence") inputs.shape.sequence = static_cast<int>(v);
        else if (key == "vocab") inputs.shape.vocab = static_cast<int>(v);
        else if (key == "tensor_parallel") inputs.parallel.tensor = static_cast<int>(v);
        else if (key == "pipeline_parallel") inputs.parallel.pipeline = static_cast<int>(v);
        else if (key == "data_parallel") inputs.parallel.data = static_cast<int>(v);
        else if (key == "batch") inputs.parallel.batch = static_cast<int>(v);
        else if (key == "micro_batches") inputs.parallel.micro_batches = static_cast<int>(v);
        else if (key == "nodes") inputs.topo.nodes = static_cast<int>(v);
        else if (key == "gpus_per_node") inputs.topo.gpus_per_node = static_cast<int>(v);
        else if (key == "peak_tflops_per_gpu") inputs.topo.peak_flops_per_gpu = v * 1e12;
        else if (key == "intra_node_bw") inputs.topo.intra_node_bw = v;
        else if (key == "inter_node_bw") inputs.topo.inter_node_bw = v;
        else if (key == "iteration_seconds") inputs.iteration_seconds = v;
        else
            throw ConfigError(path + ": line " + std::to_string(line_no) +
                              ": unknown key \"" + key + "\"");
    }
    return inputs;
}

PlanReport build_plan_report(const PlannerInputs& inputs) {
    PlanReport report;
    const auto& shape = inputs.shape;
    const auto& par = inputs.parallel;
    report.model_state_total_bytes = model_state_bytes(shape.parameters);
    const double replica_gpus =
        static_cast<double>(par.tensor) * par.pipeline;
    report.model_state_bytes_per_gpu =
        report.model_state_total_bytes / replica_gpus;
    report.activation_total_bytes = activation_bytes(
        par.batch, shape.layers, shape.sequence, shape.hidden);
    const int micro_batch_size =
        par.batch / std::max(1, par.micro_batches * par.data);
    report.micro_batch_size = micro_batch_size;
    report.activation_micro_batch_bytes = activation_bytes(
        micro_batch_size, shape.layers, shape.sequence, shape.hidden);
    report.bubble_efficiency =
        pipeline_efficiency(par.micro_batches, par.pipeline);
    if (inputs.iteration_seconds > 0) {
        report.tflops_per_gpu = estimated_tflops_per_gpu(
            shape, par, inputs.topo, inputs.iteration_seconds);
    }

    const auto ranks = map_topology(inputs.topo, par);
    report.total_ranks = static_cast<std::int64_t>(ranks.size());
    // Tensor groups share a node by construction; verify anyway.
    bool intra = true;
    for (std::size_t i = 0; i < ranks.size(); i += par.tensor) {
        for (int t = 1; t < par.tensor; ++t) {
            intra &= ranks[i + static_cast<std::size_t>(t)].node ==
                     ranks[i].node;
        }
    }
    report.tensor_groups_intra_node = intra;
    // Nodes touched by one model replica (dp == 0).
    std::vector<bool> node_used(static_cast<std::size_t>(inputs.topo.nodes));
    for (const auto& r : ranks) {
        if (r.data == 0) node_used[static_cast<std::size_t>(r.node)] = true;
    }
    int replica_nodes = 0;
    for (bool used : node_used) replica_nodes += used ? 1 : 0;
    report.replica_nodes = replica_nodes;
    return report;
}

std::string render_plan_report(const PlannerInputs& inputs,
                               const PlanReport& report, bool as_json) {
    if (as_json) {
        nlohmann::ordered_json j;
        j["model"] = {{"parameters", inputs.shape.parameters},
                      {"layers", inputs.shape.layers},
                      {"hidden", inputs.shape.hidden},
                      {"heads", inputs.shape.heads},
                      {"sequence", inputs.shape.sequence},
                      {"vocab", inputs.shape.vocab}};
        j["parallel"] = {{"tensor", inputs.parallel.tensor},
                         {"pipeline", inputs.parallel.pipeline},
                         {"data", inputs.parallel.data},
                         {"batch", inputs.parallel.batch},
                         {"micro_batches", inputs.parallel.micro_batches}};
        j["memory"] = {
            {"model_state_total_bytes", report.model_state_total_bytes},
            {"model_state_bytes_per_gpu", report.model_state_bytes_per_gpu},
            {"activation_total_bytes", report.activation_total_bytes},
            {"activation_micro_batch_bytes",
             report.activation_micro_batch_bytes},
            {"micro_batch_size", report.micro_batch_size}};
        j["pipeline"] = {{"bubble_efficiency", report.bubble_efficiency}};
        j["topology"] = {
            {"total_ranks", report.total_ranks},
            {"replica_nodes", report.replica_nodes},
            {"tensor_groups_intra_node", report.tensor_groups_intra_node}};
        if (report.tflops_per_gpu > 0) {
            j["throughput"] = {
                {"iteration_seconds", inputs.iteration_seconds},
                {"tflops_per_gpu", report.tflops_per_gpu},
                {"peak_fraction",
                 report.tflops_per_gpu * 1e12 /
                     inputs.topo.peak_flops_per_gpu}};
        }
        return j.dump(2) + "\n";
    }

    std::ostringstream out;
    const auto gb = [](double bytes) { return bytes / 1e9; };
    out << "model states: " << gb(report.model_state_total_bytes)
        << " GB total, " << gb(report.model_state_bytes_per_gpu)
        << " GB per model-parallel rank\n";
    out << "activations:  " << gb(report.activation_total_bytes)
        << " GB at full batch, " << gb(report.activation_micro_batch_bytes)
        << " GB at micro-batch size " << report.micro_batch_size << "\n";
    out << "pipeline:     efficiency "
        << report.bubble_efficiency << " with MB="
        << inputs.parallel.micro_batches << ", PP="
        << inputs.parallel.pipeline << "\n";
    out << "topology:     " << report.total_ranks << " ranks, replica spans "
        << report.replica_nodes << " nodes, tensor groups intra-node: "
        << (report.tensor_groups_intra_node ? "yes" : "no") << "\n";
    if (report.tflops_per_gpu > 0) {
        out << "throughput:   " << report.tflops_per_gpu
            << " TFLOP/s per GPU at " << inputs.iteration_seconds
            << " s/iteration ("
            << 100.0 * report.tflops_per_gpu * 1e12 /
                   inputs.topo.peak_flops_per_gpu
            << "% of peak)\n";
    }
    return out.str();
}

}  // namespace curator
