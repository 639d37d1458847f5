#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace curator {

struct DatasetSpec {
    std::string name;
    double weight = 0.0;                  // in (0,1]; all weights sum to 1
    std::uint64_t tokens_available = 0;   // samples on hand, for epoch figures
    double epochs = 0.0;                  // descriptive only
};

// Throws ConfigError unless weights sum to 1 within 1e-9.
void validate_weights(std::span<const DatasetSpec> specs);

// Normalizes a raw weight vector (e.g. percentages) in place so it sums to 1.
void normalize_weights(std::vector<DatasetSpec>& specs);

struct BlendState {
    std::vector<std::uint64_t> drawn;  // cumulative draws per dataset
    std::vector<double> credit;        // weight_i * total_drawn - drawn_i
    std::uint64_t step = 0;

    static BlendState create(std::size_t dataset_count);
};

// One batch of the deterministic largest-remainder scheduler. Counts are
// nonnegative, sum exactly to batch_size, and keep every |credit| below 1 at
// every step. Remainder ties break by dataset order.
std::vector<std::uint64_t> next_batch_composition(
    BlendState& state, std::span<const DatasetSpec> specs,
    std::uint64_t batch_size);

}  // namespace curator
