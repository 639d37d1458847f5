#include "curator/blending.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "curator/errors.hpp"

namespace curator {

void validate_weights(std::span<const DatasetSpec> specs) {
    if (specs.empty()) throw ConfigError("no datasets configured");
    double sum = 0.0;
    for (const auto& s : specs) {
        if (!(s.weight > 0.0 && s.weight <= 1.0))
            throw ConfigError("dataset \"" + s.name +
                              "\" weight must be in (0,1]");
        sum += s.weight;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw ConfigError("dataset weights sum to " + std::to_string(sum) +
                          ", expected 1");
}

void normalize_weights(std::vector<DatasetSpec>& specs) {
    double sum = 0.0;
    for (const auto& s : specs) sum += s.weight;
    if (sum <= 0.0) throw ConfigError("dataset weights must be positive");
    for (auto& s : specs) s.weight /= sum;
}

BlendState BlendState::create(std::size_t dataset_count) {
    BlendState state;
    state.drawn.assign(dataset_count, 0);
    state.credit.assign(dataset_count, 0.0);
    return state;
}

std::vector<std::uint64_t> next_batch_composition(
    BlendState& state, std::span<const DatasetSpec> specs,
    std::uint64_t batch_size) {
    validate_weights(specs);
    if (batch_size < 1) throw std::invalid_argument("batch_size must be >= 1");
    if (state.drawn.size() != specs.size() ||
        state.credit.size() != specs.size())
        throw std::invalid_argument("state size does not match specs");

    const std::size_t n = specs.size();
    // Quota per dataset this step: carried credit plus the ideal share.
    std::vector<double> quota(n);
    std::vector<std::uint64_t> counts(n);
    std::int64_t assigned = 0;
    for (std::size_t i = 0; i < n; ++i) {
        quota[i] = state.credit[i] +
                   specs[i].weight * static_cast<double>(batch_size);
        const double f = std::floor(quota[i]);
        counts[i] = f > 0.0 ? static_cast<std::uint64_t>(f) : 0;
        assigned += static_cast<std::int64_t>(counts[i]);
    }

    std::int64_t remainder = static_cast<std::int64_t>(batch_size) - assigned;
    // Largest remainder first; ties break by dataset order.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) {
                         const double ra =
                             quota[a] - static_cast<double>(counts[a]);
                         const double rb =
                             quota[b] - static_cast<double>(counts[b]);
                         return ra > rb;
                     });
    for (std::size_t k = 0; remainder > 0 && k < n; ++k) {
        counts[order[k]] += 1;
        --remainder;
    }
    // Degenerate configurations (quotas below zero from carried credit)
    // could overshoot; take back from the smallest remainders.
    for (std::size_t k = n; remainder < 0 && k > 0; --k) {
        auto& c = counts[order[k - 1]];
        if (c > 0) {
            c -= 1;
            ++remainder;
        }
    }

    state.step += 1;
    for (std::size_t i = 0; i < n; ++i) {
        state.drawn[i] += counts[i];
        state.credit[i] = quota[i] - static_cast<double>(counts[i]);
    }
    return counts;
}

}  // namespace curator
