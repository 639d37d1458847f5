#include "curator/quality.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "curator/errors.hpp"
#include "curator/hashing.hpp"

namespace curator {

namespace {

constexpr char kMagic[4] = {'C', 'Q', 'M', 'F'};
constexpr std::uint32_t kVersion = 1;

double logistic(double z) { return 1.0 / (1.0 + std::exp(-z)); }

std::uint32_t hash_feature(std::uint64_t seed, std::string_view bytes) {
    return static_cast<std::uint32_t>(mix64(seed, fnv1a64(bytes)) %
                                      kFeatureSpace);
}

double raw_score(const std::vector<float>& weights, double bias,
                 const FeatureSet& features) {
    double z = bias;
    for (std::uint32_t id : features.ids) z += weights[id];
    return logistic(z);
}

// Deterministic in-place Fisher-Yates driven by a splitmix64 stream.
void seeded_shuffle(std::vector<std::uint32_t>& v, std::uint64_t seed) {
    for (std::size_t i = v.size(); i > 1; --i) {
        const std::uint64_t r = mix64(seed, i);
        std::swap(v[i - 1], v[r % i]);
    }
}

}  // namespace

FeatureSet quality_features(std::string_view text, std::uint64_t hash_seed) {
    const auto tokens = tokenize(text);
    FeatureSet set;
    set.ids.reserve(tokens.size() * 2);
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        set.ids.push_back(hash_feature(hash_seed, tokens[i].norm));
        if (i + 1 < tokens.size()) {
            std::string bigram = tokens[i].norm;
            bigram.push_back('\x1f');
            bigram += tokens[i + 1].norm;
            set.ids.push_back(hash_feature(hash_seed, bigram));
        }
    }
    std::sort(set.ids.begin(), set.ids.end());
    set.ids.erase(std::unique(set.ids.begin(), set.ids.end()), set.ids.end());
    return set;
}

TrainResult train_quality_classifier(std::span<const Document> positives,
                                     std::span<const Document> negatives,
                                     double holdout_fraction,
                                     const TrainOptions& options) {
    if (positives.empty()) throw std::invalid_argument("empty positive class");
    if (negatives.empty()) throw std::invalid_argument("empty negative class");
    if (!(holdout_fraction > 0.0 && holdout_fraction < 1.0))
        throw std::invalid_argument("holdout_fraction must be in (0,1)");

    struct Example {
        FeatureSet features;
        float label;
    };

    const std::uint64_t hash_seed = options.seed;
    std::vector<Example> train, holdout;
    TrainResult result;

    // One shuffle stream for both classes keeps the split stratified and
    // makes identical classes land in identical holdout rows, so
    // indistinguishable inputs measure exactly chance.
    const auto split_class = [&](std::span<const Document> docs, float label,
                                 std::vector<std::size_t>& holdout_rows) {
        std::vector<std::uint32_t> order(docs.size());
        for (std::uint32_t i = 0; i < order.size(); ++i) order[i] = i;
        seeded_shuffle(order, mix64(options.seed, 0x5eedu));
        auto n_holdout = static_cast<std::size_t>(
            std::floor(static_cast<double>(docs.size()) * holdout_fraction));
        n_holdout = std::max<std::size_t>(n_holdout, 1);
        if (n_holdout >= docs.size())
            throw std::invalid_argument(
                "class too small for the requested holdout fraction");
        for (std::size_t i = 0; i < order.size(); ++i) {
            Example ex{quality_features(docs[order[i]].text, hash_seed),
                       label};
            if (i < n_holdout) {
                holdout.push_back(std::move(ex));
                holdout_rows.push_back(order[i]);
            } else {
                train.push_back(std::move(ex));
            }
        }
    };
    split_class(positives, 1.0f, result.holdout_positives);
    split_class(negatives, 0.0f, result.holdout_negatives);

    // ASGD with the lazy-average trick: u accumulates (t-1)*delta so the
    // average of all iterates is w - u/T without touching the dense vector
    // per step.
    std::vector<double> w(kFeatureSpace, 0.0);
    std::vector<double> u(kFeatureSpace, 0.0);
    double bias = 0.0, bias_u = 0.0;
    std::uint64_t t = 0;

    std::vector<std::uint32_t> order(train.size());
    for (std::uint32_t i = 0; i < order.size(); ++i) order[i] = i;

    for (int epoch = 0; epoch < options.epochs; ++epoch) {
        seeded_shuffle(order, mix64(options.seed, 1000 + epoch));
        for (std::uint32_t idx : order) {
            const auto& ex = train[idx];
            ++t;
            double z = bias;
            for (std::uint32_t id : ex.features.ids) z += w[id];
            const double grad = logistic(z) - ex.label;
            const double step = options.learning_rate * grad;
            for (std::uint32_t id : ex.features.ids) {
                w[id] -= step;
                u[id] -= static_cast<double>(t - 1) * step;
            }
            bias -= step;
            bias_u -= static_cast<double>(t - 1) * step;
        }
    }

    result.model.weights.resize(kFeatureSpace);
    const double steps = std::max<double>(static_cast<double>(t), 1.0);
    for (std::size_t i = 0; i < kFeatureSpace; ++i) {
        result.model.weights[i] = static_cast<float>(w[i] - u[i] / steps);
    }
    result.model.bias = static_cast<float>(bias - bias_u / steps);
    result.model.feature_hash_seed = hash_seed;

    std::size_t correct = 0;
    for (const auto& ex : holdout) {
        const double p = raw_score(result.model.weights, result.model.bias,
                                   ex.features);
        const bool predicted_positive = p > 0.5;
        if (predicted_positive == (ex.label > 0.5f)) ++correct;
    }
    result.holdout_accuracy =
        static_cast<double>(correct) / static_cast<double>(holdout.size());
    return result;
}

double score_text(const QualityModel& model, std::string_view text) {
    if (model.weights.size() != kFeatureSpace)
        throw std::invalid_argument("quality model is not trained or loaded");
    return raw_score(model.weights, model.bias,
                     quality_features(text, model.feature_hash_seed));
}

double score_document(const QualityModel& model, const Document& doc) {
    return score_text(model, doc.text);
}

bool pareto_keep(double score, const ParetoFilterParams& params,
                 std::uint64_t doc_id) {
    if (!(score >= 0.0 && score <= 1.0))
        throw std::invalid_argument("score outside [0,1]");
    const double u = uniform_unit(mix64(params.rng_seed, doc_id));
    const double draw = std::pow(1.0 - u, -1.0 / params.alpha) - 1.0;
    return draw > 1.0 - score;
}

void save_quality_model(const QualityModel& model, const std::string& path) {
    if (model.weights.size() != kFeatureSpace)
        throw std::invalid_argument("model weight vector has wrong length");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError(path + ": cannot open for writing");
    out.write(kMagic, 4);
    out.write(reinterpret_cast<const char*>(&kVersion), 4);
    out.write(reinterpret_cast<const char*>(&model.feature_hash_seed), 8);
    out.write(reinterpret_cast<const char*>(&model.bias), 4);
    out.write(reinterpret_cast<const char*>(model.weights.data()),
              static_cast<std::streamsize>(model.weights.size() * 4));
    if (!out) throw DataError(path + ": write failed");
}

QualityModel load_quality_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError(path + ": cannot open for reading");
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0)
        throw DataError(path + ": not a quality model file (bad magic)");
    std::uint32_t version = 0;
    in.read(reinterpret_cast<char*>(&version), 4);
    if (!in || version != kVersion)
        throw DataError(path + ": unsupported quality model version");
    QualityModel model;
    in.read(reinterpret_cast<char*>(&model.feature_hash_seed), 8);
    in.read(reinterpret_cast<char*>(&model.bias), 4);
    model.weights.resize(kFeatureSpace);
    in.read(reinterpret_cast<char*>(model.weights.data()),
            static_cast<std::streamsize>(model.weights.size() * 4));
    if (!in) throw DataError(path + ": truncated quality model file");
    return model;
}

}  // namespace curator
