#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "curator/document.hpp"
#include "curator/features.hpp"

namespace curator {

// Hashed bag-of-ngrams logistic regression over 1-gram and 2-gram token
// features. The weight vector length is exactly kFeatureSpace (1,048,576).
struct QualityModel {
    std::vector<float> weights;
    float bias = 0.0f;
    std::uint64_t feature_hash_seed = 0;
};

struct TrainOptions {
    std::uint64_t seed = 0;
    int epochs = 10;
    double learning_rate = 0.1;
};

struct TrainResult {
    QualityModel model;
    double holdout_accuracy = 0.0;
    // Held-out rows, as indexes into the input spans, so the reported
    // accuracy can be audited against the returned model.
    std::vector<std::size_t> holdout_positives;
    std::vector<std::size_t> holdout_negatives;
};

// Unigram+bigram presence features for the classifier, hashed with the
// model's seed.
FeatureSet quality_features(std::string_view text, std::uint64_t hash_seed);

// Averaged stochastic gradient descent on the logistic objective. The
// holdout split is seeded and stratified; accuracy is computed with the
// returned (averaged) model via score_document, so recomputing it from the
// result reproduces the reported number exactly.
TrainResult train_quality_classifier(std::span<const Document> positives,
                                     std::span<const Document> negatives,
                                     double holdout_fraction,
                                     const TrainOptions& options = {});

// Probability of the positive label, in [0,1]. Empty text scores
// logistic(bias).
double score_document(const QualityModel& model, const Document& doc);
double score_text(const QualityModel& model, std::string_view text);

struct ParetoFilterParams {
    double alpha = 3.0;
    std::uint64_t rng_seed = 0;
};

// Keep decision for one scored document: draws x from the Lomax (Pareto
// type II, scale 1) distribution with shape alpha, using a counter-based
// generator keyed by (rng_seed, doc_id), and keeps iff x > 1 - score.
// Deterministic per (seed, doc_id); P(keep) = (2 - score)^(-alpha).
bool pareto_keep(double score, const ParetoFilterParams& params,
                 std::uint64_t doc_id);

// Versioned binary model file: magic "CQMF", u32 version, u64 seed,
// f32 bias, then kFeatureSpace little-endian f32 weights.
void save_quality_model(const QualityModel& model, const std::string& path);
QualityModel load_quality_model(const std::string& path);

}  // namespace curator
