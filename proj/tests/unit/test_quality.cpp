#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "curator/quality.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace curator;

namespace {

// Synthetic separable corpus: positives draw from formal-register
// vocabulary, negatives from boilerplate tokens. Disjoint supports, so a
// bag-of-words linear separator exists by construction.
const std::vector<std::string> kFormal = {
    "committee", "analysis",  "literature", "hypothesis", "measurement",
    "northern",  "territory", "manuscript", "university", "observed",
    "granted",   "evidence",  "historical", "province",   "journal"};
const std::vector<std::string> kBoilerplate = {
    "click",    "subscribe", "cookies", "login",   "menu",
    "checkout", "shipping",  "browser", "enable",  "popup",
    "banner",   "redirect",  "loading", "sidebar", "footer"};

Document doc_from_vocab(const std::vector<std::string>& vocab,
                        std::mt19937_64& rng, std::uint64_t id) {
    Document doc;
    doc.doc_id = id;
    doc.dataset = "synthetic";
    const int len = 8 + static_cast<int>(rng() % 12);
    for (int i = 0; i < len; ++i) {
        if (i) doc.text += ' ';
        doc.text += vocab[rng() % vocab.size()];
    }
    doc.char_count = doc.text.size();
    return doc;
}

std::pair<std::vector<Document>, std::vector<Document>> separable_corpus(
    std::size_t per_class, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<Document> pos, neg;
    for (std::size_t i = 0; i < per_class; ++i) {
        pos.push_back(doc_from_vocab(kFormal, rng, i));
        neg.push_back(doc_from_vocab(kBoilerplate, rng, 100000 + i));
    }
    return {pos, neg};
}

}  // namespace

TEST_CASE("separable corpus trains to at least 95 percent holdout accuracy") {
    const auto [pos, neg] = separable_corpus(1000, 11);
    const auto result = train_quality_classifier(pos, neg, 0.1);
    CHECK(result.holdout_accuracy >= 0.95);

    // Scores from the returned model respect the class structure.
    std::mt19937_64 rng(99);
    for (int i = 0; i < 50; ++i) {
        const auto fresh_pos = doc_from_vocab(kFormal, rng, 7000000 + i);
        CHECK(score_document(result.model, fresh_pos) > 0.5);
    }
}

TEST_CASE("identical classes score chance accuracy") {
    const auto [pos, unused] = separable_corpus(1000, 23);
    const auto result = train_quality_classifier(pos, pos, 0.2);
    CHECK(result.holdout_accuracy == doctest::Approx(0.5).epsilon(0.1));
}

TEST_CASE("empty classes and bad holdout fractions are rejected") {
    const auto [pos, neg] = separable_corpus(10, 3);
    const std::vector<Document> empty;
    CHECK_THROWS_AS(train_quality_classifier(empty, neg, 0.1),
                    std::invalid_argument);
    CHECK_THROWS_AS(train_quality_classifier(pos, empty, 0.1),
                    std::invalid_argument);
    CHECK_THROWS_AS(train_quality_classifier(pos, neg, 0.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(train_quality_classifier(pos, neg, 1.0),
                    std::invalid_argument);
}

TEST_CASE("reported holdout accuracy is exactly recomputable") {
    const auto [pos, neg] = separable_corpus(200, 5);
    TrainOptions options;
    options.seed = 5;
    const auto first = train_quality_classifier(pos, neg, 0.25, options);
    const auto second = train_quality_classifier(pos, neg, 0.25, options);
    CHECK(first.holdout_accuracy == second.holdout_accuracy);
    CHECK(first.model.bias == second.model.bias);
    CHECK(first.model.weights == second.model.weights);

    // Rescoring the reported holdout rows with the returned model must
    // reproduce the reported accuracy exactly.
    std::size_t correct = 0, total = 0;
    for (const std::size_t row : first.holdout_positives) {
        correct += score_document(first.model, pos[row]) > 0.5 ? 1 : 0;
        ++total;
    }
    for (const std::size_t row : first.holdout_negatives) {
        correct += score_document(first.model, neg[row]) > 0.5 ? 0 : 1;
        ++total;
    }
    CHECK(static_cast<double>(correct) / static_cast<double>(total) ==
          first.holdout_accuracy);
}

TEST_CASE("empty text scores logistic of the bias") {
    const auto [pos, neg] = separable_corpus(100, 17);
    const auto result = train_quality_classifier(pos, neg, 0.2);
    Document empty;
    empty.dataset = "synthetic";
    const double expected =
        1.0 / (1.0 + std::exp(-static_cast<double>(result.model.bias)));
    CHECK(score_document(result.model, empty) ==
          doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("scores are deterministic and inside the unit interval") {
    const auto [pos, neg] = separable_corpus(100, 29);
    const auto result = train_quality_classifier(pos, neg, 0.2);
    for (const auto& doc : pos) {
        const double a = score_document(result.model, doc);
        const double b = score_document(result.model, doc);
        CHECK(a == b);
        CHECK(a >= 0.0);
        CHECK(a <= 1.0);
    }
}

TEST_CASE("model file round trips bit for bit") {
    TempDir dir("qmodel");
    const auto [pos, neg] = separable_corpus(50, 31);
    const auto result = train_quality_classifier(pos, neg, 0.2);
    save_quality_model(result.model, dir.file("model.bin"));
    const auto loaded = load_quality_model(dir.file("model.bin"));
    CHECK(loaded.bias == result.model.bias);
    CHECK(loaded.feature_hash_seed == result.model.feature_hash_seed);
    CHECK(loaded.weights == result.model.weights);
}

TEST_CASE("pareto keeps every score-1.0 document") {
    const ParetoFilterParams params{3.0, 42};
    for (std::uint64_t id = 0; id < 100000; ++id) {
        if (!pareto_keep(1.0, params, id)) {
            FAIL("score-1.0 doc ", id, " was dropped");
        }
    }
}

TEST_CASE("pareto keep rate at score zero is one eighth") {
    const ParetoFilterParams params{3.0, 7};
    std::uint64_t kept = 0;
    const std::uint64_t n = 100000;
    for (std::uint64_t id = 0; id < n; ++id) {
        if (pareto_keep(0.0, params, id)) ++kept;
    }
    const double rate = static_cast<double>(kept) / static_cast<double>(n);
    CHECK(rate == doctest::Approx(0.125).epsilon(0.08));  // ±0.01 absolute
    CHECK(std::abs(rate - 0.125) < 0.01);
}

TEST_CASE("pareto keep rate over uniform scores is three eighths") {
    const ParetoFilterParams params{3.0, 1234};
    std::uint64_t kept = 0;
    const std::uint64_t n = 100000;
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    for (std::uint64_t id = 0; id < n; ++id) {
        if (pareto_keep(uniform(rng), params, id)) ++kept;
    }
    const double rate = static_cast<double>(kept) / static_cast<double>(n);
    CHECK(std::abs(rate - 0.375) < 0.01);
}

TEST_CASE("pareto keep probability is monotone in score") {
    const ParetoFilterParams params{3.0, 99};
    const std::uint64_t n = 100000;
    double previous = -1.0;
    for (double score = 0.0; score <= 1.0001; score += 0.1) {
        const double s = std::min(score, 1.0);
        std::uint64_t kept = 0;
        for (std::uint64_t id = 0; id < n; ++id) {
            if (pareto_keep(s, params, id)) ++kept;
        }
        const double rate = static_cast<double>(kept) / static_cast<double>(n);
        CHECK(rate >= previous);
        previous = rate;
    }
}

TEST_CASE("pareto keep is deterministic per seed and doc id") {
    const ParetoFilterParams params{3.0, 555};
    for (std::uint64_t id = 0; id < 1000; ++id) {
        CHECK(pareto_keep(0.4, params, id) == pareto_keep(0.4, params, id));
    }
}

TEST_CASE("scores outside the unit interval are rejected") {
    const ParetoFilterParams params{3.0, 0};
    CHECK_THROWS_AS(pareto_keep(-0.01, params, 1), std::invalid_argument);
    CHECK_THROWS_AS(pareto_keep(1.01, params, 1), std::invalid_argument);
}
