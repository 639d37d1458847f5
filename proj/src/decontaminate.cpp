#include "curator/decontaminate.hpp"

#include <algorithm>
#include <stdexcept>

#include "curator/features.hpp"
#include "curator/hashing.hpp"
#include "curator/utf8.hpp"

namespace curator {

namespace {

constexpr std::int64_t kContextChars = 200;
constexpr std::int64_t kMinFragmentChars = 200;
constexpr int kMaxSplits = 10;

std::uint64_t gram_hash(std::span<const Token> tokens, std::size_t first,
                        int n) {
    std::uint64_t h = kFnvOffsetBasis;
    for (int k = 0; k < n; ++k) {
        const auto& norm = tokens[first + static_cast<std::size_t>(k)].norm;
        h = fnv1a64_u32(static_cast<std::uint32_t>(norm.size()), h);
        h = fnv1a64(norm, h);
    }
    return h;
}

}  // namespace

TaskNgramIndex build_task_ngram_index(std::span<const std::string> task_docs,
                                      int n, const std::string& task_name) {
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    TaskNgramIndex index;
    index.n = n;
    index.task_name = task_name;
    for (const auto& doc : task_docs) {
        const auto tokens = tokenize(doc);
        if (tokens.size() < static_cast<std::size_t>(n)) continue;
        for (std::size_t i = 0; i + static_cast<std::size_t>(n) <= tokens.size();
             ++i) {
            index.grams.insert(gram_hash(tokens, i, n));
        }
    }
    return index;
}

SplitOutcome split_document(std::string_view text,
                            std::span<const TaskNgramIndex> indexes) {
    SplitOutcome outcome;
    const auto tokens = tokenize(text);
    const std::int64_t doc_len =
        static_cast<std::int64_t>(code_point_count(text));

    // Raw removal intervals in code points, unclamped.
    struct Interval {
        std::int64_t begin;
        std::int64_t end;
    };
    std::vector<Interval> raw;
    for (const auto& index : indexes) {
        const auto n = static_cast<std::size_t>(index.n);
        if (index.grams.empty() || tokens.size() < n) continue;
        for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
            if (!index.grams.contains(gram_hash(tokens, i, index.n))) continue;
            const auto match_begin =
                static_cast<std::int64_t>(tokens[i].begin_cp);
            const auto match_end =
                static_cast<std::int64_t>(tokens[i + n - 1].end_cp);
            raw.push_back(
                {match_begin - kContextChars, match_end + kContextChars});
        }
    }

    if (raw.empty()) {
        outcome.fragments.emplace_back(text);
        return outcome;
    }

    std::sort(raw.begin(), raw.end(), [](const Interval& a, const Interval& b) {
        return a.begin != b.begin ? a.begin < b.begin : a.end < b.end;
    });
    std::vector<Interval> merged;
    for (const auto& iv : raw) {
        if (!merged.empty() && iv.begin <= merged.back().end) {
            merged.back().end = std::max(merged.back().end, iv.end);
        } else {
            merged.push_back(iv);
        }
    }

    outcome.splits = static_cast<int>(merged.size());
    if (merged.front().begin < 0) ++outcome.trim_events;
    if (merged.back().end > doc_len) ++outcome.trim_events;

    if (outcome.splits > kMaxSplits) {
        outcome.removed = true;
        return outcome;
    }

    // Complement spans, clamped, keeping only fragments of >= 200 chars.
    std::int64_t cursor = 0;
    const auto keep_span = [&](std::int64_t begin, std::int64_t end) {
        if (end - begin < kMinFragmentChars) return;
        outcome.fragments.push_back(substr_code_points(
            text, static_cast<std::size_t>(begin),
            static_cast<std::size_t>(end)));
    };
    for (const auto& iv : merged) {
        const std::int64_t clamped_begin = std::max<std::int64_t>(iv.begin, 0);
        keep_span(cursor, clamped_begin);
        cursor = std::min(std::max(iv.end, cursor), doc_len);
    }
    keep_span(cursor, doc_len);
    return outcome;
}

SplitOutcome split_document(std::string_view text,
                            const TaskNgramIndex& index) {
    return split_document(text, std::span<const TaskNgramIndex>(&index, 1));
}

}  // namespace curator
