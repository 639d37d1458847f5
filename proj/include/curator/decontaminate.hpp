#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

namespace curator {

// Hashed n-gram index over downstream-task text. Grams are sliding windows
// of n normalized tokens (lowercase, punctuation stripped, whitespace
// collapsed), hashed with length-prefixed FNV-1a.
struct TaskNgramIndex {
    int n = 13;
    std::string task_name;
    std::unordered_set<std::uint64_t> grams;
};

TaskNgramIndex build_task_ngram_index(std::span<const std::string> task_docs,
                                      int n,
                                      const std::string& task_name = "");

inline TaskNgramIndex build_task_ngram_index(
    std::initializer_list<std::string> task_docs, int n,
    const std::string& task_name = "") {
    const std::vector<std::string> docs(task_docs);
    return build_task_ngram_index(std::span<const std::string>(docs), n,
                                  task_name);
}

struct SplitOutcome {
    std::vector<std::string> fragments;  // kept spans, in document order
    int splits = 0;        // merged removal intervals found
    bool removed = false;  // whole document removed (> 10 splits)
    int trim_events = 0;   // removal intervals clamped at a document end
};

// Scans the document with a rolling token window against the index. Every
// match removes the matched span plus 200 characters on both sides (clamped
// to the document; a clamp counts as a trim event). Overlapping removal
// intervals merge into one split. Fragments shorter than 200 characters are
// dropped; documents with more than 10 splits are removed outright.
// Character counts are code points of the original text.
SplitOutcome split_document(std::string_view text, const TaskNgramIndex& index);

// Same cut rules with matches gathered across several indexes at once.
SplitOutcome split_document(std::string_view text,
                            std::span<const TaskNgramIndex> indexes);

}  // namespace curator
