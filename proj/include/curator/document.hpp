#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace curator {

// One corpus record. char_count is the code-point length of text and is
// recomputed whenever text changes; it is never read from disk.
struct Document {
    std::uint64_t doc_id = 0;
    std::string dataset;
    std::optional<std::string> url;
    std::string text;
    std::uint64_t char_count = 0;
    std::optional<double> score;

    bool operator==(const Document&) const = default;
};

struct CorpusShard {
    std::string path;
    std::vector<Document> records;
};

// Why a document was dropped. Stage reports key drop counts by these names.
enum class DropReason {
    kLanguage,
    kShort,
    kJavascript,
    kQuality,
    kDuplicate,
    kContamination,
};

const char* drop_reason_name(DropReason r);

struct DatasetStats {
    std::uint64_t input_docs = 0;
    std::uint64_t kept_docs = 0;
    std::uint64_t input_chars = 0;
    std::uint64_t kept_chars = 0;
    // Indexed by DropReason order: language, short, javascript, quality,
    // duplicate, contamination.
    std::uint64_t drops[6] = {0, 0, 0, 0, 0, 0};

    std::uint64_t dropped_total() const {
        std::uint64_t t = 0;
        for (auto d : drops) t += d;
        return t;
    }
};

// Per-dataset counters. Invariant: input_docs == kept_docs + dropped_total()
// for every dataset once a stage has accounted for all of its input.
struct CorpusStats {
    std::map<std::string, DatasetStats> by_dataset;

    void add_input(const std::string& dataset, std::uint64_t chars);
    void add_kept(const std::string& dataset, std::uint64_t chars);
    void add_drop(const std::string& dataset, DropReason reason);
    void merge(const CorpusStats& other);
};

}  // namespace curator
