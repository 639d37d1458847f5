#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace curator {

struct LanguageVerdict {
    std::string language = "und";  // ISO-639-1, "und" when undecidable
    double confidence = 0.0;       // posterior of the winning language
};

// Character-trigram frequency detector. The default instance is built from a
// small bundled multilingual seed corpus; production callers can train their
// own or plug in an external detector at the pipeline level.
//
// Detection is deterministic for fixed model data. Texts shorter than 20
// code points yield confidence 0 (the caller decides what to do with them).
class TrigramLanguageModel {
public:
    void add_training_text(const std::string& language, std::string_view text);

    LanguageVerdict detect(std::string_view text) const;

    // Versioned binary table: magic "CTLM", u32 version, u32 language count,
    // then per language: u8 name length, name bytes, u64 total count,
    // u32 entry count, entries of (u64 trigram hash, u32 count). All integers
    // little-endian; entries sorted by hash.
    void save(const std::string& path) const;
    static TrigramLanguageModel load(const std::string& path);

    // Model trained on the bundled seed corpus.
    static const TrigramLanguageModel& bundled();

    std::size_t language_count() const { return languages_.size(); }

private:
    struct LangTable {
        std::string language;
        std::unordered_map<std::uint64_t, std::uint32_t> counts;
        std::uint64_t total = 0;
    };
    std::vector<LangTable> languages_;
    mutable std::size_t distinct_cache_ = 0;

    LangTable& table_for(const std::string& language);
    std::size_t distinct_trigrams() const;
};

// Bundled seed corpus: language code -> newline-separated seed sentences.
const std::vector<std::pair<std::string, std::string_view>>&
bundled_language_seed_corpus();

}  // namespace curator
