#include "curator/lang_detect.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <unordered_set>

#include "curator/errors.hpp"
#include "curator/hashing.hpp"
#include "curator/utf8.hpp"

namespace curator {

namespace {

constexpr char kMagic[4] = {'C', 'T', 'L', 'M'};
constexpr std::uint32_t kVersion = 1;

// Normalized code points for trigram extraction: ASCII lowercased, anything
// that is neither a letter-ish code point nor a digit becomes a space, and
// space runs collapse. The result is padded with one leading and trailing
// space so word boundaries contribute trigrams.
std::u32string normalize_for_trigrams(std::string_view text) {
    const std::u32string in = decode_utf8(text);
    std::u32string out;
    out.reserve(in.size() + 2);
    out.push_back(U' ');
    for (char32_t cp : in) {
        char32_t c = cp;
        if (c >= U'A' && c <= U'Z') c = c - U'A' + U'a';
        const bool wordish =
            (c >= U'a' && c <= U'z') || (c >= U'0' && c <= U'9') || c >= 0x80;
        if (!wordish) c = U' ';
        if (c == U' ' && out.back() == U' ') continue;
        out.push_back(c);
    }
    if (out.back() != U' ') out.push_back(U' ');
    return out;
}

std::vector<std::uint64_t> trigram_hashes(std::string_view text) {
    const std::u32string norm = normalize_for_trigrams(text);
    std::vector<std::uint64_t> grams;
    if (norm.size() < 3) return grams;
    grams.reserve(norm.size() - 2);
    for (std::size_t i = 0; i + 3 <= norm.size(); ++i) {
        std::string bytes;
        append_code_point(bytes, norm[i]);
        append_code_point(bytes, norm[i + 1]);
        append_code_point(bytes, norm[i + 2]);
        grams.push_back(fnv1a64(bytes));
    }
    return grams;
}

template <typename T>
void write_le(std::ofstream& out, T v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

template <typename T>
T read_le(std::ifstream& in, const std::string& path) {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof(v));
    if (!in) throw DataError(path + ": truncated language model file");
    return v;
}

}  // namespace

TrigramLanguageModel::LangTable& TrigramLanguageModel::table_for(
    const std::string& language) {
    for (auto& t : languages_) {
        if (t.language == language) return t;
    }
    languages_.push_back(LangTable{language, {}, 0});
    return languages_.back();
}

void TrigramLanguageModel::add_training_text(const std::string& language,
                                             std::string_view text) {
    auto& table = table_for(language);
    for (std::uint64_t g : trigram_hashes(text)) {
        table.counts[g] += 1;
        table.total += 1;
    }
    distinct_cache_ = 0;
}

std::size_t TrigramLanguageModel::distinct_trigrams() const {
    if (distinct_cache_ != 0) return distinct_cache_;
    std::unordered_set<std::uint64_t> seen;
    for (const auto& t : languages_) {
        for (const auto& [g, c] : t.counts) seen.insert(g);
    }
    distinct_cache_ = seen.size();
    return distinct_cache_;
}

LanguageVerdict TrigramLanguageModel::detect(std::string_view text) const {
    LanguageVerdict verdict;
    if (languages_.empty()) return verdict;

    const auto grams = trigram_hashes(text);
    if (grams.empty()) return verdict;

    const double vocab = static_cast<double>(std::max<std::size_t>(
        distinct_trigrams(), 1));

    // Total log-likelihood per language with add-one smoothing, then a
    // softmax posterior under a uniform prior.
    std::vector<double> ll(languages_.size(), 0.0);
    for (std::size_t k = 0; k < languages_.size(); ++k) {
        const auto& t = languages_[k];
        const double denom = static_cast<double>(t.total) + vocab;
        for (std::uint64_t g : grams) {
            const auto it = t.counts.find(g);
            const double count = it == t.counts.end()
                                     ? 0.0
                                     : static_cast<double>(it->second);
            ll[k] += std::log((count + 1.0) / denom);
        }
    }

    std::size_t best = 0;
    for (std::size_t k = 1; k < languages_.size(); ++k) {
        if (ll[k] > ll[best]) best = k;
    }
    double sum = 0.0;
    for (double v : ll) sum += std::exp(v - ll[best]);
    verdict.language = languages_[best].language;
    verdict.confidence = 1.0 / sum;

    if (code_point_count(text) < 20) verdict.confidence = 0.0;
    return verdict;
}

void TrigramLanguageModel::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError(path + ": cannot open for writing");
    out.write(kMagic, 4);
    write_le(out, kVersion);
    write_le(out, static_cast<std::uint32_t>(languages_.size()));
    for (const auto& t : languages_) {
        write_le(out, static_cast<std::uint8_t>(t.language.size()));
        out.write(t.language.data(),
                  static_cast<std::streamsize>(t.language.size()));
        write_le(out, t.total);
        write_le(out, static_cast<std::uint32_t>(t.counts.size()));
        std::vector<std::pair<std::uint64_t, std::uint32_t>> entries(
            t.counts.begin(), t.counts.end());
        std::sort(entries.begin(), entries.end());
        for (const auto& [g, c] : entries) {
            write_le(out, g);
            write_le(out, c);
        }
    }
    if (!out) throw DataError(path + ": write failed");
}

TrigramLanguageModel TrigramLanguageModel::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError(path + ": cannot open for reading");
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0)
        throw DataError(path + ": not a language model file (bad magic)");
    const auto version = read_le<std::uint32_t>(in, path);
    if (version != kVersion)
        throw DataError(path + ": unsupported language model version " +
                        std::to_string(version));
    const auto lang_count = read_le<std::uint32_t>(in, path);
    TrigramLanguageModel model;
    for (std::uint32_t i = 0; i < lang_count; ++i) {
        const auto name_len = read_le<std::uint8_t>(in, path);
        std::string name(name_len, '\0');
        in.read(name.data(), name_len);
        if (!in) throw DataError(path + ": truncated language model file");
        LangTable table;
        table.language = name;
        table.total = read_le<std::uint64_t>(in, path);
        const auto n = read_le<std::uint32_t>(in, path);
        table.counts.reserve(n);
        for (std::uint32_t k = 0; k < n; ++k) {
            const auto g = read_le<std::uint64_t>(in, path);
            const auto c = read_le<std::uint32_t>(in, path);
            table.counts.emplace(g, c);
        }
        model.languages_.push_back(std::move(table));
    }
    return model;
}

const TrigramLanguageModel& TrigramLanguageModel::bundled() {
    static const TrigramLanguageModel* model = [] {
        auto* m = new TrigramLanguageModel;
        for (const auto& [lang, text] : bundled_language_seed_corpus()) {
            m->add_training_text(lang, text);
        }
        return m;
    }();
    return *model;
}

}  // namespace curator
