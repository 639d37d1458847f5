#include "curator/corpus_io.hpp"

#include <fstream>
#include <sstream>
#include <unordered_map>

#include "curator/errors.hpp"
#include "curator/hashing.hpp"
#include "curator/utf8.hpp"
#include "json.hpp"

namespace curator {

namespace {

std::uint64_t parse_doc_id(const nlohmann::json& v, const std::string& path,
                           std::size_t line_no) {
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer()) {
        const auto s = v.get<std::int64_t>();
        if (s < 0)
            throw DataError(path + ": line " + std::to_string(line_no) +
                            ": doc_id must be nonnegative");
        return static_cast<std::uint64_t>(s);
    }
    if (v.is_string()) {
        const auto& s = v.get_ref<const std::string&>();
        try {
            std::size_t pos = 0;
            const auto id = std::stoull(s, &pos, 10);
            if (pos == s.size()) return id;
        } catch (...) {
        }
        // Non-numeric string ids are hashed; stable across runs.
        return fnv1a64(s);
    }
    throw DataError(path + ": line " + std::to_string(line_no) +
                    ": doc_id must be an integer or string");
}

}  // namespace

const char* drop_reason_name(DropReason r) {
    switch (r) {
        case DropReason::kLanguage: return "language";
        case DropReason::kShort: return "short";
        case DropReason::kJavascript: return "javascript";
        case DropReason::kQuality: return "quality";
        case DropReason::kDuplicate: return "duplicate";
        case DropReason::kContamination: return "contamination";
    }
    return "unknown";
}

void CorpusStats::add_input(const std::string& dataset, std::uint64_t chars) {
    auto& d = by_dataset[dataset];
    d.input_docs += 1;
    d.input_chars += chars;
}

void CorpusStats::add_kept(const std::string& dataset, std::uint64_t chars) {
    auto& d = by_dataset[dataset];
    d.kept_docs += 1;
    d.kept_chars += chars;
}

void CorpusStats::add_drop(const std::string& dataset, DropReason reason) {
    by_dataset[dataset].drops[static_cast<int>(reason)] += 1;
}

void CorpusStats::merge(const CorpusStats& other) {
    for (const auto& [name, d] : other.by_dataset) {
        auto& m = by_dataset[name];
        m.input_docs += d.input_docs;
        m.kept_docs += d.kept_docs;
        m.input_chars += d.input_chars;
        m.kept_chars += d.kept_chars;
        for (int i = 0; i < 6; ++i) m.drops[i] += d.drops[i];
    }
}

CorpusShard ingest_shard(const std::string& path, std::uint32_t shard_index,
                         const std::string& default_dataset) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError(path + ": cannot open for reading");

    CorpusShard shard;
    shard.path = path;

    std::unordered_map<std::uint64_t, std::size_t> seen_ids;
    std::string line;
    std::size_t line_no = 0;
    std::uint64_t byte_offset = 0;

    while (std::getline(in, line)) {
        ++line_no;
        const std::uint64_t line_start = byte_offset;
        byte_offset += line.size() + 1;
        if (line.empty()) continue;

        nlohmann::json obj;
        try {
            obj = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw DataError(path + ": line " + std::to_string(line_no) +
                            " (byte offset " + std::to_string(line_start) +
                            "): " + e.what());
        }
        if (!obj.is_object())
            throw DataError(path + ": line " + std::to_string(line_no) +
                            " (byte offset " + std::to_string(line_start) +
                            "): expected a JSON object");

        Document doc;
        if (obj.contains("doc_id")) {
            doc.doc_id = parse_doc_id(obj["doc_id"], path, line_no);
        } else {
            doc.doc_id = (static_cast<std::uint64_t>(shard_index) << 32) |
                         static_cast<std::uint64_t>(line_no);
        }
        if (obj.contains("dataset")) {
            if (!obj["dataset"].is_string())
                throw DataError(path + ": line " + std::to_string(line_no) +
                                ": dataset must be a string");
            doc.dataset = obj["dataset"].get<std::string>();
        } else if (!default_dataset.empty()) {
            doc.dataset = default_dataset;
        } else {
            throw DataError(path + ": line " + std::to_string(line_no) +
                            ": missing dataset");
        }
        if (!obj.contains("text") || !obj["text"].is_string())
            throw DataError(path + ": line " + std::to_string(line_no) +
                            ": missing text");
        doc.text = obj["text"].get<std::string>();
        doc.char_count = code_point_count(doc.text);
        if (obj.contains("url") && !obj["url"].is_null()) {
            if (!obj["url"].is_string())
                throw DataError(path + ": line " + std::to_string(line_no) +
                                ": url must be a string");
            doc.url = obj["url"].get<std::string>();
        }
        if (obj.contains("score") && !obj["score"].is_null()) {
            if (!obj["score"].is_number())
                throw DataError(path + ": line " + std::to_string(line_no) +
                                ": score must be a number");
            doc.score = obj["score"].get<double>();
        }

        auto [it, inserted] = seen_ids.emplace(doc.doc_id, line_no);
        if (!inserted)
            throw DataError(path + ": duplicate doc_id " +
                            std::to_string(doc.doc_id) + " at line " +
                            std::to_string(line_no) + " (first seen at line " +
                            std::to_string(it->second) + ")");

        shard.records.push_back(std::move(doc));
    }
    return shard;
}

std::string serialize_document(const Document& doc) {
    nlohmann::ordered_json obj;
    obj["doc_id"] = doc.doc_id;
    obj["dataset"] = doc.dataset;
    if (doc.url) obj["url"] = *doc.url;
    obj["text"] = doc.text;
    if (doc.score) obj["score"] = *doc.score;
    return obj.dump();
}

void emit_shard(const CorpusShard& shard, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError(path + ": cannot open for writing");
    for (const auto& doc : shard.records) {
        out << serialize_document(doc) << '\n';
    }
    if (!out) throw DataError(path + ": write failed");
}

CorpusStats corpus_stats(std::span<const CorpusShard> shards) {
    CorpusStats stats;
    for (const auto& shard : shards) {
        for (const auto& doc : shard.records) {
            stats.add_input(doc.dataset, doc.char_count);
            stats.add_kept(doc.dataset, doc.char_count);
        }
    }
    return stats;
}

}  // namespace curator
