#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "curator/document.hpp"

namespace curator {

// Corpus files are newline-delimited UTF-8 JSON objects, one document per
// line, LF line endings. Keys: doc_id (integer or decimal string; assigned
// when absent), dataset (string, required unless a default is supplied),
// text (string), url (optional), score (optional number).
//
// Documents missing a doc_id are assigned (shard_index << 32) | line_number
// so identity is stable across re-runs.
CorpusShard ingest_shard(const std::string& path,
                         std::uint32_t shard_index = 0,
                         const std::string& default_dataset = "");

// Inverse of ingest_shard: ingest(emit(s)) reproduces s field-for-field.
// Output is byte-deterministic for a given shard.
void emit_shard(const CorpusShard& shard, const std::string& path);

std::string serialize_document(const Document& doc);

CorpusStats corpus_stats(std::span<const CorpusShard> shards);

}  // namespace curator
