#include "curator/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <thread>

#include "curator/blending.hpp"
#include "curator/cleanup_rules.hpp"
#include "curator/decontaminate.hpp"
#include "curator/dedup.hpp"
#include "curator/errors.hpp"
#include "curator/hashing.hpp"
#include "curator/lang_detect.hpp"
#include "curator/quality.hpp"
#include "curator/text_fix.hpp"
#include "curator/utf8.hpp"
#include "json.hpp"

namespace fs = std::filesystem;

namespace curator {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

const std::set<std::string> kCorpusStages = {
    "clean", "score", "quality_filter", "dedup", "decontaminate"};

// fn(i) over [0, n), with the caller's thread joining in. The work is
// index-sharded so output slots never contend; first exception wins.
template <typename Fn>
void parallel_for(std::size_t n, int jobs, Fn&& fn) {
    jobs = std::max(1, jobs);
    if (jobs == 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n || failed.load()) return;
            try {
                fn(i);
            } catch (...) {
                std::scoped_lock lock(error_mutex);
                if (!failed.exchange(true)) error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> threads;
    const int extra = std::min<int>(jobs - 1, static_cast<int>(n) - 1);
    threads.reserve(static_cast<std::size_t>(extra));
    for (int t = 0; t < extra; ++t) threads.emplace_back(worker);
    worker();
    for (auto& t : threads) t.join();
    if (error) std::rethrow_exception(error);
}

std::string sanitize_name(const std::string& name) {
    std::string out;
    out.reserve(name.size());
    for (char c : name) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                        (c >= '0' && c <= '9') || c == '-' || c == '_';
        out.push_back(ok ? c : '_');
    }
    return out.empty() ? "dataset" : out;
}

fs::path resolve_path(const PipelineConfig& cfg, const std::string& p) {
    fs::path path(p);
    if (path.is_absolute() || cfg.config_dir.empty()) return path;
    return fs::path(cfg.config_dir) / path;
}

fs::path stage_dir(const PipelineConfig& cfg, const std::string& stage) {
    return resolve_path(cfg, cfg.work_dir) / stage;
}

struct ShardRef {
    std::string dataset;
    std::string file;  // relative to the stage directory
};

struct Manifest {
    std::string stage;
    std::vector<ShardRef> shards;
    bool has_report = true;
};

void write_manifest(const fs::path& dir, const Manifest& manifest) {
    ordered_json j;
    j["stage"] = manifest.stage;
    j["shards"] = json::array();
    for (const auto& s : manifest.shards) {
        j["shards"].push_back({{"dataset", s.dataset}, {"file", s.file}});
    }
    j["report"] = "report.json";
    std::ofstream out(dir / "manifest.json", std::ios::binary);
    if (!out) throw DataError((dir / "manifest.json").string() +
                              ": cannot open for writing");
    out << j.dump(2) << '\n';
}

std::optional<Manifest> read_manifest(const fs::path& dir) {
    std::ifstream in(dir / "manifest.json", std::ios::binary);
    if (!in) return std::nullopt;
    json j;
    try {
        in >> j;
    } catch (const json::exception&) {
        return std::nullopt;
    }
    Manifest m;
    m.stage = j.value("stage", "");
    for (const auto& s : j["shards"]) {
        m.shards.push_back({s.at("dataset").get<std::string>(),
                            s.at("file").get<std::string>()});
    }
    return m;
}

bool stage_complete(const PipelineConfig& cfg, const std::string& stage) {
    const fs::path dir = stage_dir(cfg, stage);
    const auto manifest = read_manifest(dir);
    if (!manifest) return false;
    if (!fs::exists(dir / "report.json")) return false;
    for (const auto& s : manifest->shards) {
        if (!fs::exists(dir / s.file)) return false;
    }
    return true;
}

// The stage whose outputs feed `stage`: the nearest preceding corpus stage
// in the configured list, or nothing (raw inputs) when there is none.
std::optional<std::string> predecessor_stage(const PipelineConfig& cfg,
                                             const std::string& stage) {
    std::optional<std::string> prev;
    for (const auto& s : cfg.stages) {
        if (s == stage) return prev;
        if (kCorpusStages.contains(s)) prev = s;
    }
    return prev;
}

void check_corpus_ids_unique(const std::vector<CorpusShard>& shards) {
    std::unordered_map<std::uint64_t, const std::string*> seen;
    for (const auto& shard : shards) {
        for (const auto& doc : shard.records) {
            const auto [it, inserted] = seen.emplace(doc.doc_id, &shard.path);
            if (!inserted)
                throw DataError("doc_id " + std::to_string(doc.doc_id) +
                                " appears in both " + *it->second + " and " +
                                shard.path);
        }
    }
}

// Shards plus the dataset each one belongs to, so shard identity survives
// stages that empty a shard.
struct StageInputs {
    std::vector<CorpusShard> shards;
    std::vector<std::string> datasets;
};

StageInputs load_stage_inputs(const PipelineConfig& cfg,
                              const std::string& stage) {
    StageInputs in;
    const auto prev = predecessor_stage(cfg, stage);
    if (!prev) {
        std::uint32_t shard_index = 0;
        for (const auto& ds : cfg.datasets) {
            for (const auto& p : ds.paths) {
                auto shard = ingest_shard(resolve_path(cfg, p).string(),
                                          shard_index++, ds.name);
                // Dataset names must come from the configured list.
                for (const auto& doc : shard.records) {
                    if (doc.dataset != ds.name)
                        throw DataError(
                            shard.path + ": doc " +
                            std::to_string(doc.doc_id) + " claims dataset \"" +
                            doc.dataset + "\" but the file is configured as \"" +
                            ds.name + "\"");
                }
                in.shards.push_back(std::move(shard));
                in.datasets.push_back(ds.name);
            }
        }
        check_corpus_ids_unique(in.shards);
        return in;
    }
    const fs::path dir = stage_dir(cfg, *prev);
    const auto manifest = read_manifest(dir);
    if (!manifest)
        throw DataError("stage \"" + stage + "\" needs outputs of \"" + *prev +
                        "\" but " + (dir / "manifest.json").string() +
                        " is missing; run that stage first");
    std::uint32_t shard_index = 0;
    for (const auto& ref : manifest->shards) {
        in.shards.push_back(ingest_shard((dir / ref.file).string(),
                                         shard_index++, ref.dataset));
        in.datasets.push_back(ref.dataset);
    }
    check_corpus_ids_unique(in.shards);
    return in;
}

struct StageOutput {
    std::vector<CorpusShard> shards;  // path field = output file name
    std::vector<std::string> shard_datasets;
    CorpusStats stats;
    ordered_json extras;  // stage-specific report fields
};

void write_stage_output(const PipelineConfig& cfg, const std::string& stage,
                        const StageOutput& out) {
    const fs::path dir = stage_dir(cfg, stage);
    fs::create_directories(dir);
    Manifest manifest;
    manifest.stage = stage;
    for (std::size_t i = 0; i < out.shards.size(); ++i) {
        const auto& shard = out.shards[i];
        emit_shard(shard, (dir / shard.path).string());
        manifest.shards.push_back(
            {i < out.shard_datasets.size() ? out.shard_datasets[i]
                                           : std::string{},
             shard.path});
    }
    ordered_json report;
    report["stage"] = stage;
    ordered_json datasets = ordered_json::object();
    for (const auto& [name, d] : out.stats.by_dataset) {
        ordered_json drops = ordered_json::object();
        for (int r = 0; r < 6; ++r) {
            drops[drop_reason_name(static_cast<DropReason>(r))] = d.drops[r];
        }
        datasets[name] = {{"input_docs", d.input_docs},
                          {"kept_docs", d.kept_docs},
                          {"input_chars", d.input_chars},
                          {"kept_chars", d.kept_chars},
                          {"drops", drops}};
    }
    report["datasets"] = datasets;
    if (!out.extras.is_null()) report["extras"] = out.extras;
    std::ofstream rep(dir / "report.json", std::ios::binary);
    if (!rep) throw DataError((dir / "report.json").string() +
                              ": cannot open for writing");
    rep << report.dump(2) << '\n';
    rep.close();
    write_manifest(dir, manifest);
}

// Keeps the (dataset, file-name) pairing stable across stages: output shard
// k reuses input shard k's dataset and ordinal.
std::string output_shard_name(const std::string& dataset, std::size_t index) {
    return sanitize_name(dataset) + "." + std::to_string(index) + ".jsonl";
}

StageOutput run_clean(const PipelineConfig& cfg, StageInputs in) {
    const TrigramLanguageModel* detector = &TrigramLanguageModel::bundled();
    TrigramLanguageModel loaded;
    if (!cfg.language_model.empty()) {
        loaded = TrigramLanguageModel::load(
            resolve_path(cfg, cfg.language_model).string());
        detector = &loaded;
    }
    StageOutput out;
    out.shards.resize(in.shards.size());
    out.shard_datasets = in.datasets;
    std::vector<CorpusStats> stats(in.shards.size());
    parallel_for(in.shards.size(), cfg.jobs, [&](std::size_t i) {
        CorpusShard result;
        result.path = output_shard_name(in.datasets[i], i);
        for (auto& doc : in.shards[i].records) {
            stats[i].add_input(doc.dataset, doc.char_count);
            doc.text = fix_text(doc.text);
            doc.char_count = code_point_count(doc.text);
            const LanguageVerdict verdict = detector->detect(doc.text);
            const RuleOutcome outcome = apply_rules(doc, verdict);
            if (outcome.keep) {
                stats[i].add_kept(doc.dataset, doc.char_count);
                result.records.push_back(std::move(doc));
            } else {
                stats[i].add_drop(doc.dataset, *outcome.reason);
            }
        }
        out.shards[i] = std::move(result);
    });
    for (const auto& s : stats) out.stats.merge(s);
    return out;
}

StageOutput run_score(const PipelineConfig& cfg, StageInputs in) {
    if (cfg.quality_model.empty())
        throw ConfigError("score stage requires quality_model in the config");
    const QualityModel model =
        load_quality_model(resolve_path(cfg, cfg.quality_model).string());
    StageOutput out;
    out.shards.resize(in.shards.size());
    out.shard_datasets = in.datasets;
    std::vector<CorpusStats> stats(in.shards.size());
    parallel_for(in.shards.size(), cfg.jobs, [&](std::size_t i) {
        CorpusShard result;
        result.path = output_shard_name(in.datasets[i], i);
        for (auto& doc : in.shards[i].records) {
            stats[i].add_input(doc.dataset, doc.char_count);
            doc.score = score_document(model, doc);
            stats[i].add_kept(doc.dataset, doc.char_count);
            result.records.push_back(std::move(doc));
        }
        out.shards[i] = std::move(result);
    });
    for (const auto& s : stats) out.stats.merge(s);
    return out;
}

StageOutput run_quality_filter(const PipelineConfig& cfg, StageInputs in,
                               std::uint64_t seed) {
    const ParetoFilterParams params{cfg.pareto_alpha, seed};
    StageOutput out;
    out.shards.resize(in.shards.size());
    out.shard_datasets = in.datasets;
    std::vector<CorpusStats> stats(in.shards.size());
    parallel_for(in.shards.size(), cfg.jobs, [&](std::size_t i) {
        CorpusShard result;
        result.path = output_shard_name(in.datasets[i], i);
        for (auto& doc : in.shards[i].records) {
            stats[i].add_input(doc.dataset, doc.char_count);
            if (!doc.score)
                throw DataError("doc " + std::to_string(doc.doc_id) +
                                " has no score; run the score stage first");
            if (pareto_keep(*doc.score, params, doc.doc_id)) {
                stats[i].add_kept(doc.dataset, doc.char_count);
                result.records.push_back(std::move(doc));
            } else {
                stats[i].add_drop(doc.dataset, DropReason::kQuality);
            }
        }
        out.shards[i] = std::move(result);
    });
    for (const auto& s : stats) out.stats.merge(s);
    return out;
}

StageOutput run_dedup(const PipelineConfig& cfg, StageInputs in,
                      std::uint64_t seed, const fs::path& dir) {
    LshParams params = cfg.lsh;
    params.rng_seed = seed;
    params.validate();

    PriorityOrder priority{cfg.priority};
    if (priority.datasets.empty()) {
        // Default: config dataset order.
        for (const auto& ds : cfg.datasets) priority.datasets.push_back(ds.name);
    }

    // Gather features for every doc; signatures only where non-empty.
    std::unordered_map<std::uint64_t, FeatureSet> features;
    std::map<std::uint64_t, std::string> doc_dataset;
    std::vector<std::vector<std::pair<std::uint64_t, FeatureSet>>> shard_features(
        in.shards.size());
    parallel_for(in.shards.size(), cfg.jobs, [&](std::size_t i) {
        auto& rows = shard_features[i];
        rows.reserve(in.shards[i].records.size());
        for (const auto& doc : in.shards[i].records) {
            rows.emplace_back(doc.doc_id, vectorize(doc.text));
        }
    });
    for (std::size_t i = 0; i < in.shards.size(); ++i) {
        for (auto& [id, fset] : shard_features[i]) {
            features.emplace(id, std::move(fset));
        }
        for (const auto& doc : in.shards[i].records) {
            doc_dataset[doc.doc_id] = doc.dataset;
        }
    }
    shard_features.clear();

    std::map<std::uint64_t, MinHashSignature> signatures;
    {
        std::vector<std::uint64_t> ids;
        ids.reserve(features.size());
        for (const auto& [id, fset] : features) {
            if (!fset.empty()) ids.push_back(id);
        }
        std::sort(ids.begin(), ids.end());
        std::vector<MinHashSignature> sigs(ids.size());
        parallel_for(ids.size(), cfg.jobs, [&](std::size_t i) {
            sigs[i] = minhash_signature(features.at(ids[i]), params);
        });
        for (std::size_t i = 0; i < ids.size(); ++i) {
            signatures.emplace(ids[i], std::move(sigs[i]));
        }
    }

    const auto buckets = lsh_group(signatures, params);
    std::vector<std::uint64_t> keys;
    keys.reserve(buckets.size());
    for (const auto& [key, members] : buckets) {
        if (members.size() > 1) keys.push_back(key);
    }
    std::sort(keys.begin(), keys.end());

    std::unordered_map<std::uint64_t, MinHashSignature> sig_lookup;
    if (params.signature_similarity) {
        sig_lookup.insert(signatures.begin(), signatures.end());
    }
    std::vector<std::vector<DuplicatePair>> bucket_pairs(keys.size());
    parallel_for(keys.size(), cfg.jobs, [&](std::size_t i) {
        bucket_pairs[i] = dedup_bucket(
            buckets.at(keys[i]), features, params,
            params.signature_similarity ? &sig_lookup : nullptr);
    });
    std::vector<DuplicatePair> pairs;
    for (auto& bp : bucket_pairs) {
        pairs.insert(pairs.end(), bp.begin(), bp.end());
    }

    const DuplicateGraph graph =
        resolve_components(std::move(pairs), priority, doc_dataset);

    // Reports: one JSON object per edge, then one per multi-member component.
    fs::create_directories(dir);
    {
        std::ofstream edges(dir / "dup_edges.jsonl", std::ios::binary);
        for (const auto& e : graph.edges) {
            ordered_json j{{"duplicate", e.duplicate_id},
                           {"anchor", e.anchor_id},
                           {"similarity", e.similarity},
                           {"band_seed", params.rng_seed}};
            edges << j.dump() << '\n';
        }
    }
    std::uint64_t multi_components = 0;
    {
        std::ofstream comps(dir / "dup_components.jsonl", std::ios::binary);
        for (const auto& c : graph.components) {
            if (c.members.size() < 2) continue;
            ++multi_components;
            ordered_json j{{"representative", c.representative},
                           {"members", c.members},
                           {"dataset", c.representative_dataset}};
            comps << j.dump() << '\n';
        }
    }

    StageOutput out;
    out.shards.resize(in.shards.size());
    out.shard_datasets = in.datasets;
    for (std::size_t i = 0; i < in.shards.size(); ++i) {
        CorpusShard result;
        result.path = output_shard_name(in.datasets[i], i);
        for (auto& doc : in.shards[i].records) {
            out.stats.add_input(doc.dataset, doc.char_count);
            if (graph.is_duplicate(doc.doc_id)) {
                out.stats.add_drop(doc.dataset, DropReason::kDuplicate);
            } else {
                out.stats.add_kept(doc.dataset, doc.char_count);
                result.records.push_back(std::move(doc));
            }
        }
        out.shards[i] = std::move(result);
    }
    out.extras = {{"edges", graph.edges.size()},
                  {"duplicate_components", multi_components},
                  {"edge_file", "dup_edges.jsonl"},
                  {"component_file", "dup_components.jsonl"}};
    return out;
}

StageOutput run_decontaminate(const PipelineConfig& cfg, StageInputs in) {
    if (cfg.tasks.empty())
        throw ConfigError(
            "decontaminate stage requires at least one task file");
    std::vector<TaskNgramIndex> indexes;
    indexes.reserve(cfg.tasks.size());
    for (const auto& task : cfg.tasks) {
        std::ifstream in(resolve_path(cfg, task.path), std::ios::binary);
        if (!in)
            throw DataError("task \"" + task.name + "\": cannot open " +
                            task.path);
        std::vector<std::string> docs;
        std::string line;
        while (std::getline(in, line)) {
            if (!line.empty()) docs.push_back(line);
        }
        indexes.push_back(build_task_ngram_index(docs, task.n, task.name));
    }

    std::atomic<std::uint64_t> docs_split{0}, docs_removed{0},
        docs_split_gt10{0}, docs_trimmed{0};

    StageOutput out;
    out.shards.resize(in.shards.size());
    out.shard_datasets = in.datasets;
    std::vector<CorpusStats> stats(in.shards.size());
    parallel_for(in.shards.size(), cfg.jobs, [&](std::size_t i) {
        CorpusShard result;
        result.path = output_shard_name(in.datasets[i], i);
        for (auto& doc : in.shards[i].records) {
            stats[i].add_input(doc.dataset, doc.char_count);
            SplitOutcome outcome = split_document(doc.text, indexes);
            if (outcome.splits > 0) docs_split.fetch_add(1);
            if (outcome.splits > 10) docs_split_gt10.fetch_add(1);
            if (outcome.fragments.empty()) {
                docs_removed.fetch_add(1);
                stats[i].add_drop(doc.dataset, DropReason::kContamination);
                continue;
            }
            if (outcome.trim_events > 0) docs_trimmed.fetch_add(1);
            stats[i].add_kept(doc.dataset, doc.char_count);
            if (outcome.splits == 0) {
                result.records.push_back(std::move(doc));
                continue;
            }
            for (std::size_t f = 0; f < outcome.fragments.size(); ++f) {
                Document fragment;
                fragment.doc_id =
                    mix64(doc.doc_id, static_cast<std::uint64_t>(f) + 1);
                fragment.dataset = doc.dataset;
                fragment.url = doc.url;
                fragment.score = doc.score;
                fragment.text = std::move(outcome.fragments[f]);
                fragment.char_count = code_point_count(fragment.text);
                result.records.push_back(std::move(fragment));
            }
        }
        out.shards[i] = std::move(result);
    });
    for (const auto& s : stats) out.stats.merge(s);
    out.extras = {{"split", docs_split.load()},
                  {"removed", docs_removed.load()},
                  {"split_gt10", docs_split_gt10.load()},
                  {"trimmed", docs_trimmed.load()}};
    return out;
}

StageOutput run_blend(const PipelineConfig& cfg, StageInputs in,
                      std::uint64_t seed, const fs::path& dir) {
    if (cfg.blend.steps < 1)
        throw ConfigError("blend stage requires blend.steps >= 1");

    // Surviving docs per dataset, in stable corpus order.
    std::map<std::string, std::vector<std::uint64_t>> docs_by_dataset;
    CorpusStats stats;
    for (const auto& shard : in.shards) {
        for (const auto& doc : shard.records) {
            stats.add_input(doc.dataset, doc.char_count);
            stats.add_kept(doc.dataset, doc.char_count);
            docs_by_dataset[doc.dataset].push_back(doc.doc_id);
        }
    }

    std::vector<DatasetSpec> specs;
    for (const auto& ds : cfg.datasets) {
        DatasetSpec spec;
        spec.name = ds.name;
        spec.weight = ds.weight;
        spec.tokens_available = docs_by_dataset.count(ds.name)
                                    ? docs_by_dataset[ds.name].size()
                                    : 0;
        specs.push_back(std::move(spec));
    }
    normalize_weights(specs);
    validate_weights(specs);

    // Draw order per dataset: corpus order, or a seeded shuffle.
    std::map<std::string, std::vector<std::uint64_t>> order = docs_by_dataset;
    if (cfg.blend.shuffle) {
        for (auto& [name, ids] : order) {
            const std::uint64_t s = mix64(seed, fnv1a64(name));
            for (std::size_t i = ids.size(); i > 1; --i) {
                std::swap(ids[i - 1], ids[mix64(s, i) % i]);
            }
        }
    }

    fs::create_directories(dir);
    std::ofstream manifest(dir / "blend_manifest.jsonl", std::ios::binary);
    if (!manifest)
        throw DataError((dir / "blend_manifest.jsonl").string() +
                        ": cannot open for writing");

    std::uint64_t total_available = 0;
    for (const auto& s : specs) total_available += s.tokens_available;

    BlendState state = BlendState::create(specs.size());
    std::vector<std::uint64_t> cursor(specs.size(), 0);
    double max_abs_credit = 0.0;
    const std::uint64_t steps = total_available == 0 ? 0 : cfg.blend.steps;
    for (std::uint64_t step = 0; step < steps; ++step) {
        const auto counts =
            next_batch_composition(state, specs, cfg.blend.batch_size);
        for (std::size_t i = 0; i < specs.size(); ++i) {
            if (counts[i] == 0) continue;
            const auto& ids = order[specs[i].name];
            if (ids.empty())
                throw DataError("blend: dataset \"" + specs[i].name +
                                "\" has a positive weight but no documents");
            for (std::uint64_t k = 0; k < counts[i]; ++k) {
                const std::uint64_t id = ids[cursor[i] % ids.size()];
                ++cursor[i];
                ordered_json j{{"step", step},
                               {"dataset", specs[i].name},
                               {"doc_id", id}};
                manifest << j.dump() << '\n';
            }
        }
        for (double c : state.credit) {
            max_abs_credit = std::max(max_abs_credit, std::abs(c));
        }
    }

    StageOutput out;
    out.stats = std::move(stats);
    ordered_json datasets = ordered_json::object();
    for (std::size_t i = 0; i < specs.size(); ++i) {
        const double available =
            static_cast<double>(std::max<std::uint64_t>(
                specs[i].tokens_available, 1));
        datasets[specs[i].name] = {
            {"weight", specs[i].weight},
            {"drawn", state.drawn[i]},
            {"available", specs[i].tokens_available},
            {"epochs", static_cast<double>(state.drawn[i]) / available},
            {"credit", state.credit[i]}};
    }
    out.extras = {{"steps", steps},
                  {"batch_size", cfg.blend.batch_size},
                  {"max_abs_credit", max_abs_credit},
                  {"manifest_file", "blend_manifest.jsonl"},
                  {"datasets", datasets}};
    return out;
}

StageOutput run_plan(const PipelineConfig& cfg) {
    if (!cfg.planner)
        throw ConfigError("plan stage requires a planner block in the config");
    const PlanReport report = build_plan_report(*cfg.planner);
    StageOutput out;
    out.extras = json::parse(render_plan_report(*cfg.planner, report, true));
    return out;
}

void run_stage_impl(const PipelineConfig& cfg, const std::string& stage) {
    const std::uint64_t seed = stage_seed(cfg.seed, stage);
    const fs::path dir = stage_dir(cfg, stage);
    StageOutput out;
    if (stage == "clean") {
        out = run_clean(cfg, load_stage_inputs(cfg, stage));
    } else if (stage == "score") {
        out = run_score(cfg, load_stage_inputs(cfg, stage));
    } else if (stage == "quality_filter") {
        out = run_quality_filter(cfg, load_stage_inputs(cfg, stage), seed);
    } else if (stage == "dedup") {
        out = run_dedup(cfg, load_stage_inputs(cfg, stage), seed, dir);
    } else if (stage == "decontaminate") {
        out = run_decontaminate(cfg, load_stage_inputs(cfg, stage));
    } else if (stage == "blend") {
        out = run_blend(cfg, load_stage_inputs(cfg, stage), seed, dir);
    } else if (stage == "plan") {
        out = run_plan(cfg);
    } else {
        throw ConfigError("unknown stage \"" + stage + "\"");
    }
    write_stage_output(cfg, stage, out);
}

CorpusStats stats_from_report(const fs::path& report_path) {
    std::ifstream in(report_path, std::ios::binary);
    if (!in) throw DataError(report_path.string() + ": missing stage report");
    json j;
    in >> j;
    CorpusStats stats;
    if (!j.contains("datasets")) return stats;
    for (const auto& [name, d] : j["datasets"].items()) {
        DatasetStats ds;
        ds.input_docs = d.value("input_docs", 0ull);
        ds.kept_docs = d.value("kept_docs", 0ull);
        ds.input_chars = d.value("input_chars", 0ull);
        ds.kept_chars = d.value("kept_chars", 0ull);
        if (d.contains("drops")) {
            for (int r = 0; r < 6; ++r) {
                ds.drops[r] = d["drops"].value(
                    drop_reason_name(static_cast<DropReason>(r)), 0ull);
            }
        }
        stats.by_dataset[name] = ds;
    }
    return stats;
}

}  // namespace

std::uint64_t stage_seed(std::uint64_t global_seed,
                         const std::string& stage_name) {
    return mix64(global_seed, fnv1a64(stage_name));
}

void validate_stage_order(const std::vector<std::string>& stages) {
    // Dependency pairs plus their transitive closure, so a violation is
    // caught even when the middle stage is not configured.
    static const std::vector<std::pair<std::string, std::string>> kBefore = {
        {"clean", "score"},
        {"score", "quality_filter"},
        {"clean", "quality_filter"},
        {"dedup", "decontaminate"},
        {"decontaminate", "blend"},
        {"dedup", "blend"},
    };
    std::map<std::string, std::size_t> position;
    for (std::size_t i = 0; i < stages.size(); ++i) {
        const auto& s = stages[i];
        if (std::find(kPipelineStages.begin(), kPipelineStages.end(), s) ==
            kPipelineStages.end())
            throw ConfigError("unknown stage \"" + s + "\"");
        if (position.contains(s))
            throw ConfigError("stage \"" + s + "\" listed twice");
        position[s] = i;
    }
    for (const auto& [before, after] : kBefore) {
        if (position.contains(before) && position.contains(after) &&
            position[before] > position[after])
            throw ConfigError("stage \"" + after + "\" must run after \"" +
                              before + "\" but is listed before it");
    }
    // A stage whose required producer is absent can still run on raw inputs
    // (standalone use); only relative order is constrained.
}

PipelineConfig load_pipeline_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(path + ": cannot open config");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError(path + ": " + e.what());
    }

    PipelineConfig cfg;
    cfg.config_dir = fs::path(path).parent_path().string();
    try {
        cfg.seed = j.value("seed", 0ull);
        cfg.jobs = j.value("jobs", 1);
        if (!j.contains("work_dir"))
            throw ConfigError(path + ": missing work_dir");
        cfg.work_dir = j["work_dir"].get<std::string>();
        if (j.contains("stages")) {
            cfg.stages = j["stages"].get<std::vector<std::string>>();
        } else {
            cfg.stages = {"clean", "score", "quality_filter",
                          "dedup", "decontaminate", "blend"};
        }
        for (const auto& d : j.value("datasets", json::array())) {
            PipelineConfig::DatasetInput ds;
            ds.name = d.at("name").get<std::string>();
            ds.weight = d.value("weight", 0.0);
            if (d.contains("paths")) {
                ds.paths = d["paths"].get<std::vector<std::string>>();
            } else if (d.contains("path")) {
                ds.paths = {d["path"].get<std::string>()};
            }
            cfg.datasets.push_back(std::move(ds));
        }
        cfg.priority = j.value("priority", std::vector<std::string>{});
        if (j.contains("quality")) {
            const auto& q = j["quality"];
            cfg.quality_model = q.value("model", "");
            cfg.pareto_alpha = q.value("pareto_alpha", 3.0);
            if (cfg.pareto_alpha <= 0)
                throw ConfigError(path + ": quality.pareto_alpha must be > 0");
        }
        cfg.language_model = j.value("language_model", "");
        if (j.contains("lsh")) {
            const auto& l = j["lsh"];
            cfg.lsh.bands = l.value("bands", 20);
            cfg.lsh.rows = l.value("rows", 13);
            cfg.lsh.jaccard_threshold = l.value("jaccard_threshold", 0.8);
            cfg.lsh.sample_iterations = l.value("sample_iterations", 11);
            cfg.lsh.signature_similarity =
                l.value("signature_similarity", false);
            cfg.lsh.validate();
        }
        for (const auto& t : j.value("tasks", json::array())) {
            PipelineConfig::TaskSpec task;
            task.name = t.at("name").get<std::string>();
            task.path = t.at("path").get<std::string>();
            task.n = t.value("n", 13);
            if (task.n < 1)
                throw ConfigError(path + ": task \"" + task.name +
                                  "\": n must be >= 1");
            cfg.tasks.push_back(std::move(task));
        }
        if (j.contains("blend")) {
            const auto& b = j["blend"];
            cfg.blend.batch_size = b.value("batch_size", 1920ull);
            cfg.blend.steps = b.value("steps", 0ull);
            cfg.blend.shuffle = b.value("shuffle", false);
        }
        if (j.contains("planner")) {
            const auto& p = j["planner"];
            PlannerInputs inputs;
            inputs.shape.parameters = p.value("parameters", 0.0);
            inputs.shape.layers = p.value("layers", 0);
            inputs.shape.hidden = p.value("hidden", 0);
            inputs.shape.heads = p.value("heads", 0);
            inputs.shape.sequence = p.value("sequence", 0);
            inputs.shape.vocab = p.value("vocab", 50257);
            inputs.parallel.tensor = p.value("tensor_parallel", 1);
            inputs.parallel.pipeline = p.value("pipeline_parallel", 1);
            inputs.parallel.data = p.value("data_parallel", 1);
            inputs.parallel.batch = p.value("batch", 1);
            inputs.parallel.micro_batches = p.value("micro_batches", 1);
            inputs.topo.nodes = p.value("nodes", 0);
            inputs.topo.gpus_per_node = p.value("gpus_per_node", 8);
            inputs.topo.peak_flops_per_gpu =
                p.value("peak_tflops_per_gpu", 312.0) * 1e12;
            inputs.iteration_seconds = p.value("iteration_seconds", 0.0);
            cfg.planner = inputs;
        }
    } catch (const json::exception& e) {
        throw ConfigError(path + ": " + e.what());
    }

    validate_stage_order(cfg.stages);

    const bool needs_corpus = std::any_of(
        cfg.stages.begin(), cfg.stages.end(),
        [](const std::string& s) { return kCorpusStages.contains(s) || s == "blend"; });
    if (needs_corpus && cfg.datasets.empty())
        throw ConfigError(path + ": no datasets configured");

    // Missing task files are a config-time error, before any processing.
    for (const auto& t : cfg.tasks) {
        if (!fs::exists(resolve_path(cfg, t.path)))
            throw ConfigError(path + ": task \"" + t.name + "\" file " +
                              t.path + " does not exist");
    }
    return cfg;
}

PipelineConfig::TaskSpec parse_task_argument(const std::string& arg) {
    PipelineConfig::TaskSpec task;
    const auto eq = arg.find('=');
    if (eq == std::string::npos || eq == 0)
        throw ConfigError("task argument \"" + arg +
                          "\" is not name=path[,n=13]");
    task.name = arg.substr(0, eq);
    std::string rest = arg.substr(eq + 1);
    const auto comma = rest.rfind(",n=");
    if (comma != std::string::npos) {
        const std::string n_str = rest.substr(comma + 3);
        try {
            std::size_t pos = 0;
            task.n = std::stoi(n_str, &pos);
            if (pos != n_str.size() || task.n < 1) throw std::exception();
        } catch (...) {
            throw ConfigError("task argument \"" + arg + "\" has a bad n");
        }
        rest.erase(comma);
    }
    if (rest.empty())
        throw ConfigError("task argument \"" + arg + "\" has an empty path");
    task.path = rest;
    return task;
}

void run_stage(const PipelineConfig& cfg, const std::string& stage) {
    if (std::find(cfg.stages.begin(), cfg.stages.end(), stage) ==
        cfg.stages.end()) {
        // Stage subcommands may run stages the config did not list; validate
        // against the canonical set instead.
        if (std::find(kPipelineStages.begin(), kPipelineStages.end(), stage) ==
            kPipelineStages.end())
            throw ConfigError("unknown stage \"" + stage + "\"");
    }
    run_stage_impl(cfg, stage);
}

CorpusStats collect_stats(const PipelineConfig& cfg) {
    CorpusStats merged;
    bool first_seen = false;
    for (const auto& stage : cfg.stages) {
        // plan is corpus-independent; blend samples rather than filters, and
        // its record counts are fragments, not documents.
        if (stage == "plan" || stage == "blend") continue;
        if (!stage_complete(cfg, stage)) continue;
        const CorpusStats stats =
            stats_from_report(stage_dir(cfg, stage) / "report.json");
        if (!first_seen) {
            merged = stats;
            first_seen = true;
            continue;
        }
        // Later stages contribute their drops; kept counts roll forward.
        for (const auto& [name, d] : stats.by_dataset) {
            auto& m = merged.by_dataset[name];
            if (m.input_docs == 0 && m.kept_docs == 0) {
                m.input_docs = d.input_docs;
                m.input_chars = d.input_chars;
            }
            m.kept_docs = d.kept_docs;
            m.kept_chars = d.kept_chars;
            for (int r = 0; r < 6; ++r) m.drops[r] += d.drops[r];
        }
    }
    return merged;
}

std::string render_stats_json(const CorpusStats& stats) {
    ordered_json datasets = ordered_json::object();
    std::uint64_t total_input = 0, total_kept = 0, total_dropped = 0;
    for (const auto& [name, d] : stats.by_dataset) {
        ordered_json drops = ordered_json::object();
        for (int r = 0; r < 6; ++r) {
            drops[drop_reason_name(static_cast<DropReason>(r))] = d.drops[r];
        }
        datasets[name] = {{"input_docs", d.input_docs},
                          {"kept_docs", d.kept_docs},
                          {"input_chars", d.input_chars},
                          {"kept_chars", d.kept_chars},
                          {"drops", drops}};
        total_input += d.input_docs;
        total_kept += d.kept_docs;
        total_dropped += d.dropped_total();
    }
    ordered_json j;
    j["datasets"] = datasets;
    j["total"] = {{"input_docs", total_input},
                  {"kept_docs", total_kept},
                  {"dropped_docs", total_dropped}};
    return j.dump(2) + "\n";
}

CorpusStats execute_pipeline(const PipelineConfig& cfg) {
    const fs::path work = resolve_path(cfg, cfg.work_dir);
    fs::create_directories(work);
    for (const auto& stage : cfg.stages) {
        if (stage_complete(cfg, stage)) continue;
        run_stage_impl(cfg, stage);
    }
    const CorpusStats stats = collect_stats(cfg);
    std::ofstream out(work / "stats.json", std::ios::binary);
    if (!out) throw DataError((work / "stats.json").string() +
                              ": cannot open for writing");
    out << render_stats_json(stats);
    return stats;
}

}  // namespace curator
