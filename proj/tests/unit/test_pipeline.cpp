#include <filesystem>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "curator/corpus_io.hpp"
#include "curator/errors.hpp"
#include "curator/lang_detect.hpp"
#include "curator/pipeline.hpp"
#include "curator/quality.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace curator;
namespace fs = std::filesystem;

namespace {

const std::vector<std::string> kSentences = {
    "The committee reviewed the annual figures and agreed to publish the "
    "report before the end of the month.",
    "Farmers in the northern province grow wheat and barley on the slopes "
    "above the river valley.",
    "The library keeps a manuscript collection that scholars from the "
    "university visit throughout the year.",
    "After the storm the engineers inspected the bridge and declared the "
    "crossing safe for traffic.",
    "Historical evidence suggests the harbour was rebuilt twice after "
    "floods damaged the old stone walls.",
    "The museum catalogue lists paintings, sculptures, and photographs "
    "gathered over three generations.",
    "A measurement campaign during the winter produced a long journal of "
    "observed temperatures and rainfall.",
    "The council granted the territory a charter and the market town grew "
    "quickly around the crossing.",
};

const std::string kTaskGram =
    "which river carries the most water into the northern sea each spring";

std::string english_doc(std::mt19937_64& rng, std::size_t min_chars) {
    std::string text;
    while (text.size() < min_chars) {
        text += kSentences[rng() % kSentences.size()];
        text += " analysis" + std::to_string(rng() % 100000000);
        text += " evidence" + std::to_string(rng() % 100000000);
        text += " journal" + std::to_string(rng() % 100000000);
        text += " province" + std::to_string(rng() % 100000000) + ". ";
    }
    return text;
}

struct Fixture {
    TempDir dir;
    std::string config_a;
    std::string config_b;

    explicit Fixture(const std::string& tag, int docs_per_dataset = 60)
        : dir(tag) {
        std::mt19937_64 rng(4242);

        // Quality model from a small synthetic pair of classes.
        std::vector<Document> pos, neg;
        for (int i = 0; i < 150; ++i) {
            Document p;
            p.doc_id = static_cast<std::uint64_t>(i);
            p.dataset = "train";
            p.text = english_doc(rng, 200);
            p.char_count = p.text.size();
            pos.push_back(std::move(p));
            Document n;
            n.doc_id = static_cast<std::uint64_t>(1000 + i);
            n.dataset = "train";
            n.text = "click subscribe cookies login menu checkout shipping "
                     "browser enable popup banner sidebar footer" +
                     std::to_string(i);
            n.char_count = n.text.size();
            neg.push_back(std::move(n));
        }
        const auto trained = train_quality_classifier(pos, neg, 0.2);
        save_quality_model(trained.model, dir.file("qmodel.bin"));

        // Task file: one doc per line.
        write_file(dir.file("tasks.txt"),
                   kTaskGram + "\n" +
                       "the committee of regional planning met on the first "
                       "monday of every second month\n");

        for (const char* dataset : {"alpha", "beta"}) {
            CorpusShard shard;
            std::uint64_t id = dataset[0] == 'a' ? 10000 : 20000;
            for (int i = 0; i < docs_per_dataset; ++i) {
                Document doc;
                doc.doc_id = id++;
                doc.dataset = dataset;
                doc.text = english_doc(rng, 520);
                if (i % 10 == 3) {
                    // Short doc, dropped by the 512 rule.
                    doc.text = doc.text.substr(0, 200);
                }
                if (i % 10 == 5) {
                    // Mojibake that the clean stage repairs.
                    doc.text += " dÃ©jÃ  vu encore";
                }
                if (i % 10 == 7) {
                    // Contaminated: task gram embedded mid-document.
                    doc.text = english_doc(rng, 400) + " " + kTaskGram + " " +
                               english_doc(rng, 400);
                }
                doc.char_count = 0;  // recomputed on load
                shard.records.push_back(std::move(doc));
            }
            // Planted near-duplicate: the twin must lose to the smaller id.
            if (dataset[0] == 'b' && !shard.records.empty()) {
                Document twin;
                twin.doc_id = 31337;
                twin.dataset = "beta";
                twin.text = shard.records.front().text + " extra";
                twin.char_count = 0;
                shard.records.push_back(std::move(twin));
            }
            emit_shard(shard, dir.file(std::string(dataset) + ".jsonl"));
        }

        const auto config_json = [&](const std::string& work) {
            return std::string("{\n")
                + "  \"seed\": 12345,\n"
                + "  \"jobs\": 2,\n"
                + "  \"work_dir\": \"" + work + "\",\n"
                + "  \"stages\": [\"clean\", \"score\", \"quality_filter\", "
                  "\"dedup\", \"decontaminate\", \"blend\"],\n"
                + "  \"datasets\": [\n"
                + "    {\"name\": \"alpha\", \"weight\": 0.6, \"path\": \"alpha.jsonl\"},\n"
                + "    {\"name\": \"beta\", \"weight\": 0.4, \"path\": \"beta.jsonl\"}\n"
                + "  ],\n"
                + "  \"priority\": [\"alpha\", \"beta\"],\n"
                + "  \"quality\": {\"model\": \"qmodel.bin\", \"pareto_alpha\": 3.0},\n"
                + "  \"tasks\": [{\"name\": \"qa\", \"path\": \"tasks.txt\", \"n\": 8}],\n"
                + "  \"blend\": {\"batch_size\": 16, \"steps\": 6}\n"
                + "}\n";
        };
        config_a = dir.file("config_a.json");
        config_b = dir.file("config_b.json");
        write_file(config_a, config_json("work_a"));
        write_file(config_b, config_json("work_b"));
    }
};

std::map<std::string, std::string> snapshot_tree(const fs::path& root) {
    std::map<std::string, std::string> out;
    for (const auto& entry : fs::recursive_directory_iterator(root)) {
        if (!entry.is_regular_file()) continue;
        out[fs::relative(entry.path(), root).string()] =
            read_file(entry.path().string());
    }
    return out;
}

}  // namespace

TEST_CASE("pipeline is deterministic and accounts for every document") {
    Fixture fx("pipeline_det");
    const auto cfg_a = load_pipeline_config(fx.config_a);
    const auto cfg_b = load_pipeline_config(fx.config_b);
    const auto stats_a = execute_pipeline(cfg_a);
    const auto stats_b = execute_pipeline(cfg_b);

    // Byte-identical outputs across two runs with the same seed.
    const auto tree_a = snapshot_tree(fx.dir.path / "work_a");
    const auto tree_b = snapshot_tree(fx.dir.path / "work_b");
    REQUIRE(tree_a.size() == tree_b.size());
    for (const auto& [rel, bytes] : tree_a) {
        CAPTURE(rel);
        REQUIRE(tree_b.contains(rel));
        CHECK(bytes == tree_b.at(rel));
    }

    // Conservation: input == kept + dropped per dataset.
    REQUIRE(stats_a.by_dataset.size() == 2);
    CHECK(stats_a.by_dataset.at("alpha").input_docs == 60);
    CHECK(stats_a.by_dataset.at("beta").input_docs == 61);
    for (const auto& [name, d] : stats_a.by_dataset) {
        CAPTURE(name);
        CHECK(d.input_docs == d.kept_docs + d.dropped_total());
        CHECK(d.drops[static_cast<int>(DropReason::kShort)] > 0);
    }
    // The planted twin lost to its higher-priority original.
    CHECK(stats_a.by_dataset.at("beta")
              .drops[static_cast<int>(DropReason::kDuplicate)] >= 1);
    const auto stats_json = read_file((fx.dir.path / "work_a" / "stats.json").string());
    CHECK(stats_json == render_stats_json(stats_a));
}

TEST_CASE("deleting one stage's outputs resumes from that stage") {
    Fixture fx("pipeline_resume");
    const auto cfg_a = load_pipeline_config(fx.config_a);
    execute_pipeline(cfg_a);
    const auto before = snapshot_tree(fx.dir.path / "work_a");

    fs::remove_all(fx.dir.path / "work_a" / "dedup");
    execute_pipeline(cfg_a);
    const auto after = snapshot_tree(fx.dir.path / "work_a");

    REQUIRE(before.size() == after.size());
    for (const auto& [rel, bytes] : before) {
        CAPTURE(rel);
        CHECK(bytes == after.at(rel));
    }
}

TEST_CASE("stage order violations are rejected with both stages named") {
    Fixture fx("pipeline_order");
    auto cfg = load_pipeline_config(fx.config_a);
    try {
        validate_stage_order({"clean", "blend", "dedup"});
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("blend") != std::string::npos);
        CHECK(msg.find("dedup") != std::string::npos);
    }
    CHECK_THROWS_AS(validate_stage_order({"score", "clean"}), ConfigError);
    CHECK_THROWS_AS(validate_stage_order({"clean", "clean"}), ConfigError);
    CHECK_THROWS_AS(validate_stage_order({"warp"}), ConfigError);
    validate_stage_order({"clean", "dedup", "decontaminate"});  // fine
}

TEST_CASE("an empty corpus flows through the full pipeline") {
    Fixture fx("pipeline_empty", 0);
    // Point the datasets at empty files.
    write_file(fx.dir.file("alpha.jsonl"), "");
    write_file(fx.dir.file("beta.jsonl"), "");
    const auto cfg = load_pipeline_config(fx.config_a);
    const auto stats = execute_pipeline(cfg);
    std::uint64_t total = 0;
    for (const auto& [name, d] : stats.by_dataset) {
        total += d.input_docs + d.kept_docs + d.dropped_total();
    }
    CHECK(total == 0);
    // Every stage left a manifest and an (empty) output set.
    for (const char* stage :
         {"clean", "score", "quality_filter", "dedup", "decontaminate",
          "blend"}) {
        CAPTURE(stage);
        CHECK(fs::exists(fx.dir.path / "work_a" / stage / "manifest.json"));
        CHECK(fs::exists(fx.dir.path / "work_a" / stage / "report.json"));
    }
}

TEST_CASE("a missing task file fails at config load, before processing") {
    TempDir dir("pipeline_badtask");
    write_file(dir.file("a.jsonl"), "");
    write_file(dir.file("config.json"), R"({
      "work_dir": "work",
      "stages": ["decontaminate"],
      "datasets": [{"name": "a", "weight": 1.0, "path": "a.jsonl"}],
      "tasks": [{"name": "qa", "path": "gone.txt", "n": 13}]
    })");
    CHECK_THROWS_AS(load_pipeline_config(dir.file("config.json")),
                    ConfigError);
}

TEST_CASE("the plan stage writes a planner report") {
    TempDir dir("pipeline_plan");
    write_file(dir.file("config.json"), R"({
      "work_dir": "work",
      "stages": ["plan"],
      "planner": {
        "parameters": 530e9,
        "layers": 105,
        "hidden": 20480,
        "heads": 128,
        "sequence": 2048,
        "tensor_parallel": 8,
        "pipeline_parallel": 35,
        "data_parallel": 8,
        "batch": 1920,
        "micro_batches": 140,
        "nodes": 280,
        "gpus_per_node": 8,
        "iteration_seconds": 60.1
      }
    })");
    const auto cfg = load_pipeline_config(dir.file("config.json"));
    execute_pipeline(cfg);
    const auto report =
        read_file((dir.path / "work" / "plan" / "report.json").string());
    CHECK(report.find("\"bubble_efficiency\"") != std::string::npos);
    CHECK(report.find("\"tflops_per_gpu\"") != std::string::npos);
}

TEST_CASE("task arguments parse name, path, and n") {
    const auto plain = parse_task_argument("qa=tasks/qa.txt");
    CHECK(plain.name == "qa");
    CHECK(plain.path == "tasks/qa.txt");
    CHECK(plain.n == 13);
    const auto with_n = parse_task_argument("lambada=l.txt,n=9");
    CHECK(with_n.name == "lambada");
    CHECK(with_n.path == "l.txt");
    CHECK(with_n.n == 9);
    CHECK_THROWS_AS(parse_task_argument("no-equals"), ConfigError);
    CHECK_THROWS_AS(parse_task_argument("qa=x.txt,n=zero"), ConfigError);
    CHECK_THROWS_AS(parse_task_argument("qa=,n=5"), ConfigError);
}

TEST_CASE("duplicate doc ids across shards are rejected") {
    TempDir dir("pipeline_dupids");
    write_file(dir.file("a.jsonl"),
               R"({"doc_id": 7, "dataset": "a", "text": "one"})" "\n");
    write_file(dir.file("b.jsonl"),
               R"({"doc_id": 7, "dataset": "b", "text": "two"})" "\n");
    write_file(dir.file("config.json"), R"({
      "work_dir": "work",
      "stages": ["clean"],
      "datasets": [
        {"name": "a", "weight": 0.5, "path": "a.jsonl"},
        {"name": "b", "weight": 0.5, "path": "b.jsonl"}
      ]
    })");
    const auto cfg = load_pipeline_config(dir.file("config.json"));
    CHECK_THROWS_AS(execute_pipeline(cfg), DataError);
}

TEST_CASE("a record claiming a foreign dataset is rejected") {
    TempDir dir("pipeline_foreign");
    write_file(dir.file("a.jsonl"),
               R"({"doc_id": 1, "dataset": "other", "text": "one"})" "\n");
    write_file(dir.file("config.json"), R"({
      "work_dir": "work",
      "stages": ["clean"],
      "datasets": [{"name": "a", "weight": 1.0, "path": "a.jsonl"}]
    })");
    const auto cfg = load_pipeline_config(dir.file("config.json"));
    CHECK_THROWS_AS(execute_pipeline(cfg), DataError);
}

TEST_CASE("a detector model file can replace the bundled one") {
    Fixture fx("pipeline_langfile", 20);
    TrigramLanguageModel::bundled().save(fx.dir.file("lang.bin"));
    // Same model from a file must reproduce the bundled clean stage.
    std::string config = read_file(fx.config_b);
    const auto brace = config.rfind('}');
    config.insert(brace, ", \"language_model\": \"lang.bin\"\n");
    write_file(fx.dir.file("config_lm.json"), config);

    const auto cfg_a = load_pipeline_config(fx.config_a);
    const auto cfg_b = load_pipeline_config(fx.dir.file("config_lm.json"));
    run_stage(cfg_a, "clean");
    run_stage(cfg_b, "clean");
    const auto a = snapshot_tree(fx.dir.path / "work_a" / "clean");
    const auto b = snapshot_tree(fx.dir.path / "work_b" / "clean");
    REQUIRE(a.size() == b.size());
    for (const auto& [rel, bytes] : a) {
        CAPTURE(rel);
        CHECK(bytes == b.at(rel));
    }
}

TEST_CASE("blend shuffle is seeded and deterministic") {
    TempDir dir("pipeline_shuffle");
    std::string lines;
    for (int i = 0; i < 40; ++i) {
        lines += R"({"doc_id": )" + std::to_string(i) +
                 R"(, "dataset": "a", "text": "doc body )" +
                 std::to_string(i) + R"("})" "\n";
    }
    write_file(dir.file("a.jsonl"), lines);
    const auto config = [&](const std::string& work, int seed) {
        return std::string(R"({"seed": )") + std::to_string(seed) +
               R"(, "work_dir": ")" + work + R"(",
            "stages": ["blend"],
            "datasets": [{"name": "a", "weight": 1.0, "path": "a.jsonl"}],
            "blend": {"batch_size": 8, "steps": 3, "shuffle": true}})";
    };
    write_file(dir.file("c1.json"), config("w1", 5));
    write_file(dir.file("c2.json"), config("w2", 5));
    write_file(dir.file("c3.json"), config("w3", 6));
    execute_pipeline(load_pipeline_config(dir.file("c1.json")));
    execute_pipeline(load_pipeline_config(dir.file("c2.json")));
    execute_pipeline(load_pipeline_config(dir.file("c3.json")));
    const auto m1 =
        read_file((dir.path / "w1" / "blend" / "blend_manifest.jsonl").string());
    const auto m2 =
        read_file((dir.path / "w2" / "blend" / "blend_manifest.jsonl").string());
    const auto m3 =
        read_file((dir.path / "w3" / "blend" / "blend_manifest.jsonl").string());
    CHECK(m1 == m2);
    CHECK(m1 != m3);
    // The shuffled draw is a permutation: 24 draws over 40 docs, no repeats.
    std::set<std::string> seen;
    std::istringstream stream(m1);
    std::string line;
    int count = 0;
    while (std::getline(stream, line)) {
        CHECK(seen.insert(line.substr(line.find("doc_id"))).second);
        ++count;
    }
    CHECK(count == 24);
}

TEST_CASE("single stages can be run standalone in order") {
    Fixture fx("pipeline_single");
    const auto cfg = load_pipeline_config(fx.config_a);
    run_stage(cfg, "clean");
    run_stage(cfg, "score");
    CHECK(fs::exists(fx.dir.path / "work_a" / "score" / "manifest.json"));
    // Stats of completed stages only.
    const auto stats = collect_stats(cfg);
    CHECK(stats.by_dataset.at("alpha").input_docs == 60);
}
