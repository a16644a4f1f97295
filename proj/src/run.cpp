#include "medalqa/cli/run.hpp"

#include "medalqa/eval/pipeline.hpp"
#include "medalqa/gen/random_records.hpp"
#include "medalqa/util/hash.hpp"
#include "medalqa/util/io.hpp"
#include "medalqa/util/strings.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <iostream>

namespace medalqa::cli {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

struct UsageError : core::DomainError {
    using core::DomainError::DomainError;
};

void require_exists(const std::string& path, const char* what) {
    if (!std::filesystem::exists(path)) {
        throw UsageError(std::string(what) + " does not exist: " + path);
    }
}

int cmd_ingest(const std::string& input, const std::string& report_path, int small_max,
               int large_min) {
    require_exists(input, "--input");
    ingest::IngestReport report;
    auto records = ingest::parse_dataset(input, &report);
    ingest::SizeThresholds thresholds{small_max, large_min};
    int small = 0, large = 0, unclassified = 0;
    for (const auto& r : records) {
        switch (ingest::classify_size(r, thresholds)) {
            case ingest::SizeClass::Small: ++small; break;
            case ingest::SizeClass::Large: ++large; break;
            case ingest::SizeClass::Unclassified: ++unclassified; break;
        }
    }
    ordered_json j = report.to_json();
    j["size_classes"] =
        ordered_json{{"small", small}, {"large", large}, {"unclassified", unclassified}};
    util::atomic_write(report_path, j.dump(2) + "\n");
    std::cout << "accepted " << report.accepted << ", rejected " << report.rejected.size()
              << " (small " << small << ", large " << large << ", unclassified "
              << unclassified << ")\n";
    std::cout << "report written to " << report_path << "\n";
    return report.rejected.empty() ? 0 : 2;
}

gen::GenerationConfig load_generation_config(const std::string& config_path, int small_max,
                                             int large_min) {
    gen::GenerationConfig config;
    if (!config_path.empty()) {
        require_exists(config_path, "--config");
        config = gen::GenerationConfig::from_json(json::parse(util::read_file(config_path)));
    }
    if (small_max >= 0) config.thresholds.small_max = small_max;
    if (large_min >= 0) config.thresholds.large_min = large_min;
    return config;
}

int cmd_generate(const std::string& input, const std::string& config_path,
                 std::uint64_t seed, const std::string& out,
                 const std::string& store_path, int small_max, int large_min) {
    require_exists(input, "--input");
    gen::GenerationConfig config = load_generation_config(config_path, small_max, large_min);
    ingest::IngestReport report;
    auto records = ingest::parse_dataset(input, &report);
    if (!report.rejected.empty()) {
        for (const auto& [locator, reason] : report.rejected) {
            std::cerr << "rejected " << locator << ": " << reason << "\n";
        }
        throw core::DomainError("input contains rejected records; fix them before generating");
    }
    auto manifest = gen::generate_suite(records, config, seed);
    std::string text = gen::manifest_to_jsonl(manifest);
    util::atomic_write(out, text);
    if (!store_path.empty()) {
        oracle::SqliteStore::create_file(store_path, core::build_bundle(records));
    }
    std::cout << "manifest " << out << " digest " << util::hash_hex(text) << "\n";
    for (const char* key : {"total", "original", "counterfact", "small", "large",
                            "unclassified", "easy", "medium", "hard"}) {
        std::cout << "  " << key << ": " << manifest.split_counts.at(key) << "\n";
    }
    return 0;
}

int cmd_perturb(const std::string& input, std::uint64_t seed,
                const std::vector<std::string>& op_specs, const std::string& out) {
    require_exists(input, "--input");
    auto records = ingest::parse_dataset(input);
    auto pool = gen::location_pool(records);
    std::vector<gen::PerturbationOp> ops;
    for (const auto& spec : op_specs) ops.push_back(gen::op_from_string(spec, pool));
    if (ops.empty()) ops.push_back(gen::ShiftMedalYear{1, std::nullopt});
    std::vector<core::AthleteRecord> perturbed;
    for (size_t i = 0; i < records.size(); ++i) {
        perturbed.push_back(gen::perturb(records[i], ops, util::mix_seed(seed, i)));
    }
    util::atomic_write(out, ingest::records_to_jsonl(perturbed));
    std::cout << "perturbed " << perturbed.size() << " records with";
    for (const auto& op : ops) std::cout << " " << gen::op_name(op);
    std::cout << " -> " << out << "\n";
    return 0;
}

struct EvaluateArgs {
    std::string manifest_path;
    std::string strategy = "sql-static";
    std::string mock = "none";
    std::string endpoint;
    std::string model = "default";
    double temperature = 0.0;
    int max_tokens = 1024;
    int k_shots = 6;
    int jobs = 1;
    std::string cache = "off";
    std::string cache_file;
    std::string split = "all";
    std::string out;
    std::string report_path;
    std::string report_json_path;
    std::string pool_path;
};

int cmd_evaluate(const EvaluateArgs& a) {
    require_exists(a.manifest_path, "--manifest");
    auto manifest = gen::manifest_from_jsonl(util::read_file(a.manifest_path));

    eval::PipelineOptions options;
    options.kind = strategy::strategy_from_tag(a.strategy);
    options.k_shots = static_cast<size_t>(a.k_shots);
    options.mock = eval::mock_from_name(a.mock);
    options.model.endpoint = a.endpoint;
    options.model.model = a.model;
    options.model.temperature = a.temperature;
    options.model.max_tokens = a.max_tokens;
    options.cache_mode = llm::cache_mode_from_name(a.cache);
    if (options.cache_mode != llm::CacheMode::Off) {
        if (a.cache_file.empty()) throw UsageError("--cache needs --cache-file");
        options.cache_path = a.cache_file;
    }
    options.jobs = a.jobs;
    if (a.split != "all") options.split = a.split;
    if (!a.pool_path.empty()) {
        options.pool = strategy::load_shot_pool(a.pool_path);
    }
    if (options.mock == eval::MockKind::None && a.endpoint.empty() &&
        options.cache_mode != llm::CacheMode::Replay) {
        throw UsageError("evaluate needs --endpoint, --mock, or --cache replay");
    }

    auto result = eval::run_pipeline(manifest, options);
    if (!a.out.empty()) {
        util::atomic_write(a.out, eval::predictions_to_jsonl(result.predictions));
    }
    auto report = eval::aggregate(result.predictions, manifest);
    std::string text = report.render_text();
    std::cout << text;
    std::cout << "predictions: " << result.predictions.size()
              << ", network calls: " << result.network_calls << "\n";
    if (!a.report_path.empty()) util::atomic_write(a.report_path, text);
    if (!a.report_json_path.empty()) {
        util::atomic_write(a.report_json_path, report.to_json().dump(2) + "\n");
    }
    return 0;
}

int cmd_report(const std::string& manifest_path, const std::string& predictions_path,
               const std::string& out, const std::string& json_out) {
    require_exists(manifest_path, "--manifest");
    require_exists(predictions_path, "--predictions");
    auto manifest = gen::manifest_from_jsonl(util::read_file(manifest_path));
    auto predictions = eval::predictions_from_jsonl(util::read_file(predictions_path));
    auto report = eval::aggregate(predictions, manifest);
    std::string text = report.render_text();
    std::cout << text;
    if (!out.empty()) util::atomic_write(out, text);
    if (!json_out.empty()) util::atomic_write(json_out, report.to_json().dump(2) + "\n");
    return 0;
}

struct FixtureCheck {
    const char* label;
    const char* athlete;
    const char* template_id;
    oracle::Bindings extra;
    const char* expected;
};

int cmd_oracle_check(const std::string& fixtures_path, int n_athletes, int n_seeds) {
    std::string path = fixtures_path.empty()
                           ? util::repo_path("data/fixtures/appendix_records.jsonl").string()
                           : fixtures_path;
    require_exists(path, "--fixtures");
    auto records = ingest::parse_dataset(path);

    const FixtureCheck checks[] = {
        {"example-1 max-gold-year", "Michael Phelps", "hard.top-type-years",
         {{"medal_type", "MedalGold"}}, "2008"},
        {"example-2 bronze-vs-gold", "Emma Weyant", "medium.more-than",
         {{"medal_type", "MedalBronze"}, {"medal_type_b", "MedalGold"}}, "yes"},
        {"example-3 first-medal-city", "Yohan Blake", "medium.city-first-medal", {}, "bacolet"},
        {"example-4 twenties-count", "Mayu Matsumoto", "medium.twenties", {}, "12"},
        {"example-5 wc-before-2021", "Sandra Sánchez", "medium.before-year",
         {{"tournament", "World Championships"}, {"year", "2021"}}, "2"},
        {"figure-1 max-gold-year", "Áron Szilágyi", "hard.top-type-years",
         {{"medal_type", "MedalGold"}}, "2022"},
    };

    int passed = 0;
    for (const auto& check : checks) {
        const core::AthleteRecord* record = nullptr;
        for (const auto& r : records) {
            if (r.name == check.athlete) record = &r;
        }
        if (!record) {
            std::cout << "[FAIL] " << check.label << ": fixture athlete missing\n";
            continue;
        }
        oracle::Bindings bindings = check.extra;
        bindings["athlete"] = check.athlete;
        const auto& tpl = oracle::template_by_id(check.template_id);
        auto bundle = core::build_bundle(std::span(record, 1));
        auto sql_gold = oracle::execute_oracle(oracle::make_oracle_query(tpl, bindings), bundle);
        auto direct_gold = oracle::brute_force(check.template_id, bindings, records);
        bool ok = sql_gold.values.size() == 1 && sql_gold.values[0] == check.expected &&
                  sql_gold == direct_gold;
        std::cout << (ok ? "[PASS] " : "[FAIL] ") << check.label << ": got \""
                  << util::join(sql_gold.values, ", ") << "\" expected \"" << check.expected
                  << "\"\n";
        passed += ok;
    }
    std::cout << "fixtures: " << passed << "/" << std::size(checks) << " passed\n";

    long comparisons = 0, agreements = 0;
    for (int s = 0; s < n_seeds; ++s) {
        auto corpus = gen::make_random_records(util::mix_seed(0xa11ce, s), n_athletes);
        for (const auto& record : corpus) {
            auto bundle = core::build_bundle(std::span(&record, 1));
            auto store = oracle::SqliteStore::in_memory(bundle);
            for (const auto& tpl : oracle::catalog()) {
                for (const auto& bindings : tpl.enumerate_bindings(record)) {
                    ++comparisons;
                    std::optional<oracle::GoldAnswer> sql_gold, direct_gold;
                    try {
                        sql_gold = oracle::execute_oracle(
                            oracle::make_oracle_query(tpl, bindings), store);
                    } catch (const oracle::EmptyResult&) {
                    }
                    try {
                        direct_gold =
                            oracle::brute_force(tpl.id, bindings, std::span(&record, 1));
                    } catch (const oracle::EmptyResult&) {
                    }
                    if (sql_gold == direct_gold) {
                        ++agreements;
                    } else {
                        std::cout << "[MISMATCH] template " << tpl.id << " athlete '"
                                  << record.name << "'\n";
                    }
                }
            }
        }
    }
    std::cout << "dual-oracle sweep: " << agreements << "/" << comparisons
              << " comparisons agree (" << n_seeds << " seeds x " << n_athletes
              << " athletes)\n";

    bool ok = passed == static_cast<int>(std::size(checks)) && agreements == comparisons;
    std::cout << (ok ? "oracle-check: OK\n" : "oracle-check: FAILED\n");
    return ok ? 0 : 2;
}

}  // namespace

int run(const std::vector<std::string>& args) {
    CLI::App app{"Temporal tabular QA benchmark forge and evaluation harness"};
    app.require_subcommand(1);

    // ingest
    auto* ingest_cmd = app.add_subcommand("ingest", "Parse and validate a records file");
    std::string in_input, in_report = "ingest_report.json";
    int in_small = 8, in_large = 15;
    ingest_cmd->add_option("--input", in_input, "records file (JSONL)")->required();
    ingest_cmd->add_option("--report", in_report, "report output path");
    ingest_cmd->add_option("--small-max", in_small, "max medal rows for the Small class");
    ingest_cmd->add_option("--large-min", in_large, "min medal rows for the Large class");

    // generate
    auto* gen_cmd = app.add_subcommand("generate", "Build a dataset manifest");
    std::string g_input, g_config, g_out = "manifest.jsonl", g_store;
    std::uint64_t g_seed = 0;
    bool g_seed_set = false;
    int g_small = -1, g_large = -1;
    gen_cmd->add_option("--input", g_input, "records file (JSONL)")->required();
    gen_cmd->add_option("--config", g_config, "generation config (JSON)");
    gen_cmd->add_option("--seed", g_seed, "generation seed")
        ->required()
        ->each([&](const std::string&) { g_seed_set = true; });
    gen_cmd->add_option("--out", g_out, "manifest output path");
    gen_cmd->add_option("--store", g_store, "also materialize the relational store here");
    gen_cmd->add_option("--small-max", g_small, "override config small_max");
    gen_cmd->add_option("--large-min", g_large, "override config large_min");

    // perturb
    auto* pert_cmd = app.add_subcommand("perturb", "Apply counterfactual ops to records");
    std::string p_input, p_out = "perturbed.jsonl";
    std::uint64_t p_seed = 0;
    std::vector<std::string> p_ops;
    pert_cmd->add_option("--input", p_input, "records file (JSONL)")->required();
    pert_cmd->add_option("--seed", p_seed, "perturbation seed")->required();
    pert_cmd->add_option("--op", p_ops,
                         "op spec: shift-medal-year=+N | swap-medal-type | relocate-medal | "
                         "shift-birth-year=-N (repeatable)");
    pert_cmd->add_option("--out", p_out, "output records path");

    // evaluate
    auto* eval_cmd = app.add_subcommand("evaluate", "Run a strategy over a manifest");
    EvaluateArgs ev;
    eval_cmd->add_option("--manifest", ev.manifest_path, "manifest path")->required();
    eval_cmd->add_option("--strategy", ev.strategy,
                         "direct-zero|direct-static|direct-adaptive|cot|plan-solve|clear|"
                         "sql-static|sql-adaptive|sql-zero");
    eval_cmd->add_option("--mock", ev.mock, "none|echo-gold|corrupt-sql");
    eval_cmd->add_option("--endpoint", ev.endpoint, "chat-completions endpoint URL");
    eval_cmd->add_option("--model", ev.model, "model name");
    eval_cmd->add_option("--temperature", ev.temperature, "sampling temperature");
    eval_cmd->add_option("--max-tokens", ev.max_tokens, "max output tokens");
    eval_cmd->add_option("--k-shots", ev.k_shots, "few-shot count");
    eval_cmd->add_option("--jobs", ev.jobs, "parallel workers");
    eval_cmd->add_option("--cache", ev.cache, "off|record|replay");
    eval_cmd->add_option("--cache-file", ev.cache_file, "replay cache path");
    eval_cmd->add_option("--split", ev.split,
                         "all|original|counterfact|small|large|easy|medium|hard");
    eval_cmd->add_option("--out", ev.out, "predictions output path (JSONL)");
    eval_cmd->add_option("--report", ev.report_path, "text report output path");
    eval_cmd->add_option("--report-json", ev.report_json_path, "JSON report output path");
    eval_cmd->add_option("--pool", ev.pool_path, "shot pool override (JSON)");

    // report
    auto* rep_cmd = app.add_subcommand("report", "Re-score a predictions file");
    std::string r_manifest, r_predictions, r_out, r_json;
    rep_cmd->add_option("--manifest", r_manifest, "manifest path")->required();
    rep_cmd->add_option("--predictions", r_predictions, "predictions path")->required();
    rep_cmd->add_option("--out", r_out, "text report output path");
    rep_cmd->add_option("--json", r_json, "JSON report output path");

    // oracle-check
    auto* chk_cmd =
        app.add_subcommand("oracle-check", "Fixture suite plus dual-oracle sweep");
    std::string c_fixtures;
    int c_athletes = 20, c_seeds = 50;
    chk_cmd->add_option("--fixtures", c_fixtures, "fixtures records file");
    chk_cmd->add_option("--athletes", c_athletes, "random athletes per seed");
    chk_cmd->add_option("--seeds", c_seeds, "number of sweep seeds");

    std::vector<const char*> argv;
    argv.push_back("medalqa");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (*ingest_cmd) return cmd_ingest(in_input, in_report, in_small, in_large);
        if (*gen_cmd) {
            (void)g_seed_set;
            return cmd_generate(g_input, g_config, g_seed, g_out, g_store, g_small, g_large);
        }
        if (*pert_cmd) return cmd_perturb(p_input, p_seed, p_ops, p_out);
        if (*eval_cmd) return cmd_evaluate(ev);
        if (*rep_cmd) return cmd_report(r_manifest, r_predictions, r_out, r_json);
        if (*chk_cmd) return cmd_oracle_check(c_fixtures, c_athletes, c_seeds);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const llm::ClientTimeout& e) {
        std::cerr << "endpoint error: " << e.what() << "\n";
        return 3;
    } catch (const llm::RateLimited& e) {
        std::cerr << "endpoint error: " << e.what() << "\n";
        return 3;
    } catch (const llm::AuthFailure& e) {
        std::cerr << "endpoint error: " << e.what() << "\n";
        return 3;
    } catch (const llm::MalformedResponse& e) {
        std::cerr << "endpoint error: " << e.what() << "\n";
        return 3;
    } catch (const core::DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}

}  // namespace medalqa::cli
