#include "medalqa/eval/pipeline.hpp"

#include "medalqa/strategy/sandbox.hpp"
#include "medalqa/util/hash.hpp"
#include "medalqa/util/strings.hpp"

#include <atomic>
#include <mutex>
#include <thread>

namespace medalqa::eval {

using gen::QAInstance;
using strategy::PromptEnvelope;
using strategy::StrategyKind;

MockKind mock_from_name(std::string_view name) {
    if (name == "none" || name.empty()) return MockKind::None;
    if (name == "echo-gold") return MockKind::EchoGold;
    if (name == "corrupt-sql") return MockKind::CorruptSql;
    throw core::DomainError("mock must be none|echo-gold|corrupt-sql, got '" +
                            std::string(name) + "'");
}

bool instance_in_split(const QAInstance& inst, const std::string& split) {
    if (split.empty() || split == "all") return true;
    if (split == "original") return inst.origin == gen::Origin::Original;
    if (split == "counterfact") return inst.origin == gen::Origin::CounterFact;
    if (split == "small") return inst.size_class == ingest::SizeClass::Small;
    if (split == "large") return inst.size_class == ingest::SizeClass::Large;
    if (split == "easy") return inst.tier == oracle::Tier::Easy;
    if (split == "medium") return inst.tier == oracle::Tier::Medium;
    if (split == "hard") return inst.tier == oracle::Tier::Hard;
    throw core::DomainError("unknown split '" + split + "'");
}

std::string mock_response(MockKind mock, StrategyKind kind, const QAInstance& instance,
                          const std::string& stage_tag) {
    bool final_stage = stage_tag.rfind("clear#", 0) != 0 || stage_tag == "clear#4";
    if (!final_stage) {
        // intermediate chain stages only need plausible text to thread forward
        return "(mock stage output for " + instance.instance_id + ")";
    }
    if (mock == MockKind::EchoGold) {
        if (strategy::is_sql_strategy(kind)) {
            const auto& tpl = oracle::template_by_id(instance.template_id);
            return "```sql\n" +
                   oracle::render_sql_literal(tpl.sql_pattern, instance.bindings) + "\n```";
        }
        return "Answer: " + util::join(instance.gold.values, ", ");
    }
    if (mock == MockKind::CorruptSql) {
        switch (util::fnv1a64(instance.instance_id) % 3) {
            case 0: return "I cannot write a query for this one.";
            case 1: return "```sql\nDROP TABLE Medal;\n```";
            default: return "```sql\nSELECT missing_column FROM NoSuchTable;\n```";
        }
    }
    throw core::DomainError("mock_response called without a mock kind");
}

namespace {

struct MockRegistry {
    std::mutex mu;
    std::map<std::string, std::string> by_hash;

    void put(const std::string& hash, std::string response) {
        std::lock_guard<std::mutex> lock(mu);
        by_hash[hash] = std::move(response);
    }
    std::string get(const std::string& hash) {
        std::lock_guard<std::mutex> lock(mu);
        auto it = by_hash.find(hash);
        if (it == by_hash.end()) {
            throw core::DomainError("mock has no registered response for " + hash);
        }
        return it->second;
    }
};

Prediction score_sql_response(const QAInstance& inst, const std::string& raw,
                              const oracle::SqliteStore& store,
                              std::chrono::milliseconds timeout) {
    Prediction pred;
    pred.instance_id = inst.instance_id;
    pred.raw_response = raw;
    try {
        std::string sql = strategy::extract_sql(raw);
        auto rows = strategy::execute_sandboxed(sql, store, timeout);
        if (rows.empty()) {
            pred.error_tag = "EmptyResult";
            return pred;
        }
        for (const auto& row : rows) pred.values.push_back(util::join(row, " "));
    } catch (const strategy::NoSqlFound&) {
        pred.error_tag = "NoSqlFound";
    } catch (const strategy::ForbiddenStatement&) {
        pred.error_tag = "ForbiddenStatement";
    } catch (const strategy::QueryTimeout&) {
        pred.error_tag = "Timeout";
    } catch (const oracle::SqlError&) {
        pred.error_tag = "SqlError";
    }
    if (pred.error_tag) pred.values.clear();
    return pred;
}

}  // namespace

PipelineResult run_pipeline(const gen::DatasetManifest& manifest,
                            const PipelineOptions& options) {
    std::vector<const QAInstance*> selected;
    for (const auto& inst : manifest.instances) {
        if (!options.split || instance_in_split(inst, *options.split)) {
            selected.push_back(&inst);
        }
    }

    const std::vector<strategy::Shot>& pool =
        options.pool.empty() ? strategy::default_pool_for(options.kind) : options.pool;

    auto registry = std::make_shared<MockRegistry>();
    std::shared_ptr<llm::Client> base;
    if (options.mock == MockKind::None) {
        base = std::make_shared<llm::HttpClient>(options.model);
    } else {
        base = std::make_shared<llm::MockClient>(
            [registry](const PromptEnvelope& env) { return registry->get(env.envelope_hash()); });
    }
    std::shared_ptr<llm::Client> client = base;
    std::shared_ptr<llm::ReplayCache> cache;
    if (options.cache_mode != llm::CacheMode::Off) {
        cache = std::make_shared<llm::ReplayCache>(options.cache_path, options.cache_mode);
        client = std::make_shared<llm::CachingClient>(base, cache);
    }

    auto complete_one = [&](const PromptEnvelope& env, const QAInstance& inst) {
        if (options.mock != MockKind::None) {
            registry->put(env.envelope_hash(),
                          mock_response(options.mock, options.kind, inst, env.strategy_tag));
        }
        return client->complete(env, nullptr);
    };

    auto process = [&](const QAInstance& inst) -> Prediction {
        std::string raw;
        if (options.kind == StrategyKind::Clear) {
            std::vector<std::string> outputs;
            for (int stage = 1; stage <= strategy::kClearStages; ++stage) {
                PromptEnvelope env = strategy::build_clear_stage(stage, inst, outputs);
                outputs.push_back(complete_one(env, inst));
            }
            raw = outputs.back();
        } else {
            PromptEnvelope env =
                strategy::build_prompt(options.kind, inst, pool, options.k_shots);
            raw = complete_one(env, inst);
        }

        if (strategy::is_sql_strategy(options.kind)) {
            auto bundle =
                core::build_bundle(std::span(&manifest.variant_record(inst.variant_id), 1));
            auto store = oracle::SqliteStore::in_memory(bundle);
            Prediction pred = score_sql_response(inst, raw, store, options.sql_timeout);
            pred.strategy_tag = strategy::strategy_tag(options.kind);
            return pred;
        }
        Prediction pred;
        pred.instance_id = inst.instance_id;
        pred.strategy_tag = strategy::strategy_tag(options.kind);
        pred.raw_response = raw;
        pred.values = {strategy::extract_answer(raw)};
        return pred;
    };

    std::vector<Prediction> predictions(selected.size());
    int jobs = std::max(1, options.jobs);
    if (jobs == 1) {
        for (size_t i = 0; i < selected.size(); ++i) predictions[i] = process(*selected[i]);
    } else {
        std::atomic<size_t> next{0};
        std::exception_ptr first_error;
        std::mutex error_mu;
        auto worker = [&]() {
            for (;;) {
                size_t i = next.fetch_add(1);
                if (i >= selected.size()) break;
                try {
                    predictions[i] = process(*selected[i]);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mu);
                    if (!first_error) first_error = std::current_exception();
                }
            }
        };
        std::vector<std::thread> threads;
        for (int t = 0; t < jobs; ++t) threads.emplace_back(worker);
        for (auto& t : threads) t.join();
        if (first_error) std::rethrow_exception(first_error);
    }

    return PipelineResult{std::move(predictions), client->network_calls()};
}

}  // namespace medalqa::eval
