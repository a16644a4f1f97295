#include "medalqa/strategy/prompt.hpp"

#include "medalqa/strategy/sandbox.hpp"
#include "medalqa/util/hash.hpp"
#include "medalqa/util/io.hpp"
#include "medalqa/util/strings.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>

namespace medalqa::strategy {

using nlohmann::json;

std::string strategy_tag(StrategyKind kind) {
    switch (kind) {
        case StrategyKind::DirectZeroShot: return "direct-zero";
        case StrategyKind::DirectStatic: return "direct-static";
        case StrategyKind::DirectAdaptive: return "direct-adaptive";
        case StrategyKind::CoT: return "cot";
        case StrategyKind::PlanSolve: return "plan-solve";
        case StrategyKind::Clear: return "clear";
        case StrategyKind::SqlStatic: return "sql-static";
        case StrategyKind::SqlAdaptive: return "sql-adaptive";
        case StrategyKind::SqlZeroShot: return "sql-zero";
    }
    return "direct-zero";
}

StrategyKind strategy_from_tag(std::string_view tag) {
    for (StrategyKind kind : kAllStrategies) {
        if (strategy_tag(kind) == tag) return kind;
    }
    throw core::DomainError("unknown strategy '" + std::string(tag) + "'");
}

bool is_sql_strategy(StrategyKind kind) {
    return kind == StrategyKind::SqlStatic || kind == StrategyKind::SqlAdaptive ||
           kind == StrategyKind::SqlZeroShot;
}

std::string PromptEnvelope::render_text() const {
    std::string out = instruction;
    out += "\n\n";
    out += context_block;
    bool sql = strategy_tag.rfind("sql", 0) == 0;
    for (const auto& shot : shots) {
        out += "\n\nQuestion: " + shot.question + "\n";
        out += sql ? "SQL:\n" + shot.exemplar : "Answer: " + shot.exemplar;
    }
    out += "\n\nQuestion: " + question + "\n";
    return out;
}

std::string PromptEnvelope::envelope_hash() const { return util::hash_hex(render_text()); }

namespace {

// Table-description blocks of the schema prompt (describe output per table).
const char* const kTableDescriptions = R"(describe athlete;
+------------+--------------+------+-----+---------+----------------+
| Field      | Type         | Null | Key | Default | Extra          |
+------------+--------------+------+-----+---------+----------------+
| athlete_id | int(11)      | NO   | PRI | NULL    | auto_increment |
| name       | varchar(100) | NO   |     | NULL    |                |
+------------+--------------+------+-----+---------+----------------+
describe personalinformation;
+-------------+---------+------+-----+---------+----------------+
| Field       | Type    | Null | Key | Default | Extra          |
+-------------+---------+------+-----+---------+----------------+
| info_id     | int(11) | NO   | PRI | NULL    | auto_increment |
| athlete_id  | int(11) | YES  | MUL | NULL    |                |
| birth_year  | int(11) | YES  |     | NULL    |                |
| birth_month | int(11) | YES  |     | NULL    |                |
| birth_day   | int(11) | YES  |     | NULL    |                |
+-------------+---------+------+-----+---------+----------------+
describe tournament;
+---------------+--------------+------+-----+---------+----------------+
| Field         | Type         | Null | Key | Default | Extra          |
+---------------+--------------+------+-----+---------+----------------+
| tournament_id | int(11)      | NO   | PRI | NULL    | auto_increment |
| athlete_id    | int(11)      | YES  | MUL | NULL    |                |
| name          | varchar(100) | NO   |     | NULL    |                |
+---------------+--------------+------+-----+---------+----------------+
describe format;
+---------------+--------------+------+-----+---------+----------------+
| Field         | Type         | Null | Key | Default | Extra          |
+---------------+--------------+------+-----+---------+----------------+
| format_id     | int(11)      | NO   | PRI | NULL    | auto_increment |
| tournament_id | int(11)      | YES  | MUL | NULL    |                |
| name          | varchar(100) | NO   |     | NULL    |                |
+---------------+--------------+------+-----+---------+----------------+
describe medal;
+-----------+--------------+------+-----+---------+----------------+
| Field     | Type         | Null | Key | Default | Extra          |
+-----------+--------------+------+-----+---------+----------------+
| medal_id  | int(11)      | NO   | PRI | NULL    | auto_increment |
| format_id | int(11)      | YES  | MUL | NULL    |                |
| type      | varchar(50)  | NO   |     | NULL    |                |
| year      | int(11)      | YES  |     | NULL    |                |
| location  | varchar(100) | NO   |     | NULL    |                |
+-----------+--------------+------+-----+---------+----------------+
)";

std::string load_asset(const std::string& name) {
    static std::map<std::string, std::string> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(name);
    if (it != cache.end()) return it->second;
    std::string text = util::read_file(util::repo_path("assets/prompts/" + name));
    cache[name] = text;
    return text;
}

std::string instruction_for(StrategyKind kind) {
    switch (kind) {
        case StrategyKind::DirectZeroShot:
        case StrategyKind::DirectStatic:
        case StrategyKind::DirectAdaptive: return load_asset("direct.txt");
        case StrategyKind::CoT: return load_asset("cot.txt");
        case StrategyKind::PlanSolve: return load_asset("plan_solve.txt");
        case StrategyKind::Clear: return load_asset("clear_stage1.txt");
        case StrategyKind::SqlStatic:
        case StrategyKind::SqlAdaptive:
        case StrategyKind::SqlZeroShot: return load_asset("sql.txt");
    }
    return load_asset("direct.txt");
}

using TermCounts = std::map<std::string, int>;

TermCounts term_counts(const std::string& text) {
    TermCounts tf;
    for (const auto& token : util::alnum_tokens(text)) tf[token]++;
    return tf;
}

}  // namespace

std::string serialize_schema() {
    std::string out = "1. Table Schemas:\n";
    out += oracle::kSchemaDdl;
    out += "\n2. Table Descriptions:\n";
    out += kTableDescriptions;
    return out;
}

std::vector<Shot> retrieve_shots(const std::string& question, const std::vector<Shot>& pool,
                                 size_t k) {
    if (pool.empty()) throw EmptyPool("shot pool is empty");
    k = std::min(k, pool.size());

    std::map<std::string, int> df;
    std::vector<TermCounts> doc_tf;
    doc_tf.reserve(pool.size());
    for (const auto& shot : pool) {
        TermCounts tf = term_counts(shot.question);
        for (const auto& [term, n] : tf) df[term]++;
        doc_tf.push_back(std::move(tf));
    }
    const double n_docs = static_cast<double>(pool.size());
    auto idf = [&](const std::string& term) {
        auto it = df.find(term);
        if (it == df.end()) return 0.0;
        return std::log(n_docs / static_cast<double>(it->second));
    };

    TermCounts query_tf = term_counts(question);
    double query_norm = 0.0;
    for (const auto& [term, n] : query_tf) {
        double w = n * idf(term);
        query_norm += w * w;
    }
    query_norm = std::sqrt(query_norm);

    struct Scored {
        double score;
        int pool_index;
        size_t position;
    };
    std::vector<Scored> scored;
    scored.reserve(pool.size());
    for (size_t d = 0; d < pool.size(); ++d) {
        double dot = 0.0, doc_norm = 0.0;
        for (const auto& [term, n] : doc_tf[d]) {  // sorted term order: permutation-stable
            double w = n * idf(term);
            doc_norm += w * w;
            auto it = query_tf.find(term);
            if (it != query_tf.end()) dot += w * it->second * idf(term);
        }
        doc_norm = std::sqrt(doc_norm);
        double score =
            (query_norm > 0.0 && doc_norm > 0.0) ? dot / (query_norm * doc_norm) : 0.0;
        scored.push_back({score, pool[d].pool_index, d});
    }
    std::sort(scored.begin(), scored.end(), [](const Scored& a, const Scored& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.pool_index < b.pool_index;
    });

    std::vector<Shot> out;
    out.reserve(k);
    for (size_t i = 0; i < k; ++i) out.push_back(pool[scored[i].position]);
    return out;
}

namespace {

void check_pool_kind(StrategyKind kind, const std::vector<Shot>& pool) {
    bool want_sql = is_sql_strategy(kind);
    for (const auto& shot : pool) {
        bool is_sql = !statement_violation(shot.exemplar).has_value();
        if (want_sql && !is_sql) {
            throw PoolKindMismatch("symbolic strategy given non-SQL exemplar for question '" +
                                   shot.question + "'");
        }
        if (!want_sql && is_sql) {
            throw PoolKindMismatch("direct strategy given SQL exemplar for question '" +
                                   shot.question + "'");
        }
    }
}

}  // namespace

PromptEnvelope build_prompt(StrategyKind kind, const gen::QAInstance& instance,
                            const std::vector<Shot>& pool, size_t k) {
    if (kind == StrategyKind::Clear) return build_clear_stage(1, instance, {});

    PromptEnvelope env;
    env.instruction = instruction_for(kind);
    env.question = instance.question;
    env.strategy_tag = strategy_tag(kind);
    env.context_block = is_sql_strategy(kind) ? serialize_schema()
                                              : instance.serialized_context;

    bool uses_shots = kind == StrategyKind::DirectStatic ||
                      kind == StrategyKind::DirectAdaptive ||
                      kind == StrategyKind::SqlStatic || kind == StrategyKind::SqlAdaptive;
    if (uses_shots) {
        check_pool_kind(kind, pool);
        if (pool.empty()) throw EmptyPool("few-shot strategy needs a non-empty pool");
        bool adaptive =
            kind == StrategyKind::DirectAdaptive || kind == StrategyKind::SqlAdaptive;
        if (adaptive) {
            env.shots = retrieve_shots(instance.question, pool, k);
        } else {
            size_t n = std::min(k, pool.size());
            env.shots.assign(pool.begin(), pool.begin() + n);
        }
    }
    return env;
}

PromptEnvelope build_clear_stage(int stage, const gen::QAInstance& instance,
                                 const std::vector<std::string>& prior_outputs) {
    if (stage < 1 || stage > kClearStages) {
        throw core::DomainError("clear stage must be 1..4");
    }
    if (static_cast<int>(prior_outputs.size()) < stage - 1) {
        throw core::DomainError("clear stage " + std::to_string(stage) + " needs " +
                                std::to_string(stage - 1) + " prior outputs");
    }
    PromptEnvelope env;
    env.instruction = load_asset("clear_stage" + std::to_string(stage) + ".txt");
    env.question = instance.question;
    env.strategy_tag = "clear#" + std::to_string(stage);
    switch (stage) {
        case 1:
            env.context_block = instance.serialized_context;
            break;
        case 2:
            env.context_block = "Relevant rows:\n" + util::trim(prior_outputs[0]);
            break;
        case 3:
            env.context_block = "Relevant rows:\n" + util::trim(prior_outputs[0]) +
                                "\n\nSub-questions:\n" + util::trim(prior_outputs[1]);
            break;
        case 4:
            env.context_block = "Relevant rows:\n" + util::trim(prior_outputs[0]) +
                                "\n\nSub-questions:\n" + util::trim(prior_outputs[1]) +
                                "\n\nSub-answers:\n" + util::trim(prior_outputs[2]);
            break;
    }
    return env;
}

std::string extract_sql(const std::string& raw) {
    size_t fence = raw.find("```");
    if (fence != std::string::npos) {
        size_t body = raw.find('\n', fence);
        if (body == std::string::npos) {
            body = fence + 3;  // fence with no newline; treat rest as body
        } else {
            ++body;
        }
        size_t close = raw.find("```", body);
        std::string content =
            close == std::string::npos ? raw.substr(body) : raw.substr(body, close - body);
        content = util::trim(content);
        if (content.empty()) throw NoSqlFound("fenced block is empty");
        return content;
    }

    auto is_word_char = [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
    };
    size_t start = std::string::npos;
    for (size_t i = 0; i < raw.size(); ++i) {
        if (i > 0 && is_word_char(raw[i - 1])) continue;
        if (util::starts_with_ci(std::string_view(raw).substr(i), "select") &&
            (i + 6 >= raw.size() || !is_word_char(raw[i + 6]))) {
            start = i;
            break;
        }
        if (util::starts_with_ci(std::string_view(raw).substr(i), "with") &&
            (i + 4 >= raw.size() || !is_word_char(raw[i + 4]))) {
            start = i;
            break;
        }
    }
    if (start == std::string::npos) throw NoSqlFound("response contains no SQL statement");

    bool in_string = false;
    size_t end = raw.size();
    for (size_t i = start; i < raw.size(); ++i) {
        char c = raw[i];
        if (in_string) {
            if (c == '\'') in_string = false;
        } else if (c == '\'') {
            in_string = true;
        } else if (c == ';') {
            end = i + 1;
            break;
        }
    }
    return util::trim(raw.substr(start, end - start));
}

std::string extract_answer(const std::string& raw) {
    std::string lower = util::ascii_lower(raw);
    size_t pos = lower.rfind("answer:");
    std::string tail = pos == std::string::npos ? raw : raw.substr(pos + 7);
    tail = util::trim(tail);
    // markdown emphasis around the marker leaves stray asterisks behind
    while (!tail.empty() && (tail.front() == '*' || tail.front() == '_')) tail.erase(0, 1);
    while (!tail.empty() && (tail.back() == '*' || tail.back() == '_')) tail.pop_back();
    return oracle::normalize_answer(tail);
}

std::vector<Shot> load_shot_pool(const std::filesystem::path& path) {
    json j = json::parse(util::read_file(path));
    if (!j.is_array()) throw core::DomainError("shot pool must be a JSON array");
    std::vector<Shot> pool;
    int index = 0;
    for (const json& item : j) {
        pool.push_back(Shot{item.at("question").get<std::string>(),
                            item.at("exemplar").get<std::string>(), index++});
    }
    return pool;
}

const std::vector<Shot>& default_sql_pool() {
    static const std::vector<Shot> kPool =
        load_shot_pool(util::repo_path("assets/pools/sql_shots.json"));
    return kPool;
}

const std::vector<Shot>& default_direct_pool() {
    static const std::vector<Shot> kPool =
        load_shot_pool(util::repo_path("assets/pools/direct_shots.json"));
    return kPool;
}

const std::vector<Shot>& default_pool_for(StrategyKind kind) {
    return is_sql_strategy(kind) ? default_sql_pool() : default_direct_pool();
}

}  // namespace medalqa::strategy
