#include "medalqa/oracle/oracle.hpp"

#include "medalqa/util/strings.hpp"

#include <cctype>

namespace medalqa::oracle {

namespace {

// Named parameters appearing in the pattern (":athlete" -> "athlete"),
// skipping string literals.
std::vector<std::string> pattern_placeholders(const std::string& sql) {
    std::vector<std::string> out;
    bool in_string = false;
    for (size_t i = 0; i < sql.size(); ++i) {
        char c = sql[i];
        if (in_string) {
            if (c == '\'') in_string = false;
            continue;
        }
        if (c == '\'') {
            in_string = true;
            continue;
        }
        if (c == ':' && i + 1 < sql.size() &&
            (std::isalpha(static_cast<unsigned char>(sql[i + 1])) || sql[i + 1] == '_')) {
            size_t j = i + 1;
            while (j < sql.size() &&
                   (std::isalnum(static_cast<unsigned char>(sql[j])) || sql[j] == '_')) {
                ++j;
            }
            out.push_back(sql.substr(i + 1, j - i - 1));
            i = j - 1;
        }
    }
    return out;
}

}  // namespace

OracleQuery make_oracle_query(const QuestionTemplate& tpl, const Bindings& bindings) {
    return OracleQuery{tpl.id, tpl.sql_pattern, bindings};
}

GoldAnswer execute_oracle(const OracleQuery& query, const SqliteStore& store) {
    for (const auto& name : pattern_placeholders(query.sql_pattern)) {
        if (!query.bindings.count(name)) {
            throw SqlError("placeholder ':" + name + "' has no binding");
        }
    }
    AnswerKind kind = AnswerKind::Scalar;
    try {
        kind = template_by_id(query.template_id).answer_kind;
    } catch (const UnknownTemplate&) {
        // ad-hoc query; Scalar is the neutral base kind
    }
    auto rows = store.query(query.sql_pattern, query.bindings);
    std::vector<std::string> values;
    for (const auto& row : rows) {
        std::string cell = util::join(row, " ");
        if (!util::trim(cell).empty()) values.push_back(cell);
    }
    GoldAnswer gold = make_gold_answer(kind, values);
    if (gold.values.empty()) {
        throw EmptyResult("oracle returned no rows for template '" + query.template_id + "'");
    }
    return gold;
}

GoldAnswer execute_oracle(const OracleQuery& query, const core::RelationalBundle& bundle) {
    return execute_oracle(query, SqliteStore::in_memory(bundle));
}

GoldAnswer brute_force(const std::string& template_id, const Bindings& bindings,
                       std::span<const core::AthleteRecord> records) {
    const QuestionTemplate& tpl = template_by_id(template_id);
    auto athlete_it = bindings.find("athlete");
    if (athlete_it == bindings.end()) {
        throw EmptyResult("bindings carry no athlete name");
    }
    const core::AthleteRecord* record = nullptr;
    for (const auto& r : records) {
        if (r.name == athlete_it->second) {
            record = &r;
            break;
        }
    }
    if (!record) {
        throw EmptyResult("athlete '" + athlete_it->second + "' not in records");
    }
    std::vector<std::string> values = tpl.evaluate_direct(*record, bindings);
    GoldAnswer gold = make_gold_answer(tpl.answer_kind, values);
    if (gold.values.empty()) {
        throw EmptyResult("no answer for template '" + template_id + "' on athlete '" +
                          record->name + "'");
    }
    return gold;
}

int compute_age(const core::PartialDate& birth, int event_year) {
    if (event_year < birth.year) {
        throw EventBeforeBirth("event year " + std::to_string(event_year) +
                               " precedes birth year " + std::to_string(birth.year));
    }
    return event_year - birth.year;
}

}  // namespace medalqa::oracle
