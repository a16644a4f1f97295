#pragma once

#include "medalqa/oracle/catalog.hpp"

#include <span>

namespace medalqa::oracle {

struct EmptyResult : core::DomainError {
    using core::DomainError::DomainError;
};

struct EventBeforeBirth : core::DomainError {
    using core::DomainError::DomainError;
};

struct OracleQuery {
    std::string template_id;
    std::string sql_pattern;
    Bindings bindings;
};

OracleQuery make_oracle_query(const QuestionTemplate& tpl, const Bindings& bindings);

// Runs the parameterized SQL against the store and normalizes the result
// rows into a gold answer. Throws EmptyResult when no non-null rows come
// back (the question is unanswerable on this data) and SqlError on engine
// failures. Never mutates the store.
GoldAnswer execute_oracle(const OracleQuery& query, const SqliteStore& store);
GoldAnswer execute_oracle(const OracleQuery& query, const core::RelationalBundle& bundle);

// The independent route: evaluates the template by direct traversal of the
// in-memory records, no SQL engine involved.
GoldAnswer brute_force(const std::string& template_id, const Bindings& bindings,
                       std::span<const core::AthleteRecord> records);

// Ages are year differences; medal rows carry no month or day.
int compute_age(const core::PartialDate& birth, int event_year);

}  // namespace medalqa::oracle
