#pragma once

#include "medalqa/oracle/store.hpp"

#include <chrono>
#include <string>
#include <vector>

namespace medalqa::strategy {

struct ForbiddenStatement : core::DomainError {
    using core::DomainError::DomainError;
};

struct QueryTimeout : core::DomainError {
    using core::DomainError::DomainError;
};

// Returns the reason this statement is not a lone SELECT/WITH query, or
// nullopt when it is. String literals, quoted identifiers and comments are
// skipped before keywords are inspected.
std::optional<std::string> statement_violation(const std::string& sql);

// Runs one SELECT/WITH statement against the store under a statement
// whitelist, an engine authorizer that denies everything but reads, and a
// wall-clock deadline. Cells come back as text.
std::vector<std::vector<std::string>> execute_sandboxed(
    const std::string& sql, const oracle::SqliteStore& store,
    std::chrono::milliseconds timeout = std::chrono::milliseconds(2000));

}  // namespace medalqa::strategy
