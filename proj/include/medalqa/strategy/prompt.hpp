#pragma once

#include "medalqa/gen/generator.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace medalqa::strategy {

struct EmptyPool : core::DomainError {
    using core::DomainError::DomainError;
};

struct PoolKindMismatch : core::DomainError {
    using core::DomainError::DomainError;
};

struct NoSqlFound : core::DomainError {
    using core::DomainError::DomainError;
};

struct Shot {
    std::string question;
    std::string exemplar;  // free-text answer (direct) or SQL text (symbolic)
    int pool_index = 0;
};

enum class StrategyKind {
    DirectZeroShot,
    DirectStatic,
    DirectAdaptive,
    CoT,
    PlanSolve,
    Clear,
    SqlStatic,
    SqlAdaptive,
    SqlZeroShot,
};

constexpr StrategyKind kAllStrategies[] = {
    StrategyKind::DirectZeroShot, StrategyKind::DirectStatic, StrategyKind::DirectAdaptive,
    StrategyKind::CoT,            StrategyKind::PlanSolve,    StrategyKind::Clear,
    StrategyKind::SqlStatic,      StrategyKind::SqlAdaptive,  StrategyKind::SqlZeroShot,
};

std::string strategy_tag(StrategyKind kind);
StrategyKind strategy_from_tag(std::string_view tag);
bool is_sql_strategy(StrategyKind kind);

struct PromptEnvelope {
    std::string instruction;
    std::string context_block;
    std::vector<Shot> shots;
    std::string question;
    std::string strategy_tag;

    // Canonical byte-exact rendering; the envelope hash and the chat request
    // body both derive from it.
    std::string render_text() const;
    std::string envelope_hash() const;
};

// Schema text handed to symbolic strategies: the five CREATE TABLE
// statements plus the table-description blocks. Contains no row data.
std::string serialize_schema();

// Top-k exemplars by TF-IDF cosine over lowercased alphanumeric tokens,
// ties broken by ascending pool_index. Stable under pool permutation.
std::vector<Shot> retrieve_shots(const std::string& question, const std::vector<Shot>& pool,
                                 size_t k);

PromptEnvelope build_prompt(StrategyKind kind, const gen::QAInstance& instance,
                            const std::vector<Shot>& pool, size_t k);

// C.L.E.A.R runs as four chained calls; stage is 1-based and prior_outputs
// holds the raw responses of earlier stages.
constexpr int kClearStages = 4;
PromptEnvelope build_clear_stage(int stage, const gen::QAInstance& instance,
                                 const std::vector<std::string>& prior_outputs);

// First fenced code block if present, else the first SELECT/WITH statement.
std::string extract_sql(const std::string& raw);

// Text after the last "Answer:" marker (case-insensitive), else the whole
// response; normalized.
std::string extract_answer(const std::string& raw);

std::vector<Shot> load_shot_pool(const std::filesystem::path& path);

// The pools shipped under assets/: the six SQL exemplars and six direct Q/A
// exemplars.
const std::vector<Shot>& default_sql_pool();
const std::vector<Shot>& default_direct_pool();
const std::vector<Shot>& default_pool_for(StrategyKind kind);

}  // namespace medalqa::strategy
