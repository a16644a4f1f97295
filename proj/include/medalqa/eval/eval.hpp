#pragma once

#include "medalqa/gen/generator.hpp"

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace medalqa::eval {

struct UnknownInstance : core::DomainError {
    using core::DomainError::DomainError;
};

struct DuplicatePrediction : core::DomainError {
    using core::DomainError::DomainError;
};

struct Prediction {
    std::string instance_id;
    std::string strategy_tag;
    std::string raw_response;
    std::vector<std::string> values;  // extracted answers; empty when errored
    std::optional<std::string> error_tag;  // NoSqlFound, Timeout, ForbiddenStatement,
                                           // SqlError, EmptyResult
};

// Exact match: 1 iff the normalized prediction equals the gold value
// (set equality for Set golds). Errored or empty predictions score 0.
int ems(const std::vector<std::string>& values, const oracle::GoldAnswer& gold);

// Relaxed match: exact match, or a whole-token containment between a
// prediction value and a gold value in either direction. Never below ems.
int rems(const std::vector<std::string>& values, const oracle::GoldAnswer& gold);

inline int ems(const Prediction& p, const oracle::GoldAnswer& gold) {
    return p.error_tag ? 0 : ems(p.values, gold);
}
inline int rems(const Prediction& p, const oracle::GoldAnswer& gold) {
    return p.error_tag ? 0 : rems(p.values, gold);
}

// Accuracies are integer hundredths of a percent so gap arithmetic on the
// rendered cells is exact.
struct SplitCell {
    int total = 0;
    int ems_correct = 0;
    int rems_correct = 0;
    int ems_hundredths() const;
    int rems_hundredths() const;
};

std::string format_hundredths(int hundredths);

struct StrategyReport {
    std::string strategy_tag;
    std::map<std::string, SplitCell> cells;  // Overall, Original, CounterFact, Small,
                                             // Large, Unclassified, Easy, Medium, Hard
    std::map<std::string, int> error_counts;
    int errored_total = 0;

    int delta_hundredths(const std::string& a, const std::string& b, bool use_rems) const;
};

struct EvalReport {
    std::vector<StrategyReport> strategies;

    nlohmann::ordered_json to_json() const;
    std::string render_text() const;  // aligned table, Method/Original/CounterF./Delta order
    const StrategyReport& strategy(const std::string& tag) const;
};

EvalReport aggregate(std::span<const Prediction> predictions,
                     const gen::DatasetManifest& manifest);

std::string predictions_to_jsonl(std::span<const Prediction> predictions);
std::vector<Prediction> predictions_from_jsonl(const std::string& text);

}  // namespace medalqa::eval
