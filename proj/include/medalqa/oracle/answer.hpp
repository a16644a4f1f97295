#pragma once

#include "medalqa/core/types.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace medalqa::oracle {

enum class AnswerKind { Scalar, Set, Boolean, Count, Year, Age, Location };

std::string answer_kind_name(AnswerKind k);
AnswerKind answer_kind_from_name(std::string_view s);

// Canonical form shared by gold answers and predictions: lowercase, trimmed,
// terminal punctuation stripped, leading articles removed, integer strings
// without leading zeros. Idempotent.
std::string normalize_answer(std::string_view raw);

struct GoldAnswer {
    AnswerKind kind = AnswerKind::Scalar;
    std::vector<std::string> values;  // normalized, sorted, unique, non-empty

    bool operator==(const GoldAnswer&) const = default;
};

// Builds a GoldAnswer from raw oracle output values. Values are normalized,
// deduplicated and sorted; a multi-valued result is promoted to Set so exact
// match requires all of it.
GoldAnswer make_gold_answer(AnswerKind base_kind, std::vector<std::string> raw_values);

std::optional<std::string> gold_violation(const GoldAnswer& gold);

}  // namespace medalqa::oracle
