#pragma once

#include "medalqa/core/types.hpp"
#include "medalqa/oracle/answer.hpp"
#include "medalqa/oracle/store.hpp"

#include <functional>
#include <string>
#include <vector>

namespace medalqa::oracle {

enum class Tier { Easy, Medium, Hard };

std::string tier_name(Tier t);
Tier tier_from_name(std::string_view s);

struct UnknownTemplate : core::DomainError {
    explicit UnknownTemplate(const std::string& id);
};

// One question template: a text pattern, the parameterized SQL that answers
// it, and an independent in-memory evaluator used to cross-check the SQL
// route. Both sides take the same bindings.
struct QuestionTemplate {
    std::string id;
    Tier tier = Tier::Easy;
    std::string text_pattern;  // placeholders: [Athlete] [Tournament] [MedalType] ...
    std::string sql_pattern;   // named parameters: :athlete :tournament :medal_type ...
    AnswerKind answer_kind = AnswerKind::Scalar;

    // All binding combinations drawn from values present in the record,
    // sorted deterministically. Always includes the "athlete" key.
    std::function<std::vector<Bindings>(const core::AthleteRecord&)> enumerate_bindings;

    // Raw (unnormalized) answer values by direct traversal; empty means the
    // question has no answer for this record.
    std::function<std::vector<std::string>(const core::AthleteRecord&, const Bindings&)>
        evaluate_direct;
};

const std::vector<QuestionTemplate>& catalog();
const QuestionTemplate& template_by_id(const std::string& id);

std::string render_question(const QuestionTemplate& tpl, const Bindings& bindings);

// Substitutes bindings into the SQL pattern as literals (names quoted and
// escaped, years bare). This is the text handed to prompts and mocks; oracle
// execution itself binds parameters instead.
std::string render_sql_literal(const std::string& sql_pattern, const Bindings& bindings);

}  // namespace medalqa::oracle
