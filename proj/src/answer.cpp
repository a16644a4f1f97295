#include "medalqa/oracle/answer.hpp"

#include "medalqa/util/strings.hpp"

#include <algorithm>
#include <cctype>

namespace medalqa::oracle {

std::string answer_kind_name(AnswerKind k) {
    switch (k) {
        case AnswerKind::Scalar: return "Scalar";
        case AnswerKind::Set: return "Set";
        case AnswerKind::Boolean: return "Boolean";
        case AnswerKind::Count: return "Count";
        case AnswerKind::Year: return "Year";
        case AnswerKind::Age: return "Age";
        case AnswerKind::Location: return "Location";
    }
    return "Scalar";
}

AnswerKind answer_kind_from_name(std::string_view s) {
    if (s == "Set") return AnswerKind::Set;
    if (s == "Boolean") return AnswerKind::Boolean;
    if (s == "Count") return AnswerKind::Count;
    if (s == "Year") return AnswerKind::Year;
    if (s == "Age") return AnswerKind::Age;
    if (s == "Location") return AnswerKind::Location;
    if (s == "Scalar") return AnswerKind::Scalar;
    throw core::DomainError("unknown answer kind '" + std::string(s) + "'");
}

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    return std::all_of(s.begin(), s.end(),
                       [](unsigned char c) { return std::isdigit(c) != 0; });
}

}  // namespace

std::string normalize_answer(std::string_view raw) {
    std::string s = util::ascii_lower(util::trim(raw));
    while (!s.empty()) {
        char c = s.back();
        if (c == '.' || c == '!' || c == '?' || c == ',' || c == ';' || c == ':') {
            s.pop_back();
        } else {
            break;
        }
    }
    s = util::trim(s);
    // Strip leading articles until none remain so the result is a fixed point.
    for (;;) {
        std::string next = s;
        for (std::string_view article : {"a ", "an ", "the "}) {
            if (next.size() > article.size() && next.compare(0, article.size(), article) == 0) {
                next = util::trim(next.substr(article.size()));
                break;
            }
        }
        if (next == s) break;
        s = std::move(next);
    }
    if (all_digits(s)) {
        size_t i = 0;
        while (i + 1 < s.size() && s[i] == '0') ++i;
        s = s.substr(i);
    }
    return s;
}

GoldAnswer make_gold_answer(AnswerKind base_kind, std::vector<std::string> raw_values) {
    std::vector<std::string> values;
    for (const auto& v : raw_values) {
        std::string n = normalize_answer(v);
        if (!n.empty()) values.push_back(std::move(n));
    }
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    AnswerKind kind = values.size() > 1 ? AnswerKind::Set : base_kind;
    return GoldAnswer{kind, std::move(values)};
}

std::optional<std::string> gold_violation(const GoldAnswer& gold) {
    if (gold.values.empty()) return "gold answer has no values";
    for (const auto& v : gold.values) {
        if (v.empty()) return "gold answer contains an empty value";
        if (normalize_answer(v) != v) return "gold value '" + v + "' not in canonical form";
    }
    switch (gold.kind) {
        case AnswerKind::Boolean:
            for (const auto& v : gold.values) {
                if (v != "yes" && v != "no") return "boolean value '" + v + "'";
            }
            break;
        case AnswerKind::Count:
        case AnswerKind::Year:
        case AnswerKind::Age:
            for (const auto& v : gold.values) {
                if (v.find_first_not_of("0123456789") != std::string::npos || v.empty()) {
                    return "numeric kind value '" + v + "' is not a non-negative integer";
                }
            }
            break;
        default:
            break;
    }
    return std::nullopt;
}

}  // namespace medalqa::oracle
