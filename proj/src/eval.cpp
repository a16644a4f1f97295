#include "medalqa/eval/eval.hpp"

#include "medalqa/util/strings.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

namespace medalqa::eval {

using nlohmann::json;
using nlohmann::ordered_json;
using oracle::AnswerKind;
using oracle::GoldAnswer;

namespace {

std::vector<std::string> normalized_values(const std::vector<std::string>& values) {
    std::vector<std::string> out;
    for (const auto& v : values) {
        std::string n = oracle::normalize_answer(v);
        if (!n.empty()) out.push_back(std::move(n));
    }
    return out;
}

// Splits a free-text answer that lists several values: commas, semicolons
// and the word "and".
std::vector<std::string> split_listed(const std::string& value) {
    std::vector<std::string> parts;
    std::string cur;
    auto flush = [&]() {
        if (!util::trim(cur).empty()) parts.push_back(util::trim(cur));
        cur.clear();
    };
    for (size_t i = 0; i < value.size(); ++i) {
        if (value[i] == ',' || value[i] == ';') {
            flush();
            continue;
        }
        if (value.compare(i, 5, " and ") == 0) {
            flush();
            i += 4;
            continue;
        }
        cur.push_back(value[i]);
    }
    flush();
    return parts;
}

bool token_contained(const std::vector<std::string>& needle,
                     const std::vector<std::string>& haystack) {
    if (needle.empty() || needle.size() > haystack.size()) return false;
    for (size_t i = 0; i + needle.size() <= haystack.size(); ++i) {
        if (std::equal(needle.begin(), needle.end(), haystack.begin() + i)) return true;
    }
    return false;
}

}  // namespace

int ems(const std::vector<std::string>& values, const GoldAnswer& gold) {
    std::vector<std::string> preds = normalized_values(values);
    if (preds.empty() || gold.values.empty()) return 0;
    std::set<std::string> gold_set(gold.values.begin(), gold.values.end());
    if (gold.kind == AnswerKind::Set) {
        std::set<std::string> unsplit(preds.begin(), preds.end());
        std::set<std::string> split;
        for (const auto& v : preds) {
            for (const auto& part : split_listed(v)) {
                std::string n = oracle::normalize_answer(part);
                if (!n.empty()) split.insert(std::move(n));
            }
        }
        return unsplit == gold_set || split == gold_set ? 1 : 0;
    }
    for (const auto& p : preds) {
        if (!gold_set.count(p)) return 0;
    }
    return 1;
}

int rems(const std::vector<std::string>& values, const GoldAnswer& gold) {
    if (ems(values, gold) == 1) return 1;
    std::vector<std::string> preds = normalized_values(values);
    if (preds.empty()) return 0;
    for (const auto& p : preds) {
        auto p_tokens = util::whitespace_tokens(p);
        for (const auto& g : gold.values) {
            auto g_tokens = util::whitespace_tokens(g);
            if (token_contained(g_tokens, p_tokens) || token_contained(p_tokens, g_tokens)) {
                return 1;
            }
        }
    }
    return 0;
}

int SplitCell::ems_hundredths() const {
    if (total == 0) return 0;
    return static_cast<int>(std::llround(10000.0 * ems_correct / total));
}

int SplitCell::rems_hundredths() const {
    if (total == 0) return 0;
    return static_cast<int>(std::llround(10000.0 * rems_correct / total));
}

std::string format_hundredths(int hundredths) {
    char buf[32];
    int mag = std::abs(hundredths);
    std::snprintf(buf, sizeof(buf), "%s%d.%02d", hundredths < 0 ? "-" : "", mag / 100,
                  mag % 100);
    return buf;
}

int StrategyReport::delta_hundredths(const std::string& a, const std::string& b,
                                     bool use_rems) const {
    auto value = [&](const std::string& key) {
        auto it = cells.find(key);
        if (it == cells.end()) return 0;
        return use_rems ? it->second.rems_hundredths() : it->second.ems_hundredths();
    };
    return value(a) - value(b);
}

const StrategyReport& EvalReport::strategy(const std::string& tag) const {
    for (const auto& s : strategies) {
        if (s.strategy_tag == tag) return s;
    }
    throw core::DomainError("report has no strategy '" + tag + "'");
}

EvalReport aggregate(std::span<const Prediction> predictions,
                     const gen::DatasetManifest& manifest) {
    std::map<std::string, const gen::QAInstance*> by_id;
    for (const auto& inst : manifest.instances) by_id[inst.instance_id] = &inst;

    std::set<std::pair<std::string, std::string>> seen;
    std::map<std::string, StrategyReport> reports;
    for (const auto& pred : predictions) {
        auto it = by_id.find(pred.instance_id);
        if (it == by_id.end()) {
            throw UnknownInstance("prediction references unknown instance '" +
                                  pred.instance_id + "'");
        }
        if (!seen.insert({pred.strategy_tag, pred.instance_id}).second) {
            throw DuplicatePrediction("duplicate prediction for instance '" +
                                      pred.instance_id + "' under strategy '" +
                                      pred.strategy_tag + "'");
        }
        const gen::QAInstance& inst = *it->second;
        StrategyReport& rep = reports[pred.strategy_tag];
        rep.strategy_tag = pred.strategy_tag;

        int e = ems(pred, inst.gold);
        int r = rems(pred, inst.gold);
        auto tally = [&](const std::string& cell) {
            SplitCell& c = rep.cells[cell];
            c.total++;
            c.ems_correct += e;
            c.rems_correct += r;
        };
        tally("Overall");
        tally(gen::origin_name(inst.origin));
        tally(ingest::size_class_name(inst.size_class));
        tally(oracle::tier_name(inst.tier));
        if (pred.error_tag) {
            rep.error_counts[*pred.error_tag]++;
            rep.errored_total++;
        }
    }

    EvalReport out;
    for (auto& [tag, rep] : reports) out.strategies.push_back(std::move(rep));
    return out;
}

ordered_json EvalReport::to_json() const {
    ordered_json j;
    j["strategies"] = ordered_json::array();
    for (const auto& s : strategies) {
        ordered_json cells;
        for (const auto& [name, cell] : s.cells) {
            cells[name] = ordered_json{{"total", cell.total},
                                       {"ems", format_hundredths(cell.ems_hundredths())},
                                       {"rems", format_hundredths(cell.rems_hundredths())}};
        }
        ordered_json deltas;
        for (bool use_rems : {false, true}) {
            ordered_json d;
            d["original_minus_counterfact"] =
                format_hundredths(s.delta_hundredths("Original", "CounterFact", use_rems));
            d["small_minus_large"] =
                format_hundredths(s.delta_hundredths("Small", "Large", use_rems));
            deltas[use_rems ? "rems" : "ems"] = d;
        }
        ordered_json errors;
        for (const auto& [tag, n] : s.error_counts) errors[tag] = n;
        j["strategies"].push_back(ordered_json{{"strategy", s.strategy_tag},
                                               {"cells", cells},
                                               {"deltas", deltas},
                                               {"errored", s.errored_total},
                                               {"errors", errors}});
    }
    return j;
}

std::string EvalReport::render_text() const {
    static const char* kColumns[] = {"Overall", "Original", "CounterF.", "D(O-C)",
                                     "Small",   "Large",    "D(S-L)",    "Easy",
                                     "Medium",  "Hard"};
    std::ostringstream out;
    char line[512];
    std::snprintf(line, sizeof(line), "%-16s %-5s", "Method", "Metric");
    out << line;
    for (const char* c : kColumns) {
        std::snprintf(line, sizeof(line), " %9s", c);
        out << line;
    }
    out << "\n";
    for (const auto& s : strategies) {
        for (bool use_rems : {false, true}) {
            auto cell = [&](const std::string& key) -> std::string {
                auto it = s.cells.find(key);
                if (it == s.cells.end() || it->second.total == 0) return "-";
                return format_hundredths(use_rems ? it->second.rems_hundredths()
                                                  : it->second.ems_hundredths());
            };
            std::snprintf(line, sizeof(line), "%-16s %-5s", s.strategy_tag.c_str(),
                          use_rems ? "REMS" : "EMS");
            out << line;
            std::vector<std::string> row = {
                cell("Overall"),
                cell("Original"),
                cell("CounterFact"),
                format_hundredths(s.delta_hundredths("Original", "CounterFact", use_rems)),
                cell("Small"),
                cell("Large"),
                format_hundredths(s.delta_hundredths("Small", "Large", use_rems)),
                cell("Easy"),
                cell("Medium"),
                cell("Hard"),
            };
            for (const auto& v : row) {
                std::snprintf(line, sizeof(line), " %9s", v.c_str());
                out << line;
            }
            out << "\n";
        }
        if (s.errored_total > 0) {
            out << "  errors:";
            for (const auto& [tag, n] : s.error_counts) out << " " << tag << "=" << n;
            out << " (total " << s.errored_total << ")\n";
        }
    }
    return out.str();
}

std::string predictions_to_jsonl(std::span<const Prediction> predictions) {
    std::string out;
    for (const auto& p : predictions) {
        ordered_json j;
        j["instance_id"] = p.instance_id;
        j["strategy"] = p.strategy_tag;
        j["raw_response"] = p.raw_response;
        j["values"] = p.values;
        if (p.error_tag) {
            j["error"] = *p.error_tag;
        } else {
            j["error"] = nullptr;
        }
        out += j.dump() + "\n";
    }
    return out;
}

std::vector<Prediction> predictions_from_jsonl(const std::string& text) {
    std::vector<Prediction> out;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (util::trim(line).empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            throw core::DomainError("predictions line " + std::to_string(line_no) + ": " +
                                    e.what());
        }
        Prediction p;
        p.instance_id = j.at("instance_id").get<std::string>();
        p.strategy_tag = j.at("strategy").get<std::string>();
        p.raw_response = j.value("raw_response", std::string());
        p.values = j.at("values").get<std::vector<std::string>>();
        if (j.contains("error") && !j["error"].is_null()) {
            p.error_tag = j["error"].get<std::string>();
        }
        out.push_back(std::move(p));
    }
    return out;
}

}  // namespace medalqa::eval
