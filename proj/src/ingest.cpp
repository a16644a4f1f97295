#include "medalqa/ingest/ingest.hpp"

#include "medalqa/util/strings.hpp"

#include <fstream>
#include <sstream>

namespace medalqa::ingest {

using nlohmann::json;
using nlohmann::ordered_json;

FileUnreadable::FileUnreadable(const std::string& path)
    : core::DomainError("cannot read dataset file: " + path) {}

MalformedEntry::MalformedEntry(int line_, std::string reason_)
    : core::DomainError("line " + std::to_string(line_) + ": " + reason_),
      line(line_),
      reason(std::move(reason_)) {}

std::string size_class_name(SizeClass s) {
    switch (s) {
        case SizeClass::Small: return "Small";
        case SizeClass::Large: return "Large";
        case SizeClass::Unclassified: return "Unclassified";
    }
    return "Unclassified";
}

SizeClass size_class_from_name(std::string_view s) {
    if (s == "Small") return SizeClass::Small;
    if (s == "Large") return SizeClass::Large;
    if (s == "Unclassified") return SizeClass::Unclassified;
    throw core::DomainError("unknown size class '" + std::string(s) + "'");
}

SizeClass classify_size(const core::AthleteRecord& record, SizeThresholds t) {
    if (t.small_max >= t.large_min) {
        throw InvalidThresholds("small_max (" + std::to_string(t.small_max) +
                                ") must be below large_min (" + std::to_string(t.large_min) +
                                ")");
    }
    int n = core::medal_row_count(record);
    if (n <= t.small_max) return SizeClass::Small;
    if (n >= t.large_min) return SizeClass::Large;
    return SizeClass::Unclassified;
}

ordered_json IngestReport::to_json() const {
    ordered_json j;
    j["accepted"] = accepted;
    j["rejected"] = ordered_json::array();
    for (const auto& [locator, violation] : rejected) {
        j["rejected"].push_back({{"source", locator}, {"violation", violation}});
    }
    j["word_counts"] = word_counts;
    return j;
}

ordered_json record_to_json(const core::AthleteRecord& r) {
    ordered_json j;
    j["name"] = r.name;
    ordered_json birth;
    birth["year"] = r.birth.year;
    if (r.birth.month) birth["month"] = *r.birth.month;
    if (r.birth.day) birth["day"] = *r.birth.day;
    j["birth"] = birth;
    j["tournaments"] = ordered_json::array();
    for (const auto& t : r.tournaments) {
        ordered_json jt;
        jt["name"] = t.name;
        jt["formats"] = ordered_json::array();
        for (const auto& f : t.formats) {
            ordered_json jf;
            jf["name"] = f.name;
            jf["medals"] = ordered_json::array();
            for (const auto& m : f.medals) {
                jf["medals"].push_back({{"type", core::medal_storage_name(m.type)},
                                        {"year", m.year},
                                        {"location", m.location}});
            }
            jt["formats"].push_back(std::move(jf));
        }
        j["tournaments"].push_back(std::move(jt));
    }
    return j;
}

namespace {

int require_int(const json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_number_integer()) {
        throw core::DomainError(std::string("missing or non-integer field '") + key + "'");
    }
    return j[key].get<int>();
}

std::string require_string(const json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_string()) {
        throw core::DomainError(std::string("missing or non-string field '") + key + "'");
    }
    return j[key].get<std::string>();
}

}  // namespace

core::AthleteRecord record_from_json(const json& j) {
    core::AthleteRecord r;
    r.name = require_string(j, "name");
    if (!j.contains("birth") || !j["birth"].is_object()) {
        throw core::DomainError("missing 'birth' object");
    }
    const json& b = j["birth"];
    r.birth.year = require_int(b, "year");
    if (b.contains("month")) r.birth.month = require_int(b, "month");
    if (b.contains("day")) r.birth.day = require_int(b, "day");
    if (j.contains("tournaments")) {
        if (!j["tournaments"].is_array()) throw core::DomainError("'tournaments' not an array");
        for (const json& jt : j["tournaments"]) {
            core::TournamentEntry t;
            t.name = require_string(jt, "name");
            if (jt.contains("formats")) {
                if (!jt["formats"].is_array()) throw core::DomainError("'formats' not an array");
                for (const json& jf : jt["formats"]) {
                    core::FormatEntry f;
                    f.name = require_string(jf, "name");
                    if (jf.contains("medals")) {
                        if (!jf["medals"].is_array()) {
                            throw core::DomainError("'medals' not an array");
                        }
                        for (const json& jm : jf["medals"]) {
                            std::string type_name = require_string(jm, "type");
                            auto type = core::medal_from_storage(type_name);
                            if (!type) {
                                throw core::DomainError("medal type '" + type_name +
                                                        "' not one of MedalGold, MedalSilver, "
                                                        "MedalBronze");
                            }
                            f.medals.push_back(core::MedalEntry{
                                *type, require_int(jm, "year"), require_string(jm, "location")});
                        }
                    }
                    t.formats.push_back(std::move(f));
                }
            }
            r.tournaments.push_back(std::move(t));
        }
    }
    return r;
}

std::vector<core::AthleteRecord> parse_dataset_text(const std::string& text,
                                                    const std::string& source_name,
                                                    IngestReport* report) {
    std::vector<core::AthleteRecord> out;
    IngestReport local;
    IngestReport& rep = report ? *report : local;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string trimmed = util::trim(line);
        if (trimmed.empty()) continue;
        std::string locator = source_name + ":" + std::to_string(line_no);
        try {
            json j = json::parse(trimmed);
            core::AthleteRecord r = record_from_json(j);
            if (auto violation = core::record_violation(r)) {
                throw MalformedEntry(line_no, *violation);
            }
            rep.word_counts.push_back(context_word_count(r));
            rep.accepted++;
            out.push_back(std::move(r));
        } catch (const json::exception& e) {
            rep.rejected.emplace_back(locator, std::string("not a JSON object: ") + e.what());
        } catch (const core::DomainError& e) {
            rep.rejected.emplace_back(locator, e.what());
        }
    }
    return out;
}

std::vector<core::AthleteRecord> parse_dataset(const std::filesystem::path& path,
                                               IngestReport* report) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FileUnreadable(path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_dataset_text(ss.str(), path.filename().string(), report);
}

int context_word_count(const core::AthleteRecord& record, strategy::TableSerialization mode) {
    return util::count_words(strategy::serialize_table(record, mode));
}

std::string records_to_jsonl(const std::vector<core::AthleteRecord>& records) {
    std::string out;
    for (const auto& r : records) {
        out += record_to_json(r).dump();
        out += "\n";
    }
    return out;
}

}  // namespace medalqa::ingest
