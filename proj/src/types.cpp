#include "medalqa/core/types.hpp"

#include <cstdio>
#include <set>

namespace medalqa::core {

std::string PartialDate::to_string() const {
    char buf[16];
    if (month && day) {
        std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", year, *month, *day);
    } else if (month) {
        std::snprintf(buf, sizeof(buf), "%04d-%02d", year, *month);
    } else {
        std::snprintf(buf, sizeof(buf), "%04d", year);
    }
    return buf;
}

std::string medal_storage_name(MedalType t) {
    switch (t) {
        case MedalType::Gold: return "MedalGold";
        case MedalType::Silver: return "MedalSilver";
        case MedalType::Bronze: return "MedalBronze";
    }
    return "MedalGold";
}

std::string medal_display_name(MedalType t) {
    switch (t) {
        case MedalType::Gold: return "Gold";
        case MedalType::Silver: return "Silver";
        case MedalType::Bronze: return "Bronze";
    }
    return "Gold";
}

std::optional<MedalType> medal_from_storage(std::string_view s) {
    if (s == "MedalGold") return MedalType::Gold;
    if (s == "MedalSilver") return MedalType::Silver;
    if (s == "MedalBronze") return MedalType::Bronze;
    return std::nullopt;
}

InvalidRecord::InvalidRecord(size_t index_, std::string violation_)
    : DomainError("invalid record #" + std::to_string(index_) + ": " + violation_),
      index(index_),
      violation(std::move(violation_)) {}

namespace {

bool is_leap(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

int days_in_month(int year, int month) {
    static const int d[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (month == 2 && is_leap(year)) return 29;
    return d[month - 1];
}

std::optional<std::string> date_violation(const PartialDate& b) {
    if (b.year < kMinYear || b.year > kMaxYear) {
        return "birth year " + std::to_string(b.year) + " outside [1850, 2100]";
    }
    if (b.day && !b.month) return "birth day present without month";
    if (b.month && (*b.month < 1 || *b.month > 12)) {
        return "birth month " + std::to_string(*b.month) + " outside [1, 12]";
    }
    if (b.day) {
        if (*b.day < 1 || *b.day > days_in_month(b.year, *b.month)) {
            return "birth day " + std::to_string(*b.day) + " not a valid calendar day";
        }
    }
    return std::nullopt;
}

}  // namespace

std::optional<std::string> record_violation(const AthleteRecord& r) {
    if (r.name.empty()) return "athlete name empty";
    if (auto v = date_violation(r.birth)) return v;
    std::set<std::string> tournament_names;
    for (const auto& t : r.tournaments) {
        if (t.name.empty()) return "tournament name empty";
        if (!tournament_names.insert(t.name).second) {
            return "duplicate tournament name '" + t.name + "'";
        }
        std::set<std::string> format_names;
        for (const auto& f : t.formats) {
            if (f.name.empty()) return "format name empty in '" + t.name + "'";
            if (!format_names.insert(f.name).second) {
                return "duplicate format name '" + f.name + "' in '" + t.name + "'";
            }
            for (const auto& m : f.medals) {
                if (m.location.empty()) return "medal location empty in '" + f.name + "'";
                if (m.year < kMinYear || m.year > kMaxYear) {
                    return "medal year " + std::to_string(m.year) + " outside [1850, 2100]";
                }
                if (m.year < r.birth.year) {
                    return "medal year " + std::to_string(m.year) + " precedes birth year " +
                           std::to_string(r.birth.year);
                }
            }
        }
    }
    return std::nullopt;
}

void validate_record(const AthleteRecord& record, size_t index) {
    if (auto v = record_violation(record)) throw InvalidRecord(index, *v);
}

int medal_row_count(const AthleteRecord& record) {
    int n = 0;
    for (const auto& t : record.tournaments) {
        for (const auto& f : t.formats) n += static_cast<int>(f.medals.size());
    }
    return n;
}

}  // namespace medalqa::core
