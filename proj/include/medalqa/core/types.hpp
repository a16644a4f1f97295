#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace medalqa::core {

constexpr int kMinYear = 1850;
constexpr int kMaxYear = 2100;

struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Birth dates from infoboxes are frequently incomplete; month and day are
// optional, and a day is only allowed when the month is known.
struct PartialDate {
    int year = 0;
    std::optional<int> month;
    std::optional<int> day;

    std::string to_string() const;  // "1993", "1993-06" or "1993-06-15"
    bool operator==(const PartialDate&) const = default;
};

enum class MedalType { Gold, Silver, Bronze };

constexpr MedalType kAllMedalTypes[] = {MedalType::Gold, MedalType::Silver,
                                        MedalType::Bronze};

// Storage form used in the Medal table and in questions respectively.
std::string medal_storage_name(MedalType t);   // "MedalGold"
std::string medal_display_name(MedalType t);   // "Gold"
std::optional<MedalType> medal_from_storage(std::string_view s);

struct MedalEntry {
    MedalType type = MedalType::Gold;
    int year = 0;
    std::string location;

    bool operator==(const MedalEntry&) const = default;
};

struct FormatEntry {
    std::string name;
    std::vector<MedalEntry> medals;

    bool operator==(const FormatEntry&) const = default;
};

struct TournamentEntry {
    std::string name;
    std::vector<FormatEntry> formats;

    bool operator==(const TournamentEntry&) const = default;
};

struct AthleteRecord {
    std::string name;
    PartialDate birth;
    std::vector<TournamentEntry> tournaments;

    bool operator==(const AthleteRecord&) const = default;
};

struct InvalidRecord : DomainError {
    InvalidRecord(size_t index_, std::string violation_);
    size_t index;
    std::string violation;
};

// Returns the first violated invariant, or nullopt if the record is valid.
std::optional<std::string> record_violation(const AthleteRecord& record);

// Throws InvalidRecord with the given index on the first violation.
void validate_record(const AthleteRecord& record, size_t index = 0);

int medal_row_count(const AthleteRecord& record);

}  // namespace medalqa::core
