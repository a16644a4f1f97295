#pragma once

#include "medalqa/core/types.hpp"

#include <span>
#include <string>
#include <vector>

namespace medalqa::core {

// Row types mirror the five-table schema one to one. Medal type is kept in
// its storage form ("MedalGold") so queries written against the schema run
// against flattened data without translation.

struct AthleteRow {
    int athlete_id = 0;
    std::string name;
};

struct PersonalInfoRow {
    int info_id = 0;
    int athlete_id = 0;
    int birth_year = 0;
    std::optional<int> birth_month;
    std::optional<int> birth_day;
};

struct TournamentRow {
    int tournament_id = 0;
    int athlete_id = 0;
    std::string name;
};

struct FormatRow {
    int format_id = 0;
    int tournament_id = 0;
    std::string name;
};

struct MedalRow {
    int medal_id = 0;
    int format_id = 0;
    std::string type;
    int year = 0;
    std::string location;
};

struct RelationalBundle {
    std::vector<AthleteRow> athletes;
    std::vector<PersonalInfoRow> personal_information;
    std::vector<TournamentRow> tournaments;
    std::vector<FormatRow> formats;
    std::vector<MedalRow> medals;
};

struct DuplicateAthleteName : DomainError {
    explicit DuplicateAthleteName(const std::string& name);
};

struct DanglingKey : DomainError {
    using DomainError::DomainError;
};

// Ids are dense and deterministic: 1-based per table, assigned in input
// order with a depth-first walk over tournaments/formats/medals.
RelationalBundle build_bundle(std::span<const AthleteRecord> records);

// Inverse of build_bundle up to sibling ordering. Throws DanglingKey when a
// foreign key does not resolve.
std::vector<AthleteRecord> flatten_bundle(const RelationalBundle& bundle);

// Full foreign-key and uniqueness scan; returns the first violation found.
std::optional<std::string> bundle_violation(const RelationalBundle& bundle);

}  // namespace medalqa::core
