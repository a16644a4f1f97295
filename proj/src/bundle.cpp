#include "medalqa/core/bundle.hpp"

#include <map>
#include <set>

namespace medalqa::core {

DuplicateAthleteName::DuplicateAthleteName(const std::string& name)
    : DomainError("duplicate athlete name '" + name + "'") {}

RelationalBundle build_bundle(std::span<const AthleteRecord> records) {
    RelationalBundle b;
    std::set<std::string> seen_names;
    int athlete_id = 0, info_id = 0, tournament_id = 0, format_id = 0, medal_id = 0;
    for (size_t i = 0; i < records.size(); ++i) {
        const AthleteRecord& r = records[i];
        validate_record(r, i);
        if (!seen_names.insert(r.name).second) throw DuplicateAthleteName(r.name);
        b.athletes.push_back({++athlete_id, r.name});
        b.personal_information.push_back(
            {++info_id, athlete_id, r.birth.year, r.birth.month, r.birth.day});
        for (const auto& t : r.tournaments) {
            b.tournaments.push_back({++tournament_id, athlete_id, t.name});
            for (const auto& f : t.formats) {
                b.formats.push_back({++format_id, tournament_id, f.name});
                for (const auto& m : f.medals) {
                    b.medals.push_back({++medal_id, format_id,
                                        medal_storage_name(m.type), m.year, m.location});
                }
            }
        }
    }
    return b;
}

std::vector<AthleteRecord> flatten_bundle(const RelationalBundle& b) {
    std::map<int, AthleteRecord> by_athlete;
    std::map<int, size_t> athlete_order;
    for (size_t i = 0; i < b.athletes.size(); ++i) {
        by_athlete[b.athletes[i].athlete_id] = AthleteRecord{b.athletes[i].name, {}, {}};
        athlete_order[b.athletes[i].athlete_id] = i;
    }
    for (const auto& pi : b.personal_information) {
        auto it = by_athlete.find(pi.athlete_id);
        if (it == by_athlete.end()) {
            throw DanglingKey("personal_information row " + std::to_string(pi.info_id) +
                              " references missing athlete_id " + std::to_string(pi.athlete_id));
        }
        it->second.birth = PartialDate{pi.birth_year, pi.birth_month, pi.birth_day};
    }

    // tournament_id -> (athlete_id, index within that athlete's tournaments)
    std::map<int, std::pair<int, size_t>> tournament_home;
    for (const auto& t : b.tournaments) {
        auto it = by_athlete.find(t.athlete_id);
        if (it == by_athlete.end()) {
            throw DanglingKey("tournament row " + std::to_string(t.tournament_id) +
                              " references missing athlete_id " + std::to_string(t.athlete_id));
        }
        tournament_home[t.tournament_id] = {t.athlete_id, it->second.tournaments.size()};
        it->second.tournaments.push_back(TournamentEntry{t.name, {}});
    }

    std::map<int, std::pair<int, size_t>> format_home;  // format_id -> (tournament_id, index)
    for (const auto& f : b.formats) {
        auto it = tournament_home.find(f.tournament_id);
        if (it == tournament_home.end()) {
            throw DanglingKey("format row " + std::to_string(f.format_id) +
                              " references missing tournament_id " +
                              std::to_string(f.tournament_id));
        }
        auto [athlete_id, t_idx] = it->second;
        auto& tour = by_athlete[athlete_id].tournaments[t_idx];
        format_home[f.format_id] = {f.tournament_id, tour.formats.size()};
        tour.formats.push_back(FormatEntry{f.name, {}});
    }

    for (const auto& m : b.medals) {
        auto it = format_home.find(m.format_id);
        if (it == format_home.end()) {
            throw DanglingKey("medal row " + std::to_string(m.medal_id) +
                              " references missing format_id " + std::to_string(m.format_id));
        }
        auto [tournament_id, f_idx] = it->second;
        auto [athlete_id, t_idx] = tournament_home[tournament_id];
        auto type = medal_from_storage(m.type);
        if (!type) {
            throw DanglingKey("medal row " + std::to_string(m.medal_id) +
                              " has unknown type '" + m.type + "'");
        }
        by_athlete[athlete_id].tournaments[t_idx].formats[f_idx].medals.push_back(
            MedalEntry{*type, m.year, m.location});
    }

    std::vector<AthleteRecord> out(by_athlete.size());
    for (auto& [id, rec] : by_athlete) out[athlete_order[id]] = std::move(rec);
    return out;
}

namespace {

template <typename Row, typename IdFn>
std::optional<std::string> check_ids(const std::vector<Row>& rows, IdFn id,
                                     const char* table, std::set<int>* out_ids) {
    for (const auto& row : rows) {
        int v = id(row);
        if (v <= 0) return std::string(table) + " id " + std::to_string(v) + " not positive";
        if (!out_ids->insert(v).second) {
            return std::string(table) + " id " + std::to_string(v) + " duplicated";
        }
    }
    return std::nullopt;
}

}  // namespace

std::optional<std::string> bundle_violation(const RelationalBundle& b) {
    std::set<int> athlete_ids, info_ids, tournament_ids, format_ids, medal_ids;
    if (auto v = check_ids(b.athletes, [](auto& r) { return r.athlete_id; }, "athlete",
                           &athlete_ids)) return v;
    if (auto v = check_ids(b.personal_information, [](auto& r) { return r.info_id; },
                           "personal_information", &info_ids)) return v;
    if (auto v = check_ids(b.tournaments, [](auto& r) { return r.tournament_id; },
                           "tournament", &tournament_ids)) return v;
    if (auto v = check_ids(b.formats, [](auto& r) { return r.format_id; }, "format",
                           &format_ids)) return v;
    if (auto v = check_ids(b.medals, [](auto& r) { return r.medal_id; }, "medal",
                           &medal_ids)) return v;

    std::set<int> athletes_with_info;
    for (const auto& pi : b.personal_information) {
        if (!athlete_ids.count(pi.athlete_id)) {
            return "personal_information references missing athlete_id " +
                   std::to_string(pi.athlete_id);
        }
        if (!athletes_with_info.insert(pi.athlete_id).second) {
            return "athlete_id " + std::to_string(pi.athlete_id) +
                   " has multiple personal_information rows";
        }
    }
    if (athletes_with_info.size() != b.athletes.size()) {
        return "some athlete lacks a personal_information row";
    }
    for (const auto& t : b.tournaments) {
        if (!athlete_ids.count(t.athlete_id)) {
            return "tournament references missing athlete_id " + std::to_string(t.athlete_id);
        }
    }
    for (const auto& f : b.formats) {
        if (!tournament_ids.count(f.tournament_id)) {
            return "format references missing tournament_id " + std::to_string(f.tournament_id);
        }
    }
    for (const auto& m : b.medals) {
        if (!format_ids.count(m.format_id)) {
            return "medal references missing format_id " + std::to_string(m.format_id);
        }
        if (!medal_from_storage(m.type)) return "medal type '" + m.type + "' not in enum";
    }
    return std::nullopt;
}

}  // namespace medalqa::core
