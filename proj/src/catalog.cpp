#include "medalqa/oracle/catalog.hpp"

#include "medalqa/util/strings.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace medalqa::oracle {

using core::AthleteRecord;
using core::MedalType;

std::string tier_name(Tier t) {
    switch (t) {
        case Tier::Easy: return "Easy";
        case Tier::Medium: return "Medium";
        case Tier::Hard: return "Hard";
    }
    return "Easy";
}

Tier tier_from_name(std::string_view s) {
    if (s == "Easy") return Tier::Easy;
    if (s == "Medium") return Tier::Medium;
    if (s == "Hard") return Tier::Hard;
    throw core::DomainError("unknown tier '" + std::string(s) + "'");
}

UnknownTemplate::UnknownTemplate(const std::string& id)
    : core::DomainError("unknown template '" + id + "'") {}

namespace {

struct MedalRef {
    const core::TournamentEntry* tournament;
    const core::FormatEntry* format;
    const core::MedalEntry* medal;
};

std::vector<MedalRef> all_medals(const AthleteRecord& r) {
    std::vector<MedalRef> out;
    for (const auto& t : r.tournaments) {
        for (const auto& f : t.formats) {
            for (const auto& m : f.medals) out.push_back({&t, &f, &m});
        }
    }
    return out;
}

std::string istr(long long v) { return std::to_string(v); }

Bindings base(const AthleteRecord& r) { return Bindings{{"athlete", r.name}}; }

std::vector<std::string> sorted(std::set<std::string> s) {
    return std::vector<std::string>(s.begin(), s.end());
}

std::vector<std::string> tournament_names(const AthleteRecord& r) {
    std::set<std::string> names;
    for (const auto& t : r.tournaments) names.insert(t.name);
    return sorted(std::move(names));
}

std::vector<std::string> medal_years(const AthleteRecord& r) {
    std::set<std::string> years;
    for (const auto& mr : all_medals(r)) years.insert(istr(mr.medal->year));
    return sorted(std::move(years));
}

std::vector<MedalType> types_present(const AthleteRecord& r) {
    std::set<MedalType> present;
    for (const auto& mr : all_medals(r)) present.insert(mr.medal->type);
    std::vector<MedalType> out;
    for (MedalType t : core::kAllMedalTypes) {
        if (present.count(t)) out.push_back(t);
    }
    return out;
}

// Shared enumerators -------------------------------------------------------

std::vector<Bindings> athlete_only(const AthleteRecord& r) { return {base(r)}; }

std::vector<Bindings> per_tournament(const AthleteRecord& r) {
    std::vector<Bindings> out;
    for (const auto& name : tournament_names(r)) {
        Bindings b = base(r);
        b["tournament"] = name;
        out.push_back(std::move(b));
    }
    return out;
}

std::vector<Bindings> per_year(const AthleteRecord& r) {
    std::vector<Bindings> out;
    for (const auto& y : medal_years(r)) {
        Bindings b = base(r);
        b["year"] = y;
        out.push_back(std::move(b));
    }
    return out;
}

std::vector<Bindings> per_type(const AthleteRecord& r) {
    std::vector<Bindings> out;
    for (MedalType t : types_present(r)) {
        Bindings b = base(r);
        b["medal_type"] = core::medal_storage_name(t);
        out.push_back(std::move(b));
    }
    return out;
}

std::vector<Bindings> per_format_name(const AthleteRecord& r) {
    std::set<std::string> names;
    for (const auto& t : r.tournaments) {
        for (const auto& f : t.formats) names.insert(f.name);
    }
    std::vector<Bindings> out;
    for (const auto& name : sorted(std::move(names))) {
        Bindings b = base(r);
        b["format"] = name;
        out.push_back(std::move(b));
    }
    return out;
}

// (tournament, medal type) pairs with at least one matching medal.
std::vector<Bindings> per_tournament_type(const AthleteRecord& r) {
    std::set<std::pair<std::string, std::string>> pairs;
    for (const auto& mr : all_medals(r)) {
        pairs.insert({mr.tournament->name, core::medal_storage_name(mr.medal->type)});
    }
    std::vector<Bindings> out;
    for (const auto& [tournament, type] : pairs) {
        Bindings b = base(r);
        b["tournament"] = tournament;
        b["medal_type"] = type;
        out.push_back(std::move(b));
    }
    return out;
}

std::vector<Bindings> type_pairs_present(const AthleteRecord& r) {
    auto present = types_present(r);
    std::vector<Bindings> out;
    for (MedalType a : present) {
        for (MedalType b : present) {
            if (a == b) continue;
            Bindings bind = base(r);
            bind["medal_type"] = core::medal_storage_name(a);
            bind["medal_type_b"] = core::medal_storage_name(b);
            out.push_back(std::move(bind));
        }
    }
    return out;
}

// tournament x year pairs, year drawn from that tournament's medal years.
std::vector<Bindings> per_tournament_year(const AthleteRecord& r) {
    std::set<std::pair<std::string, std::string>> pairs;
    for (const auto& mr : all_medals(r)) {
        pairs.insert({mr.tournament->name, istr(mr.medal->year)});
    }
    std::vector<Bindings> out;
    for (const auto& [tournament, year] : pairs) {
        Bindings b = base(r);
        b["tournament"] = tournament;
        b["year"] = year;
        out.push_back(std::move(b));
    }
    return out;
}

// Direct evaluators --------------------------------------------------------

MedalType bound_type(const Bindings& b, const char* key = "medal_type") {
    auto t = core::medal_from_storage(b.at(key));
    if (!t) throw core::DomainError("binding '" + b.at(key) + "' is not a medal type");
    return *t;
}

std::vector<std::string> argmax_years(const std::vector<MedalRef>& medals) {
    std::map<int, int> by_year;
    for (const auto& mr : medals) by_year[mr.medal->year]++;
    if (by_year.empty()) return {};
    int best = 0;
    for (const auto& [year, n] : by_year) best = std::max(best, n);
    std::vector<std::string> out;
    for (const auto& [year, n] : by_year) {
        if (n == best) out.push_back(istr(year));
    }
    return out;
}

const char* kJoinChain =
    "FROM Medal m\n"
    "JOIN Format f ON m.format_id = f.format_id\n"
    "JOIN Tournament t ON f.tournament_id = t.tournament_id\n"
    "JOIN Athlete a ON t.athlete_id = a.athlete_id\n";

std::vector<QuestionTemplate> build_catalog() {
    std::vector<QuestionTemplate> tpls;
    auto add = [&tpls](QuestionTemplate t) { tpls.push_back(std::move(t)); };

    // ---- Easy -------------------------------------------------------------

    add({"easy.format-count", Tier::Easy,
         "How many formats has [Athlete] played?",
         "SELECT COUNT(DISTINCT f.name)\n"
         "FROM Format f\n"
         "JOIN Tournament t ON f.tournament_id = t.tournament_id\n"
         "JOIN Athlete a ON t.athlete_id = a.athlete_id\n"
         "WHERE a.name = :athlete;",
         AnswerKind::Count, athlete_only,
         [](const AthleteRecord& r, const Bindings&) -> std::vector<std::string> {
             std::set<std::string> names;
             for (const auto& t : r.tournaments) {
                 for (const auto& f : t.formats) names.insert(f.name);
             }
             return {istr(static_cast<long long>(names.size()))};
         }});

    add({"easy.tournament-count", Tier::Easy,
         "How many tournaments has [Athlete] participated in?",
         "SELECT COUNT(t.tournament_id)\n"
         "FROM Tournament t\n"
         "JOIN Athlete a ON t.athlete_id = a.athlete_id\n"
         "WHERE a.name = :athlete;",
         AnswerKind::Count, athlete_only,
         [](const AthleteRecord& r, const Bindings&) -> std::vector<std::string> {
             return {istr(static_cast<long long>(r.tournaments.size()))};
         }});

    add({"easy.total-medals", Tier::Easy,
         "How many medals has [Athlete] won in total?",
         std::string("SELECT COUNT(m.medal_id)\n") + kJoinChain + "WHERE a.name = :athlete;",
         AnswerKind::Count, athlete_only,
         [](const AthleteRecord& r, const Bindings&) -> std::vector<std::string> {
             return {istr(core::medal_row_count(r))};
         }});

    add({"easy.medals-in-year", Tier::Easy,
         "How many international medals did [Athlete] win in [Year]?",
         std::string("SELECT COUNT(m.medal_id)\n") + kJoinChain +
             "WHERE a.name = :athlete\n  AND m.year = :year;",
         AnswerKind::Count, per_year,
         [](const AthleteRecord& r, const Bindings& b) -> std::vector<std::string> {
             int year = std::stoi(b.at("year"));
             int n = 0;
             for (const auto& mr : all_medals(r)) n += mr.medal->year == year;
             return {istr(n)};
         }});

    add({"easy.medal-type-count", Tier::Easy,
         "How many [MedalType] medals has [Athlete] won?",
         std::string("SELECT COUNT(m.medal_id)\n") + kJoinChain +
             "WHERE a.name = :athlete\n  AND m.type = :medal_type;",
         AnswerKind::Count, per_type,
         [](const AthleteRecord& r, const Bindings& b) -> std::vector<std::string> {
             MedalType type = bound_type(b);
             int n = 0;
             for (const auto& mr : all_medals(r)) n += mr.medal->type == type;
             return {istr(n)};
         }});

    add({"easy.format-medals", Tier::Easy,
         "How many medals has [Athlete] won in the [Format] format?",
         std::string("SELECT COUNT(m.medal_id)\n") + kJoinChain +
             "WHERE a.name = :athlete\n  AND f.name = :format;",
         AnswerKind::Count, per_format_name,
         [](const AthleteRecord& r, const Bindings& b) -> std::vector<std::string> {
             int n = 0;
             for (const auto& mr : all_medals(r)) n += mr.format->name == b.at("format");
             return {istr(n)};
         }});

    add({"easy.tournament-years", Tier::Easy,
         "In which year(s) did [Athlete] win medals in the [Tournament]?",
         std::string("SELECT DISTINCT m.year\n") + kJoinChain +
             "WHERE a.name = :athlete\n  AND t.name = :tournament;",
         AnswerKind::Set, per_tournament,
         [](const AthleteRecord& r, const Bindings& b) -> std::vector<std::string> {
             std::set<std::string> years;
             for (const auto& mr : all_medals(r)) {
                 if (mr.tournament->name == b.at("tournament")) {
                     years.insert(istr(mr.medal->year));
                 }
             }
             return sorted(std::move(years));
         }});

    add({"easy.birth-year", Tier::Easy,
         "In which year was [Athlete] born?",
         "SELECT pi.birth_year\n"
         "FROM PersonalInformation pi\n"
         "JOIN Athlete a ON pi.athlete_id = a.athlete_id\n"
         "WHERE a.name = :athlete;",
         AnswerKind::Year, athlete_only,
         [](const AthleteRecord& r, const Bindings&) -> std::vector<std::string> {
             return {istr(r.birth.year)};
         }});

    // ---- Medium -----------------------------------------------------------

    add({"medium.age-recent-medal", Tier::Medium,
         "At what age did [Athlete] win his most recent [Tournament] [MedalType] Medal?",
         std::string("SELECT MAX(m.year) - pi.birth_year\n") + kJoinChain +
             "JOIN PersonalInformation pi ON a.athlete_id = pi.athlete_id\n"
             "WHERE a.name = :athlete\n  AND t.name = :tournament\n"
             "  AND m.type = :medal_type;",
         AnswerKind::Age, per_tournament_type,
         [](const AthleteRecord& r, const Bindings& b) -> std::vector<std::string> {
             MedalType type = bound_type(b);
             int best = -1;
             for (const auto& mr : all_medals(r)) {
                 if (mr.tournament->name == b.at("tournament") && mr.medal->type == type) {
                     best = std::max(best, mr.medal->year);
                 }
             }
             if (best < 0) return {};
             return {istr(best - r.birth.year)};
         }});

    add({"medium.city-recent-medal", Tier::Medium,
         "In which city did [Athlete] win his most recent [Tournament] [MedalType] Medal?",
         std::string("SELECT DISTINCT m.location\n") + kJoinChain +
             "WHERE a.name = :athlete\n  AND t.name = :tournament\n"
             "  AND m.type = :medal_type\n"
             "  AND m.year = (\n"
             "    SELECT MAX(m2.year)\n"
             "    FROM Medal m2\n"
             "    JOIN Format f2 ON m2.format_id = f2.format_id\n"
             "    JOIN Tournament t2 ON f2.tournament_id = t2.tournament_id\n"
             "    JOIN Athlete a2 ON t2.athlete_id = a2.athlete_id\n"
             "    WHERE a2.name = :athlete\n      AND t2.name = :tournament\n"
             "      AND m2.type = :medal_type\n  );",
         AnswerKind::Location, per_tournament_type,
         [](const AthleteRecord& r, const Bindings& b) -> std::vector<std::string> {
             MedalType type = bound_type(b);
             int best = -1;
             for (const auto& mr : all_medals(r)) {
                 if (mr.tournament->name == b.at("tournament") && mr.medal->type == type) {
                     best = std::max(best, mr.medal->year);
                 }
             }
             if (best < 0) return {};
             std::set<std::string> cities;
             for (const auto& mr : all_medals(r)) {
                 if (mr.tournament->name == b.at("tournament") && mr.medal->type == type &&
                     mr.medal->year == best) {
                     cities.insert(mr.medal->location);
                 }
             }
             return sorted(std::move(cities));
         }});

    add({"medium.city-first-medal", Tier::Medium,
         "In which city did [Athlete] win his first medal?",
         std::string("SELECT DISTINCT m.location\n") + kJoinChain +
             "WHERE a.name = :athlete\n"
             "  AND m.year = (\n"
             "    SELECT MIN(m2.year)\n"
             "    FROM Medal m2\n"
             "    JOIN Format f2 ON m2.format_id = f2.format_id\n"
             "    JOIN Tournament t2 ON f2.tournament_id = t2.tournament_id\n"
             "    JOIN Athlete a2 ON t2.athlete_id = a2.athlete_id\n"
             "    WHERE a2.name = :athlete\n  );",
         AnswerKind::Location, athlete_only,
         [](const AthleteRecord& r, const Bindings&) -> std::vector<std::string> {
             auto medals = all_medals(r);
             if (medals.empty()) return {};
             int first = medals.front().medal->year;
             for (const auto& mr : medals) first = std::min(first, mr.medal->year);
             std::set<std::string> cities;
             for (const auto& mr : medals) {
                 if (mr.medal->year == first) cities.insert(mr.medal->location);
             }
             return sorted(std::move(cities));
         }});

    add({"medium.more-than", Tier::Medium,
         "Does [Athlete] have more [MedalType] Medals than [MedalTypeB] Medals?",
         std::string("SELECT CASE\n"
                     "    WHEN SUM(CASE WHEN m.type = :medal_type THEN 1 ELSE 0 END) >\n"
                     "         SUM(CASE WHEN m.type = :medal_type_b THEN 1 ELSE 0 END)\n"
                     "    THEN 'Yes'\n    ELSE 'No'\nEND AS has_more\n") +
             kJoinChain + "WHERE a.name = :athlete;",
         AnswerKind::Boolean, type_pairs_present,
         [](const AthleteRecord& r, const Bindings& b) -> std::vector<std::string> {
             MedalType ta = bound_type(b, "medal_type");
             MedalType tb = bound_type(b, "medal_type_b");
             int na = 0, nb = 0;
             for (const auto& mr : all_medals(r)) {
                 na += mr.medal->type == ta;
                 nb += mr.medal->type == tb;
             }
             return {na > nb ? "Yes" : "No"};
         }});

    add({"medium.before-year", Tier::Medium,
         "How many times did [Athlete] win a medal in the [Tournament] before [Year]?",
         std::string("SELECT COUNT(m.medal_id)\n") + kJoinChain +
             "WHERE a.name = :athlete\n  AND t.name = :tournament\n  AND m.year < :year;",
         AnswerKind::Count, per_tournament_year,
         [](const AthleteRecord& r, const Bindings& b) -> std::vector<std::string> {
             int year = std::stoi(b.at("year"));
             int n = 0;
             for (const auto& mr : all_medals(r)) {
                 n += mr.tournament->name == b.at("tournament") && mr.medal->year < year;
             }
             return {istr(n)};
         }});

    add({"medium.twenties", Tier::Medium,
         "How many medals did [Athlete] win in his twenties?",
         std::string("SELECT COUNT(m.medal_id)\n") + kJoinChain +
             "JOIN PersonalInformation pi ON a.athlete_id = pi.athlete_id\n"
             "WHERE a.name = :athlete\n"
             "  AND (m.year - pi.birth_year) BETWEEN 20 AND 29;",
         AnswerKind::Count, athlete_only,
         [](const AthleteRecord& r, const Bindings&) -> std::vector<std::string> {
             int n = 0;
             for (const auto& mr : all_medals(r)) {
                 int age = mr.medal->year - r.birth.year;
                 n += age >= 20 && age <= 29;
             }
             return {istr(n)};
         }});

    add({"medium.age-first-medal", Tier::Medium,
         "How old was [Athlete] when he won his first medal?",
         std::string("SELECT MIN(m.year) - pi.birth_year\n") + kJoinChain +
             "JOIN PersonalInformation pi ON a.athlete_id = pi.athlete_id\n"
             "WHERE a.name = :athlete;",
         AnswerKind::Age, athlete_only,
         [](const AthleteRecord& r, const Bindings&) -> std::vector<std::string> {
             auto medals = all_medals(r);
             if (medals.empty()) return {};
             int first = medals.front().medal->year;
             for (const auto& mr : medals) first = std::min(first, mr.medal->year);
             return {istr(first - r.birth.year)};
         }});

    // ---- Hard -------------------------------------------------------------

    add({"hard.busiest-years", Tier::Hard,
         "In which year(s) did [Athlete] win the highest number of medals during their "
         "career?",
         std::string("WITH yearly_medal_counts AS (\n"
                     "    SELECT m.year AS year, COUNT(m.medal_id) AS medal_count\n    ") +
             kJoinChain +
             "    WHERE a.name = :athlete\n    GROUP BY m.year\n)\n"
             "SELECT year\nFROM yearly_medal_counts\n"
             "WHERE medal_count = (\n    SELECT MAX(medal_count)\n"
             "    FROM yearly_medal_counts\n);",
         AnswerKind::Set, athlete_only,
         [](const AthleteRecord& r, const Bindings&) { return argmax_years(all_medals(r)); }});

    add({"hard.quietest-years", Tier::Hard,
         "In which year(s) did [Athlete] win the lowest number of medals during their "
         "career?",
         std::string("WITH yearly_medal_counts AS (\n"
                     "    SELECT m.year AS year, COUNT(m.medal_id) AS medal_count\n    ") +
             kJoinChain +
             "    WHERE a.name = :athlete\n    GROUP BY m.year\n)\n"
             "SELECT year\nFROM yearly_medal_counts\n"
             "WHERE medal_count = (\n    SELECT MIN(medal_count)\n"
             "    FROM yearly_medal_counts\n);",
         AnswerKind::Set, athlete_only,
         [](const AthleteRecord& r, const Bindings&) -> std::vector<std::string> {
             std::map<int, int> by_year;
             for (const auto& mr : all_medals(r)) by_year[mr.medal->year]++;
             if (by_year.empty()) return {};
             int worst = by_year.begin()->second;
             for (const auto& [year, n] : by_year) worst = std::min(worst, n);
             std::vector<std::string> out;
             for (const auto& [year, n] : by_year) {
                 if (n == worst) out.push_back(istr(year));
             }
             return out;
         }});

    add({"hard.top-type-years", Tier::Hard,
         "In which year(s) did [Athlete] achieve his personal highest number of [MedalType] "
         "medal wins?",
         std::string("WITH typed_medal_counts AS (\n"
                     "    SELECT m.year AS year, COUNT(m.medal_id) AS type_count\n    ") +
             kJoinChain +
             "    WHERE a.name = :athlete\n      AND m.type = :medal_type\n"
             "    GROUP BY m.year\n)\n"
             "SELECT year\nFROM typed_medal_counts\n"
             "WHERE type_count = (\n    SELECT MAX(type_count)\n"
             "    FROM typed_medal_counts\n);",
         AnswerKind::Set, per_type,
         [](const AthleteRecord& r, const Bindings& b) -> std::vector<std::string> {
             MedalType type = bound_type(b);
             std::vector<MedalRef> typed;
             for (const auto& mr : all_medals(r)) {
                 if (mr.medal->type == type) typed.push_back(mr);
             }
             return argmax_years(typed);
         }});

    add({"hard.top-tournaments", Tier::Hard,
         "Which tournament(s) has [Athlete] won the most medals in?",
         std::string("WITH tournament_medal_counts AS (\n"
                     "    SELECT t.name AS tournament_name, COUNT(m.medal_id) AS medal_count\n"
                     "    ") +
             kJoinChain +
             "    WHERE a.name = :athlete\n    GROUP BY t.name\n)\n"
             "SELECT tournament_name\nFROM tournament_medal_counts\n"
             "WHERE medal_count = (\n    SELECT MAX(medal_count)\n"
             "    FROM tournament_medal_counts\n);",
         AnswerKind::Set, athlete_only,
         [](const AthleteRecord& r, const Bindings&) -> std::vector<std::string> {
             std::map<std::string, int> by_tournament;
             for (const auto& mr : all_medals(r)) by_tournament[mr.tournament->name]++;
             if (by_tournament.empty()) return {};
             int best = 0;
             for (const auto& [name, n] : by_tournament) best = std::max(best, n);
             std::vector<std::string> out;
             for (const auto& [name, n] : by_tournament) {
                 if (n == best) out.push_back(name);
             }
             return out;
         }});

    add({"hard.type-span", Tier::Hard,
         "What is the shortest time span (in years) within which [Athlete] won gold, "
         "silver, and bronze medals in the same format across any tournament?",
         "WITH medal_triples AS (\n"
         "    SELECT MAX(g.year, s.year, b.year) - MIN(g.year, s.year, b.year) AS span_years\n"
         "    FROM Medal g\n"
         "    JOIN Medal s ON s.format_id = g.format_id\n"
         "    JOIN Medal b ON b.format_id = g.format_id\n"
         "    JOIN Format f ON g.format_id = f.format_id\n"
         "    JOIN Tournament t ON f.tournament_id = t.tournament_id\n"
         "    JOIN Athlete a ON t.athlete_id = a.athlete_id\n"
         "    WHERE a.name = :athlete\n"
         "      AND g.type = 'MedalGold'\n"
         "      AND s.type = 'MedalSilver'\n"
         "      AND b.type = 'MedalBronze'\n)\n"
         "SELECT MIN(span_years)\nFROM medal_triples;",
         AnswerKind::Count, athlete_only,
         [](const AthleteRecord& r, const Bindings&) -> std::vector<std::string> {
             int best = -1;
             for (const auto& t : r.tournaments) {
                 for (const auto& f : t.formats) {
                     std::vector<int> golds, silvers, bronzes;
                     for (const auto& m : f.medals) {
                         if (m.type == MedalType::Gold) golds.push_back(m.year);
                         if (m.type == MedalType::Silver) silvers.push_back(m.year);
                         if (m.type == MedalType::Bronze) bronzes.push_back(m.year);
                     }
                     for (int g : golds) {
                         for (int s : silvers) {
                             for (int bz : bronzes) {
                                 int span = std::max({g, s, bz}) - std::min({g, s, bz});
                                 if (best < 0 || span < best) best = span;
                             }
                         }
                     }
                 }
             }
             if (best < 0) return {};
             return {istr(best)};
         }});

    add({"hard.career-span", Tier::Hard,
         "How many years passed between [Athlete]'s first medal and his most recent medal?",
         std::string("SELECT MAX(m.year) - MIN(m.year)\n") + kJoinChain +
             "WHERE a.name = :athlete;",
         AnswerKind::Count, athlete_only,
         [](const AthleteRecord& r, const Bindings&) -> std::vector<std::string> {
             auto medals = all_medals(r);
             if (medals.empty()) return {};
             int lo = medals.front().medal->year, hi = lo;
             for (const auto& mr : medals) {
                 lo = std::min(lo, mr.medal->year);
                 hi = std::max(hi, mr.medal->year);
             }
             return {istr(hi - lo)};
         }});

    add({"hard.tournament-peak-years", Tier::Hard,
         "In which year(s) did [Athlete] win the highest number of medals in the "
         "[Tournament]?",
         std::string("WITH yearly_medal_counts AS (\n"
                     "    SELECT m.year AS year, COUNT(m.medal_id) AS medal_count\n    ") +
             kJoinChain +
             "    WHERE a.name = :athlete\n      AND t.name = :tournament\n"
             "    GROUP BY m.year\n)\n"
             "SELECT year\nFROM yearly_medal_counts\n"
             "WHERE medal_count = (\n    SELECT MAX(medal_count)\n"
             "    FROM yearly_medal_counts\n);",
         AnswerKind::Set, per_tournament,
         [](const AthleteRecord& r, const Bindings& b) -> std::vector<std::string> {
             std::vector<MedalRef> in_tournament;
             for (const auto& mr : all_medals(r)) {
                 if (mr.tournament->name == b.at("tournament")) in_tournament.push_back(mr);
             }
             return argmax_years(in_tournament);
         }});

    return tpls;
}

const std::map<std::string, std::string>& placeholder_text() {
    static const std::map<std::string, std::string> kMap = {
        {"athlete", "[Athlete]"},       {"tournament", "[Tournament]"},
        {"medal_type", "[MedalType]"},  {"medal_type_b", "[MedalTypeB]"},
        {"year", "[Year]"},             {"format", "[Format]"},
    };
    return kMap;
}

}  // namespace

const std::vector<QuestionTemplate>& catalog() {
    static const std::vector<QuestionTemplate> kCatalog = build_catalog();
    return kCatalog;
}

const QuestionTemplate& template_by_id(const std::string& id) {
    for (const auto& tpl : catalog()) {
        if (tpl.id == id) return tpl;
    }
    throw UnknownTemplate(id);
}

std::string render_question(const QuestionTemplate& tpl, const Bindings& bindings) {
    std::string text = tpl.text_pattern;
    for (const auto& [key, value] : bindings) {
        std::string shown = value;
        if (key == "medal_type" || key == "medal_type_b") {
            if (auto t = core::medal_from_storage(value)) shown = core::medal_display_name(*t);
        }
        text = util::replace_all(std::move(text), placeholder_text().at(key), shown);
    }
    return text;
}

std::string render_sql_literal(const std::string& sql_pattern, const Bindings& bindings) {
    // Longer parameter names first so ":medal_type" never clips ":medal_type_b".
    std::vector<std::pair<std::string, std::string>> ordered(bindings.begin(), bindings.end());
    std::sort(ordered.begin(), ordered.end(),
              [](const auto& a, const auto& b) { return a.first.size() > b.first.size(); });
    std::string sql = sql_pattern;
    for (const auto& [key, value] : ordered) {
        std::string literal;
        if (key == "year") {
            literal = value;
        } else {
            literal = "'" + util::replace_all(value, "'", "''") + "'";
        }
        sql = util::replace_all(std::move(sql), ":" + key, literal);
    }
    return sql;
}

}  // namespace medalqa::oracle
