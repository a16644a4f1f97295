#include "medalqa/gen/random_records.hpp"

#include <algorithm>
#include <random>
#include <set>

namespace medalqa::gen {

using core::AthleteRecord;
using core::MedalType;

namespace {

const char* kFirstNames[] = {"Alex",  "Jordan", "Sam",   "Noa",   "Kai",   "Mika",
                             "Lena",  "Tariq",  "Yuki",  "Ines",  "Ravi",  "Sofia",
                             "Marco", "Aiko",   "Dana",  "Felix", "Priya", "Omar"};
const char* kLastNames[] = {"Fernandez", "Okafor",   "Lindqvist", "Nakamura", "Petrov",
                            "Silva",     "O'Connor", "Haddad",    "Kovacs",   "Mbeki",
                            "Tanaka",    "Rossi",    "D'Souza",   "Berg",     "Castillo",
                            "Novak"};
const char* kTournaments[] = {"Olympic Games",          "World Championships",
                              "Continental Cup",        "Commonwealth Games",
                              "Pan American Games",     "Asian Championships",
                              "European Championships", "World Junior Championships",
                              "National Games",         "Grand Prix Finals"};
const char* kFormats[] = {"100 m",          "200 m",        "4x100 m relay", "Singles",
                          "Doubles",        "Team",         "400 m medley",  "Road race",
                          "K-1",            "Sprint",       "Keirin",        "Floor"};
const char* kLocations[] = {"Tokyo",   "Paris",  "London", "Beijing",  "Rio de Janeiro",
                            "Sydney",  "Athens", "Moscow", "Berlin",   "Madrid",
                            "Oslo",    "Doha",   "Lima",   "Budapest", "Helsinki",
                            "Bangkok", "Nairobi"};

size_t pick(std::mt19937_64& rng, size_t n) { return static_cast<size_t>(rng() % n); }

int pick_range(std::mt19937_64& rng, int lo, int hi) {
    return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

}  // namespace

std::vector<core::AthleteRecord> make_random_records(std::uint64_t seed, int count) {
    std::mt19937_64 rng(seed);
    std::vector<AthleteRecord> out;
    std::set<std::string> used_names;
    for (int i = 0; i < count; ++i) {
        AthleteRecord r;
        for (;;) {
            r.name = std::string(kFirstNames[pick(rng, std::size(kFirstNames))]) + " " +
                     kLastNames[pick(rng, std::size(kLastNames))];
            if (used_names.insert(r.name).second) break;
            r.name += " " + std::to_string(i);  // rare collision fallback
            if (used_names.insert(r.name).second) break;
        }
        r.birth.year = pick_range(rng, 1960, 2000);
        if (rng() % 4 != 0) {
            r.birth.month = pick_range(rng, 1, 12);
            if (rng() % 3 != 0) r.birth.day = pick_range(rng, 1, 28);
        }

        // every 12th athlete has an empty medal record
        if (i % 12 == 11) {
            out.push_back(std::move(r));
            continue;
        }

        bool large = i % 2 == 1;
        int medal_budget = large ? pick_range(rng, 15, 40) : pick_range(rng, 1, 8);
        int first_active = r.birth.year + 15;
        int last_active = std::min(first_active + 25, core::kMaxYear);

        std::vector<std::string> tournaments;
        {
            std::set<size_t> chosen;
            int n_tournaments = pick_range(rng, 1, large ? 5 : 3);
            while (static_cast<int>(chosen.size()) < n_tournaments) {
                chosen.insert(pick(rng, std::size(kTournaments)));
            }
            for (size_t idx : chosen) tournaments.emplace_back(kTournaments[idx]);
        }
        int placed = 0;
        for (size_t ti = 0; ti < tournaments.size(); ++ti) {
            core::TournamentEntry t;
            t.name = tournaments[ti];
            std::set<size_t> format_ids;
            int n_formats = pick_range(rng, 1, large ? 4 : 2);
            while (static_cast<int>(format_ids.size()) < n_formats) {
                format_ids.insert(pick(rng, std::size(kFormats)));
            }
            for (size_t fi : format_ids) {
                core::FormatEntry f;
                f.name = kFormats[fi];
                int remaining = medal_budget - placed;
                if (remaining <= 0) break;
                int n_medals = std::min(remaining, pick_range(rng, 1, large ? 5 : 2));
                for (int mi = 0; mi < n_medals; ++mi) {
                    core::MedalEntry m;
                    m.type = core::kAllMedalTypes[pick(rng, 3)];
                    m.year = pick_range(rng, first_active, last_active);
                    m.location = kLocations[pick(rng, std::size(kLocations))];
                    f.medals.push_back(std::move(m));
                    ++placed;
                }
                t.formats.push_back(std::move(f));
            }
            if (!t.formats.empty()) r.tournaments.push_back(std::move(t));
            if (placed >= medal_budget && ti + 1 < tournaments.size()) break;
        }
        core::validate_record(r, static_cast<size_t>(i));
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<std::string> location_pool(const std::vector<core::AthleteRecord>& records) {
    std::set<std::string> pool(std::begin(kLocations), std::end(kLocations));
    for (const auto& r : records) {
        for (const auto& t : r.tournaments) {
            for (const auto& f : t.formats) {
                for (const auto& m : f.medals) pool.insert(m.location);
            }
        }
    }
    return std::vector<std::string>(pool.begin(), pool.end());
}

}  // namespace medalqa::gen
