#include "medalqa/gen/perturb.hpp"

#include <algorithm>
#include <random>

namespace medalqa::gen {

using core::AthleteRecord;
using core::MedalEntry;
using core::MedalType;

namespace {

std::vector<MedalEntry*> medal_slots(AthleteRecord& r) {
    std::vector<MedalEntry*> out;
    for (auto& t : r.tournaments) {
        for (auto& f : t.formats) {
            for (auto& m : f.medals) out.push_back(&m);
        }
    }
    return out;
}

int min_medal_year(const AthleteRecord& r) {
    int best = core::kMaxYear + 1;
    for (const auto& t : r.tournaments) {
        for (const auto& f : t.formats) {
            for (const auto& m : f.medals) best = std::min(best, m.year);
        }
    }
    return best;
}

// Deterministic choice; avoids std::uniform_int_distribution so streams do
// not depend on the standard library implementation.
size_t pick(std::mt19937_64& rng, size_t n) { return static_cast<size_t>(rng() % n); }

bool year_shift_ok(const AthleteRecord& r, const MedalEntry& m, int delta) {
    int y = m.year + delta;
    return y >= core::kMinYear && y <= core::kMaxYear && y >= r.birth.year;
}

std::vector<int> valid_shift_targets(AthleteRecord& r, int delta) {
    std::vector<int> out;
    auto slots = medal_slots(r);
    for (size_t i = 0; i < slots.size(); ++i) {
        if (year_shift_ok(r, *slots[i], delta)) out.push_back(static_cast<int>(i));
    }
    return out;
}

std::vector<int> valid_relocate_targets(AthleteRecord& r,
                                        const std::vector<std::string>& pool) {
    std::vector<int> out;
    auto slots = medal_slots(r);
    for (size_t i = 0; i < slots.size(); ++i) {
        for (const auto& loc : pool) {
            if (!loc.empty() && loc != slots[i]->location) {
                out.push_back(static_cast<int>(i));
                break;
            }
        }
    }
    return out;
}

int resolve_target(const std::optional<int>& requested, const std::vector<int>& candidates,
                   std::mt19937_64& rng, const std::string& op) {
    if (candidates.empty()) {
        throw NoApplicableTarget(op + ": no valid target medal");
    }
    if (requested) {
        if (std::find(candidates.begin(), candidates.end(), *requested) == candidates.end()) {
            throw NoApplicableTarget(op + ": requested target " + std::to_string(*requested) +
                                     " is not valid");
        }
        return *requested;
    }
    return candidates[pick(rng, candidates.size())];
}

void apply_op(AthleteRecord& r, const PerturbationOp& op, std::mt19937_64& rng) {
    if (const auto* shift = std::get_if<ShiftMedalYear>(&op)) {
        if (shift->delta == 0) throw NoApplicableTarget("shift-medal-year: delta must be non-zero");
        int idx = resolve_target(shift->target, valid_shift_targets(r, shift->delta), rng,
                                 "shift-medal-year");
        medal_slots(r)[idx]->year += shift->delta;
        return;
    }
    if (const auto* swap = std::get_if<SwapMedalType>(&op)) {
        auto slots = medal_slots(r);
        std::vector<int> candidates(slots.size());
        for (size_t i = 0; i < slots.size(); ++i) candidates[i] = static_cast<int>(i);
        int idx = resolve_target(swap->target, candidates, rng, "swap-medal-type");
        MedalType current = slots[idx]->type;
        std::vector<MedalType> others;
        for (MedalType t : core::kAllMedalTypes) {
            if (t != current) others.push_back(t);
        }
        slots[idx]->type = others[pick(rng, others.size())];
        return;
    }
    if (const auto* relocate = std::get_if<RelocateMedal>(&op)) {
        int idx = resolve_target(relocate->target, valid_relocate_targets(r, relocate->pool),
                                 rng, "relocate-medal");
        auto slots = medal_slots(r);
        std::vector<std::string> choices;
        for (const auto& loc : relocate->pool) {
            if (!loc.empty() && loc != slots[idx]->location) choices.push_back(loc);
        }
        slots[idx]->location = choices[pick(rng, choices.size())];
        return;
    }
    const auto& birth_shift = std::get<ShiftBirthYear>(op);
    if (birth_shift.delta == 0) {
        throw NoApplicableTarget("shift-birth-year: delta must be non-zero");
    }
    int y = r.birth.year + birth_shift.delta;
    if (y < core::kMinYear || y > core::kMaxYear || y > min_medal_year(r)) {
        throw NoApplicableTarget("shift-birth-year: shifted year " + std::to_string(y) +
                                 " breaks record invariants");
    }
    r.birth.year = y;
}

}  // namespace

std::string op_name(const PerturbationOp& op) {
    if (std::holds_alternative<ShiftMedalYear>(op)) return "shift-medal-year";
    if (std::holds_alternative<SwapMedalType>(op)) return "swap-medal-type";
    if (std::holds_alternative<RelocateMedal>(op)) return "relocate-medal";
    return "shift-birth-year";
}

PerturbationOp op_from_string(const std::string& text,
                              const std::vector<std::string>& location_pool) {
    std::string name = text;
    int delta = 0;
    bool has_delta = false;
    if (auto eq = text.find('='); eq != std::string::npos) {
        name = text.substr(0, eq);
        delta = std::stoi(text.substr(eq + 1));
        has_delta = true;
    }
    if (name == "shift-medal-year") return ShiftMedalYear{has_delta ? delta : 1, std::nullopt};
    if (name == "swap-medal-type") return SwapMedalType{};
    if (name == "relocate-medal") return RelocateMedal{location_pool, std::nullopt};
    if (name == "shift-birth-year") return ShiftBirthYear{has_delta ? delta : -1};
    throw core::DomainError("unknown perturbation op '" + name + "'");
}

bool op_applicable(const core::AthleteRecord& record, const PerturbationOp& op) {
    AthleteRecord copy = record;
    if (const auto* shift = std::get_if<ShiftMedalYear>(&op)) {
        return shift->delta != 0 && !valid_shift_targets(copy, shift->delta).empty();
    }
    if (std::holds_alternative<SwapMedalType>(op)) {
        return core::medal_row_count(record) > 0;
    }
    if (const auto* relocate = std::get_if<RelocateMedal>(&op)) {
        return !valid_relocate_targets(copy, relocate->pool).empty();
    }
    const auto& birth_shift = std::get<ShiftBirthYear>(op);
    int y = record.birth.year + birth_shift.delta;
    return birth_shift.delta != 0 && y >= core::kMinYear && y <= core::kMaxYear &&
           y <= min_medal_year(copy);
}

core::AthleteRecord perturb(const core::AthleteRecord& record,
                            const std::vector<PerturbationOp>& ops, std::uint64_t seed) {
    if (ops.empty()) throw NoApplicableTarget("perturb requires at least one op");
    core::validate_record(record);
    AthleteRecord out = record;
    std::mt19937_64 rng(seed);
    for (const auto& op : ops) apply_op(out, op, rng);
    core::validate_record(out);
    if (out == record) {
        // opposing shifts can land on the same medal and cancel
        throw NoApplicableTarget("ops canceled each other out; record unchanged");
    }
    return out;
}

}  // namespace medalqa::gen
