#pragma once

#include "medalqa/core/types.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace medalqa::gen {

struct NoApplicableTarget : core::DomainError {
    using core::DomainError::DomainError;
};

// Counterfactual edits. `target` is a medal ordinal in depth-first order;
// when absent the target is drawn from the seeded stream over valid
// candidates. Every op leaves the record valid and changes at least one
// field.

struct ShiftMedalYear {
    int delta = 1;  // != 0
    std::optional<int> target;
};

struct SwapMedalType {
    std::optional<int> target;
};

struct RelocateMedal {
    std::vector<std::string> pool;
    std::optional<int> target;
};

struct ShiftBirthYear {
    int delta = -1;  // != 0
};

using PerturbationOp =
    std::variant<ShiftMedalYear, SwapMedalType, RelocateMedal, ShiftBirthYear>;

std::string op_name(const PerturbationOp& op);

// Parses "shift-medal-year=+2", "swap-medal-type", "relocate-medal",
// "shift-birth-year=-1" (CLI surface).
PerturbationOp op_from_string(const std::string& text,
                              const std::vector<std::string>& location_pool);

bool op_applicable(const core::AthleteRecord& record, const PerturbationOp& op);

core::AthleteRecord perturb(const core::AthleteRecord& record,
                            const std::vector<PerturbationOp>& ops, std::uint64_t seed);

}  // namespace medalqa::gen
