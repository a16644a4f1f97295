#pragma once

#include "medalqa/core/types.hpp"

#include <cstdint>
#include <vector>

namespace medalqa::gen {

// Seeded synthetic athlete corpus used by the oracle equivalence sweep and
// the demo pipeline. Alternates small and large medal tables so both size
// classes are populated under the default thresholds; occasionally emits
// partial birth dates, empty tournaments and names with apostrophes.
std::vector<core::AthleteRecord> make_random_records(std::uint64_t seed, int count);

// Location names seen across the given records plus a builtin city pool.
std::vector<std::string> location_pool(const std::vector<core::AthleteRecord>& records);

}  // namespace medalqa::gen
