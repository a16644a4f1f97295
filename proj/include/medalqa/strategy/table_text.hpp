#pragma once

#include "medalqa/core/types.hpp"

#include <string>

namespace medalqa::strategy {

enum class TableSerialization { Grid };

// Renders the infobox-style context given to direct-prompting strategies:
// a name/birth header followed by one Medal | Year | Event section per
// tournament. Deterministic; byte-identical for identical records.
std::string serialize_table(const core::AthleteRecord& record,
                            TableSerialization mode = TableSerialization::Grid);

}  // namespace medalqa::strategy
