#include "medalqa/strategy/table_text.hpp"

namespace medalqa::strategy {

std::string serialize_table(const core::AthleteRecord& record, TableSerialization) {
    std::string out;
    out += "Name: " + record.name + "\n";
    out += "Born: " + record.birth.to_string() + "\n";
    for (const auto& t : record.tournaments) {
        out += "\n";
        out += "Tournament: " + t.name + "\n";
        out += "Medal | Year | Event\n";
        for (const auto& f : t.formats) {
            for (const auto& m : f.medals) {
                out += core::medal_display_name(m.type) + " | " + std::to_string(m.year) +
                       " " + m.location + " | " + f.name + "\n";
            }
        }
    }
    return out;
}

}  // namespace medalqa::strategy
