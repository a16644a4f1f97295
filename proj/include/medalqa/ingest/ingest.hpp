#pragma once

#include "medalqa/core/types.hpp"
#include "medalqa/strategy/table_text.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace medalqa::ingest {

struct FileUnreadable : core::DomainError {
    explicit FileUnreadable(const std::string& path);
};

struct MalformedEntry : core::DomainError {
    MalformedEntry(int line_, std::string reason_);
    int line;
    std::string reason;
};

struct InvalidThresholds : core::DomainError {
    using core::DomainError::DomainError;
};

enum class SizeClass { Small, Large, Unclassified };

std::string size_class_name(SizeClass s);
SizeClass size_class_from_name(std::string_view s);

struct SizeThresholds {
    int small_max = 8;
    int large_min = 15;
};

// Small iff medal count <= small_max, Large iff >= large_min, otherwise
// Unclassified (kept in the dataset, excluded from the size comparison).
SizeClass classify_size(const core::AthleteRecord& record, SizeThresholds thresholds);

struct IngestReport {
    int accepted = 0;
    std::vector<std::pair<std::string, std::string>> rejected;  // locator, violation
    std::vector<int> word_counts;  // serialized-context words per accepted record
    nlohmann::ordered_json to_json() const;
};

// One record per line in the interchange format (see docs/formats.md).
// Lines that fail to parse or violate record invariants are reported in
// `report`, never silently dropped.
std::vector<core::AthleteRecord> parse_dataset(const std::filesystem::path& path,
                                               IngestReport* report = nullptr);

// Same, over in-memory text; locators use the given source name.
std::vector<core::AthleteRecord> parse_dataset_text(const std::string& text,
                                                    const std::string& source_name,
                                                    IngestReport* report = nullptr);

int context_word_count(const core::AthleteRecord& record,
                       strategy::TableSerialization mode = strategy::TableSerialization::Grid);

// Interchange codec, also reused by the manifest format.
nlohmann::ordered_json record_to_json(const core::AthleteRecord& record);
core::AthleteRecord record_from_json(const nlohmann::json& j);

std::string records_to_jsonl(const std::vector<core::AthleteRecord>& records);

}  // namespace medalqa::ingest
