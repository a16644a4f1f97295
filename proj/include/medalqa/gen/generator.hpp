#pragma once

#include "medalqa/gen/perturb.hpp"
#include "medalqa/ingest/ingest.hpp"
#include "medalqa/oracle/oracle.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace medalqa::gen {

enum class Origin { Original, CounterFact };

std::string origin_name(Origin o);
Origin origin_from_name(std::string_view s);

struct QAInstance {
    std::string instance_id;
    std::string question;
    oracle::GoldAnswer gold;
    int athlete_id = 0;
    std::string template_id;
    oracle::Tier tier = oracle::Tier::Easy;
    ingest::SizeClass size_class = ingest::SizeClass::Unclassified;
    Origin origin = Origin::Original;
    std::string variant_id;  // record variant the context and gold came from
    oracle::Bindings bindings;
    std::string serialized_context;
};

struct GenerationConfig {
    ingest::SizeThresholds thresholds;
    int cf_variants_per_athlete = 1;
    int cf_ops_min = 1;
    int cf_ops_max = 3;
    // Kept-instance targets per (origin, tier); -1 keeps everything that
    // instantiates. Down-sampling is seeded reservoir sampling.
    std::array<std::array<int, 3>, 2> targets{{{-1, -1, -1}, {-1, -1, -1}}};

    static GenerationConfig from_json(const nlohmann::json& j);
    nlohmann::ordered_json to_json() const;
    std::string hash() const;
};

struct DatasetManifest {
    std::uint64_t seed = 0;
    std::string config_hash;
    std::vector<std::pair<std::string, core::AthleteRecord>> variants;  // sorted by id
    std::vector<QAInstance> instances;
    std::map<std::string, int> split_counts;

    const core::AthleteRecord& variant_record(const std::string& variant_id) const;
};

// All instances of one template over a bundle: every binding combination
// whose oracle yields a non-empty answer. Tags beyond (template, athlete,
// gold) are left for generate_suite to fill.
std::vector<QAInstance> instantiate(const oracle::QuestionTemplate& tpl,
                                    const core::RelationalBundle& bundle);

// The full dataset build: original and counterfactual variants, oracle golds
// recomputed per variant, per-cell down-sampling, deterministic ids. Pure
// function of (records, config, seed).
DatasetManifest generate_suite(const std::vector<core::AthleteRecord>& records,
                               const GenerationConfig& config, std::uint64_t seed);

std::string manifest_to_jsonl(const DatasetManifest& manifest);
DatasetManifest manifest_from_jsonl(const std::string& text);

}  // namespace medalqa::gen
