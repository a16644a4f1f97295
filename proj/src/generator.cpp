#include "medalqa/gen/generator.hpp"

#include "medalqa/gen/random_records.hpp"
#include "medalqa/strategy/table_text.hpp"
#include "medalqa/util/hash.hpp"
#include "medalqa/util/strings.hpp"

#include <algorithm>
#include <cstdio>
#include <random>
#include <set>
#include <sstream>

namespace medalqa::gen {

using nlohmann::json;
using nlohmann::ordered_json;
using oracle::Bindings;

std::string origin_name(Origin o) {
    return o == Origin::Original ? "Original" : "CounterFact";
}

Origin origin_from_name(std::string_view s) {
    if (s == "Original") return Origin::Original;
    if (s == "CounterFact") return Origin::CounterFact;
    throw core::DomainError("unknown origin '" + std::string(s) + "'");
}

GenerationConfig GenerationConfig::from_json(const json& j) {
    GenerationConfig cfg;
    if (j.contains("small_max")) cfg.thresholds.small_max = j["small_max"].get<int>();
    if (j.contains("large_min")) cfg.thresholds.large_min = j["large_min"].get<int>();
    if (j.contains("cf_variants_per_athlete")) {
        cfg.cf_variants_per_athlete = j["cf_variants_per_athlete"].get<int>();
    }
    if (j.contains("cf_ops_min")) cfg.cf_ops_min = j["cf_ops_min"].get<int>();
    if (j.contains("cf_ops_max")) cfg.cf_ops_max = j["cf_ops_max"].get<int>();
    if (j.contains("targets")) {
        const json& t = j["targets"];
        const char* origins[] = {"original", "counterfact"};
        const char* tiers[] = {"easy", "medium", "hard"};
        for (int o = 0; o < 2; ++o) {
            if (!t.contains(origins[o])) continue;
            for (int k = 0; k < 3; ++k) {
                if (t[origins[o]].contains(tiers[k])) {
                    cfg.targets[o][k] = t[origins[o]][tiers[k]].get<int>();
                }
            }
        }
    }
    if (cfg.thresholds.small_max >= cfg.thresholds.large_min) {
        throw ingest::InvalidThresholds("small_max must be below large_min");
    }
    if (cfg.cf_ops_min < 1 || cfg.cf_ops_max < cfg.cf_ops_min) {
        throw core::DomainError("cf op counts must satisfy 1 <= min <= max");
    }
    return cfg;
}

ordered_json GenerationConfig::to_json() const {
    ordered_json j;
    j["small_max"] = thresholds.small_max;
    j["large_min"] = thresholds.large_min;
    j["cf_variants_per_athlete"] = cf_variants_per_athlete;
    j["cf_ops_min"] = cf_ops_min;
    j["cf_ops_max"] = cf_ops_max;
    const char* origins[] = {"original", "counterfact"};
    const char* tiers[] = {"easy", "medium", "hard"};
    ordered_json t;
    for (int o = 0; o < 2; ++o) {
        ordered_json row;
        for (int k = 0; k < 3; ++k) row[tiers[k]] = targets[o][k];
        t[origins[o]] = row;
    }
    j["targets"] = t;
    return j;
}

std::string GenerationConfig::hash() const { return util::hash_hex(to_json().dump()); }

const core::AthleteRecord& DatasetManifest::variant_record(
    const std::string& variant_id) const {
    for (const auto& [id, record] : variants) {
        if (id == variant_id) return record;
    }
    throw core::DomainError("manifest has no variant '" + variant_id + "'");
}

namespace {

std::string bindings_key(const Bindings& b) {
    std::string out;
    for (const auto& [k, v] : b) {
        out += k;
        out += '=';
        out += v;
        out += '\x1f';
    }
    return out;
}

struct CandidateLess {
    bool operator()(const QAInstance& a, const QAInstance& b) const {
        auto key = [](const QAInstance& q) {
            return std::tuple<int, const std::string&, int, const std::string&, std::string>(
                static_cast<int>(q.origin), q.template_id, q.athlete_id, q.variant_id,
                bindings_key(q.bindings));
        };
        return key(a) < key(b);
    }
};

// Enumerates all templates over one record variant; gold comes from the SQL
// oracle on a store holding exactly this variant.
std::vector<QAInstance> enumerate_variant(const core::AthleteRecord& record, int athlete_id,
                                          const std::string& variant_id, Origin origin,
                                          const GenerationConfig& config) {
    std::vector<QAInstance> out;
    core::RelationalBundle bundle = core::build_bundle(std::span(&record, 1));
    oracle::SqliteStore store = oracle::SqliteStore::in_memory(bundle);
    std::string context = strategy::serialize_table(record);
    ingest::SizeClass size = ingest::classify_size(record, config.thresholds);
    for (const auto& tpl : oracle::catalog()) {
        for (const auto& bindings : tpl.enumerate_bindings(record)) {
            oracle::GoldAnswer gold;
            try {
                gold = oracle::execute_oracle(oracle::make_oracle_query(tpl, bindings), store);
            } catch (const oracle::EmptyResult&) {
                continue;
            } catch (const core::DomainError& e) {
                throw core::DomainError("template '" + tpl.id + "' on athlete '" +
                                        record.name + "' (" + variant_id + "): " + e.what());
            }
            QAInstance inst;
            inst.question = oracle::render_question(tpl, bindings);
            inst.gold = std::move(gold);
            inst.athlete_id = athlete_id;
            inst.template_id = tpl.id;
            inst.tier = tpl.tier;
            inst.size_class = size;
            inst.origin = origin;
            inst.variant_id = variant_id;
            inst.bindings = bindings;
            inst.serialized_context = context;
            out.push_back(std::move(inst));
        }
    }
    return out;
}

PerturbationOp sample_op(std::mt19937_64& rng, const std::vector<std::string>& locations) {
    auto signed_delta = [&rng]() {
        int magnitude = 1 + static_cast<int>(rng() % 3);
        return rng() % 2 == 0 ? magnitude : -magnitude;
    };
    // year and type edits intersect most templates, so they carry more weight
    switch (rng() % 8) {
        case 0:
        case 1:
        case 2: return ShiftMedalYear{signed_delta(), std::nullopt};
        case 3:
        case 4: return SwapMedalType{};
        case 5:
        case 6: return RelocateMedal{locations, std::nullopt};
        default: return ShiftBirthYear{signed_delta()};
    }
}

// Seeded 1..3-op counterfactual edit; nullopt when the record admits no
// applicable op sequence (e.g. empty medal table at the year bounds).
std::optional<core::AthleteRecord> make_counterfactual(const core::AthleteRecord& record,
                                                       const GenerationConfig& config,
                                                       std::uint64_t variant_seed,
                                                       const std::vector<std::string>& pool) {
    std::mt19937_64 rng(variant_seed);
    for (int attempt = 0; attempt < 8; ++attempt) {
        int span = config.cf_ops_max - config.cf_ops_min + 1;
        int n_ops = config.cf_ops_min + static_cast<int>(rng() % span);
        std::vector<PerturbationOp> ops;
        for (int i = 0; i < n_ops; ++i) {
            bool found = false;
            for (int tries = 0; tries < 24 && !found; ++tries) {
                PerturbationOp op = sample_op(rng, pool);
                if (op_applicable(record, op)) {
                    ops.push_back(std::move(op));
                    found = true;
                }
            }
            if (!found) break;
        }
        if (ops.empty()) return std::nullopt;
        try {
            return perturb(record, ops, util::mix_seed(variant_seed, attempt + 1));
        } catch (const NoApplicableTarget&) {
            continue;  // ops fought each other; redraw
        }
    }
    return std::nullopt;
}

std::vector<QAInstance> sample_cell(std::vector<QAInstance> cell, int target,
                                    std::uint64_t cell_seed) {
    if (target < 0 || static_cast<int>(cell.size()) <= target) return cell;
    std::mt19937_64 rng(cell_seed);
    std::vector<QAInstance> reservoir(cell.begin(), cell.begin() + target);
    for (size_t i = target; i < cell.size(); ++i) {
        std::uint64_t j = rng() % (i + 1);
        if (j < static_cast<std::uint64_t>(target)) {
            reservoir[j] = std::move(cell[i]);
        }
    }
    std::sort(reservoir.begin(), reservoir.end(), CandidateLess{});
    return reservoir;
}

}  // namespace

std::vector<QAInstance> instantiate(const oracle::QuestionTemplate& tpl,
                                    const core::RelationalBundle& bundle) {
    std::vector<QAInstance> out;
    auto records = core::flatten_bundle(bundle);
    oracle::SqliteStore store = oracle::SqliteStore::in_memory(bundle);
    for (size_t i = 0; i < records.size(); ++i) {
        for (const auto& bindings : tpl.enumerate_bindings(records[i])) {
            oracle::GoldAnswer gold;
            try {
                gold = oracle::execute_oracle(oracle::make_oracle_query(tpl, bindings), store);
            } catch (const oracle::EmptyResult&) {
                continue;
            }
            QAInstance inst;
            inst.question = oracle::render_question(tpl, bindings);
            inst.gold = std::move(gold);
            inst.athlete_id = static_cast<int>(i) + 1;
            inst.template_id = tpl.id;
            inst.tier = tpl.tier;
            inst.bindings = bindings;
            inst.serialized_context = strategy::serialize_table(records[i]);
            out.push_back(std::move(inst));
        }
    }
    return out;
}

DatasetManifest generate_suite(const std::vector<core::AthleteRecord>& records,
                               const GenerationConfig& config, std::uint64_t seed) {
    if (records.empty()) throw core::DomainError("generate_suite requires records");
    core::build_bundle(records);  // validates records and name uniqueness up front

    std::vector<std::string> pool = location_pool(records);
    std::vector<QAInstance> candidates;
    std::vector<std::pair<std::string, core::AthleteRecord>> variants;

    for (size_t i = 0; i < records.size(); ++i) {
        int athlete_id = static_cast<int>(i) + 1;
        std::string orig_id = "orig-" + std::to_string(athlete_id);
        auto orig = enumerate_variant(records[i], athlete_id, orig_id, Origin::Original,
                                      config);
        bool orig_used = !orig.empty();
        candidates.insert(candidates.end(), std::make_move_iterator(orig.begin()),
                          std::make_move_iterator(orig.end()));
        if (orig_used) variants.emplace_back(orig_id, records[i]);

        for (int v = 1; v <= config.cf_variants_per_athlete; ++v) {
            std::uint64_t variant_seed =
                util::mix_seed(util::mix_seed(seed, athlete_id), v);
            auto cf = make_counterfactual(records[i], config, variant_seed, pool);
            if (!cf) continue;
            std::string cf_id = "cf-" + std::to_string(athlete_id) + "-" + std::to_string(v);
            auto cf_instances =
                enumerate_variant(*cf, athlete_id, cf_id, Origin::CounterFact, config);
            if (cf_instances.empty()) continue;
            candidates.insert(candidates.end(),
                              std::make_move_iterator(cf_instances.begin()),
                              std::make_move_iterator(cf_instances.end()));
            variants.emplace_back(cf_id, std::move(*cf));
        }
    }

    std::sort(candidates.begin(), candidates.end(), CandidateLess{});

    // Down-sample each (origin, tier) cell to its configured target.
    std::vector<QAInstance> kept;
    for (int o = 0; o < 2; ++o) {
        for (int t = 0; t < 3; ++t) {
            std::vector<QAInstance> cell;
            for (const auto& inst : candidates) {
                if (static_cast<int>(inst.origin) == o && static_cast<int>(inst.tier) == t) {
                    cell.push_back(inst);
                }
            }
            auto sampled = sample_cell(std::move(cell), config.targets[o][t],
                                       util::mix_seed(seed, 0x10 + o * 3 + t));
            kept.insert(kept.end(), std::make_move_iterator(sampled.begin()),
                        std::make_move_iterator(sampled.end()));
        }
    }
    std::sort(kept.begin(), kept.end(), CandidateLess{});

    DatasetManifest manifest;
    manifest.seed = seed;
    manifest.config_hash = config.hash();
    char buf[32];
    for (size_t i = 0; i < kept.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "q%06zu", i + 1);
        kept[i].instance_id = buf;
    }
    manifest.instances = std::move(kept);

    // Only variants that still back at least one instance ship in the manifest.
    std::set<std::string> used;
    for (const auto& inst : manifest.instances) used.insert(inst.variant_id);
    for (auto& [id, record] : variants) {
        if (used.count(id)) manifest.variants.emplace_back(id, std::move(record));
    }
    std::sort(manifest.variants.begin(), manifest.variants.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    auto& counts = manifest.split_counts;
    counts["total"] = static_cast<int>(manifest.instances.size());
    counts["original"] = counts["counterfact"] = 0;
    counts["small"] = counts["large"] = counts["unclassified"] = 0;
    counts["easy"] = counts["medium"] = counts["hard"] = 0;
    for (const auto& inst : manifest.instances) {
        counts[inst.origin == Origin::Original ? "original" : "counterfact"]++;
        counts[util::ascii_lower(ingest::size_class_name(inst.size_class))]++;
        counts[util::ascii_lower(oracle::tier_name(inst.tier))]++;
    }
    return manifest;
}

namespace {

ordered_json gold_to_json(const oracle::GoldAnswer& g) {
    return ordered_json{{"kind", oracle::answer_kind_name(g.kind)}, {"values", g.values}};
}

oracle::GoldAnswer gold_from_json(const json& j) {
    oracle::GoldAnswer g;
    g.kind = oracle::answer_kind_from_name(j.at("kind").get<std::string>());
    g.values = j.at("values").get<std::vector<std::string>>();
    return g;
}

}  // namespace

std::string manifest_to_jsonl(const DatasetManifest& m) {
    std::string out;
    ordered_json header;
    header["type"] = "header";
    header["format"] = "medalqa.manifest.v1";
    header["seed"] = m.seed;
    header["config_hash"] = m.config_hash;
    ordered_json counts;
    for (const char* key : {"total", "original", "counterfact", "small", "large",
                            "unclassified", "easy", "medium", "hard"}) {
        counts[key] = m.split_counts.count(key) ? m.split_counts.at(key) : 0;
    }
    header["counts"] = counts;
    out += header.dump() + "\n";

    for (const auto& [id, record] : m.variants) {
        ordered_json j;
        j["type"] = "record";
        j["variant_id"] = id;
        j["record"] = ingest::record_to_json(record);
        out += j.dump() + "\n";
    }
    for (const auto& inst : m.instances) {
        ordered_json j;
        j["type"] = "instance";
        j["instance_id"] = inst.instance_id;
        j["question"] = inst.question;
        j["gold"] = gold_to_json(inst.gold);
        j["athlete_id"] = inst.athlete_id;
        j["template_id"] = inst.template_id;
        j["tier"] = oracle::tier_name(inst.tier);
        j["size_class"] = ingest::size_class_name(inst.size_class);
        j["origin"] = origin_name(inst.origin);
        j["variant_id"] = inst.variant_id;
        ordered_json binds;
        for (const auto& [k, v] : inst.bindings) binds[k] = v;
        j["bindings"] = binds;
        j["serialized_context"] = inst.serialized_context;
        out += j.dump() + "\n";
    }
    return out;
}

DatasetManifest manifest_from_jsonl(const std::string& text) {
    DatasetManifest m;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    bool saw_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (util::trim(line).empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            throw core::DomainError("manifest line " + std::to_string(line_no) + ": " +
                                    e.what());
        }
        std::string type = j.at("type").get<std::string>();
        if (type == "header") {
            saw_header = true;
            m.seed = j.at("seed").get<std::uint64_t>();
            m.config_hash = j.at("config_hash").get<std::string>();
            for (auto& [key, value] : j.at("counts").items()) {
                m.split_counts[key] = value.get<int>();
            }
        } else if (type == "record") {
            m.variants.emplace_back(j.at("variant_id").get<std::string>(),
                                    ingest::record_from_json(j.at("record")));
        } else if (type == "instance") {
            QAInstance inst;
            inst.instance_id = j.at("instance_id").get<std::string>();
            inst.question = j.at("question").get<std::string>();
            inst.gold = gold_from_json(j.at("gold"));
            inst.athlete_id = j.at("athlete_id").get<int>();
            inst.template_id = j.at("template_id").get<std::string>();
            inst.tier = oracle::tier_from_name(j.at("tier").get<std::string>());
            inst.size_class =
                ingest::size_class_from_name(j.at("size_class").get<std::string>());
            inst.origin = origin_from_name(j.at("origin").get<std::string>());
            inst.variant_id = j.at("variant_id").get<std::string>();
            for (auto& [key, value] : j.at("bindings").items()) {
                inst.bindings[key] = value.get<std::string>();
            }
            inst.serialized_context = j.at("serialized_context").get<std::string>();
            m.instances.push_back(std::move(inst));
        } else {
            throw core::DomainError("manifest line " + std::to_string(line_no) +
                                    ": unknown type '" + type + "'");
        }
    }
    if (!saw_header) throw core::DomainError("manifest has no header line");
    return m;
}

}  // namespace medalqa::gen
