#pragma once

#include "medalqa/eval/eval.hpp"
#include "medalqa/llm/client.hpp"

#include <chrono>
#include <filesystem>
#include <optional>

namespace medalqa::eval {

enum class MockKind { None, EchoGold, CorruptSql };

MockKind mock_from_name(std::string_view name);

struct PipelineOptions {
    strategy::StrategyKind kind = strategy::StrategyKind::SqlStatic;
    size_t k_shots = 6;
    MockKind mock = MockKind::None;
    llm::ModelConfig model;
    llm::CacheMode cache_mode = llm::CacheMode::Off;
    std::filesystem::path cache_path;
    int jobs = 1;
    std::optional<std::string> split;  // original|counterfact|small|large|easy|medium|hard
    std::chrono::milliseconds sql_timeout{2000};
    std::vector<strategy::Shot> pool;  // empty = shipped pool for the strategy kind
};

struct PipelineResult {
    std::vector<Prediction> predictions;
    long network_calls = 0;
};

bool instance_in_split(const gen::QAInstance& instance, const std::string& split);

// The deterministic mock responses: echo-gold answers with the oracle SQL
// (symbolic kinds) or the gold answer text (direct kinds); corrupt-sql
// cycles through unusable responses.
std::string mock_response(MockKind mock, strategy::StrategyKind kind,
                          const gen::QAInstance& instance, const std::string& stage_tag);

// Runs one strategy over every manifest instance in the selected split.
// Deterministic output order (manifest order) regardless of the job count.
PipelineResult run_pipeline(const gen::DatasetManifest& manifest,
                            const PipelineOptions& options);

}  // namespace medalqa::eval
