#pragma once

#include "medalqa/strategy/prompt.hpp"

#include <atomic>
#include <chrono>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

namespace medalqa::llm {

struct ClientTimeout : core::DomainError {
    using core::DomainError::DomainError;
};
struct RateLimited : core::DomainError {
    using core::DomainError::DomainError;
};
struct MalformedResponse : core::DomainError {
    using core::DomainError::DomainError;
};
struct AuthFailure : core::DomainError {
    using core::DomainError::DomainError;
};
struct CacheMiss : core::DomainError {
    using core::DomainError::DomainError;
};
struct CacheCorrupt : core::DomainError {
    using core::DomainError::DomainError;
};

struct RetryPolicy {
    int max_attempts = 3;
    std::chrono::milliseconds backoff_base{250};
};

struct ModelConfig {
    std::string endpoint;  // e.g. http://localhost:8080/v1/chat/completions
    std::string model = "default";
    double temperature = 0.0;  // fixed decoding for reproducible runs
    int max_tokens = 1024;
    std::chrono::milliseconds timeout{30000};
    RetryPolicy retry;
    std::string api_key_env = "MEDALQA_API_KEY";
};

struct Transcript {
    std::string envelope_hash;
    std::string request_json;
    std::string response_text;
    std::chrono::milliseconds latency{0};
    int attempts = 0;
};

class Client {
  public:
    virtual ~Client() = default;
    virtual std::string complete(const strategy::PromptEnvelope& envelope,
                                 Transcript* transcript = nullptr) = 0;
    // Requests that actually left the process.
    virtual long network_calls() const { return 0; }
};

// Deterministic stand-in driven by a response function.
class MockClient : public Client {
  public:
    using Responder = std::function<std::string(const strategy::PromptEnvelope&)>;
    explicit MockClient(Responder responder) : responder_(std::move(responder)) {}
    std::string complete(const strategy::PromptEnvelope& envelope,
                         Transcript* transcript) override;

  private:
    Responder responder_;
};

// Chat-completions JSON over HTTP, with retry/backoff per config.
class HttpClient : public Client {
  public:
    explicit HttpClient(ModelConfig config) : config_(std::move(config)) {}
    std::string complete(const strategy::PromptEnvelope& envelope,
                         Transcript* transcript) override;
    long network_calls() const override { return network_calls_.load(); }

    // Request body for an envelope; exposed so transcripts and tests can pin
    // the wire format.
    static std::string request_body(const strategy::PromptEnvelope& envelope,
                                    const ModelConfig& config);

  private:
    ModelConfig config_;
    std::atomic<long> network_calls_{0};
};

enum class CacheMode { Off, Record, Replay };

CacheMode cache_mode_from_name(std::string_view name);

// Envelope-hash keyed response cache, line-delimited JSON on disk. Record
// mode inserts on miss (write-through); replay mode treats a miss as an
// error so replays provably never touch the network.
class ReplayCache {
  public:
    ReplayCache(std::filesystem::path path, CacheMode mode);
    std::optional<std::string> lookup(const std::string& envelope_hash) const;
    void insert(const std::string& envelope_hash, const Transcript& transcript);
    CacheMode mode() const { return mode_; }
    size_t size() const;

  private:
    std::filesystem::path path_;
    CacheMode mode_;
    mutable std::mutex mu_;
    std::map<std::string, std::string> entries_;
};

// Wraps an inner client with a ReplayCache.
class CachingClient : public Client {
  public:
    CachingClient(std::shared_ptr<Client> inner, std::shared_ptr<ReplayCache> cache)
        : inner_(std::move(inner)), cache_(std::move(cache)) {}
    std::string complete(const strategy::PromptEnvelope& envelope,
                         Transcript* transcript) override;
    long network_calls() const override { return inner_->network_calls(); }

  private:
    std::shared_ptr<Client> inner_;
    std::shared_ptr<ReplayCache> cache_;
};

}  // namespace medalqa::llm
