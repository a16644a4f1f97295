#include "medalqa/llm/client.hpp"

#include "medalqa/util/io.hpp"
#include "medalqa/util/strings.hpp"

#include <httplib.h>
#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>
#include <thread>

namespace medalqa::llm {

using nlohmann::json;
using nlohmann::ordered_json;

std::string MockClient::complete(const strategy::PromptEnvelope& envelope,
                                 Transcript* transcript) {
    auto start = std::chrono::steady_clock::now();
    std::string response = responder_(envelope);
    if (transcript) {
        transcript->envelope_hash = envelope.envelope_hash();
        transcript->request_json = "";
        transcript->response_text = response;
        transcript->latency = std::chrono::duration_cast<std::chrono::milliseconds>(
            std::chrono::steady_clock::now() - start);
        transcript->attempts = 1;
    }
    return response;
}

std::string HttpClient::request_body(const strategy::PromptEnvelope& envelope,
                                     const ModelConfig& config) {
    ordered_json body;
    body["model"] = config.model;
    body["temperature"] = config.temperature;
    body["max_tokens"] = config.max_tokens;
    // instruction as the system turn, everything else as one user turn, so
    // the rendered text stays auditable byte for byte
    std::string rendered = envelope.render_text();
    std::string user = rendered.substr(envelope.instruction.size());
    while (!user.empty() && user.front() == '\n') user.erase(0, 1);
    body["messages"] = ordered_json::array({
        ordered_json{{"role", "system"}, {"content", envelope.instruction}},
        ordered_json{{"role", "user"}, {"content", user}},
    });
    return body.dump();
}

namespace {

struct ParsedUrl {
    std::string host_part;  // scheme://host[:port]
    std::string path;
};

ParsedUrl split_url(const std::string& url) {
    auto scheme_end = url.find("://");
    size_t path_start =
        scheme_end == std::string::npos ? url.find('/') : url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) return {url, "/v1/chat/completions"};
    return {url.substr(0, path_start), url.substr(path_start)};
}

}  // namespace

std::string HttpClient::complete(const strategy::PromptEnvelope& envelope,
                                 Transcript* transcript) {
    if (config_.endpoint.empty()) {
        throw core::DomainError("no endpoint configured; use a mock or set --endpoint");
    }
    std::string body = request_body(envelope, config_);
    ParsedUrl url = split_url(config_.endpoint);

    httplib::Client http(url.host_part);
    http.set_connection_timeout(std::chrono::duration_cast<std::chrono::seconds>(
        config_.timeout));
    http.set_read_timeout(std::chrono::duration_cast<std::chrono::seconds>(config_.timeout));
    httplib::Headers headers;
    if (const char* key = std::getenv(config_.api_key_env.c_str())) {
        headers.emplace("Authorization", std::string("Bearer ") + key);
    }

    auto start = std::chrono::steady_clock::now();
    int attempts = 0;
    std::string last_error;
    for (; attempts < config_.retry.max_attempts; ++attempts) {
        if (attempts > 0) {
            std::this_thread::sleep_for(config_.retry.backoff_base * (1 << (attempts - 1)));
        }
        network_calls_.fetch_add(1);
        auto res = http.Post(url.path, headers, body, "application/json");
        if (!res) {
            last_error = "connection failed or timed out";
            continue;
        }
        if (res->status == 401 || res->status == 403) {
            throw AuthFailure("endpoint rejected credentials (HTTP " +
                              std::to_string(res->status) + ")");
        }
        if (res->status == 429) {
            last_error = "HTTP 429";
            continue;
        }
        if (res->status >= 500) {
            last_error = "HTTP " + std::to_string(res->status);
            continue;
        }
        if (res->status != 200) {
            throw MalformedResponse("unexpected HTTP status " + std::to_string(res->status));
        }
        std::string text;
        try {
            json j = json::parse(res->body);
            text = j.at("choices").at(0).at("message").at("content").get<std::string>();
        } catch (const json::exception& e) {
            throw MalformedResponse(std::string("cannot parse completion: ") + e.what());
        }
        if (transcript) {
            transcript->envelope_hash = envelope.envelope_hash();
            transcript->request_json = body;
            transcript->response_text = text;
            transcript->latency = std::chrono::duration_cast<std::chrono::milliseconds>(
                std::chrono::steady_clock::now() - start);
            transcript->attempts = attempts + 1;
        }
        return text;
    }
    if (last_error == "HTTP 429") {
        throw RateLimited("rate limited after " + std::to_string(attempts) + " attempts");
    }
    throw ClientTimeout("request failed after " + std::to_string(attempts) +
                        " attempts: " + last_error);
}

CacheMode cache_mode_from_name(std::string_view name) {
    if (name == "off") return CacheMode::Off;
    if (name == "record") return CacheMode::Record;
    if (name == "replay") return CacheMode::Replay;
    throw core::DomainError("cache mode must be off|record|replay, got '" +
                            std::string(name) + "'");
}

ReplayCache::ReplayCache(std::filesystem::path path, CacheMode mode)
    : path_(std::move(path)), mode_(mode) {
    if (mode_ == CacheMode::Off) return;
    std::ifstream in(path_);
    if (!in) {
        if (mode_ == CacheMode::Replay) {
            throw CacheCorrupt("replay cache does not exist: " + path_.string());
        }
        return;  // record mode creates the file on first insert
    }
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (util::trim(line).empty()) continue;
        try {
            json j = json::parse(line);
            entries_[j.at("hash").get<std::string>()] =
                j.at("response").get<std::string>();
        } catch (const json::exception& e) {
            throw CacheCorrupt("cache line " + std::to_string(line_no) + ": " + e.what());
        }
    }
}

std::optional<std::string> ReplayCache::lookup(const std::string& envelope_hash) const {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = entries_.find(envelope_hash);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

void ReplayCache::insert(const std::string& envelope_hash, const Transcript& transcript) {
    std::lock_guard<std::mutex> lock(mu_);
    if (entries_.count(envelope_hash)) return;
    entries_[envelope_hash] = transcript.response_text;
    ordered_json j;
    j["hash"] = envelope_hash;
    j["response"] = transcript.response_text;
    j["request"] = transcript.request_json;
    j["latency_ms"] = transcript.latency.count();
    j["attempts"] = transcript.attempts;
    auto dir = path_.parent_path();
    if (!dir.empty()) std::filesystem::create_directories(dir);
    std::ofstream out(path_, std::ios::app);
    if (!out) throw CacheCorrupt("cannot append to cache: " + path_.string());
    out << j.dump() << "\n";
}

size_t ReplayCache::size() const {
    std::lock_guard<std::mutex> lock(mu_);
    return entries_.size();
}

std::string CachingClient::complete(const strategy::PromptEnvelope& envelope,
                                    Transcript* transcript) {
    std::string hash = envelope.envelope_hash();
    if (cache_->mode() != CacheMode::Off) {
        if (auto hit = cache_->lookup(hash)) {
            if (transcript) {
                transcript->envelope_hash = hash;
                transcript->response_text = *hit;
                transcript->latency = std::chrono::milliseconds(0);
                transcript->attempts = 0;
            }
            return *hit;
        }
        if (cache_->mode() == CacheMode::Replay) {
            throw CacheMiss("no cached response for envelope " + hash);
        }
    }
    Transcript local;
    Transcript* t = transcript ? transcript : &local;
    std::string response = inner_->complete(envelope, t);
    if (cache_->mode() == CacheMode::Record) cache_->insert(hash, *t);
    return response;
}

}  // namespace medalqa::llm
