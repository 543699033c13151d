#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "httplib.h"
#include "json.hpp"

#include "planner/errors.hpp"
#include "planner/synthesis.hpp"

namespace planner::synthesis {

namespace fs = std::filesystem;

LlmConfig LlmConfig::offline(std::string fixtures_dir, std::string model_id) {
    LlmConfig c;
    c.provider = ProviderKind::OfflineFixtures;
    c.fixtures_dir = std::move(fixtures_dir);
    c.model_id = std::move(model_id);
    return c;
}

LlmConfig LlmConfig::from_environment() {
    LlmConfig c;
    c.provider = ProviderKind::HttpApi;
    if (const char* key = std::getenv("PLNR_API_KEY"))
        c.api_key = key;
    if (const char* base = std::getenv("PLNR_API_BASE"))
        c.endpoint = base;
    if (const char* flavor = std::getenv("PLNR_API_FLAVOR"))
        c.api_flavor = flavor;
    if (const char* model = std::getenv("PLNR_MODEL"))
        c.model_id = model;
    return c;
}

namespace {

struct Message {
    std::string role; // "user" | "assistant"
    std::string content;
};

std::string utc_timestamp() {
    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// fixtures/<domain>/<phase>/<attempt>.md (+ optional <attempt>.usage.json)
std::string fixture_reply(const LlmConfig& config, const std::string& domain, Phase phase,
                          int attempt_index, TranscriptRecord& transcript) {
    fs::path dir = fs::path(config.fixtures_dir) / domain / phase_name(phase);
    fs::path body = dir / (std::to_string(attempt_index) + ".md");
    if (!fs::exists(body))
        throw FixtureMissing(body.string());

    transcript.model_id = config.model_id;
    transcript.phase = phase;
    transcript.latency_seconds = 0.0;
    transcript.timestamp = "offline";

    fs::path usage = dir / (std::to_string(attempt_index) + ".usage.json");
    if (fs::exists(usage)) {
        try {
            nlohmann::json u = nlohmann::json::parse(read_file(usage));
            transcript.input_tokens = u.value("input_tokens", 0ULL);
            transcript.output_tokens = u.value("output_tokens", 0ULL);
        } catch (const nlohmann::json::exception& e) {
            throw ProviderError("bad usage sidecar " + usage.string() + ": " + e.what());
        }
    } else {
        transcript.usage_missing = true;
    }
    return read_file(body);
}

struct Endpoint {
    std::string base;   // scheme://host[:port]
    std::string prefix; // path part, may be empty
};

Endpoint split_endpoint(const std::string& endpoint) {
    auto scheme = endpoint.find("://");
    if (scheme == std::string::npos)
        throw ProviderError("endpoint must include a scheme: " + endpoint);
    auto path = endpoint.find('/', scheme + 3);
    if (path == std::string::npos)
        return {endpoint, ""};
    return {endpoint.substr(0, path), endpoint.substr(path)};
}

std::string http_reply(const LlmConfig& config, const std::vector<Message>& messages,
                       Phase phase, TranscriptRecord& transcript) {
    if (config.endpoint.empty())
        throw ProviderError("no endpoint configured (set PLNR_API_BASE)");
    if (config.api_key.empty())
        throw ProviderError("no API key configured (set PLNR_API_KEY)");

    Endpoint ep = split_endpoint(config.endpoint);
    httplib::Client client(ep.base);
    client.set_read_timeout(300, 0);
    client.set_connection_timeout(30, 0);

    nlohmann::json body;
    httplib::Headers headers;
    std::string path;
    bool anthropic = config.api_flavor == "anthropic";
    if (anthropic) {
        path = ep.prefix + "/v1/messages";
        headers = {{"x-api-key", config.api_key}, {"anthropic-version", "2023-06-01"}};
        body["model"] = config.model_id;
        body["max_tokens"] = 8192;
    } else {
        path = ep.prefix + "/chat/completions";
        headers = {{"Authorization", "Bearer " + config.api_key}};
        body["model"] = config.model_id;
    }
    auto msgs = nlohmann::json::array();
    for (const auto& m : messages)
        msgs.push_back({{"role", m.role}, {"content", m.content}});
    body["messages"] = msgs;
    for (const auto& [k, v] : config.decoding)
        body[k] = v;

    auto start = std::chrono::steady_clock::now();
    auto res = client.Post(path, headers, body.dump(), "application/json");
    double latency = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    if (!res)
        throw ProviderError("transport failure: " + httplib::to_string(res.error()));
    if (res->status < 200 || res->status >= 300)
        throw ProviderError(res->status, res->body);

    transcript.model_id = config.model_id;
    transcript.phase = phase;
    transcript.latency_seconds = latency;
    transcript.timestamp = utc_timestamp();

    try {
        nlohmann::json reply = nlohmann::json::parse(res->body);
        std::string content;
        if (anthropic) {
            content = reply.at("content").at(0).at("text").get<std::string>();
            if (reply.contains("usage")) {
                transcript.input_tokens = reply["usage"].value("input_tokens", 0ULL);
                transcript.output_tokens = reply["usage"].value("output_tokens", 0ULL);
            } else {
                transcript.usage_missing = true;
            }
        } else {
            content = reply.at("choices").at(0).at("message").at("content").get<std::string>();
            if (reply.contains("usage")) {
                transcript.input_tokens = reply["usage"].value("prompt_tokens", 0ULL);
                transcript.output_tokens = reply["usage"].value("completion_tokens", 0ULL);
            } else {
                transcript.usage_missing = true;
            }
        }
        return content;
    } catch (const nlohmann::json::exception& e) {
        throw ProviderError(std::string("malformed provider response: ") + e.what());
    }
}

} // namespace

LlmResponse request_heuristic(const LlmConfig& config, const PromptBundle& bundle,
                              const std::string& domain, int attempt_index) {
    struct PhasePrompt {
        Phase phase;
        const std::string* prompt;
    };
    std::vector<PhasePrompt> phases;
    if (bundle.phase1_strategize)
        phases.push_back({Phase::Strategize, &*bundle.phase1_strategize});
    phases.push_back({Phase::Unrefined, &bundle.phase2_unrefined});
    if (bundle.phase3_refine)
        phases.push_back({Phase::Refine, &*bundle.phase3_refine});

    LlmResponse response;
    std::vector<Message> conversation;
    for (const auto& [phase, prompt] : phases) {
        conversation.push_back({"user", *prompt});
        TranscriptRecord transcript;
        std::string reply =
            config.provider == ProviderKind::OfflineFixtures
                ? fixture_reply(config, domain, phase, attempt_index, transcript)
                : http_reply(config, conversation, phase, transcript);
        conversation.push_back({"assistant", reply});
        response.raw_replies.push_back(reply);
        response.transcripts.push_back(transcript);
    }
    response.source = extract_code(response.raw_replies.back());
    return response;
}

} // namespace planner::synthesis
