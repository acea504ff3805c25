#include <chrono>
#include <thread>

#include "exsim/cognition.hpp"

#include "httplib.h"
#include "json.hpp"

namespace exsim {

struct RemoteBackend::Impl {
    RemoteBackendConfig config;
    httplib::Client client;

    explicit Impl(RemoteBackendConfig cfg)
        : config(std::move(cfg)), client(config.base_url) {
        client.set_connection_timeout(10);
        client.set_read_timeout(60);
    }
};

RemoteBackend::RemoteBackend(RemoteBackendConfig config)
    : impl_(std::make_unique<Impl>(std::move(config))) {
    if (impl_->config.base_url.empty()) {
        throw ConfigError("remote backend requires a base_url");
    }
    if (impl_->config.model.empty()) {
        throw ConfigError("remote backend requires a model name");
    }
}

RemoteBackend::~RemoteBackend() = default;

std::string RemoteBackend::decide(const DecisionRequest& request) {
    const auto& cfg = impl_->config;

    nlohmann::ordered_json body;
    body["model"] = cfg.model;
    body["messages"] = nlohmann::ordered_json::array(
        {{{"role", "system"},
          {"content", request.agent_snapshot->archetype.profile_text}},
         {{"role", "user"}, {"content", request.prompt}}});
    body["temperature"] = cfg.temperature;

    httplib::Headers headers;
    if (!cfg.api_key.empty()) {
        headers.emplace("Authorization", "Bearer " + cfg.api_key);
    }

    std::string last_error;
    for (int attempt = 0; attempt < cfg.transport_retries; ++attempt) {
        if (attempt > 0) {
            std::this_thread::sleep_for(
                std::chrono::milliseconds(cfg.backoff_base_ms * (1 << (attempt - 1))));
        }
        auto res = impl_->client.Post("/v1/chat/completions", headers, body.dump(),
                                      "application/json");
        if (!res) {
            last_error = "transport error: " + httplib::to_string(res.error());
            continue;
        }
        if (res->status >= 500) {
            last_error = "HTTP " + std::to_string(res->status) + ": " + res->body;
            continue;
        }
        if (res->status < 200 || res->status >= 300) {
            throw BackendError("HTTP " + std::to_string(res->status) + ": " + res->body);
        }
        try {
            auto j = nlohmann::json::parse(res->body);
            return j.at("choices").at(0).at("message").at("content").get<std::string>();
        } catch (const nlohmann::json::exception& e) {
            throw BackendError(std::string("malformed completion response: ") + e.what());
        }
    }
    throw BackendError("remote backend failed after " +
                       std::to_string(cfg.transport_retries) + " attempts; last: " +
                       last_error);
}

}  // namespace exsim
