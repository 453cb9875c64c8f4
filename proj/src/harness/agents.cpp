#include "cabin/harness/agents.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "cabin/call_syntax.hpp"

namespace cabin::harness {

OracleAgent::OracleAgent(ScenarioRecord record, Mode mode, std::shared_ptr<const Registry> registry)
    : record_(std::move(record)), mode_(mode), registry_(std::move(registry)) {
    if (!registry_) throw Error("oracle needs a registry");
    if (record_.truth_states.size() != record_.scenario.turns.size() + 1)
        throw Error("oracle needs a complete truth trace");
}

std::vector<std::string> OracleAgent::selection(std::size_t turn) const {
    std::vector<std::string> ids;
    auto add = [&](std::string_view id) {
        if (std::find(ids.begin(), ids.end(), id) == ids.end()) ids.emplace_back(id);
    };
    StateDiff diff = diff_snapshots(record_.truth_states[turn], record_.truth_states[turn + 1]);
    for (const auto& c : diff.changed) {
        auto dev = split_path(c.path).first;
        if (dev != kEnvironmentId) add(dev);
    }
    if (mode_ == Mode::hybrid) {
        // A volume API touches only the environment but still belongs to a device.
        for (const auto& call : record_.scenario.turns[turn].truth_calls)
            if (const ApiSpec* api = registry_->find_api(call.api_name)) add(api->device_id);
    }
    std::sort(ids.begin(), ids.end());
    if (ids.empty()) ids.emplace_back(kEnvironmentId);
    return ids;
}

std::string OracleAgent::reply(const Exchange& ex) {
    if (ex.turn >= record_.scenario.turns.size()) return "done";
    auto fenced = [](const std::string& body) { return "```action\n" + body + "\n```"; };

    if (ex.stage == Stage::select) {
        std::string list;
        for (const auto& id : selection(ex.turn)) list += (list.empty() ? "" : ", ") + id;
        return fenced("select: [" + list + "]");
    }
    if (ex.stage == Stage::reflect || ex.step > 0) return fenced("done");

    if (mode_ == Mode::sfc) {
        StateDiff diff = diff_snapshots(record_.truth_states[ex.turn], record_.truth_states[ex.turn + 1]);
        std::map<std::string, Value> patch;
        for (const auto& c : diff.changed) patch.emplace(c.path, c.after);
        return fenced("sfc: " + format_patch(patch));
    }
    return fenced("fc: " + format_calls(record_.scenario.turns[ex.turn].truth_calls));
}

// ---------------------------------------------------------------------------------------------

EndpointClient::EndpointClient(EndpointConfig config) : config_(std::move(config)) {
    auto scheme_end = config_.url.find("://");
    if (scheme_end == std::string::npos) throw Error("endpoint url needs a scheme: " + config_.url);
    auto path_start = config_.url.find('/', scheme_end + 3);
    origin_ = config_.url.substr(0, path_start);
    path_ = path_start == std::string::npos ? "/" : config_.url.substr(path_start);
    if (!config_.api_key_env.empty())
        if (const char* key = std::getenv(config_.api_key_env.c_str())) api_key_ = key;
}

std::string EndpointClient::request_body(const std::vector<ChatMessage>& messages) const {
    nlohmann::json msgs = nlohmann::json::array();
    for (const auto& m : messages) {
        Role wire = m.role == Role::tool ? Role::user : m.role;
        msgs.push_back({{"role", to_string(wire)}, {"content", m.content}});
    }
    nlohmann::json body{{"messages", msgs}, {"temperature", config_.temperature}, {"n", 1}};
    if (!config_.model.empty()) body["model"] = config_.model;
    return body.dump();
}

std::string EndpointClient::complete(const std::vector<ChatMessage>& messages) const {
    const std::string body = request_body(messages);
    httplib::Headers headers;
    if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);

    std::string last_error;
    for (std::size_t attempt = 0; attempt <= config_.max_retries; ++attempt) {
        auto wait = config_.retry_backoff * (1 << std::min<std::size_t>(attempt, 6));
        httplib::Client client(origin_);
        client.set_connection_timeout(config_.timeout);
        client.set_read_timeout(config_.timeout);
        client.set_write_timeout(config_.timeout);
        auto res = client.Post(path_, headers, body, "application/json");
        if (!res) {
            last_error = "transport error: " + httplib::to_string(res.error());
        } else if (res->status == 200) {
            try {
                auto j = nlohmann::json::parse(res->body);
                const auto& content = j.at("choices").at(0).at("message").at("content");
                if (content.is_string()) return content.get<std::string>();
                last_error = "reply content is not text";
            } catch (const nlohmann::json::exception& e) {
                last_error = std::string("malformed reply: ") + e.what();
            }
        } else {
            last_error = "HTTP " + std::to_string(res->status);
            if (res->status == 429 && res->has_header("Retry-After")) {
                // Honour the server's rate-limit hint when it gives seconds.
                try {
                    wait = std::chrono::seconds(std::stoi(res->get_header_value("Retry-After")));
                } catch (const std::exception&) {
                }
            } else if (res->status >= 400 && res->status < 500 && res->status != 408) {
                break;  // client errors do not improve with retries
            }
        }
        if (attempt < config_.max_retries) {
            spdlog::warn("endpoint attempt {} failed ({}); retrying", attempt + 1, last_error);
            std::this_thread::sleep_for(wait);
        }
    }
    throw EndpointError("endpoint failed: " + last_error);
}

}  // namespace cabin::harness
