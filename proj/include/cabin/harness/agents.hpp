#pragma once

#include <chrono>
#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "cabin/errors.hpp"
#include "cabin/harness/types.hpp"
#include "cabin/scenario.hpp"

namespace cabin::harness {

// What the agent is asked to answer.
struct Exchange {
    Stage stage = Stage::act;
    std::size_t turn = 0;  // 0-based query index
    std::size_t step = 0;  // replies already given in this stage of this turn
    const std::vector<ChatMessage>& messages;
};

class Agent {
public:
    virtual ~Agent() = default;
    // Returns the reply text. Throws EndpointError when no reply could be obtained.
    virtual std::string reply(const Exchange& exchange) = 0;
};

class EndpointError : public Error {
public:
    using Error::Error;
};

// Deterministic stand-in for a model, driven by the truth trace: FC replays the truth calls,
// SFC patches with the truth diff, HYBRID selects the diff's devices plus the calls' devices and
// replays the calls. Answers "done" once its action is out and during reflection.
class OracleAgent : public Agent {
public:
    OracleAgent(ScenarioRecord record, Mode mode, std::shared_ptr<const Registry> registry);
    std::string reply(const Exchange& exchange) override;

    // Device ids the oracle selects for a turn.
    std::vector<std::string> selection(std::size_t turn) const;

private:
    ScenarioRecord record_;
    Mode mode_;
    std::shared_ptr<const Registry> registry_;
};

// Changes nothing.
class NullAgent : public Agent {
public:
    std::string reply(const Exchange&) override { return "done"; }
};

struct EndpointConfig {
    std::string url;                          // full chat-completions URL
    std::string model;
    std::string api_key_env = "CABIN_API_KEY";  // name of the variable holding the key
    double temperature = 0.7;
    std::size_t max_retries = 3;              // extra attempts after the first
    std::chrono::milliseconds retry_backoff{500};
    std::chrono::seconds timeout{60};
};

// OpenAI-style chat completion client. Safe to share across threads: every request opens its
// own connection. Tool messages go out with role "user".
class EndpointClient {
public:
    explicit EndpointClient(EndpointConfig config);
    std::string complete(const std::vector<ChatMessage>& messages) const;

    const EndpointConfig& config() const noexcept { return config_; }

    // The request body sent for `messages`.
    std::string request_body(const std::vector<ChatMessage>& messages) const;

private:
    EndpointConfig config_;
    std::string api_key_;
    std::string origin_;  // scheme://host[:port]
    std::string path_;
};

class EndpointAgent : public Agent {
public:
    explicit EndpointAgent(std::shared_ptr<const EndpointClient> client) : client_(std::move(client)) {}
    std::string reply(const Exchange& exchange) override { return client_->complete(exchange.messages); }

private:
    std::shared_ptr<const EndpointClient> client_;
};

}  // namespace cabin::harness
