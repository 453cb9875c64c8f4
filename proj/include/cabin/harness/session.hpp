#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cabin/harness/agents.hpp"
#include "cabin/harness/protocol.hpp"
#include "cabin/harness/types.hpp"
#include "cabin/metrics.hpp"
#include "cabin/scenario.hpp"

namespace cabin::harness {

// Initialises the first k registered devices that are not yet in the world with their default
// presets and returns their ids. Throws Error when fewer than k are available.
std::vector<std::string> inject_distractors(World& world, std::size_t k);

struct TranscriptEntry {
    std::size_t turn = 0;  // 0-based
    Stage stage = Stage::act;
    ChatMessage message;
};

struct AgentTranscript {
    std::string scenario_id;
    Mode mode = Mode::fc;
    Strategy strategy = Strategy::react;
    std::vector<TranscriptEntry> entries;      // every message sent or received, in order
    std::vector<std::string> actions;          // extracted actions, rendered
    std::vector<WorldSnapshot> model_states;   // one per query turn
    std::vector<std::string> outcomes;         // "done", "step limit", "failed: ..."

    std::size_t agent_replies(Stage stage, std::size_t turn) const;
};

std::string render_transcript(const AgentTranscript& transcript);

struct SessionResult {
    AgentTranscript transcript;
    std::vector<TurnReport> turns;
    std::optional<std::string> error;  // the session could not run at all
};

// Runs one scenario: the world is rebuilt from the record's inits (plus distractors), every
// query goes through the mode's exchange flow, and each turn is scored against the truth trace.
SessionResult run_session(const ScenarioRecord& record, Agent& agent, const SessionConfig& config,
                          std::shared_ptr<const Registry> registry);

using AgentFactory = std::function<std::unique_ptr<Agent>(const ScenarioRecord&)>;

// Runs sessions on `jobs` threads. Results keep the order of `records`.
std::vector<SessionResult> run_sessions(const std::vector<ScenarioRecord>& records, const AgentFactory& make_agent,
                                        const SessionConfig& config, std::shared_ptr<const Registry> registry,
                                        std::size_t jobs);

// Evaluation settings read from a JSON config file (see docs/config.md).
struct RunConfig {
    SessionConfig session;
    std::optional<EndpointConfig> endpoint;
    std::size_t jobs = 1;
};

// Throws Error for malformed documents, unknown keys, or credentials in the file.
RunConfig parse_run_config(std::string_view document);
RunConfig load_run_config(const std::filesystem::path& path);

}  // namespace cabin::harness
