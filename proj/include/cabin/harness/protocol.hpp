#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "cabin/errors.hpp"
#include "cabin/executor.hpp"
#include "cabin/harness/types.hpp"

namespace cabin::harness {

// Reply could not be turned into an action; the message is echoed back to the agent.
class ActionError : public Error {
public:
    using Error::Error;
};

// Parses the first ```action fenced block of a reply (see docs/action-grammar.md). A reply that
// is just "done" also counts. Throws ActionError when no block is present, the body does not
// parse, or the action kind is not allowed for the mode and stage.
Action extract_action(std::string_view reply, Mode mode, Stage stage = Stage::act);

// Wraps a snapshot document in a ```state fence.
std::string state_block(std::string_view document);

// Tool message carrying per-call or per-path results; SFC feedback ends with the post state.
ChatMessage compose_feedback(const ExecutionFeedback& feedback, Mode mode);

// Drops every ```state block except the newest one. Prose is kept.
std::vector<ChatMessage> manage_context(std::vector<ChatMessage> history);

std::size_t count_state_blocks(const std::vector<ChatMessage>& history);

// System prompts for each exchange kind. `examples` controls the demonstration section.
std::string fc_system_prompt(bool examples, bool plan_first);
std::string sfc_select_prompt(bool examples);
std::string sfc_system_prompt(bool examples, bool plan_first);
std::string hybrid_system_prompt(bool examples, bool plan_first);
std::string reflection_prompt(std::size_t index, std::size_t budget);
std::string retry_prompt(const std::string& error);

}  // namespace cabin::harness
