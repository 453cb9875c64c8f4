#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cabin::harness {

enum class Role { system, user, assistant, tool };

std::string_view to_string(Role role);

struct ChatMessage {
    Role role = Role::user;
    std::string content;

    friend bool operator==(const ChatMessage&, const ChatMessage&) = default;
};

enum class Mode { fc, sfc, hybrid };
enum class Strategy { react, react_reflection, react_no_examples };

std::string_view to_string(Mode mode);
std::string_view to_string(Strategy strategy);
// Accept the CLI spellings: fc|sfc|hybrid and react|reflect|noexamples.
std::optional<Mode> mode_from_string(std::string_view text);
std::optional<Strategy> strategy_from_string(std::string_view text);

struct SessionConfig {
    Mode mode = Mode::fc;
    Strategy strategy = Strategy::react;
    double temperature = 0.7;
    std::size_t max_turns_per_query = 5;   // agent actions per query before the turn is cut off
    std::size_t reflection_budget = 3;     // used by react_reflection only
    std::size_t retry_budget = 2;          // re-asks after an unparseable reply
    std::size_t distractor_count = 0;      // 0, 2, 4 or 6
    bool plan_first = false;               // ask for a short plan before acting

    // Throws Error when a field is out of its domain.
    void validate() const;
};

// Which exchange the agent is answering.
enum class Stage { select, act, reflect };

std::string_view to_string(Stage stage);

}  // namespace cabin::harness
