#include "cabin/harness/protocol.hpp"

#include <algorithm>
#include <cctype>

#include "cabin/call_syntax.hpp"
#include "cabin/snapshot_io.hpp"

namespace cabin::harness {

std::string_view to_string(Role role) {
    switch (role) {
    case Role::system: return "system";
    case Role::user: return "user";
    case Role::assistant: return "assistant";
    case Role::tool: return "tool";
    }
    return "user";
}

std::string_view to_string(Mode mode) {
    switch (mode) {
    case Mode::fc: return "fc";
    case Mode::sfc: return "sfc";
    case Mode::hybrid: return "hybrid";
    }
    return "fc";
}

std::string_view to_string(Strategy strategy) {
    switch (strategy) {
    case Strategy::react: return "react";
    case Strategy::react_reflection: return "reflect";
    case Strategy::react_no_examples: return "noexamples";
    }
    return "react";
}

std::string_view to_string(Stage stage) {
    switch (stage) {
    case Stage::select: return "select";
    case Stage::act: return "act";
    case Stage::reflect: return "reflect";
    }
    return "act";
}

std::optional<Mode> mode_from_string(std::string_view text) {
    if (text == "fc") return Mode::fc;
    if (text == "sfc") return Mode::sfc;
    if (text == "hybrid") return Mode::hybrid;
    return std::nullopt;
}

std::optional<Strategy> strategy_from_string(std::string_view text) {
    if (text == "react") return Strategy::react;
    if (text == "reflect") return Strategy::react_reflection;
    if (text == "noexamples") return Strategy::react_no_examples;
    return std::nullopt;
}

void SessionConfig::validate() const {
    if (distractor_count != 0 && distractor_count != 2 && distractor_count != 4 && distractor_count != 6)
        throw Error("distractor count must be one of 0, 2, 4, 6");
    if (max_turns_per_query == 0) throw Error("max_turns_per_query must be positive");
    if (!(temperature >= 0.0 && temperature <= 2.0)) throw Error("temperature must lie in [0, 2]");
}

// ---------------------------------------------------------------------------------------------
// Action extraction

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

bool is_done_word(std::string_view s) {
    s = trim(s);
    while (!s.empty() && (s.back() == '.' || s.back() == '!')) s.remove_suffix(1);
    if (s.size() != 4) return false;
    std::string w(s);
    std::transform(w.begin(), w.end(), w.begin(), [](unsigned char c) { return std::tolower(c); });
    return w == "done";
}

struct Fence {
    std::string_view tag;
    std::string_view body;
    std::size_t begin = 0;  // offset of the opening ```
    std::size_t end = 0;    // one past the closing ```
};

// Every ``` fenced block, in order. An unterminated fence runs to the end of the text.
std::vector<Fence> fences(std::string_view text) {
    std::vector<Fence> out;
    std::size_t pos = 0;
    while ((pos = text.find("```", pos)) != std::string_view::npos) {
        Fence f;
        f.begin = pos;
        std::size_t tag_start = pos + 3;
        std::size_t nl = text.find('\n', tag_start);
        if (nl == std::string_view::npos) nl = text.size();
        f.tag = trim(text.substr(tag_start, nl - tag_start));
        std::size_t body_start = std::min(nl + 1, text.size());
        std::size_t close = text.find("```", body_start);
        f.body = text.substr(body_start, (close == std::string_view::npos ? text.size() : close) - body_start);
        f.end = close == std::string_view::npos ? text.size() : close + 3;
        out.push_back(f);
        pos = f.end;
    }
    return out;
}

const char* allowed_text(Mode mode, Stage stage) {
    if (stage == Stage::select) return "select or done";
    return mode == Mode::sfc ? "sfc or done" : "fc or done";
}

}  // namespace

Action extract_action(std::string_view reply, Mode mode, Stage stage) {
    const Fence* block = nullptr;
    auto all = fences(reply);
    for (const auto& f : all) {
        if (f.tag == "action") {
            block = &f;
            break;
        }
    }
    if (!block) {
        if (is_done_word(reply)) return DoneAction{};
        throw ActionError("no ```action block found");
    }

    std::string_view body = trim(block->body);
    if (is_done_word(body)) return DoneAction{};
    auto colon = body.find(':');
    if (colon == std::string_view::npos) throw ActionError("action must start with fc:, sfc:, select: or be done");
    std::string kind(trim(body.substr(0, colon)));
    std::string_view payload = trim(body.substr(colon + 1));

    bool allowed = stage == Stage::select ? kind == "select" : (mode == Mode::sfc ? kind == "sfc" : kind == "fc");
    if (kind != "fc" && kind != "sfc" && kind != "select") throw ActionError("unknown action kind '" + kind + "'");
    if (!allowed)
        throw ActionError("'" + kind + "' action not allowed here; expected " + allowed_text(mode, stage));

    try {
        if (kind == "fc") {
            auto calls = parse_calls(payload);
            if (calls.empty()) throw ActionError("fc action needs at least one call");
            return FcAction{std::move(calls)};
        }
        if (kind == "sfc") {
            auto patch = parse_patch(payload);
            if (patch.empty()) throw ActionError("sfc action needs at least one assignment");
            return SfcAction{{std::move(patch)}};
        }
        return DeviceSelection{parse_names(payload)};
    } catch (const SyntaxError& e) {
        throw ActionError(std::string("cannot parse ") + kind + " action: " + e.what());
    }
}

// ---------------------------------------------------------------------------------------------
// Feedback and context

std::string state_block(std::string_view document) {
    std::string out = "```state\n";
    out += document;
    if (out.back() != '\n') out += '\n';
    return out + "```";
}

ChatMessage compose_feedback(const ExecutionFeedback& feedback, Mode mode) {
    std::string text = "Execution feedback:\n" + (feedback.logs.empty() ? std::string("(nothing executed)\n") : feedback.logs);
    if (mode == Mode::sfc && feedback.post_state) {
        WorldSnapshot snap;
        for (const auto& d : *feedback.post_state) {
            if (d.device_id == kEnvironmentId) snap.environment = d;
            else snap.devices.emplace(d.device_id, d);
        }
        text += "Current device states:\n" + state_block(serialize_snapshot(snap));
    }
    return {Role::tool, text};
}

namespace {

bool has_state_block(const std::string& s) {
    for (const auto& f : fences(s))
        if (f.tag == "state") return true;
    return false;
}

std::string strip_state_blocks(const std::string& s) {
    std::string out;
    std::size_t pos = 0;
    for (const auto& f : fences(s)) {
        if (f.tag != "state") continue;
        out += s.substr(pos, f.begin - pos);
        pos = f.end;
    }
    out += s.substr(pos);
    // Collapse the blank lines left behind.
    while (out.find("\n\n\n") != std::string::npos) out.replace(out.find("\n\n\n"), 3, "\n\n");
    while (!out.empty() && (out.back() == '\n' || out.back() == ' ')) out.pop_back();
    return out.empty() ? "(earlier state omitted)" : out;
}

}  // namespace

std::vector<ChatMessage> manage_context(std::vector<ChatMessage> history) {
    std::optional<std::size_t> newest;
    for (std::size_t i = history.size(); i-- > 0;) {
        if (has_state_block(history[i].content)) {
            newest = i;
            break;
        }
    }
    if (!newest) return history;

    // Within the newest message keep only its last block.
    auto& last = history[*newest].content;
    auto blocks = fences(last);
    std::size_t state_count = std::count_if(blocks.begin(), blocks.end(), [](const Fence& f) { return f.tag == "state"; });
    if (state_count > 1) {
        std::string kept;
        std::size_t pos = 0, seen = 0;
        for (const auto& f : blocks) {
            if (f.tag != "state") continue;
            if (++seen == state_count) break;
            kept += last.substr(pos, f.begin - pos);
            pos = f.end;
        }
        last = kept + last.substr(pos);
    }
    for (std::size_t i = 0; i < *newest; ++i)
        if (has_state_block(history[i].content)) history[i].content = strip_state_blocks(history[i].content);
    return history;
}

std::size_t count_state_blocks(const std::vector<ChatMessage>& history) {
    std::size_t n = 0;
    for (const auto& m : history)
        for (const auto& f : fences(m.content)) n += f.tag == "state";
    return n;
}

// ---------------------------------------------------------------------------------------------
// Prompt templates

namespace {

constexpr std::string_view kActionFormat = R"(Reply format:
Think briefly, then end your reply with exactly one fenced block tagged `action`:

```action
<one action>
```

When the request is fully handled, reply with an action block containing only `done`.
Values use JSON literals: "text", 12, 20.5, true, false, null, ["a", "b"].
)";

constexpr std::string_view kFcIntro = R"(You control the cockpit of a car through its device APIs.
Handle each user request by calling APIs. You do not see the device states directly; use the
results of your calls.

Discovery utilities:
  search_module()              lists the devices and what they do
  search_api(device="<id>")    lists a device's APIs with parameters and constraints

Action form:
  fc: [api_name(arg=value, ...), ...]
Calls run in order; each result (or error) comes back to you before your next reply.
)";

constexpr std::string_view kFcExamples = R"(
Example:
User: Lock the doors.
Assistant: I need the door APIs first.
```action
fc: [search_api(device="door")]
```
Tool: search_api(device="door") -> ok ...door_lock_switch(switch: boolean)...
Assistant: door_lock_switch takes a boolean.
```action
fc: [door_lock_switch(switch=true)]
```
Tool: door_lock_switch(switch=true) -> ok: door.is_locked=true
Assistant:
```action
done
```
)";

constexpr std::string_view kSelectIntro = R"(You see the full state of a car cockpit and one user request.
Name the devices whose state must be read or changed to carry out the request. The environment
block (volume, sound channel, cabin temperature, ...) is always included and need not be named.

Reply with one fenced block tagged `action`:

```action
select: [device_id, ...]
```
)";

constexpr std::string_view kSelectExamples = R"(
Example:
User: Turn the AC to 20 degrees.
Assistant:
```action
select: [airConditioner]
```
)";

constexpr std::string_view kSfcIntro = R"(You control the cockpit of a car by editing its state directly.
Each request comes with a `state` block holding the current state of the relevant devices. Decide
the target state and write the assignments that take the cockpit there.

Action form:
  sfc: {device.attribute: value, ...}
Paths are `device.attribute`, nested attributes use dots (`seat.driver.heating`); the environment
uses `environment.<attribute>`. Only assign attributes that must change. Assignments go through
the same rules as the APIs: out-of-range values are rejected and playing audio takes over the
sound channel. After each edit you receive the per-path outcome and the updated state.
)";

constexpr std::string_view kSfcExamples = R"(
Example:
User: Turn on the air conditioner and set it to 20 degrees.
```state
{ "airConditioner": { "is_on": {"value": false, ...}, "temperature": {"value": 24.0, ...} }, ... }
```
Assistant: The AC is off at 24.0; it must be on at 20.
```action
sfc: {airConditioner.is_on: true, airConditioner.temperature: 20.0}
```
Tool: airConditioner.is_on = true -> applied ...
Assistant:
```action
done
```
)";

constexpr std::string_view kHybridIntro = R"(You control the cockpit of a car through its device APIs.
Each request comes with the APIs of the relevant devices and a `state` block with their current
state. Calls to devices outside that set are refused.

Action form:
  fc: [api_name(arg=value, ...), ...]
)";

constexpr std::string_view kPlan = R"(
Before your first action for a request, write a short numbered plan of the steps you will take.
)";

std::string assemble(std::initializer_list<std::string_view> parts) {
    std::string out;
    for (auto p : parts) out += p;
    return out;
}

}  // namespace

std::string fc_system_prompt(bool examples, bool plan_first) {
    return assemble({kFcIntro, "\n", kActionFormat, plan_first ? kPlan : "", examples ? kFcExamples : ""});
}

std::string sfc_select_prompt(bool examples) { return assemble({kSelectIntro, examples ? kSelectExamples : ""}); }

std::string sfc_system_prompt(bool examples, bool plan_first) {
    return assemble({kSfcIntro, "\n", kActionFormat, plan_first ? kPlan : "", examples ? kSfcExamples : ""});
}

std::string hybrid_system_prompt(bool examples, bool plan_first) {
    return assemble({kHybridIntro, "\n", kActionFormat, plan_first ? kPlan : "", examples ? kFcExamples : ""});
}

std::string reflection_prompt(std::size_t index, std::size_t budget) {
    return "Reflection " + std::to_string(index) + " of " + std::to_string(budget) +
           ": check whether the last request is fully satisfied. Take a corrective action if it is not, "
           "otherwise reply with `done`.";
}

std::string retry_prompt(const std::string& error) {
    return "Your reply could not be used: " + error + ". Answer again with exactly one ```action block.";
}

}  // namespace cabin::harness
