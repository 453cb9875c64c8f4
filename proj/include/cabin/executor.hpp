#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cabin/snapshot_io.hpp"
#include "cabin/state.hpp"
#include "cabin/world.hpp"

namespace cabin {

// Target values keyed by flat attribute path.
struct StatePatch {
    std::map<std::string, Value> assignments;

    friend bool operator==(const StatePatch&, const StatePatch&) = default;
};

// The `changed` half of a diff as a patch: applying it to `before` reproduces `after`.
StatePatch patch_from_diff(const StateDiff& diff);

struct FcAction {
    std::vector<ApiCall> calls;
};
struct SfcAction {
    StatePatch patch;
};
struct DeviceSelection {
    std::vector<std::string> device_ids;
};
struct DoneAction {};

using Action = std::variant<FcAction, SfcAction, DeviceSelection, DoneAction>;

struct CallOutcome {
    ApiCall call;
    ApiResult result;
};

struct PatchOutcome {
    std::string path;
    Value value;
    bool applied = false;
    std::string message;  // "applied" or the rejection reason
};

struct ExecutionFeedback {
    std::vector<CallOutcome> calls;
    std::vector<PatchOutcome> patch;
    std::string logs;  // one line per call / path, as shown to agents
    std::optional<std::vector<DeviceState>> post_state;  // SFC only; environment first

    bool all_succeeded() const;
};

// Runs every call in order; failures are recorded and do not stop later calls.
ExecutionFeedback execute_fc(World& world, const std::vector<ApiCall>& calls);

// Applies each assignment through the world's setters, in path order. A rejected path leaves
// its attribute unchanged and the other paths still apply. When `scope` is given, paths on
// devices outside it (environment excepted) are rejected and post_state is limited to it.
ExecutionFeedback execute_sfc(World& world, const StatePatch& patch,
                              const std::optional<std::vector<std::string>>& scope = std::nullopt);

// Snapshot text of the environment plus the listed devices. Throws NotFoundError for ids that
// are unknown or not active.
std::string project_snapshot(const World& world, const std::vector<std::string>& device_ids,
                             RenderMode mode = RenderMode::full);

// FC restricted to the selected devices. A call whose API belongs to an unselected device, or
// whose effects would reach one (checked on a scratch copy), fails with a scoping error and
// mutates nothing.
ExecutionFeedback execute_hybrid(World& world, const std::vector<std::string>& selection,
                                 const std::vector<ApiCall>& calls);

}  // namespace cabin
