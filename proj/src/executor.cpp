#include "cabin/executor.hpp"

#include <algorithm>

#include "cabin/call_syntax.hpp"
#include "cabin/errors.hpp"

namespace cabin {

StatePatch patch_from_diff(const StateDiff& diff) {
    StatePatch p;
    for (const auto& c : diff.changed) p.assignments.emplace(c.path, c.after);
    return p;
}

bool ExecutionFeedback::all_succeeded() const {
    return std::all_of(calls.begin(), calls.end(), [](const auto& c) { return c.result.success; }) &&
           std::all_of(patch.begin(), patch.end(), [](const auto& p) { return p.applied; });
}

namespace {

void log_call(ExecutionFeedback& fb, const ApiCall& call, const ApiResult& r) {
    fb.logs += format_call(call) + " -> " + (r.success ? "" : "error: ") + r.message;
    if (r.payload) fb.logs += "\n  result: " + r.payload->dump();
    fb.logs += "\n";
}

bool contains(const std::vector<std::string>& ids, std::string_view id) {
    return std::find(ids.begin(), ids.end(), id) != ids.end();
}

}  // namespace

ExecutionFeedback execute_fc(World& world, const std::vector<ApiCall>& calls) {
    ExecutionFeedback fb;
    for (const auto& call : calls) {
        ApiResult r = world.invoke(call);
        log_call(fb, call, r);
        fb.calls.push_back({call, std::move(r)});
    }
    return fb;
}

ExecutionFeedback execute_sfc(World& world, const StatePatch& patch, const std::optional<std::vector<std::string>>& scope) {
    ExecutionFeedback fb;
    for (const auto& [path, value] : patch.assignments) {
        PatchOutcome out{path, value, false, ""};
        auto [dev, attr] = split_path(path);
        if (!world.registry().attribute(path)) {
            out.message = "unknown path";
        } else if (dev != kEnvironmentId && !world.has_device(dev)) {
            out.message = "device not active: " + std::string(dev);
        } else if (scope && dev != kEnvironmentId && !contains(*scope, dev)) {
            out.message = "out of scope: device " + std::string(dev) + " not selected";
        } else if (!world.is_patchable(path)) {
            out.message = "not patchable: no setter writes this attribute";
        } else {
            try {
                world.set(path, value);
                out.applied = true;
                out.message = "applied";
            } catch (const SchemaError& e) {
                out.message = e.what();
            } catch (const ConstraintError& e) {
                out.message = e.what();
            }
        }
        fb.logs += path + " = " + render(value) + " -> " + (out.applied ? out.message : "rejected: " + out.message) + "\n";
        fb.patch.push_back(std::move(out));
    }

    WorldSnapshot post = scope ? world.project(*scope) : world.snapshot();
    std::vector<DeviceState> states{post.environment};
    for (auto& [_, d] : post.devices) states.push_back(std::move(d));
    fb.post_state = std::move(states);
    return fb;
}

std::string project_snapshot(const World& world, const std::vector<std::string>& device_ids, RenderMode mode) {
    for (const auto& id : device_ids)
        if (!world.registry().find_device(id)) throw NotFoundError("unknown device: " + id);
    return serialize_snapshot(world.project(device_ids), mode);
}

ExecutionFeedback execute_hybrid(World& world, const std::vector<std::string>& selection, const std::vector<ApiCall>& calls) {
    if (selection.empty()) throw Error("hybrid execution needs a non-empty device selection");
    ExecutionFeedback fb;
    auto in_scope = [&](std::string_view dev) { return dev == kEnvironmentId || contains(selection, dev); };

    for (const auto& call : calls) {
        ApiResult r;
        const ApiSpec* api = world.registry().find_api(call.api_name);
        if (api && !in_scope(api->device_id)) {
            r = {false, "scoping error: device " + api->device_id + " is not in the selection", std::nullopt, {}};
        } else if (api) {
            World dry = world;
            ApiResult trial = dry.invoke(call);
            auto outside = std::find_if(trial.touched_paths.begin(), trial.touched_paths.end(),
                                        [&](const std::string& p) { return !in_scope(split_path(p).first); });
            if (trial.success && outside != trial.touched_paths.end())
                r = {false, "scoping error: call would modify " + *outside + " outside the selection", std::nullopt, {}};
            else
                r = world.invoke(call);
        } else {
            r = world.invoke(call);  // utilities and unknown names report themselves
        }
        log_call(fb, call, r);
        fb.calls.push_back({call, std::move(r)});
    }
    return fb;
}

}  // namespace cabin
