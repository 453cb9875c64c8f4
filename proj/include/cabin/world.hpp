#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "cabin/environment.hpp"
#include "cabin/registry.hpp"
#include "cabin/state.hpp"

namespace cabin {

struct ApiCall {
    std::string api_name;
    std::map<std::string, Value> args;

    friend bool operator==(const ApiCall&, const ApiCall&) = default;
};

struct ApiResult {
    bool success = false;
    std::string message;
    std::optional<nlohmann::json> payload;
    std::vector<std::string> touched_paths;  // empty whenever success is false
};

struct ModuleInfo {
    std::string device_id;
    std::string description;
};

// Discovery utilities exposed to agents as the callable `search_module()` / `search_api(device=...)`.
std::vector<ModuleInfo> search_module(const Registry& registry);
// Throws NotFoundError for unknown devices.
const std::vector<ApiSpec>& search_api(const Registry& registry, std::string_view device_id);
nlohmann::json render_module_list(const std::vector<ModuleInfo>& modules);
nlohmann::json render_api_spec(const ApiSpec& api);

inline constexpr std::string_view kSearchModule = "search_module";
inline constexpr std::string_view kSearchApi = "search_api";

// A live cockpit: the global environment plus the devices initialised into it.
// Mutations go through set(), which enforces attribute constraints and fires the
// environment couplings (volume, sound-channel arbitration). Single writer at a time.
class World {
public:
    explicit World(std::shared_ptr<const Registry> registry);

    const Registry& registry() const noexcept { return *registry_; }
    std::shared_ptr<const Registry> registry_ptr() const noexcept { return registry_; }

    // Adds the device if needed and applies a preset atomically. Throws NotFoundError for an
    // unknown device or preset.
    void init_device(std::string_view device_id, std::string_view preset = "default");
    bool has_device(std::string_view device_id) const;
    std::vector<std::string> device_ids() const;

    Value get(std::string_view path) const;
    // Throws SchemaError for unknown paths and ConstraintError when the value is rejected.
    void set(std::string_view path, const Value& value);
    bool is_patchable(std::string_view path) const;

    ApiResult invoke(const ApiCall& call);

    const GlobalEnvironment& environment() const noexcept { return env_; }
    DeviceState environment_state() const { return env_.environment_state(); }

    WorldSnapshot snapshot(std::string label = {}) const;
    // Environment plus the listed devices. Throws NotFoundError for ids not in the world.
    WorldSnapshot project(const std::vector<std::string>& device_ids, std::string label = {}) const;

private:
    friend class EffectRunner;

    void set_unlocked(std::string_view path, const Value& value);
    void relinquish(const std::string& device_id);
    const DeviceDefinition& definition(std::string_view device_id) const;

    std::shared_ptr<const Registry> registry_;
    GlobalEnvironment env_;
    std::map<std::string, std::map<std::string, Value>, std::less<>> devices_;
    ExclusiveAccess access_;
};

}  // namespace cabin
