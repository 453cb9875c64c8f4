#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "cabin/value.hpp"

namespace cabin {

inline constexpr std::string_view kEnvironmentId = "environment";

// One device attribute as it appears in a snapshot.
struct AttributeDescriptor {
    std::string name;  // may contain '.' for nested sub-objects, e.g. "route.preference"
    Value value;
    TypeTag type = TypeTag::string;
    std::string description;

    friend bool operator==(const AttributeDescriptor&, const AttributeDescriptor&) = default;
};

struct DeviceState {
    std::string device_id;
    std::map<std::string, AttributeDescriptor> attributes;

    // Throws SchemaError if the attribute is absent.
    const AttributeDescriptor& at(std::string_view name) const;
    const Value& value(std::string_view name) const { return at(name).value; }

    friend bool operator==(const DeviceState&, const DeviceState&) = default;
};

struct WorldSnapshot {
    DeviceState environment{std::string(kEnvironmentId), {}};
    std::map<std::string, DeviceState> devices;
    std::string label;

    // Flat `device.attr` view over the environment and every device.
    std::map<std::string, const AttributeDescriptor*> flatten() const;
    // Value at a flat path; throws SchemaError when missing.
    const Value& at(std::string_view path) const;
    std::vector<std::string> device_ids() const;

    friend bool operator==(const WorldSnapshot&, const WorldSnapshot&) = default;
};

// Splits "device.attr.sub" into {"device", "attr.sub"}.
std::pair<std::string_view, std::string_view> split_path(std::string_view path);
std::string join_path(std::string_view device_id, std::string_view attribute);

enum class TrendDirection { increase, decrease, maintain };

std::string_view to_string(TrendDirection t);

// Direction of a numeric change. Throws std::invalid_argument for non-numeric input.
TrendDirection classify_trend(const Value& before, const Value& after);

struct AttributeChange {
    std::string path;
    Value before;
    Value after;

    friend bool operator==(const AttributeChange&, const AttributeChange&) = default;
};

struct StateDiff {
    std::vector<AttributeChange> changed;             // sorted by path
    std::vector<std::string> unchanged;               // sorted
    std::map<std::string, TrendDirection> trends;     // numeric changed paths only

    std::vector<std::string> changed_paths() const;
    bool empty() const noexcept { return changed.empty(); }
};

// Throws SchemaError when the two snapshots do not cover the same device set.
StateDiff diff_snapshots(const WorldSnapshot& before, const WorldSnapshot& after);

}  // namespace cabin
