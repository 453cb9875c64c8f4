#include "cabin/state.hpp"

#include <stdexcept>

#include "cabin/errors.hpp"

namespace cabin {

const AttributeDescriptor& DeviceState::at(std::string_view name) const {
    auto it = attributes.find(std::string(name));
    if (it == attributes.end()) throw SchemaError(join_path(device_id, name), "unknown attribute");
    return it->second;
}

std::map<std::string, const AttributeDescriptor*> WorldSnapshot::flatten() const {
    std::map<std::string, const AttributeDescriptor*> out;
    for (const auto& [name, attr] : environment.attributes) out.emplace(join_path(kEnvironmentId, name), &attr);
    for (const auto& [id, dev] : devices)
        for (const auto& [name, attr] : dev.attributes) out.emplace(join_path(id, name), &attr);
    return out;
}

const Value& WorldSnapshot::at(std::string_view path) const {
    auto [dev, attr] = split_path(path);
    if (dev == kEnvironmentId) return environment.value(attr);
    auto it = devices.find(std::string(dev));
    if (it == devices.end()) throw SchemaError(std::string(path), "unknown device");
    return it->second.value(attr);
}

std::vector<std::string> WorldSnapshot::device_ids() const {
    std::vector<std::string> ids;
    ids.reserve(devices.size());
    for (const auto& [id, _] : devices) ids.push_back(id);
    return ids;
}

std::pair<std::string_view, std::string_view> split_path(std::string_view path) {
    auto dot = path.find('.');
    if (dot == std::string_view::npos) return {path, {}};
    return {path.substr(0, dot), path.substr(dot + 1)};
}

std::string join_path(std::string_view device_id, std::string_view attribute) {
    std::string out;
    out.reserve(device_id.size() + attribute.size() + 1);
    out.append(device_id).append(".").append(attribute);
    return out;
}

std::string_view to_string(TrendDirection t) {
    switch (t) {
    case TrendDirection::increase: return "increase";
    case TrendDirection::decrease: return "decrease";
    case TrendDirection::maintain: return "maintain";
    }
    return "?";
}

TrendDirection classify_trend(const Value& before, const Value& after) {
    if (!before.is_numeric() || !after.is_numeric())
        throw std::invalid_argument("trend requires numeric values");
    // Compare integers exactly; widening two int64s to double could merge neighbours.
    if (before.kind() == ValueKind::integer && after.kind() == ValueKind::integer) {
        if (after.as_int() > before.as_int()) return TrendDirection::increase;
        if (after.as_int() < before.as_int()) return TrendDirection::decrease;
        return TrendDirection::maintain;
    }
    double a = before.as_number(), b = after.as_number();
    if (b > a) return TrendDirection::increase;
    if (b < a) return TrendDirection::decrease;
    return TrendDirection::maintain;
}

std::vector<std::string> StateDiff::changed_paths() const {
    std::vector<std::string> out;
    out.reserve(changed.size());
    for (const auto& c : changed) out.push_back(c.path);
    return out;
}

StateDiff diff_snapshots(const WorldSnapshot& before, const WorldSnapshot& after) {
    if (before.device_ids() != after.device_ids())
        throw SchemaError("", "device-set mismatch between snapshots");

    StateDiff diff;
    auto lhs = before.flatten();
    auto rhs = after.flatten();
    for (const auto& [path, attr] : lhs) {
        auto it = rhs.find(path);
        if (it == rhs.end()) continue;
        const Value& a = attr->value;
        const Value& b = it->second->value;
        if (a == b) {
            diff.unchanged.push_back(path);
            continue;
        }
        diff.changed.push_back({path, a, b});
        if (a.is_numeric() && b.is_numeric()) diff.trends.emplace(path, classify_trend(a, b));
    }
    return diff;
}

}  // namespace cabin
