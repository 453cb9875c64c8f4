#include "cabin/snapshot_io.hpp"

#include "cabin/errors.hpp"

namespace cabin {

using nlohmann::json;

namespace {

json leaf(const AttributeDescriptor& attr, RenderMode mode) {
    if (mode == RenderMode::compact) return to_json(attr.value);
    return {{"description", attr.description}, {"type", to_string(attr.type)}, {"value", to_json(attr.value)}};
}

bool is_full_leaf(const json& j) {
    if (!j.is_object() || !j.contains("type") || !j.contains("value")) return false;
    for (const auto& [k, _] : j.items())
        if (k != "type" && k != "value" && k != "description") return false;
    return true;
}

void flatten_block(const json& block, const std::string& prefix, std::map<std::string, const json*>& out) {
    for (const auto& [key, child] : block.items()) {
        std::string name = prefix.empty() ? key : prefix + "." + key;
        if (child.is_object() && !is_full_leaf(child)) flatten_block(child, name, out);
        else out.emplace(name, &child);
    }
}

DeviceState parse_device(const std::string& device_id, const json& block, const DeviceDefinition& def,
                         const ParseOptions& options) {
    if (!block.is_object()) throw SchemaError(device_id, "device block must be an object");
    std::map<std::string, const json*> leaves;
    flatten_block(block, "", leaves);

    DeviceState state{device_id, {}};
    for (const auto& [name, node] : leaves) {
        const std::string path = join_path(device_id, name);
        const AttributeTemplate* t = def.attribute(name);
        if (!t) throw SchemaError(path, "unknown attribute");
        std::string description = t->description;
        const json* raw = node;
        if (is_full_leaf(*node)) {
            const json& type = node->at("type");
            if (!type.is_string() || type.get<std::string>() != to_string(t->type))
                throw SchemaError(path, "type tag " + type.dump() + " does not match declared " + std::string(to_string(t->type)));
            if (node->contains("description")) {
                const json& d = node->at("description");
                if (!d.is_string()) throw SchemaError(path, "description must be a string");
                description = d.get<std::string>();
            }
            raw = &node->at("value");
        }
        auto value = value_from_json(*raw);
        if (!value) throw SchemaError(path, "unsupported value " + raw->dump());
        if (auto why = t->check(*value); !why.empty()) throw SchemaError(path, why);
        state.attributes.emplace(name, AttributeDescriptor{name, t->coerce(*value), t->type, description});
    }
    for (const auto& t : def.attributes) {
        if (state.attributes.count(t.name)) continue;
        if (!options.fill_defaults) throw SchemaError(join_path(device_id, t.name), "missing attribute");
        state.attributes.emplace(t.name, AttributeDescriptor{t.name, t.default_value, t.type, t.description});
    }
    return state;
}

}  // namespace

json device_to_json(const DeviceState& device, RenderMode mode) {
    json block = json::object();
    for (const auto& [name, attr] : device.attributes) {
        // "route.preference" -> block["route"]["preference"]
        json* node = &block;
        std::string_view rest = name;
        for (auto dot = rest.find('.'); dot != std::string_view::npos; dot = rest.find('.')) {
            node = &(*node)[std::string(rest.substr(0, dot))];
            rest.remove_prefix(dot + 1);
        }
        (*node)[std::string(rest)] = leaf(attr, mode);
    }
    return block;
}

json snapshot_to_json(const WorldSnapshot& snapshot, RenderMode mode) {
    json doc = json::object();
    if (!snapshot.label.empty()) doc[std::string(kLabelKey)] = snapshot.label;
    doc[std::string(kEnvironmentId)] = device_to_json(snapshot.environment, mode);
    for (const auto& [id, dev] : snapshot.devices) doc[id] = device_to_json(dev, mode);
    return doc;
}

std::string serialize_snapshot(const WorldSnapshot& snapshot, RenderMode mode) {
    return snapshot_to_json(snapshot, mode).dump(2) + "\n";
}

WorldSnapshot snapshot_from_json(const json& doc, const Registry& registry, ParseOptions options) {
    if (!doc.is_object()) throw SchemaError("", "snapshot document must be an object");
    if (!doc.contains(kEnvironmentId)) throw SchemaError(std::string(kEnvironmentId), "environment required");

    WorldSnapshot snap;
    for (const auto& [key, block] : doc.items()) {
        if (key == kLabelKey) {
            if (!block.is_string()) throw SchemaError(key, "label must be a string");
            snap.label = block.get<std::string>();
            continue;
        }
        static const DeviceDefinition env_def = [] {
            DeviceDefinition d;
            d.device_id = std::string(kEnvironmentId);
            d.attributes = GlobalEnvironment::attribute_templates();
            return d;
        }();
        const DeviceDefinition* def = registry.find_device(key);
        if (!def && key == kEnvironmentId) def = &env_def;
        if (!def) throw SchemaError(key, "unknown device");
        DeviceState state = parse_device(key, block, *def, options);
        if (key == kEnvironmentId) snap.environment = std::move(state);
        else snap.devices.emplace(key, std::move(state));
    }
    return snap;
}

WorldSnapshot parse_snapshot(std::string_view text, const Registry& registry, ParseOptions options) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw SyntaxError(e.what(), e.byte);
    }
    return snapshot_from_json(doc, registry, options);
}

}  // namespace cabin
