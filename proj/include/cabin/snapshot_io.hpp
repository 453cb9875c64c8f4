#pragma once

#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "cabin/registry.hpp"
#include "cabin/state.hpp"

namespace cabin {

// Full renders each attribute as {description, type, value}; compact renders bare values.
enum class RenderMode { full, compact };

// Reserved top-level key carrying WorldSnapshot::label.
inline constexpr std::string_view kLabelKey = "@turn";

// Canonical document: keys sorted, nested attribute names ("route.preference") rendered as
// sub-objects, integers without a decimal point, reals in shortest round-trip form.
std::string serialize_snapshot(const WorldSnapshot& snapshot, RenderMode mode = RenderMode::full);
nlohmann::json snapshot_to_json(const WorldSnapshot& snapshot, RenderMode mode = RenderMode::full);
nlohmann::json device_to_json(const DeviceState& device, RenderMode mode);

struct ParseOptions {
    // Fill attributes missing from a device block with the device's declared defaults instead
    // of rejecting the document.
    bool fill_defaults = false;
};

// Accepts either rendering (detected per attribute). Throws SyntaxError with the byte offset
// for malformed text and SchemaError with the offending path for unknown devices, unknown or
// missing attributes, type mismatches and constraint violations.
WorldSnapshot parse_snapshot(std::string_view text, const Registry& registry, ParseOptions options = {});
WorldSnapshot snapshot_from_json(const nlohmann::json& doc, const Registry& registry, ParseOptions options = {});

}  // namespace cabin
