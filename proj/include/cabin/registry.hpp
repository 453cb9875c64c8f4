#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "cabin/environment.hpp"
#include "cabin/value.hpp"

namespace cabin {

enum class ParamKind { integer, real, boolean, string, enumeration };

std::string_view to_string(ParamKind kind);

struct ParamSpec {
    std::string name;
    ParamKind kind = ParamKind::string;
    std::string description;
    std::vector<std::string> allowed_values;       // enumeration only
    std::map<std::string, double> degree_values;   // enum word -> numeric amount, when the enum encodes a quantity
    std::optional<double> min;
    std::optional<double> max;
    bool required = false;                         // member of every required alternative
    std::optional<std::string> exclusive_group;
};

// One declarative step of an API behaviour.
//
// Sources are resolved in order: the first supplied param in `from`, then `from_attr`, then
// `format`, then the literal `value`. An effect whose source resolves to nothing is skipped.
struct Effect {
    enum class Op { set, increase, decrease, append, remove, require, query };
    enum class Check { equals, not_equals, contains, not_contains };

    Op op = Op::set;
    std::string target;  // device-relative attribute, or "environment.<attr>"; "{param}" placeholders allowed
    std::vector<std::string> from;
    std::optional<std::string> from_attr;
    std::optional<std::string> format;
    std::optional<Value> value;

    Check check = Check::equals;  // require
    std::string message;          // require failure text

    std::vector<std::string> attrs;            // query
    std::optional<std::string> filter_param;   // query: keep list items containing this param's text
};

struct ApiSpec {
    std::string api_name;
    std::string device_id;
    std::string description;
    std::vector<ParamSpec> params;
    // Alternatives; satisfied when every param of at least one alternative is supplied.
    // Empty means nothing is required.
    std::vector<std::vector<std::string>> required_sets;
    std::vector<Effect> effects;

    const ParamSpec* param(std::string_view name) const;
    bool is_query() const;
    // "None", "{contact}" or "One of: value, degree".
    std::string required_text() const;
};

struct DeviceDefinition {
    std::string device_id;
    std::string description;
    std::string domain;  // multimedia | touch_control | car_control | light | system
    std::vector<AttributeTemplate> attributes;
    std::vector<ApiSpec> apis;
    std::map<std::string, std::map<std::string, Value>> presets;
    // Boolean attribute that is true exactly while the device plays through the sound channel.
    std::optional<std::string> channel_flag;

    const AttributeTemplate* attribute(std::string_view name) const;
    const std::map<std::string, Value>* preset(std::string_view name) const;
};

// Immutable after construction; shared between worlds.
class Registry {
public:
    Registry() = default;

    // Validates the definition, derives required/patchable flags and adds a "default" preset
    // when none is declared. Throws SchemaError on any inconsistency.
    void add(DeviceDefinition def);

    const DeviceDefinition* find_device(std::string_view id) const;
    const ApiSpec* find_api(std::string_view name) const;
    // Registration order.
    std::vector<std::string> device_ids() const;
    const std::vector<DeviceDefinition>& devices() const noexcept { return devices_; }

    // Schema for a flat path, environment included.
    const AttributeTemplate* attribute(std::string_view path) const;

private:
    std::vector<DeviceDefinition> devices_;
};

// Parses a definition document: either one device object or {"devices": [...]}.
std::vector<DeviceDefinition> load_definitions(std::string_view document);
void load_definitions_into(Registry& registry, std::string_view document);

// The shipped twelve-device cockpit.
std::shared_ptr<const Registry> builtin_registry();
std::string_view builtin_definitions_document();

}  // namespace cabin
