#include "cabin/environment.hpp"

#include <algorithm>
#include <cmath>

#include <spdlog/spdlog.h>

#include "cabin/errors.hpp"

namespace cabin {

const std::map<std::string, double>& level_degrees() {
    static const std::map<std::string, double> table{
        {"max", 100}, {"high", 75}, {"medium", 50}, {"low", 25}, {"min", 0}};
    return table;
}

const std::map<std::string, double>& step_degrees() {
    static const std::map<std::string, double> table{{"large", 20}, {"little", 10}, {"tiny", 5}};
    return table;
}

std::string AttributeTemplate::check(const Value& v) const {
    if (v.is_null()) return nullable ? "" : "null is not allowed";
    Value c = coerce(v);
    if (!c.fits(type))
        return "expected " + std::string(to_string(type)) + ", got " + std::string(to_string(v.kind()));
    if (c.is_numeric()) {
        double x = c.as_number();
        if ((min && x < *min) || (max && x > *max)) {
            auto bound = [](double b) { return render(b == std::floor(b) ? Value(static_cast<std::int64_t>(b)) : Value(b)); };
            return "value " + render(c) + " out of range [" + (min ? bound(*min) : "-inf") + ", " +
                   (max ? bound(*max) : "inf") + "]";
        }
    }
    if (!allowed.empty() && c.kind() == ValueKind::string &&
        std::find(allowed.begin(), allowed.end(), c.as_string()) == allowed.end()) {
        std::string list;
        for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
        return "value " + render(c) + " not one of {" + list + "}";
    }
    return "";
}

Value AttributeTemplate::coerce(const Value& v) const {
    if (type == TypeTag::real && v.kind() == ValueKind::integer) return Value(static_cast<double>(v.as_int()));
    return v;
}

void GlobalEnvironment::register_device(std::string device_id) { registered_.insert(std::move(device_id)); }

bool GlobalEnvironment::is_registered(std::string_view device_id) const {
    return registered_.find(device_id) != registered_.end();
}

AcquireResult GlobalEnvironment::acquire_sound_channel(std::string_view requester, const RelinquishFn& on_relinquish) {
    if (!is_registered(requester))
        throw NotFoundError("unregistered sound channel requester: " + std::string(requester));
    AcquireResult result{true, sound_channel_};
    if (sound_channel_ == requester) return result;
    std::string previous = std::exchange(sound_channel_, std::string(requester));
    if (previous != kNoChannelOwner && on_relinquish) on_relinquish(previous);
    return result;
}

bool GlobalEnvironment::release_sound_channel(std::string_view owner, const RelinquishFn& on_relinquish) {
    if (sound_channel_ != owner || owner == kNoChannelOwner) return false;
    std::string previous = std::exchange(sound_channel_, std::string(kNoChannelOwner));
    if (on_relinquish) on_relinquish(previous);
    return true;
}

std::int64_t GlobalEnvironment::set_volume(const VolumeCommand& cmd, bool strict) {
    auto lookup = [](const std::map<std::string, double>& table, const std::string& degree) {
        auto it = table.find(degree);
        if (it == table.end()) throw ConstraintError("unknown volume degree: " + degree);
        return static_cast<std::int64_t>(it->second);
    };
    std::int64_t target = std::visit(
        [&](const auto& c) -> std::int64_t {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, VolumeCommand::Absolute>) {
                if (strict && (c.value < 0 || c.value > 100))
                    throw ConstraintError("volume " + std::to_string(c.value) + " out of range [0, 100]");
                return c.value;
            } else if constexpr (std::is_same_v<T, VolumeCommand::Delta>) {
                return volume_ + c.amount;
            } else if constexpr (std::is_same_v<T, VolumeCommand::Level>) {
                return lookup(level_degrees(), c.degree);
            } else {
                auto step = lookup(step_degrees(), c.degree);
                return c.increase ? volume_ + step : volume_ - step;
            }
        },
        cmd.command);
    std::int64_t clamped = std::clamp<std::int64_t>(target, 0, 100);
    if (clamped != target) spdlog::warn("volume {} clamped to {}", target, clamped);
    volume_ = clamped;
    return volume_;
}

void GlobalEnvironment::set_temperature(double celsius) {
    if (auto why = find_template("temperature")->check(Value(celsius)); !why.empty())
        throw ConstraintError("environment.temperature: " + why);
    temperature_ = celsius;
}

namespace {

void check_enum(std::string_view attr, const std::string& value) {
    if (auto why = GlobalEnvironment::find_template(attr)->check(Value(value)); !why.empty())
        throw ConstraintError("environment." + std::string(attr) + ": " + why);
}

}  // namespace

void GlobalEnvironment::set_speaker(std::string zone) {
    check_enum("speaker", zone);
    speaker_ = std::move(zone);
}

void GlobalEnvironment::set_unit_system(std::string system) {
    check_enum("unit_system", system);
    unit_system_ = std::move(system);
}

void GlobalEnvironment::set_time_format(std::string format) {
    check_enum("time_format", format);
    time_format_ = std::move(format);
}

Value GlobalEnvironment::get(std::string_view attribute) const {
    if (attribute == "volume") return volume_;
    if (attribute == "sound_channel") return sound_channel_;
    if (attribute == "temperature") return temperature_;
    if (attribute == "speaker") return speaker_;
    if (attribute == "unit_system") return unit_system_;
    if (attribute == "time_format") return time_format_;
    throw SchemaError(join_path(kEnvironmentId, attribute), "unknown attribute");
}

void GlobalEnvironment::set(std::string_view attribute, const Value& v, const RelinquishFn& on_relinquish) {
    const AttributeTemplate* tmpl = find_template(attribute);
    if (!tmpl) throw SchemaError(join_path(kEnvironmentId, attribute), "unknown attribute");
    if (auto why = tmpl->check(v); !why.empty())
        throw ConstraintError(join_path(kEnvironmentId, attribute) + ": " + why);
    Value c = tmpl->coerce(v);
    if (attribute == "volume") {
        set_volume({VolumeCommand::Absolute{c.as_int()}}, true);
    } else if (attribute == "sound_channel") {
        const std::string& owner = c.as_string();
        if (owner == kNoChannelOwner) release_sound_channel(std::string(sound_channel_), on_relinquish);
        else acquire_sound_channel(owner, on_relinquish);
    } else if (attribute == "temperature") {
        set_temperature(c.as_number());
    } else if (attribute == "speaker") {
        set_speaker(c.as_string());
    } else if (attribute == "unit_system") {
        set_unit_system(c.as_string());
    } else {
        set_time_format(c.as_string());
    }
}

DeviceState GlobalEnvironment::environment_state() const {
    DeviceState state{std::string(kEnvironmentId), {}};
    for (const auto& t : attribute_templates())
        state.attributes.emplace(t.name, AttributeDescriptor{t.name, get(t.name), t.type, t.description});
    return state;
}

const std::vector<AttributeTemplate>& GlobalEnvironment::attribute_templates() {
    static const std::vector<AttributeTemplate> templates = [] {
        std::vector<AttributeTemplate> t;
        t.push_back({"volume", TypeTag::integer, Value(50), "System audio volume shared by all audio sources", 0.0, 100.0, {}, false, true});
        t.push_back({"sound_channel", TypeTag::string, Value(std::string(kNoChannelOwner)),
                     "Device currently holding the exclusive audio channel, or \"none\"", {}, {}, {}, false, true});
        t.push_back({"temperature", TypeTag::real, Value(22.0), "Cabin temperature in degrees Celsius", 16.0, 32.0, {}, false, true});
        t.push_back({"speaker", TypeTag::string, Value("driver's seat"), "Speaker zone used for voice output", {}, {},
                     {"driver's seat", "passenger seat", "rear seats", "all seats"}, false, true});
        t.push_back({"unit_system", TypeTag::string, Value("metric"), "Measurement units shown on displays", {}, {},
                     {"metric", "imperial"}, false, true});
        t.push_back({"time_format", TypeTag::string, Value("24h"), "Clock display format", {}, {}, {"12h", "24h"}, false, true});
        return t;
    }();
    return templates;
}

const AttributeTemplate* GlobalEnvironment::find_template(std::string_view attribute) {
    for (const auto& t : attribute_templates())
        if (t.name == attribute) return &t;
    return nullptr;
}

ExclusiveAccess::Lease::Lease(ExclusiveAccess& owner) : owner_(owner) {
    if (owner_.busy_.exchange(true, std::memory_order_acquire))
        throw Error("world is already being mutated by another writer");
}

ExclusiveAccess::Lease::~Lease() { owner_.busy_.store(false, std::memory_order_release); }

}  // namespace cabin
