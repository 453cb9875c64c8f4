#include "cabin/world.hpp"

#include <algorithm>
#include <cmath>

#include "cabin/errors.hpp"

namespace cabin {

std::vector<ModuleInfo> search_module(const Registry& registry) {
    std::vector<ModuleInfo> out;
    for (const auto& d : registry.devices()) out.push_back({d.device_id, d.description});
    return out;
}

const std::vector<ApiSpec>& search_api(const Registry& registry, std::string_view device_id) {
    const DeviceDefinition* d = registry.find_device(device_id);
    if (!d) throw NotFoundError("unknown device: " + std::string(device_id));
    return d->apis;
}

nlohmann::json render_module_list(const std::vector<ModuleInfo>& modules) {
    auto out = nlohmann::json::array();
    for (const auto& m : modules) out.push_back({{"device", m.device_id}, {"description", m.description}});
    return out;
}

nlohmann::json render_api_spec(const ApiSpec& api) {
    nlohmann::json params = nlohmann::json::array();
    for (const auto& p : api.params) {
        nlohmann::json jp{{"name", p.name}, {"kind", to_string(p.kind)}};
        if (!p.description.empty()) jp["description"] = p.description;
        if (!p.allowed_values.empty()) jp["values"] = p.allowed_values;
        if (p.min) jp["min"] = *p.min;
        if (p.max) jp["max"] = *p.max;
        if (p.exclusive_group) {
            std::vector<std::string> others;
            for (const auto& q : api.params)
                if (q.name != p.name && q.exclusive_group == p.exclusive_group) others.push_back(q.name);
            jp["exclusive_with"] = others;
        }
        params.push_back(std::move(jp));
    }
    return {{"name", api.api_name},
            {"device", api.device_id},
            {"description", api.description},
            {"params", params},
            {"required", api.required_text()}};
}

World::World(std::shared_ptr<const Registry> registry) : registry_(std::move(registry)) {
    if (!registry_) throw Error("world needs a registry");
}

const DeviceDefinition& World::definition(std::string_view device_id) const {
    const DeviceDefinition* d = registry_->find_device(device_id);
    if (!d) throw NotFoundError("unknown device: " + std::string(device_id));
    return *d;
}

void World::init_device(std::string_view device_id, std::string_view preset_name) {
    auto lease = access_.lease();
    const DeviceDefinition& def = definition(device_id);
    const auto* preset = def.preset(preset_name);
    if (!preset)
        throw NotFoundError("unknown preset '" + std::string(preset_name) + "' for device " + std::string(device_id));

    World scratch = *this;
    if (device_id == kEnvironmentId) {
        for (const auto& t : def.attributes) {
            auto it = preset->find(t.name);
            scratch.set_unlocked(join_path(kEnvironmentId, t.name), it != preset->end() ? it->second : t.default_value);
        }
    } else {
        if (!scratch.has_device(device_id)) {
            auto& values = scratch.devices_[std::string(device_id)];
            for (const auto& t : def.attributes) values.emplace(t.name, t.default_value);
            if (def.channel_flag) {
                values[*def.channel_flag] = false;
                scratch.env_.register_device(std::string(device_id));
            }
        }
        for (const auto& t : def.attributes) {
            auto it = preset->find(t.name);
            scratch.set_unlocked(join_path(device_id, t.name), it != preset->end() ? it->second : t.default_value);
        }
    }
    devices_ = std::move(scratch.devices_);
    env_ = std::move(scratch.env_);
}

bool World::has_device(std::string_view device_id) const { return devices_.find(device_id) != devices_.end(); }

std::vector<std::string> World::device_ids() const {
    std::vector<std::string> out;
    for (const auto& [id, _] : devices_) out.push_back(id);
    return out;
}

Value World::get(std::string_view path) const {
    auto [dev, attr] = split_path(path);
    if (dev == kEnvironmentId) return env_.get(attr);
    auto d = devices_.find(dev);
    if (d == devices_.end()) throw SchemaError(std::string(path), "device not active in world");
    auto a = d->second.find(std::string(attr));
    if (a == d->second.end()) throw SchemaError(std::string(path), "unknown attribute");
    return a->second;
}

void World::set(std::string_view path, const Value& value) {
    auto lease = access_.lease();
    set_unlocked(path, value);
}

void World::relinquish(const std::string& device_id) {
    const DeviceDefinition& def = definition(device_id);
    if (def.channel_flag && has_device(device_id)) set_unlocked(join_path(device_id, *def.channel_flag), false);
}

void World::set_unlocked(std::string_view path, const Value& value) {
    auto [dev, attr] = split_path(path);
    auto notify = [this](const std::string& loser) { relinquish(loser); };
    if (dev == kEnvironmentId) {
        try {
            env_.set(attr, value, notify);
        } catch (const NotFoundError& e) {
            throw ConstraintError(std::string(path) + ": " + e.what());
        }
        // Handing the channel to a device also turns its flag on, so owner and flag agree.
        if (attr == "sound_channel") {
            const std::string& owner = env_.sound_channel();
            auto d = devices_.find(owner);
            if (d != devices_.end())
                if (const auto& flag = definition(owner).channel_flag) d->second[*flag] = Value(true);
        }
        return;
    }
    auto d = devices_.find(dev);
    if (d == devices_.end()) throw SchemaError(std::string(path), "device not active in world");
    const DeviceDefinition& def = definition(dev);
    const AttributeTemplate* t = def.attribute(attr);
    if (!t) throw SchemaError(std::string(path), "unknown attribute");
    if (auto why = t->check(value); !why.empty()) throw ConstraintError(std::string(path) + ": " + why);
    Value v = t->coerce(value);

    if (def.channel_flag && attr == *def.channel_flag && !v.is_null()) {
        std::string id(dev);
        if (v.as_bool()) env_.acquire_sound_channel(id, notify);
        else env_.release_sound_channel(id);
    }
    d->second[std::string(attr)] = std::move(v);
}

bool World::is_patchable(std::string_view path) const {
    auto [dev, attr] = split_path(path);
    if (dev != kEnvironmentId && !has_device(dev)) return false;
    const AttributeTemplate* t = registry_->attribute(path);
    return t && t->patchable;
}

WorldSnapshot World::snapshot(std::string label) const {
    WorldSnapshot snap;
    snap.environment = env_.environment_state();
    snap.label = std::move(label);
    for (const auto& [id, values] : devices_) {
        const DeviceDefinition& def = definition(id);
        DeviceState state{id, {}};
        for (const auto& t : def.attributes)
            state.attributes.emplace(t.name, AttributeDescriptor{t.name, values.at(t.name), t.type, t.description});
        snap.devices.emplace(id, std::move(state));
    }
    return snap;
}

WorldSnapshot World::project(const std::vector<std::string>& device_ids, std::string label) const {
    WorldSnapshot full = snapshot(std::move(label));
    WorldSnapshot out;
    out.environment = std::move(full.environment);
    out.label = std::move(full.label);
    for (const auto& id : device_ids) {
        if (id == kEnvironmentId) continue;
        auto it = full.devices.find(id);
        if (it == full.devices.end()) throw NotFoundError("device not active in world: " + id);
        out.devices.emplace(id, it->second);
    }
    return out;
}

// ---------------------------------------------------------------------------------------------
// API dispatch

namespace {

struct CallFailure : Error {
    using Error::Error;
};

std::string param_kind_error(const ParamSpec& p) {
    return "wrong kind for " + p.name + ": expected " + std::string(to_string(p.kind));
}

// Validates and normalises arguments. Returns an error message, empty on success.
std::string validate_args(const ApiSpec& api, const std::map<std::string, Value>& args,
                          std::map<std::string, Value>& normalized) {
    for (const auto& [name, v] : args) {
        const ParamSpec* p = api.param(name);
        if (!p) return "unknown argument: " + name;
        Value n = v;
        switch (p->kind) {
        case ParamKind::integer:
            if (v.kind() != ValueKind::integer) return param_kind_error(*p);
            break;
        case ParamKind::real:
            if (!v.is_numeric()) return param_kind_error(*p);
            n = Value(v.as_number());
            break;
        case ParamKind::boolean:
            if (v.kind() != ValueKind::boolean) return param_kind_error(*p);
            break;
        case ParamKind::string:
            if (v.kind() != ValueKind::string) return param_kind_error(*p);
            break;
        case ParamKind::enumeration: {
            if (v.kind() != ValueKind::string) return param_kind_error(*p);
            const auto& allowed = p->allowed_values;
            if (std::find(allowed.begin(), allowed.end(), v.as_string()) == allowed.end()) {
                std::string list;
                for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
                return "invalid value for " + name + ": " + render(v) + " (allowed: " + list + ")";
            }
            break;
        }
        }
        if (n.is_numeric() && ((p->min && n.as_number() < *p->min) || (p->max && n.as_number() > *p->max)))
            return "out of range: " + name + "=" + render(v);
        normalized.emplace(name, std::move(n));
    }

    std::map<std::string, std::vector<std::string>> groups;
    for (const auto& p : api.params)
        if (p.exclusive_group && normalized.count(p.name)) groups[*p.exclusive_group].push_back(p.name);
    for (const auto& [_, supplied] : groups) {
        if (supplied.size() > 1) {
            std::string list;
            for (const auto& s : supplied) list += (list.empty() ? "" : ", ") + s;
            return "exclusive params: " + list;
        }
    }

    if (!api.required_sets.empty()) {
        bool satisfied = std::any_of(api.required_sets.begin(), api.required_sets.end(), [&](const auto& alt) {
            return std::all_of(alt.begin(), alt.end(), [&](const std::string& n) { return normalized.count(n) > 0; });
        });
        if (!satisfied) {
            if (api.required_sets.size() == 1) {
                for (const auto& n : api.required_sets.front())
                    if (!normalized.count(n)) return "missing required argument: " + n;
            }
            return "missing required argument: " + api.required_text();
        }
    }
    return "";
}

std::string scalar_text(const Value& v) {
    return v.kind() == ValueKind::string ? v.as_string() : render(v);
}

}  // namespace

class EffectRunner {
public:
    EffectRunner(World& world, const ApiSpec& api, const std::map<std::string, Value>& args)
        : world_(world), api_(api), args_(args) {}

    std::optional<nlohmann::json> run() {
        std::optional<nlohmann::json> payload;
        for (const auto& e : api_.effects) apply(e, payload);
        return payload;
    }

private:
    std::string resolve_path(const std::string& target) const {
        std::string t = target;
        for (auto open = t.find('{'); open != std::string::npos; open = t.find('{')) {
            auto close = t.find('}', open);
            auto name = t.substr(open + 1, close - open - 1);
            auto it = args_.find(name);
            if (it == args_.end()) throw CallFailure("missing argument for " + name);
            t.replace(open, close - open + 1, scalar_text(it->second));
        }
        if (t.rfind("environment.", 0) == 0) return t;
        return join_path(api_.device_id, t);
    }

    std::optional<Value> resolve(const Effect& e) const {
        for (const auto& name : e.from) {
            auto it = args_.find(name);
            if (it == args_.end()) continue;
            const ParamSpec* p = api_.param(name);
            if (p && !p->degree_values.empty() && it->second.kind() == ValueKind::string)
                return Value(p->degree_values.at(it->second.as_string()));
            return it->second;
        }
        if (e.from_attr) return world_.get(resolve_path(*e.from_attr));
        if (e.format) {
            std::string out;
            const std::string& f = *e.format;
            for (std::size_t i = 0; i < f.size(); ++i) {
                if (f[i] == '{') {
                    auto close = f.find('}', i);
                    auto it = args_.find(f.substr(i + 1, close - i - 1));
                    if (it != args_.end()) out += scalar_text(it->second);
                    i = close;
                } else {
                    out += f[i];
                }
            }
            return Value(out);
        }
        return e.value;
    }

    // Fits a resolved number to the target's declared type.
    Value fit(const std::string& path, Value v) const {
        const AttributeTemplate* t = world_.registry().attribute(path);
        if (t && t->type == TypeTag::integer && v.kind() == ValueKind::real) {
            double d = v.as_number();
            if (d != std::floor(d)) throw CallFailure(path + ": expected an integer amount");
            return Value(static_cast<std::int64_t>(d));
        }
        return v;
    }

    void apply(const Effect& e, std::optional<nlohmann::json>& payload) {
        using Op = Effect::Op;
        if (e.op == Op::query) {
            if (!payload) payload = nlohmann::json::object();
            std::optional<std::string> filter;
            if (e.filter_param) {
                auto it = args_.find(*e.filter_param);
                if (it != args_.end()) filter = scalar_text(it->second);
            }
            for (const auto& attr : e.attrs) {
                Value v = world_.get(resolve_path(attr));
                if (filter && v.kind() == ValueKind::list) {
                    List kept;
                    for (const auto& item : v.as_list()) {
                        Value iv(item);
                        if (iv.kind() == ValueKind::string && iv.as_string().find(*filter) != std::string::npos)
                            kept.push_back(item);
                    }
                    v = Value(std::move(kept));
                }
                (*payload)[attr] = to_json(v);
            }
            return;
        }

        const std::string path = resolve_path(e.target);
        auto source = resolve(e);

        switch (e.op) {
        case Op::set:
            if (source) world_.set_unlocked(path, fit(path, *source));
            break;
        case Op::increase:
        case Op::decrease: {
            if (!source) return;
            if (!source->is_numeric()) throw CallFailure(path + ": amount must be numeric");
            const bool up = e.op == Op::increase;
            if (path == "environment.volume") {
                auto amount = static_cast<std::int64_t>(std::llround(source->as_number()));
                world_.env_.set_volume({VolumeCommand::Delta{up ? amount : -amount}});
                break;
            }
            Value current = world_.get(path);
            if (!current.is_numeric()) throw CallFailure(path + ": attribute is not numeric");
            const AttributeTemplate* t = world_.registry().attribute(path);
            double next = current.as_number() + (up ? 1 : -1) * source->as_number();
            if (t && t->min) next = std::max(next, *t->min);
            if (t && t->max) next = std::min(next, *t->max);
            Value v = current.kind() == ValueKind::integer ? Value(static_cast<std::int64_t>(std::llround(next))) : Value(next);
            world_.set_unlocked(path, v);
            break;
        }
        case Op::append:
        case Op::remove: {
            if (!source) return;
            auto item = to_scalar(*source);
            if (!item) throw CallFailure(path + ": list items must be scalars");
            Value current = world_.get(path);
            List list = current.is_null() ? List{} : current.as_list();
            if (e.op == Op::append) {
                list.push_back(*item);
            } else {
                auto it = std::find(list.begin(), list.end(), *item);
                if (it == list.end()) throw CallFailure("not found: " + scalar_text(*source));
                list.erase(it);
            }
            world_.set_unlocked(path, Value(std::move(list)));
            break;
        }
        case Op::require: {
            Value current = world_.get(path);
            Value operand = source.value_or(Value{});
            bool ok = false;
            switch (e.check) {
            case Effect::Check::equals: ok = current == operand; break;
            case Effect::Check::not_equals: ok = current != operand; break;
            case Effect::Check::contains:
            case Effect::Check::not_contains: {
                auto item = to_scalar(operand);
                bool found = current.kind() == ValueKind::list && item &&
                             std::find(current.as_list().begin(), current.as_list().end(), *item) != current.as_list().end();
                ok = (e.check == Effect::Check::contains) == found;
                break;
            }
            }
            if (!ok) throw CallFailure(e.message.empty() ? "precondition failed on " + path : e.message);
            break;
        }
        case Op::query: break;
        }
    }

    World& world_;
    const ApiSpec& api_;
    const std::map<std::string, Value>& args_;
};

ApiResult World::invoke(const ApiCall& call) {
    auto lease = access_.lease();
    ApiResult result;

    if (call.api_name == kSearchModule) {
        if (!call.args.empty()) return {false, "search_module takes no arguments", std::nullopt, {}};
        return {true, "ok", render_module_list(search_module(*registry_)), {}};
    }
    if (call.api_name == kSearchApi) {
        auto it = call.args.find("device");
        if (call.args.size() != 1 || it == call.args.end() || it->second.kind() != ValueKind::string)
            return {false, "search_api requires a single string argument: device", std::nullopt, {}};
        try {
            auto payload = nlohmann::json::array();
            for (const auto& api : search_api(*registry_, it->second.as_string())) payload.push_back(render_api_spec(api));
            return {true, "ok", std::move(payload), {}};
        } catch (const NotFoundError& e) {
            return {false, e.what(), std::nullopt, {}};
        }
    }

    const ApiSpec* api = registry_->find_api(call.api_name);
    if (!api) return {false, "unknown api: " + call.api_name, std::nullopt, {}};
    if (api->device_id != kEnvironmentId && !has_device(api->device_id))
        return {false, "device not active: " + api->device_id, std::nullopt, {}};

    std::map<std::string, Value> args;
    if (auto why = validate_args(*api, call.args, args); !why.empty()) return {false, why, std::nullopt, {}};

    World scratch = *this;
    try {
        result.payload = EffectRunner(scratch, *api, args).run();
    } catch (const Error& e) {
        return {false, e.what(), std::nullopt, {}};
    }

    StateDiff diff = diff_snapshots(snapshot(), scratch.snapshot());
    devices_ = std::move(scratch.devices_);
    env_ = std::move(scratch.env_);

    result.success = true;
    result.message = "ok";
    for (const auto& c : diff.changed) {
        result.touched_paths.push_back(c.path);
        result.message += (result.touched_paths.size() == 1 ? ": " : ", ") + c.path + "=" + render(c.after);
    }
    return result;
}

}  // namespace cabin
