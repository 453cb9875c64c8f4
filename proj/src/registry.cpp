#include "cabin/registry.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "cabin/errors.hpp"

namespace cabin {

std::string_view to_string(ParamKind kind) {
    switch (kind) {
    case ParamKind::integer: return "integer";
    case ParamKind::real: return "real";
    case ParamKind::boolean: return "boolean";
    case ParamKind::string: return "string";
    case ParamKind::enumeration: return "enum";
    }
    return "?";
}

const ParamSpec* ApiSpec::param(std::string_view name) const {
    for (const auto& p : params)
        if (p.name == name) return &p;
    return nullptr;
}

bool ApiSpec::is_query() const {
    return std::all_of(effects.begin(), effects.end(), [](const Effect& e) {
        return e.op == Effect::Op::query || e.op == Effect::Op::require;
    });
}

std::string ApiSpec::required_text() const {
    if (required_sets.empty()) return "None";
    auto join = [](const std::vector<std::string>& names) {
        std::string out;
        for (const auto& n : names) out += (out.empty() ? "" : ", ") + n;
        return out;
    };
    if (required_sets.size() == 1) return "{" + join(required_sets.front()) + "}";
    std::vector<std::string> alts;
    for (const auto& set : required_sets) alts.push_back(set.size() == 1 ? set.front() : "{" + join(set) + "}");
    return "One of: " + join(alts);
}

const AttributeTemplate* DeviceDefinition::attribute(std::string_view name) const {
    for (const auto& a : attributes)
        if (a.name == name) return &a;
    return nullptr;
}

const std::map<std::string, Value>* DeviceDefinition::preset(std::string_view name) const {
    auto it = presets.find(std::string(name));
    return it == presets.end() ? nullptr : &it->second;
}

namespace {

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

// Expands "{param}" placeholders in an effect target against the param's enum values.
std::vector<std::string> expand_target(const ApiSpec& api, const std::string& target) {
    auto open = target.find('{');
    if (open == std::string::npos) return {target};
    auto close = target.find('}', open);
    if (close == std::string::npos) throw SchemaError(api.api_name, "unterminated placeholder in target " + target);
    std::string name = target.substr(open + 1, close - open - 1);
    const ParamSpec* p = api.param(name);
    if (!p || p->kind != ParamKind::enumeration)
        throw SchemaError(api.api_name, "placeholder {" + name + "} must name an enum param");
    std::vector<std::string> out;
    for (const auto& v : p->allowed_values) {
        for (auto& rest : expand_target(api, target.substr(close + 1)))
            out.push_back(target.substr(0, open) + v + rest);
    }
    return out;
}

}  // namespace

void Registry::add(DeviceDefinition def) {
    const std::string& id = def.device_id;
    if (id.empty() || id.find('.') != std::string::npos) throw SchemaError(id, "invalid device id");
    if (find_device(id)) throw SchemaError(id, "device already registered");

    const bool is_env = id == kEnvironmentId;
    if (is_env) {
        if (!def.attributes.empty()) throw SchemaError(id, "environment attributes are fixed");
        def.attributes = GlobalEnvironment::attribute_templates();
    }

    std::set<std::string> names;
    for (auto& a : def.attributes) {
        if (a.name.empty() || !names.insert(a.name).second)
            throw SchemaError(join_path(id, a.name), "attribute names must be unique and non-empty");
        a.default_value = a.coerce(a.default_value);
        if (auto why = a.check(a.default_value); !why.empty()) throw SchemaError(join_path(id, a.name), "default " + why);
        if (!is_env) a.patchable = false;
    }
    // A nested name ("route.preference") cannot coexist with a leaf at its prefix ("route").
    for (const auto& n : names) {
        for (auto dot = n.find('.'); dot != std::string::npos; dot = n.find('.', dot + 1))
            if (names.count(n.substr(0, dot))) throw SchemaError(join_path(id, n), "attribute nested under a leaf attribute");
    }

    if (def.channel_flag) {
        const AttributeTemplate* flag = def.attribute(*def.channel_flag);
        if (!flag || flag->type != TypeTag::boolean)
            throw SchemaError(join_path(id, *def.channel_flag), "channel flag must be a boolean attribute");
    }

    auto mark_patchable = [&](const std::string& target) {
        if (target.rfind("environment.", 0) == 0) {
            if (!GlobalEnvironment::find_template(target.substr(12)))
                throw SchemaError(target, "unknown environment attribute");
            return;
        }
        for (auto& a : def.attributes)
            if (a.name == target) {
                a.patchable = true;
                return;
            }
        throw SchemaError(join_path(id, target), "effect targets an undeclared attribute");
    };
    auto check_readable = [&](const std::string& target) {
        if (target.rfind("environment.", 0) == 0) {
            if (!GlobalEnvironment::find_template(target.substr(12))) throw SchemaError(target, "unknown environment attribute");
        } else if (!def.attribute(target)) {
            throw SchemaError(join_path(id, target), "effect reads an undeclared attribute");
        }
    };

    for (auto& api : def.apis) {
        api.device_id = id;
        if (lower(api.api_name).rfind(lower(id) + "_", 0) != 0)
            throw SchemaError(api.api_name, "api name must start with the device id");
        if (find_api(api.api_name) ||
            std::count_if(def.apis.begin(), def.apis.end(), [&](const ApiSpec& o) { return o.api_name == api.api_name; }) > 1)
            throw SchemaError(api.api_name, "api name already registered");

        std::map<std::string, int> groups;
        std::set<std::string> pnames;
        for (auto& p : api.params) {
            if (!pnames.insert(p.name).second) throw SchemaError(api.api_name, "duplicate param " + p.name);
            if (p.kind == ParamKind::enumeration && p.allowed_values.empty())
                throw SchemaError(api.api_name, "enum param " + p.name + " needs allowed values");
            for (const auto& [word, _] : p.degree_values)
                if (std::find(p.allowed_values.begin(), p.allowed_values.end(), word) == p.allowed_values.end())
                    throw SchemaError(api.api_name, "degree " + word + " is not an allowed value of " + p.name);
            if (p.exclusive_group) ++groups[*p.exclusive_group];
        }
        for (const auto& [g, n] : groups)
            if (n < 2) throw SchemaError(api.api_name, "exclusive group " + g + " needs at least two members");
        for (const auto& alt : api.required_sets) {
            if (alt.empty()) throw SchemaError(api.api_name, "empty required alternative");
            for (const auto& n : alt)
                if (!api.param(n)) throw SchemaError(api.api_name, "required param " + n + " is not declared");
        }
        for (auto& p : api.params) {
            p.required = !api.required_sets.empty() &&
                         std::all_of(api.required_sets.begin(), api.required_sets.end(), [&](const auto& alt) {
                             return std::find(alt.begin(), alt.end(), p.name) != alt.end();
                         });
        }

        for (const auto& e : api.effects) {
            for (const auto& n : e.from)
                if (!api.param(n)) throw SchemaError(api.api_name, "effect reads undeclared param " + n);
            if (e.from_attr) check_readable(*e.from_attr);
            if (e.op == Effect::Op::query) {
                for (const auto& a : e.attrs) check_readable(a);
                continue;
            }
            for (const auto& t : expand_target(api, e.target)) {
                if (e.op == Effect::Op::require) check_readable(t);
                else mark_patchable(t);
            }
        }
    }
    if (def.channel_flag)
        for (auto& a : def.attributes)
            if (a.name == *def.channel_flag) a.patchable = true;

    for (auto& [pname, assignments] : def.presets) {
        for (auto& [attr, v] : assignments) {
            const AttributeTemplate* t = def.attribute(attr);
            if (!t) throw SchemaError(join_path(id, attr), "preset " + pname + " assigns an undeclared attribute");
            v = t->coerce(v);
            if (auto why = t->check(v); !why.empty()) throw SchemaError(join_path(id, attr), "preset " + pname + ": " + why);
        }
    }
    if (!def.presets.count("default")) def.presets.emplace("default", std::map<std::string, Value>{});

    devices_.push_back(std::move(def));
}

const DeviceDefinition* Registry::find_device(std::string_view id) const {
    for (const auto& d : devices_)
        if (d.device_id == id) return &d;
    return nullptr;
}

const ApiSpec* Registry::find_api(std::string_view name) const {
    for (const auto& d : devices_)
        for (const auto& a : d.apis)
            if (a.api_name == name) return &a;
    return nullptr;
}

std::vector<std::string> Registry::device_ids() const {
    std::vector<std::string> out;
    for (const auto& d : devices_) out.push_back(d.device_id);
    return out;
}

const AttributeTemplate* Registry::attribute(std::string_view path) const {
    auto [dev, attr] = split_path(path);
    if (dev == kEnvironmentId) return GlobalEnvironment::find_template(attr);
    const DeviceDefinition* d = find_device(dev);
    return d ? d->attribute(attr) : nullptr;
}

// ---------------------------------------------------------------------------------------------
// Definition documents

namespace {

using nlohmann::json;

Value json_value(const json& j, const std::string& where) {
    auto v = value_from_json(j);
    if (!v) throw SchemaError(where, "unsupported value " + j.dump());
    return *v;
}

std::optional<double> opt_number(const json& j, const char* key) {
    if (!j.contains(key)) return std::nullopt;
    return j.at(key).get<double>();
}

ParamKind param_kind(const std::string& s, const std::string& where) {
    if (s == "integer" || s == "int") return ParamKind::integer;
    if (s == "real" || s == "float") return ParamKind::real;
    if (s == "boolean" || s == "bool") return ParamKind::boolean;
    if (s == "string") return ParamKind::string;
    if (s == "enum") return ParamKind::enumeration;
    throw SchemaError(where, "unknown param kind " + s);
}

Effect::Op effect_op(const std::string& s, const std::string& where) {
    static const std::map<std::string, Effect::Op> ops{
        {"set", Effect::Op::set},       {"increase", Effect::Op::increase}, {"decrease", Effect::Op::decrease},
        {"append", Effect::Op::append}, {"remove", Effect::Op::remove},     {"require", Effect::Op::require},
        {"query", Effect::Op::query}};
    auto it = ops.find(s);
    if (it == ops.end()) throw SchemaError(where, "unknown effect op " + s);
    return it->second;
}

Effect::Check effect_check(const std::string& s, const std::string& where) {
    if (s == "equals") return Effect::Check::equals;
    if (s == "not_equals") return Effect::Check::not_equals;
    if (s == "contains") return Effect::Check::contains;
    if (s == "not_contains") return Effect::Check::not_contains;
    throw SchemaError(where, "unknown check " + s);
}

DeviceDefinition parse_device(const json& j) {
    DeviceDefinition def;
    def.device_id = j.at("device").get<std::string>();
    def.description = j.value("description", "");
    def.domain = j.value("domain", "system");
    if (j.contains("channel_flag")) def.channel_flag = j.at("channel_flag").get<std::string>();

    for (const auto& a : j.value("attributes", json::array())) {
        AttributeTemplate t;
        t.name = a.at("name").get<std::string>();
        std::string where = join_path(def.device_id, t.name);
        auto tag = type_tag_from_string(a.at("type").get<std::string>());
        if (!tag) throw SchemaError(where, "unknown type " + a.at("type").dump());
        t.type = *tag;
        t.default_value = a.contains("default") ? json_value(a.at("default"), where) : Value{};
        t.description = a.value("description", "");
        t.min = opt_number(a, "min");
        t.max = opt_number(a, "max");
        t.allowed = a.value("allowed", std::vector<std::string>{});
        t.nullable = a.value("nullable", false);
        def.attributes.push_back(std::move(t));
    }

    if (j.contains("presets")) {
        for (const auto& [name, body] : j.at("presets").items()) {
            auto& preset = def.presets[name];
            for (const auto& [attr, v] : body.items())
                preset.emplace(attr, json_value(v, join_path(def.device_id, attr)));
        }
    }

    for (const auto& a : j.value("apis", json::array())) {
        ApiSpec api;
        api.api_name = a.at("name").get<std::string>();
        api.description = a.value("description", "");
        for (const auto& p : a.value("params", json::array())) {
            ParamSpec ps;
            ps.name = p.at("name").get<std::string>();
            ps.kind = param_kind(p.at("kind").get<std::string>(), api.api_name);
            ps.description = p.value("description", "");
            ps.allowed_values = p.value("values", std::vector<std::string>{});
            ps.min = opt_number(p, "min");
            ps.max = opt_number(p, "max");
            if (p.contains("exclusive")) ps.exclusive_group = p.at("exclusive").get<std::string>();
            if (p.contains("degrees")) {
                const json& d = p.at("degrees");
                if (d.is_string()) {
                    auto which = d.get<std::string>();
                    if (which == "level") ps.degree_values = level_degrees();
                    else if (which == "step") ps.degree_values = step_degrees();
                    else throw SchemaError(api.api_name, "unknown degree table " + which);
                } else {
                    ps.degree_values = d.get<std::map<std::string, double>>();
                }
            }
            api.params.push_back(std::move(ps));
        }
        api.required_sets = a.value("required", std::vector<std::vector<std::string>>{});
        for (const auto& e : a.value("effects", json::array())) {
            Effect ef;
            ef.op = effect_op(e.at("op").get<std::string>(), api.api_name);
            ef.target = e.value("target", "");
            ef.from = e.value("from", std::vector<std::string>{});
            if (e.contains("from_attr")) ef.from_attr = e.at("from_attr").get<std::string>();
            if (e.contains("format")) ef.format = e.at("format").get<std::string>();
            if (e.contains("value")) ef.value = json_value(e.at("value"), api.api_name);
            if (e.contains("check")) ef.check = effect_check(e.at("check").get<std::string>(), api.api_name);
            ef.message = e.value("message", "");
            ef.attrs = e.value("attrs", std::vector<std::string>{});
            if (e.contains("filter_param")) ef.filter_param = e.at("filter_param").get<std::string>();
            api.effects.push_back(std::move(ef));
        }
        def.apis.push_back(std::move(api));
    }
    return def;
}

}  // namespace

std::vector<DeviceDefinition> load_definitions(std::string_view document) {
    json j;
    try {
        j = json::parse(document);
    } catch (const json::parse_error& e) {
        throw SyntaxError(e.what(), e.byte);
    }
    std::vector<DeviceDefinition> out;
    try {
        if (j.contains("devices")) {
            for (const auto& d : j.at("devices")) out.push_back(parse_device(d));
        } else {
            out.push_back(parse_device(j));
        }
    } catch (const json::exception& e) {
        throw SchemaError("", std::string("malformed definition: ") + e.what());
    }
    return out;
}

void load_definitions_into(Registry& registry, std::string_view document) {
    for (auto& def : load_definitions(document)) registry.add(std::move(def));
}

std::shared_ptr<const Registry> builtin_registry() {
    static const std::shared_ptr<const Registry> registry = [] {
        auto r = std::make_shared<Registry>();
        load_definitions_into(*r, builtin_definitions_document());
        return std::shared_ptr<const Registry>(std::move(r));
    }();
    return registry;
}

}  // namespace cabin
