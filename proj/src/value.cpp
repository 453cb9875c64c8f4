#include "cabin/value.hpp"

#include <stdexcept>

namespace cabin {

std::string_view to_string(ValueKind kind) {
    switch (kind) {
    case ValueKind::null: return "null";
    case ValueKind::boolean: return "boolean";
    case ValueKind::integer: return "integer";
    case ValueKind::real: return "real";
    case ValueKind::string: return "string";
    case ValueKind::list: return "list";
    }
    return "?";
}

std::string_view to_string(TypeTag tag) {
    switch (tag) {
    case TypeTag::boolean: return "boolean";
    case TypeTag::integer: return "integer";
    case TypeTag::real: return "real";
    case TypeTag::string: return "string";
    case TypeTag::list: return "list";
    }
    return "?";
}

std::optional<TypeTag> type_tag_from_string(std::string_view text) {
    if (text == "boolean") return TypeTag::boolean;
    if (text == "integer") return TypeTag::integer;
    if (text == "real") return TypeTag::real;
    if (text == "string") return TypeTag::string;
    if (text == "list") return TypeTag::list;
    return std::nullopt;
}

Value::Value(const Scalar& s) {
    std::visit([this](const auto& x) { data_ = x; }, s);
}

double Value::as_number() const {
    if (kind() == ValueKind::integer) return static_cast<double>(as_int());
    if (kind() == ValueKind::real) return std::get<double>(data_);
    throw std::logic_error("value is not numeric");
}

bool Value::fits(TypeTag tag) const noexcept {
    switch (kind()) {
    case ValueKind::null: return true;
    case ValueKind::boolean: return tag == TypeTag::boolean;
    case ValueKind::integer: return tag == TypeTag::integer;
    case ValueKind::real: return tag == TypeTag::real;
    case ValueKind::string: return tag == TypeTag::string;
    case ValueKind::list: return tag == TypeTag::list;
    }
    return false;
}

std::optional<Scalar> to_scalar(const Value& v) {
    return std::visit(
        [](const auto& x) -> std::optional<Scalar> {
            if constexpr (std::is_same_v<std::decay_t<decltype(x)>, List>) {
                return std::nullopt;
            } else {
                return Scalar{x};
            }
        },
        v.storage());
}

namespace {

nlohmann::json scalar_json(const Scalar& s) {
    return std::visit(
        [](const auto& x) -> nlohmann::json {
            if constexpr (std::is_same_v<std::decay_t<decltype(x)>, Null>) {
                return nullptr;
            } else {
                return x;
            }
        },
        s);
}

std::optional<Scalar> scalar_from_json(const nlohmann::json& j) {
    switch (j.type()) {
    case nlohmann::json::value_t::null: return Scalar{Null{}};
    case nlohmann::json::value_t::boolean: return Scalar{j.get<bool>()};
    case nlohmann::json::value_t::number_integer: return Scalar{j.get<std::int64_t>()};
    case nlohmann::json::value_t::number_unsigned: {
        auto u = j.get<std::uint64_t>();
        if (u > static_cast<std::uint64_t>(INT64_MAX)) return std::nullopt;
        return Scalar{static_cast<std::int64_t>(u)};
    }
    case nlohmann::json::value_t::number_float: return Scalar{j.get<double>()};
    case nlohmann::json::value_t::string: return Scalar{j.get<std::string>()};
    default: return std::nullopt;
    }
}

}  // namespace

nlohmann::json to_json(const Value& v) {
    if (v.kind() == ValueKind::list) {
        auto arr = nlohmann::json::array();
        for (const auto& s : v.as_list()) arr.push_back(scalar_json(s));
        return arr;
    }
    return scalar_json(*to_scalar(v));
}

std::optional<Value> value_from_json(const nlohmann::json& j) {
    if (j.is_array()) {
        List out;
        for (const auto& e : j) {
            auto s = scalar_from_json(e);
            if (!s) return std::nullopt;
            out.push_back(std::move(*s));
        }
        return Value{std::move(out)};
    }
    auto s = scalar_from_json(j);
    if (!s) return std::nullopt;
    return Value{*s};
}

std::string render(const Value& v) { return to_json(v).dump(); }

}  // namespace cabin
