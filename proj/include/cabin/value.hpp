#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

namespace cabin {

using Null = std::monostate;
using Scalar = std::variant<Null, bool, std::int64_t, double, std::string>;
using List = std::vector<Scalar>;

enum class ValueKind { null, boolean, integer, real, string, list };

// Declared kind of an attribute. Null is a value, never a type.
enum class TypeTag { boolean, integer, real, string, list };

std::string_view to_string(ValueKind kind);
std::string_view to_string(TypeTag tag);
std::optional<TypeTag> type_tag_from_string(std::string_view text);

// A tagged attribute value: null, a scalar, or a flat list of scalars.
class Value {
public:
    using Storage = std::variant<Null, bool, std::int64_t, double, std::string, List>;

    Value() = default;
    Value(Null) {}
    Value(bool b) : data_(b) {}
    Value(int i) : data_(std::int64_t{i}) {}
    Value(std::int64_t i) : data_(i) {}
    Value(double d) : data_(d) {}
    Value(const char* s) : data_(std::string(s)) {}
    Value(std::string s) : data_(std::move(s)) {}
    Value(List l) : data_(std::move(l)) {}
    explicit Value(const Scalar& s);

    ValueKind kind() const noexcept { return static_cast<ValueKind>(data_.index()); }

    bool is_null() const noexcept { return kind() == ValueKind::null; }
    bool is_numeric() const noexcept { return kind() == ValueKind::integer || kind() == ValueKind::real; }

    bool as_bool() const { return std::get<bool>(data_); }
    std::int64_t as_int() const { return std::get<std::int64_t>(data_); }
    const std::string& as_string() const { return std::get<std::string>(data_); }
    const List& as_list() const { return std::get<List>(data_); }
    // Numeric value widened to double; throws on non-numeric kinds.
    double as_number() const;

    // Whether this value may be stored in an attribute declared as `tag` (null always fits).
    bool fits(TypeTag tag) const noexcept;

    const Storage& storage() const noexcept { return data_; }

    friend bool operator==(const Value&, const Value&) = default;

private:
    Storage data_;
};

std::optional<Scalar> to_scalar(const Value& v);

nlohmann::json to_json(const Value& v);
// Converts a JSON leaf; objects and nested arrays are rejected with nullopt.
std::optional<Value> value_from_json(const nlohmann::json& j);

// Canonical single-line rendering (same number formatting as the snapshot document).
std::string render(const Value& v);

}  // namespace cabin
