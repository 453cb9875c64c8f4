#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cabin {

// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed document or DSL text. `position` is a byte offset into the input.
class SyntaxError : public Error {
public:
    SyntaxError(const std::string& what, std::size_t position)
        : Error(what + " (at offset " + std::to_string(position) + ")"), detail_(what), position_(position) {}

    std::size_t position() const noexcept { return position_; }
    // Message without the offset suffix.
    const std::string& detail() const noexcept { return detail_; }

private:
    std::string detail_;
    std::size_t position_;
};

// Well-formed input that violates the world schema. `path` names the offending attribute.
class SchemaError : public Error {
public:
    SchemaError(std::string path, const std::string& what)
        : Error(path.empty() ? what : path + ": " + what), path_(std::move(path)) {}

    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

class NotFoundError : public Error {
public:
    using Error::Error;
};

// Raised by setters when an assignment would break an attribute constraint.
class ConstraintError : public Error {
public:
    using Error::Error;
};

}  // namespace cabin
