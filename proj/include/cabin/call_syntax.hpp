#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "cabin/value.hpp"
#include "cabin/world.hpp"

namespace cabin {

// Text forms shared by the scenario DSL and agent actions:
//
//   value    := null | true | false | number | string | '[' scalar (',' scalar)* ']'
//   call     := ident '(' [ ident '=' value (',' ident '=' value)* ] ')'
//   calls    := call ((',' | ';' | newline) call)*        optionally wrapped in '[' ']'
//   patch    := '{' [ path ':' value (',' path ':' value)* ] '}'
//   names    := '[' [ name (',' name)* ] ']'
//
// Strings take double or single quotes with JSON escapes. Python spellings True/False/None are
// accepted. Numbers without '.' or exponent are integers. Errors throw SyntaxError whose offset
// is relative to the text passed in.

Value parse_value(std::string_view text);
ApiCall parse_call(std::string_view text);
std::vector<ApiCall> parse_calls(std::string_view text);
std::map<std::string, Value> parse_patch(std::string_view text);
std::vector<std::string> parse_names(std::string_view text);

// Canonical rendering: `name(a=1, b="x")`, arguments in key order.
std::string format_call(const ApiCall& call);
std::string format_calls(const std::vector<ApiCall>& calls);
std::string format_patch(const std::map<std::string, Value>& patch);

}  // namespace cabin
