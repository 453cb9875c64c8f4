#include "cabin/call_syntax.hpp"

#include <cctype>
#include <charconv>

#include "cabin/errors.hpp"

namespace cabin {

namespace {

class Cursor {
public:
    explicit Cursor(std::string_view text) : text_(text) {}

    void skip_space(bool newlines = true) {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == '#') {  // comment to end of line
                while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
                continue;
            }
            if (c == ' ' || c == '\t' || c == '\r' || (newlines && c == '\n')) ++pos_;
            else break;
        }
    }

    bool done() {
        skip_space();
        return pos_ >= text_.size();
    }
    char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
    std::size_t pos() const { return pos_; }

    bool accept(char c) {
        skip_space();
        if (peek() != c) return false;
        ++pos_;
        return true;
    }

    void expect(char c) {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }

    [[noreturn]] void fail(const std::string& what) const {
        std::string near = pos_ < text_.size() ? " near '" + std::string(text_.substr(pos_, 12)) + "'" : " at end of input";
        throw SyntaxError(what + near, pos_);
    }

    std::string ident() {
        skip_space();
        std::size_t start = pos_;
        if (pos_ < text_.size() && (std::isalpha(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
            ++pos_;
            while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) ++pos_;
        }
        if (start == pos_) fail("expected identifier");
        return std::string(text_.substr(start, pos_ - start));
    }

    // Dotted path or quoted string.
    std::string path() {
        skip_space();
        if (peek() == '"' || peek() == '\'') return string();
        std::string out = ident();
        while (peek() == '.') {
            ++pos_;
            out += "." + ident();
        }
        return out;
    }

    std::string string() {
        skip_space();
        char quote = peek();
        if (quote != '"' && quote != '\'') fail("expected string");
        ++pos_;
        std::string out;
        while (true) {
            if (pos_ >= text_.size()) fail("unterminated string");
            char c = text_[pos_++];
            if (c == quote) break;
            if (c != '\\') {
                out += c;
                continue;
            }
            if (pos_ >= text_.size()) fail("unterminated escape");
            char e = text_[pos_++];
            switch (e) {
            case 'n': out += '\n'; break;
            case 't': out += '\t'; break;
            case 'r': out += '\r'; break;
            case 'b': out += '\b'; break;
            case 'f': out += '\f'; break;
            case 'u': {
                if (pos_ + 4 > text_.size()) fail("bad unicode escape");
                unsigned cp = 0;
                auto [p, ec] = std::from_chars(text_.data() + pos_, text_.data() + pos_ + 4, cp, 16);
                if (ec != std::errc{} || p != text_.data() + pos_ + 4) fail("bad unicode escape");
                pos_ += 4;
                if (cp < 0x80) {
                    out += static_cast<char>(cp);
                } else if (cp < 0x800) {
                    out += static_cast<char>(0xC0 | (cp >> 6));
                    out += static_cast<char>(0x80 | (cp & 0x3F));
                } else {
                    out += static_cast<char>(0xE0 | (cp >> 12));
                    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
                    out += static_cast<char>(0x80 | (cp & 0x3F));
                }
                break;
            }
            default: out += e; break;  // \" \' \\ \/
            }
        }
        return out;
    }

    Scalar scalar() {
        skip_space();
        char c = peek();
        if (c == '"' || c == '\'') return string();
        if (c == '-' || c == '+' || std::isdigit(static_cast<unsigned char>(c))) return number();
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t at = pos_;
            std::string word = ident();
            if (word == "null" || word == "None") return Null{};
            if (word == "true" || word == "True") return true;
            if (word == "false" || word == "False") return false;
            pos_ = at;
            fail("unknown literal '" + word + "'");
        }
        fail("expected value");
    }

    Value value() {
        skip_space();
        if (peek() != '[') return Value(scalar());
        ++pos_;
        List items;
        if (!accept(']')) {
            do {
                skip_space();
                if (peek() == ']') break;  // trailing comma
                items.push_back(scalar());
            } while (accept(','));
            expect(']');
        }
        return Value(std::move(items));
    }

    ApiCall call() {
        ApiCall c;
        c.api_name = ident();
        expect('(');
        if (!accept(')')) {
            do {
                skip_space();
                if (peek() == ')') break;
                std::size_t at = pos_;
                std::string name = ident();
                expect('=');
                if (!c.args.emplace(name, value()).second) {
                    pos_ = at;
                    fail("duplicate argument " + name);
                }
            } while (accept(','));
            expect(')');
        }
        return c;
    }

private:
    Scalar number() {
        std::size_t start = pos_;
        if (peek() == '-' || peek() == '+') ++pos_;
        bool real = false;
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (std::isdigit(static_cast<unsigned char>(c))) {
                ++pos_;
            } else if (c == '.' || c == 'e' || c == 'E') {
                real = true;
                ++pos_;
                if ((c == 'e' || c == 'E') && (peek() == '-' || peek() == '+')) ++pos_;
            } else {
                break;
            }
        }
        std::string_view token = text_.substr(start, pos_ - start);
        if (!token.empty() && token.front() == '+') token.remove_prefix(1);
        if (real) {
            double d = 0;
            auto [p, ec] = std::from_chars(token.data(), token.data() + token.size(), d);
            if (ec != std::errc{} || p != token.data() + token.size()) {
                pos_ = start;
                fail("bad number");
            }
            return d;
        }
        std::int64_t i = 0;
        auto [p, ec] = std::from_chars(token.data(), token.data() + token.size(), i);
        if (ec != std::errc{} || p != token.data() + token.size()) {
            pos_ = start;
            fail("bad integer");
        }
        return i;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

void expect_end(Cursor& c) {
    if (!c.done()) c.fail("unexpected trailing text");
}

}  // namespace

Value parse_value(std::string_view text) {
    Cursor c(text);
    Value v = c.value();
    expect_end(c);
    return v;
}

ApiCall parse_call(std::string_view text) {
    Cursor c(text);
    ApiCall call = c.call();
    expect_end(c);
    return call;
}

std::vector<ApiCall> parse_calls(std::string_view text) {
    Cursor c(text);
    std::vector<ApiCall> calls;
    bool bracketed = c.accept('[');
    while (true) {
        if (bracketed && c.accept(']')) break;
        if (!bracketed && c.done()) break;
        calls.push_back(c.call());
        c.skip_space(false);
        // Separators are optional between calls on separate lines.
        if (!c.accept(',')) c.accept(';');
    }
    expect_end(c);
    return calls;
}

std::map<std::string, Value> parse_patch(std::string_view text) {
    Cursor c(text);
    c.expect('{');
    std::map<std::string, Value> patch;
    if (!c.accept('}')) {
        do {
            c.skip_space();
            if (c.peek() == '}') break;
            std::size_t at = c.pos();
            std::string path = c.path();
            c.expect(':');
            if (!patch.emplace(path, c.value()).second) throw SyntaxError("duplicate path " + path, at);
        } while (c.accept(','));
        c.expect('}');
    }
    expect_end(c);
    return patch;
}

std::vector<std::string> parse_names(std::string_view text) {
    Cursor c(text);
    c.expect('[');
    std::vector<std::string> names;
    if (!c.accept(']')) {
        do {
            c.skip_space();
            if (c.peek() == ']') break;
            names.push_back(c.path());
        } while (c.accept(','));
        c.expect(']');
    }
    expect_end(c);
    return names;
}

std::string format_call(const ApiCall& call) {
    std::string out = call.api_name + "(";
    bool first = true;
    for (const auto& [name, v] : call.args) {
        if (!first) out += ", ";
        first = false;
        out += name + "=" + render(v);
    }
    return out + ")";
}

std::string format_calls(const std::vector<ApiCall>& calls) {
    std::string out = "[";
    for (std::size_t i = 0; i < calls.size(); ++i) out += (i ? ", " : "") + format_call(calls[i]);
    return out + "]";
}

std::string format_patch(const std::map<std::string, Value>& patch) {
    std::string out = "{";
    bool first = true;
    for (const auto& [path, v] : patch) {
        if (!first) out += ", ";
        first = false;
        out += path + ": " + render(v);
    }
    return out + "}";
}

}  // namespace cabin
