#include <gtest/gtest.h>

#include "cabin/call_syntax.hpp"
#include "cabin/errors.hpp"

using namespace cabin;

TEST(CallSyntax, Values) {
    EXPECT_EQ(parse_value("42"), Value(42));
    EXPECT_EQ(parse_value("-3"), Value(-3));
    EXPECT_EQ(parse_value("20.5"), Value(20.5));
    EXPECT_EQ(parse_value("1e2"), Value(100.0));
    EXPECT_EQ(parse_value("true"), Value(true));
    EXPECT_EQ(parse_value("False"), Value(false));
    EXPECT_EQ(parse_value("None"), Value());
    EXPECT_EQ(parse_value("null"), Value());
    EXPECT_EQ(parse_value(R"("a\"b")"), Value("a\"b"));
    EXPECT_EQ(parse_value("'driver\\'s seat'"), Value("driver's seat"));
    EXPECT_EQ(parse_value(R"("é")"), Value("\xc3\xa9"));
    EXPECT_EQ(parse_value(R"([1, "x", null])"), Value(List{std::int64_t{1}, std::string("x"), Null{}}));
}

TEST(CallSyntax, Call) {
    auto c = parse_call(R"(navigation_route_start(destination="Shanghai", midway='Nanjing'))");
    EXPECT_EQ(c.api_name, "navigation_route_start");
    EXPECT_EQ(c.args.at("destination"), Value("Shanghai"));
    EXPECT_EQ(c.args.at("midway"), Value("Nanjing"));
    EXPECT_TRUE(parse_call("door_close()").args.empty());
    EXPECT_TRUE(parse_call("  door_close( )  ").args.empty());
}

TEST(CallSyntax, CallSequences) {
    auto calls = parse_calls("a_b(x=1); c_d()\n e_f(y=\"z\"),");
    ASSERT_EQ(calls.size(), 3u);
    EXPECT_EQ(calls[2].api_name, "e_f");
    EXPECT_EQ(parse_calls("[a_b(x=1), c_d()]").size(), 2u);
    EXPECT_EQ(parse_calls("# nothing\n").size(), 0u);
}

TEST(CallSyntax, Errors) {
    auto offset = [](auto fn) -> long {
        try {
            fn();
        } catch (const SyntaxError& e) {
            return static_cast<long>(e.position());
        }
        return -1;
    };
    EXPECT_EQ(offset([] { parse_call("door_close("); }), 11);
    EXPECT_EQ(offset([] { parse_call("a(x=1, x=2)"); }), 7);
    EXPECT_GE(offset([] { parse_call("a(x=)"); }), 0);
    EXPECT_GE(offset([] { parse_value("\"open"); }), 0);
    EXPECT_GE(offset([] { parse_call("(x=1)"); }), 0);
    EXPECT_GE(offset([] { parse_call("a(x=1) trailing"); }), 0);
    EXPECT_GE(offset([] { parse_value("[[1]]"); }), 0);
    EXPECT_GE(offset([] { parse_patch("{a.b: 1, a.b: 2}"); }), 0);
}

TEST(CallSyntax, Patch) {
    auto p = parse_patch(R"({environment.volume: 80, "navigation.destination": "Shanghai", seat.driver.heating: 2,})");
    ASSERT_EQ(p.size(), 3u);
    EXPECT_EQ(p.at("environment.volume"), Value(80));
    EXPECT_EQ(p.at("navigation.destination"), Value("Shanghai"));
    EXPECT_EQ(p.at("seat.driver.heating"), Value(2));
    EXPECT_TRUE(parse_patch("{}").empty());
}

TEST(CallSyntax, Names) {
    EXPECT_EQ(parse_names("[navigation, video]"), (std::vector<std::string>{"navigation", "video"}));
    EXPECT_EQ(parse_names(R"(["door"])"), std::vector<std::string>{"door"});
    EXPECT_TRUE(parse_names("[]").empty());
}

TEST(CallSyntax, FormatRoundTrip) {
    ApiCall c{"conversation_message_send", {{"content", Value("hi, \"you\"")}, {"contact", Value("Bob")}}};
    std::string text = format_call(c);
    EXPECT_EQ(text, R"(conversation_message_send(contact="Bob", content="hi, \"you\""))");
    EXPECT_EQ(parse_call(text), c);

    std::vector<ApiCall> calls{c, {"door_close", {}}, {"airconditioner_temperature_set", {{"value", Value(20.5)}}}};
    EXPECT_EQ(parse_calls(format_calls(calls)), calls);

    std::map<std::string, Value> patch{{"a.b", Value(1)}, {"c.d", Value()}, {"e.f", Value(List{std::string("x")})}};
    EXPECT_EQ(format_patch(patch), R"({a.b: 1, c.d: null, e.f: ["x"]})");
    EXPECT_EQ(parse_patch(format_patch(patch)), patch);
}
