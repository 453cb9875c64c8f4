#include <gtest/gtest.h>

#include "cabin/errors.hpp"
#include "cabin/state.hpp"
#include "cabin/value.hpp"

using namespace cabin;

TEST(Value, KindsAndFits) {
    EXPECT_EQ(Value().kind(), ValueKind::null);
    EXPECT_EQ(Value(true).kind(), ValueKind::boolean);
    EXPECT_EQ(Value(3).kind(), ValueKind::integer);
    EXPECT_EQ(Value(2.5).kind(), ValueKind::real);
    EXPECT_EQ(Value("x").kind(), ValueKind::string);
    EXPECT_EQ(Value(List{std::int64_t{1}, std::string("a")}).kind(), ValueKind::list);

    EXPECT_FALSE(Value(3).fits(TypeTag::real));  // widening is the attribute template's job
    EXPECT_FALSE(Value(2.5).fits(TypeTag::integer));
    EXPECT_FALSE(Value("x").fits(TypeTag::boolean));
    EXPECT_TRUE(Value().fits(TypeTag::string));
}

TEST(Value, IntegerAndRealAreDistinct) {
    EXPECT_NE(Value(20), Value(20.0));
    EXPECT_EQ(Value(20.0), Value(20.0));
}

TEST(Value, JsonRoundTrip) {
    for (const Value& v : {Value(), Value(false), Value(-7), Value(20.0), Value(0.1), Value("driver's seat"),
                           Value(List{std::string("a"), std::int64_t{2}, Null{}})}) {
        auto back = value_from_json(to_json(v));
        ASSERT_TRUE(back.has_value());
        EXPECT_EQ(*back, v) << render(v);
    }
    EXPECT_FALSE(value_from_json(nlohmann::json::object()).has_value());
    EXPECT_FALSE(value_from_json(nlohmann::json::parse("[[1]]")).has_value());
}

TEST(Value, RenderKeepsRealsDistinguishable) {
    EXPECT_EQ(render(Value(20.0)), "20.0");
    EXPECT_EQ(render(Value(20)), "20");
    EXPECT_EQ(render(Value("a\"b")), "\"a\\\"b\"");
}

TEST(Trend, Directions) {
    EXPECT_EQ(classify_trend(Value(50), Value(80)), TrendDirection::increase);
    EXPECT_EQ(classify_trend(Value(50), Value(10)), TrendDirection::decrease);
    EXPECT_EQ(classify_trend(Value(5.0), Value(5)), TrendDirection::maintain);
    // Neighbouring large integers stay apart.
    EXPECT_EQ(classify_trend(Value(std::int64_t{9007199254740993}), Value(std::int64_t{9007199254740992})),
              TrendDirection::decrease);
    EXPECT_THROW(classify_trend(Value("a"), Value(1)), std::invalid_argument);
}

namespace {

WorldSnapshot make(int volume, bool on, double temp) {
    WorldSnapshot s;
    s.environment.attributes["volume"] = {"volume", Value(volume), TypeTag::integer, ""};
    DeviceState ac{"airConditioner", {}};
    ac.attributes["is_on"] = {"is_on", Value(on), TypeTag::boolean, ""};
    ac.attributes["temperature"] = {"temperature", Value(temp), TypeTag::real, ""};
    s.devices.emplace("airConditioner", ac);
    return s;
}

}  // namespace

TEST(Diff, ChangedUnchangedAndTrends) {
    StateDiff d = diff_snapshots(make(50, false, 24.0), make(50, true, 20.0));
    EXPECT_EQ(d.changed_paths(), (std::vector<std::string>{"airConditioner.is_on", "airConditioner.temperature"}));
    EXPECT_EQ(d.unchanged, std::vector<std::string>{"environment.volume"});
    EXPECT_EQ(d.trends.at("airConditioner.temperature"), TrendDirection::decrease);
    EXPECT_EQ(d.trends.count("airConditioner.is_on"), 0u);
}

TEST(Diff, IdenticalSnapshotsAreEmpty) {
    EXPECT_TRUE(diff_snapshots(make(1, true, 20.0), make(1, true, 20.0)).empty());
}

TEST(Diff, DeviceSetMismatchThrows) {
    WorldSnapshot a = make(1, true, 20.0), b = a;
    b.devices.clear();
    EXPECT_THROW(diff_snapshots(a, b), SchemaError);
}

TEST(Paths, SplitAndJoin) {
    auto [dev, attr] = split_path("seat.driver.heating");
    EXPECT_EQ(dev, "seat");
    EXPECT_EQ(attr, "driver.heating");
    EXPECT_EQ(join_path("navigation", "route.preference"), "navigation.route.preference");
}
