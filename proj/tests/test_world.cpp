#include <gtest/gtest.h>

#include "cabin/errors.hpp"
#include "cabin/world.hpp"

using namespace cabin;

namespace {

World make_world(std::initializer_list<std::pair<const char*, const char*>> devices) {
    World w(builtin_registry());
    for (const auto& [id, preset] : devices) w.init_device(id, preset);
    return w;
}

ApiCall call(std::string name, std::map<std::string, Value> args = {}) { return {std::move(name), std::move(args)}; }

}  // namespace

TEST(World, InitDevicesAndPresets) {
    auto w = make_world({{"door", "locked_closed"}});
    EXPECT_TRUE(w.has_device("door"));
    EXPECT_EQ(w.get("door.is_locked"), Value(true));
    EXPECT_EQ(w.get("environment.volume"), Value(50));
    EXPECT_THROW(w.init_device("teleporter"), NotFoundError);
    EXPECT_THROW(w.init_device("door", "melted"), NotFoundError);
    EXPECT_THROW(w.get("door.nope"), SchemaError);
}

TEST(World, InvokeReportsTouchedPaths) {
    auto w = make_world({{"airConditioner", "off_default"}});
    auto r = w.invoke(call("airconditioner_switch", {{"on", true}}));
    ASSERT_TRUE(r.success) << r.message;
    EXPECT_EQ(r.touched_paths, std::vector<std::string>{"airConditioner.is_on"});
    EXPECT_EQ(r.message, "ok: airConditioner.is_on=true");
}

TEST(World, InvokeFailuresLeaveStateUntouched) {
    auto w = make_world({{"conversation", "default"}});
    auto before = w.snapshot();
    auto expect_fail = [&](const ApiCall& c, const std::string& msg) {
        auto r = w.invoke(c);
        EXPECT_FALSE(r.success);
        EXPECT_EQ(r.message, msg);
        EXPECT_TRUE(r.touched_paths.empty());
        EXPECT_EQ(w.snapshot(), before);
    };
    expect_fail(call("warp_drive_engage"), "unknown api: warp_drive_engage");
    expect_fail(call("door_open"), "device not active: door");
    expect_fail(call("conversation_phone_call"), "missing required argument: contact");
    expect_fail(call("conversation_phone_call", {{"contact", "Zed"}}), "contact not found");
    expect_fail(call("conversation_phone_call", {{"contact", 3}}), "wrong kind for contact: expected string");
    expect_fail(call("conversation_phone_call", {{"contact", "Bob"}, {"x", 1}}), "unknown argument: x");
    expect_fail(call("conversation_phone_hangup"), "no active call");
    expect_fail(call("conversation_soundVolume_set", {{"value", 150}}), "out of range: value=150");
    expect_fail(call("conversation_soundVolume_set"), "missing required argument: One of: value, degree");
}

TEST(World, ExclusiveParams) {
    auto w = make_world({{"conversation", "default"}});
    auto both = w.invoke(call("conversation_soundVolume_set", {{"value", 30}, {"degree", "high"}}));
    EXPECT_FALSE(both.success);
    EXPECT_EQ(both.message, "exclusive params: value, degree");

    auto by_value = w.invoke(call("conversation_soundVolume_set", {{"value", 30}}));
    ASSERT_TRUE(by_value.success);
    EXPECT_EQ(w.get("environment.volume"), Value(30));
    auto by_degree = w.invoke(call("conversation_soundVolume_set", {{"degree", "high"}}));
    ASSERT_TRUE(by_degree.success);
    EXPECT_EQ(w.get("environment.volume"), Value(75));
}

TEST(World, VolumeStepsClampThroughApis) {
    auto w = make_world({{"conversation", "default"}});
    w.invoke(call("conversation_soundVolume_increase", {{"value", 45}}));
    EXPECT_EQ(w.get("environment.volume"), Value(95));
    w.invoke(call("conversation_soundVolume_increase", {{"degree", "large"}}));
    EXPECT_EQ(w.get("environment.volume"), Value(100));
    w.invoke(call("conversation_soundVolume_decrease"));  // default step
    EXPECT_EQ(w.get("environment.volume"), Value(90));
}

TEST(World, SoundChannelTakeover) {
    auto w = make_world({{"music", "default"}, {"navigation", "idle"}, {"radio", "default"}});
    ASSERT_TRUE(w.invoke(call("music_play", {{"song", "Yellow"}})).success);
    EXPECT_EQ(w.get("environment.sound_channel"), Value("music"));

    auto r = w.invoke(call("navigation_route_start", {{"destination", "Shanghai"}}));
    ASSERT_TRUE(r.success);
    EXPECT_EQ(w.get("environment.sound_channel"), Value("navigation"));
    EXPECT_EQ(w.get("music.is_playing"), Value(false));
    // The displaced device's flag is part of what the call touched.
    EXPECT_NE(std::find(r.touched_paths.begin(), r.touched_paths.end(), "music.is_playing"), r.touched_paths.end());

    ASSERT_TRUE(w.invoke(call("navigation_route_stop")).success);
    EXPECT_EQ(w.get("environment.sound_channel"), Value("none"));
}

TEST(World, ChannelFlagSetterArbitrates) {
    auto w = make_world({{"music", "playing"}, {"radio", "default"}});
    EXPECT_EQ(w.get("environment.sound_channel"), Value("music"));
    w.set("radio.is_playing", Value(true));
    EXPECT_EQ(w.get("environment.sound_channel"), Value("radio"));
    EXPECT_EQ(w.get("music.is_playing"), Value(false));
    w.set("environment.sound_channel", Value("none"));
    EXPECT_EQ(w.get("radio.is_playing"), Value(false));
    // Assigning the channel directly switches the new owner's flag on.
    w.set("environment.sound_channel", Value("music"));
    EXPECT_EQ(w.get("music.is_playing"), Value(true));
}

TEST(World, SetterConstraints) {
    auto w = make_world({{"seat", "default"}});
    EXPECT_THROW(w.set("seat.driver.heating", Value(7)), ConstraintError);
    EXPECT_THROW(w.set("seat.driver.heating", Value("hot")), ConstraintError);
    EXPECT_THROW(w.set("seat.nothing", Value(1)), SchemaError);
    w.set("seat.driver.heating", Value(3));
    EXPECT_EQ(w.get("seat.driver.heating"), Value(3));
    EXPECT_TRUE(w.is_patchable("seat.driver.heating"));
}

TEST(World, QueryHasPayloadAndNoEffects) {
    auto w = make_world({{"conversation", "default"}});
    auto before = w.snapshot();
    auto r = w.invoke(call("conversation_call_miss_view"));
    ASSERT_TRUE(r.success);
    ASSERT_TRUE(r.payload.has_value());
    EXPECT_TRUE(r.touched_paths.empty());
    EXPECT_EQ(w.snapshot(), before);
}

TEST(World, DiscoveryCalls) {
    auto w = make_world({});
    auto modules = w.invoke(call(std::string(kSearchModule)));
    ASSERT_TRUE(modules.success);
    EXPECT_EQ(modules.payload->size(), 12u);
    auto apis = w.invoke(call(std::string(kSearchApi), {{"device", "conversation"}}));
    ASSERT_TRUE(apis.success);
    EXPECT_EQ(apis.payload->size(), 15u);
    EXPECT_FALSE(w.invoke(call(std::string(kSearchApi), {{"device", "zeppelin"}})).success);
}

TEST(World, ProjectionKeepsEnvironment) {
    auto w = make_world({{"door", "default"}, {"music", "default"}});
    auto p = w.project({"door"});
    EXPECT_EQ(p.device_ids(), std::vector<std::string>{"door"});
    EXPECT_EQ(p.environment, w.environment_state());
    EXPECT_THROW(w.project({"wiper"}), NotFoundError);
}
