#include <gtest/gtest.h>

#include <algorithm>

#include "cabin/errors.hpp"
#include "cabin/registry.hpp"

using namespace cabin;

TEST(Registry, ShipsTwelveDevices) {
    auto reg = builtin_registry();
    EXPECT_EQ(reg->device_ids().size(), 12u);
    EXPECT_EQ(reg->device_ids().front(), "environment");
    for (const char* id : {"navigation", "video", "music", "airConditioner", "door", "conversation", "radio",
                           "ambientLight", "seat", "window", "wiper"})
        EXPECT_NE(reg->find_device(id), nullptr) << id;
}

TEST(Registry, ConversationSurface) {
    const auto& apis = builtin_registry()->find_device("conversation")->apis;
    std::vector<std::string> names;
    for (const auto& a : apis) names.push_back(a.api_name);
    std::vector<std::string> expected{
        "conversation_soundVolume_increase", "conversation_soundVolume_decrease", "conversation_soundVolume_set",
        "conversation_phone_call", "conversation_phone_redial", "conversation_phone_answer",
        "conversation_phone_hangup", "conversation_message_send", "conversation_message_view",
        "conversation_contact_view", "conversation_call_miss_view", "conversation_call_record_view",
        "conversation_contact_hag_view", "conversation_call_handsFree_switch", "conversation_contact_delete"};
    EXPECT_EQ(names, expected);
}

TEST(Registry, RequiredTextAndExclusiveGroups) {
    auto reg = builtin_registry();
    const ApiSpec* set = reg->find_api("conversation_soundVolume_set");
    ASSERT_NE(set, nullptr);
    EXPECT_EQ(set->required_text(), "One of: value, degree");
    EXPECT_EQ(set->param("value")->exclusive_group, set->param("degree")->exclusive_group);
    EXPECT_EQ(reg->find_api("conversation_phone_call")->required_text(), "{contact}");
    EXPECT_EQ(reg->find_api("conversation_phone_hangup")->required_text(), "None");
    EXPECT_TRUE(reg->find_api("conversation_phone_call")->param("contact")->required);
    EXPECT_TRUE(reg->find_api("conversation_contact_view")->is_query());
}

TEST(Registry, PatchableIsDerivedFromSetters) {
    auto reg = builtin_registry();
    EXPECT_TRUE(reg->attribute("environment.volume")->patchable);
    EXPECT_TRUE(reg->attribute("music.is_playing")->patchable);
    EXPECT_TRUE(reg->attribute("seat.passenger.heating")->patchable);  // via "{position}.heating"
    EXPECT_FALSE(reg->attribute("conversation.missed_calls")->patchable);  // query-only
}

TEST(Registry, DefaultPresetAdded) {
    auto reg = builtin_registry();
    for (const auto& d : reg->devices()) EXPECT_NE(d.preset("default"), nullptr) << d.device_id;
}

namespace {

std::string minimal(const std::string& apis, const std::string& attrs = R"([{"name": "level", "type": "integer", "default": 1, "min": 0, "max": 5}])") {
    return R"({"device": "lamp", "description": "d", "domain": "light", "attributes": )" + attrs + R"(, "apis": )" + apis + "}";
}

}  // namespace

TEST(RegistryLoader, AcceptsMinimalDevice) {
    Registry reg;
    load_definitions_into(reg, minimal(R"([{"name": "lamp_level_set", "params": [{"name": "v", "kind": "integer"}],
        "required": [["v"]], "effects": [{"op": "set", "target": "level", "from": ["v"]}]}])"));
    EXPECT_NE(reg.find_api("lamp_level_set"), nullptr);
    EXPECT_TRUE(reg.attribute("lamp.level")->patchable);
}

TEST(RegistryLoader, RejectsInconsistentDefinitions) {
    auto rejects = [](const std::string& doc) {
        Registry reg;
        EXPECT_THROW(load_definitions_into(reg, doc), SchemaError) << doc;
    };
    // api name not prefixed by the device id
    rejects(minimal(R"([{"name": "other_set", "effects": []}])"));
    // effect target not an attribute
    rejects(minimal(R"([{"name": "lamp_x", "effects": [{"op": "set", "target": "nope", "value": 1}]}])"));
    // enum param without values
    rejects(minimal(R"([{"name": "lamp_x", "params": [{"name": "e", "kind": "enum"}], "effects": []}])"));
    // exclusive group with one member
    rejects(minimal(R"([{"name": "lamp_x", "params": [{"name": "a", "kind": "integer", "exclusive": "g"}], "effects": []}])"));
    // required param that is not declared
    rejects(minimal(R"([{"name": "lamp_x", "required": [["ghost"]], "effects": []}])"));
    // default outside range
    rejects(minimal("[]", R"([{"name": "level", "type": "integer", "default": 9, "min": 0, "max": 5}])"));
    // nested name clashing with a leaf
    rejects(minimal("[]", R"([{"name": "a", "type": "integer", "default": 0}, {"name": "a.b", "type": "integer", "default": 0}])"));
}

TEST(RegistryLoader, MalformedJsonIsSyntaxError) {
    Registry reg;
    EXPECT_THROW(load_definitions_into(reg, "{\"device\": "), SyntaxError);
}
