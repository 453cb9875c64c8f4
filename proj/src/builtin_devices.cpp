#include "cabin/registry.hpp"

namespace cabin {

// Shipped cockpit. Same document syntax accepted by load_definitions(), so user files can
// extend or replace it. Devices beyond navigation/video/airConditioner/door/conversation/music
// are authored for this project in the same style.
std::string_view builtin_definitions_document() {
    static constexpr std::string_view doc = R"json({
"devices": [
{
  "device": "environment",
  "description": "Cabin-wide shared settings: volume, sound channel, temperature, speaker zone, units, clock",
  "domain": "system",
  "apis": [
    {"name": "environment_speaker_set", "description": "Select the speaker zone for voice output",
     "params": [{"name": "zone", "kind": "enum", "values": ["driver's seat", "passenger seat", "rear seats", "all seats"]}],
     "required": [["zone"]],
     "effects": [{"op": "set", "target": "environment.speaker", "from": ["zone"]}]},
    {"name": "environment_unitSystem_set", "description": "Switch display units",
     "params": [{"name": "system", "kind": "enum", "values": ["metric", "imperial"]}],
     "required": [["system"]],
     "effects": [{"op": "set", "target": "environment.unit_system", "from": ["system"]}]},
    {"name": "environment_timeFormat_set", "description": "Switch the clock between 12h and 24h",
     "params": [{"name": "format", "kind": "enum", "values": ["12h", "24h"]}],
     "required": [["format"]],
     "effects": [{"op": "set", "target": "environment.time_format", "from": ["format"]}]}
  ]
},
{
  "device": "navigation",
  "description": "Route guidance with destination, waypoint and voice prompts",
  "domain": "touch_control",
  "channel_flag": "is_active",
  "attributes": [
    {"name": "is_active", "type": "boolean", "default": false, "description": "Whether route guidance is running (holds the sound channel)"},
    {"name": "destination", "type": "string", "default": null, "nullable": true, "description": "Final destination"},
    {"name": "midway", "type": "string", "default": null, "nullable": true, "description": "Waypoint on the way to the destination"},
    {"name": "route.preference", "type": "string", "default": "fastest", "allowed": ["fastest", "shortest", "no_highway", "avoid_tolls"], "description": "Route planning preference"}
  ],
  "presets": {
    "idle": {"is_active": false, "destination": null, "midway": null},
    "guiding_beijing": {"is_active": true, "destination": "Beijing"}
  },
  "apis": [
    {"name": "navigation_route_start", "description": "Start guidance to a destination, optionally via a waypoint",
     "params": [{"name": "destination", "kind": "string"}, {"name": "midway", "kind": "string"}],
     "required": [["destination"]],
     "effects": [
       {"op": "set", "target": "destination", "from": ["destination"]},
       {"op": "set", "target": "midway", "from": ["midway"], "value": null},
       {"op": "set", "target": "is_active", "value": true}]},
    {"name": "navigation_route_stop", "description": "Stop route guidance",
     "effects": [
       {"op": "require", "target": "is_active", "check": "equals", "value": true, "message": "navigation is not active"},
       {"op": "set", "target": "is_active", "value": false},
       {"op": "set", "target": "destination", "value": null},
       {"op": "set", "target": "midway", "value": null}]},
    {"name": "navigation_midway_set", "description": "Add or replace the waypoint of the active route",
     "params": [{"name": "midway", "kind": "string"}],
     "required": [["midway"]],
     "effects": [
       {"op": "require", "target": "is_active", "check": "equals", "value": true, "message": "navigation is not active"},
       {"op": "set", "target": "midway", "from": ["midway"]}]},
    {"name": "navigation_preference_set", "description": "Set the route planning preference",
     "params": [{"name": "preference", "kind": "enum", "values": ["fastest", "shortest", "no_highway", "avoid_tolls"]}],
     "required": [["preference"]],
     "effects": [{"op": "set", "target": "route.preference", "from": ["preference"]}]},
    {"name": "navigation_soundVolume_set", "description": "Set volume (0--100); must provide either value or degree",
     "params": [
       {"name": "value", "kind": "integer", "min": 0, "max": 100, "exclusive": "amount"},
       {"name": "degree", "kind": "enum", "values": ["max", "high", "medium", "low", "min"], "degrees": "level", "exclusive": "amount"}],
     "required": [["value"], ["degree"]],
     "effects": [{"op": "set", "target": "environment.volume", "from": ["value", "degree"]}]},
    {"name": "navigation_status_view", "description": "Show the current route",
     "effects": [{"op": "query", "attrs": ["is_active", "destination", "midway", "route.preference"]}]}
  ]
},
{
  "device": "video",
  "description": "In-cabin video player",
  "domain": "multimedia",
  "channel_flag": "is_playing",
  "attributes": [
    {"name": "is_playing", "type": "boolean", "default": false, "description": "Whether a video is playing (holds the sound channel)"},
    {"name": "quality", "type": "string", "default": "1080P", "allowed": ["480P", "720P", "1080P", "4K"], "description": "Playback resolution"},
    {"name": "current_video", "type": "string", "default": null, "nullable": true, "description": "Title of the loaded video"}
  ],
  "presets": {
    "idle_1080p": {"is_playing": false, "quality": "1080P", "current_video": null},
    "playing_movie": {"is_playing": true, "current_video": "Interstellar"}
  },
  "apis": [
    {"name": "video_play", "description": "Play a video by title",
     "params": [{"name": "title", "kind": "string"}],
     "required": [["title"]],
     "effects": [
       {"op": "set", "target": "current_video", "from": ["title"]},
       {"op": "set", "target": "is_playing", "value": true}]},
    {"name": "video_pause", "description": "Pause playback",
     "effects": [
       {"op": "require", "target": "is_playing", "check": "equals", "value": true, "message": "no video is playing"},
       {"op": "set", "target": "is_playing", "value": false}]},
    {"name": "video_resume", "description": "Resume the loaded video",
     "effects": [
       {"op": "require", "target": "current_video", "check": "not_equals", "value": null, "message": "no video selected"},
       {"op": "set", "target": "is_playing", "value": true}]},
    {"name": "video_stop", "description": "Stop playback and unload the video",
     "effects": [
       {"op": "set", "target": "is_playing", "value": false},
       {"op": "set", "target": "current_video", "value": null}]},
    {"name": "video_quality_set", "description": "Set playback resolution",
     "params": [{"name": "quality", "kind": "enum", "values": ["480P", "720P", "1080P", "4K"]}],
     "required": [["quality"]],
     "effects": [{"op": "set", "target": "quality", "from": ["quality"]}]}
  ]
},
{
  "device": "music",
  "description": "Music player with favourites",
  "domain": "multimedia",
  "channel_flag": "is_playing",
  "attributes": [
    {"name": "is_playing", "type": "boolean", "default": false, "description": "Whether music is playing (holds the sound channel)"},
    {"name": "current_song", "type": "string", "default": null, "nullable": true, "description": "Loaded song"},
    {"name": "play_mode", "type": "string", "default": "sequential", "allowed": ["sequential", "shuffle", "repeat_one"], "description": "Playlist order"},
    {"name": "favorites", "type": "list", "default": ["Yellow", "Viva la Vida"], "description": "Favourite songs"}
  ],
  "presets": {
    "playing": {"is_playing": true, "current_song": "Yellow"},
    "paused": {"is_playing": false, "current_song": "Yellow"}
  },
  "apis": [
    {"name": "music_play", "description": "Play a song by title",
     "params": [{"name": "song", "kind": "string"}],
     "required": [["song"]],
     "effects": [
       {"op": "set", "target": "current_song", "from": ["song"]},
       {"op": "set", "target": "is_playing", "value": true}]},
    {"name": "music_pause", "description": "Pause music",
     "effects": [
       {"op": "require", "target": "is_playing", "check": "equals", "value": true, "message": "music is not playing"},
       {"op": "set", "target": "is_playing", "value": false}]},
    {"name": "music_resume", "description": "Resume the loaded song",
     "effects": [
       {"op": "require", "target": "current_song", "check": "not_equals", "value": null, "message": "no song selected"},
       {"op": "set", "target": "is_playing", "value": true}]},
    {"name": "music_playMode_set", "description": "Set playlist order",
     "params": [{"name": "mode", "kind": "enum", "values": ["sequential", "shuffle", "repeat_one"]}],
     "required": [["mode"]],
     "effects": [{"op": "set", "target": "play_mode", "from": ["mode"]}]},
    {"name": "music_favorite_add", "description": "Add a song to favourites",
     "params": [{"name": "song", "kind": "string"}],
     "required": [["song"]],
     "effects": [
       {"op": "require", "target": "favorites", "check": "not_contains", "from": ["song"], "message": "song is already a favourite"},
       {"op": "append", "target": "favorites", "from": ["song"]}]},
    {"name": "music_favorite_view", "description": "List favourite songs",
     "effects": [{"op": "query", "attrs": ["favorites"]}]},
    {"name": "music_soundVolume_increase", "description": "Increase volume (0--100); use value or degree",
     "params": [
       {"name": "value", "kind": "integer", "min": 0, "max": 100, "exclusive": "amount"},
       {"name": "degree", "kind": "enum", "values": ["large", "little", "tiny"], "degrees": "step", "exclusive": "amount"}],
     "effects": [{"op": "increase", "target": "environment.volume", "from": ["value", "degree"], "value": 10}]},
    {"name": "music_soundVolume_decrease", "description": "Decrease volume (0--100); use value or degree",
     "params": [
       {"name": "value", "kind": "integer", "min": 0, "max": 100, "exclusive": "amount"},
       {"name": "degree", "kind": "enum", "values": ["large", "little", "tiny"], "degrees": "step", "exclusive": "amount"}],
     "effects": [{"op": "decrease", "target": "environment.volume", "from": ["value", "degree"], "value": 10}]}
  ]
},
{
  "device": "radio",
  "description": "FM radio tuner",
  "domain": "multimedia",
  "channel_flag": "is_playing",
  "attributes": [
    {"name": "is_playing", "type": "boolean", "default": false, "description": "Whether the radio is on (holds the sound channel)"},
    {"name": "frequency", "type": "real", "default": 97.4, "min": 87.5, "max": 108.0, "description": "Tuned FM frequency in MHz"}
  ],
  "presets": {
    "playing": {"is_playing": true}
  },
  "apis": [
    {"name": "radio_play", "description": "Turn the radio on at the tuned frequency",
     "effects": [{"op": "set", "target": "is_playing", "value": true}]},
    {"name": "radio_stop", "description": "Turn the radio off",
     "effects": [
       {"op": "require", "target": "is_playing", "check": "equals", "value": true, "message": "radio is not playing"},
       {"op": "set", "target": "is_playing", "value": false}]},
    {"name": "radio_frequency_set", "description": "Tune to a frequency (87.5--108.0 MHz)",
     "params": [{"name": "value", "kind": "real", "min": 87.5, "max": 108.0}],
     "required": [["value"]],
     "effects": [{"op": "set", "target": "frequency", "from": ["value"]}]},
    {"name": "radio_soundVolume_set", "description": "Set volume (0--100); must provide either value or degree",
     "params": [
       {"name": "value", "kind": "integer", "min": 0, "max": 100, "exclusive": "amount"},
       {"name": "degree", "kind": "enum", "values": ["max", "high", "medium", "low", "min"], "degrees": "level", "exclusive": "amount"}],
     "required": [["value"], ["degree"]],
     "effects": [{"op": "set", "target": "environment.volume", "from": ["value", "degree"]}]}
  ]
},
{
  "device": "conversation",
  "description": "Phone calls, SMS and contacts",
  "domain": "touch_control",
  "channel_flag": "in_call",
  "attributes": [
    {"name": "in_call", "type": "boolean", "default": false, "description": "Whether a call is in progress (holds the sound channel)"},
    {"name": "active_contact", "type": "string", "default": null, "nullable": true, "description": "Party of the current call"},
    {"name": "incoming_call", "type": "string", "default": null, "nullable": true, "description": "Caller waiting to be answered"},
    {"name": "last_dialed", "type": "string", "default": null, "nullable": true, "description": "Most recently dialed contact"},
    {"name": "hands_free", "type": "boolean", "default": false, "description": "Hands-free mode"},
    {"name": "contacts", "type": "list", "default": ["Alice", "Bob", "Carol", "David"], "description": "Address book"},
    {"name": "messages", "type": "list", "default": ["from Bob: running late"], "description": "SMS history"},
    {"name": "call_records", "type": "list", "default": ["Bob"], "description": "Call history"},
    {"name": "missed_calls", "type": "list", "default": ["Carol"], "description": "Missed calls"}
  ],
  "presets": {
    "incoming_alice": {"incoming_call": "Alice"},
    "calling_bob": {"in_call": true, "active_contact": "Bob", "last_dialed": "Bob"}
  },
  "apis": [
    {"name": "conversation_soundVolume_increase", "description": "Increase volume (0--100); use value or degree",
     "params": [
       {"name": "value", "kind": "integer", "min": 0, "max": 100, "exclusive": "amount", "description": "numeric increase; exclusive with degree"},
       {"name": "degree", "kind": "enum", "values": ["large", "little", "tiny"], "degrees": "step", "exclusive": "amount"}],
     "effects": [{"op": "increase", "target": "environment.volume", "from": ["value", "degree"], "value": 10}]},
    {"name": "conversation_soundVolume_decrease", "description": "Decrease volume (0--100); use value or degree",
     "params": [
       {"name": "value", "kind": "integer", "min": 0, "max": 100, "exclusive": "amount", "description": "numeric decrease; exclusive with degree"},
       {"name": "degree", "kind": "enum", "values": ["large", "little", "tiny"], "degrees": "step", "exclusive": "amount"}],
     "effects": [{"op": "decrease", "target": "environment.volume", "from": ["value", "degree"], "value": 10}]},
    {"name": "conversation_soundVolume_set", "description": "Set volume (0--100); must provide either value or degree",
     "params": [
       {"name": "value", "kind": "integer", "min": 0, "max": 100, "exclusive": "amount"},
       {"name": "degree", "kind": "enum", "values": ["max", "high", "medium", "low", "min"], "degrees": "level", "exclusive": "amount"}],
     "required": [["value"], ["degree"]],
     "effects": [{"op": "set", "target": "environment.volume", "from": ["value", "degree"]}]},
    {"name": "conversation_phone_call", "description": "Make a phone call",
     "params": [{"name": "contact", "kind": "string"}],
     "required": [["contact"]],
     "effects": [
       {"op": "require", "target": "contacts", "check": "contains", "from": ["contact"], "message": "contact not found"},
       {"op": "set", "target": "active_contact", "from": ["contact"]},
       {"op": "set", "target": "last_dialed", "from": ["contact"]},
       {"op": "append", "target": "call_records", "from": ["contact"]},
       {"op": "set", "target": "in_call", "value": true}]},
    {"name": "conversation_phone_redial", "description": "Redial phone",
     "effects": [
       {"op": "require", "target": "last_dialed", "check": "not_equals", "value": null, "message": "nothing to redial"},
       {"op": "set", "target": "active_contact", "from_attr": "last_dialed"},
       {"op": "append", "target": "call_records", "from_attr": "last_dialed"},
       {"op": "set", "target": "in_call", "value": true}]},
    {"name": "conversation_phone_answer", "description": "Answer phone",
     "effects": [
       {"op": "require", "target": "incoming_call", "check": "not_equals", "value": null, "message": "no incoming call"},
       {"op": "set", "target": "active_contact", "from_attr": "incoming_call"},
       {"op": "append", "target": "call_records", "from_attr": "incoming_call"},
       {"op": "set", "target": "incoming_call", "value": null},
       {"op": "set", "target": "in_call", "value": true}]},
    {"name": "conversation_phone_hangup", "description": "Hang up phone",
     "effects": [
       {"op": "require", "target": "in_call", "check": "equals", "value": true, "message": "no active call"},
       {"op": "set", "target": "in_call", "value": false},
       {"op": "set", "target": "active_contact", "value": null}]},
    {"name": "conversation_message_send", "description": "Send SMS",
     "params": [{"name": "contact", "kind": "string"}, {"name": "content", "kind": "string"}],
     "required": [["contact"]],
     "effects": [
       {"op": "require", "target": "contacts", "check": "contains", "from": ["contact"], "message": "contact not found"},
       {"op": "append", "target": "messages", "format": "to {contact}: {content}"}]},
    {"name": "conversation_message_view", "description": "View SMS",
     "params": [{"name": "contact", "kind": "string"}],
     "effects": [{"op": "query", "attrs": ["messages"], "filter_param": "contact"}]},
    {"name": "conversation_contact_view", "description": "Find contact",
     "params": [{"name": "contact", "kind": "string"}],
     "required": [["contact"]],
     "effects": [{"op": "query", "attrs": ["contacts"], "filter_param": "contact"}]},
    {"name": "conversation_call_miss_view", "description": "View missed calls",
     "effects": [{"op": "query", "attrs": ["missed_calls"]}]},
    {"name": "conversation_call_record_view", "description": "View call history",
     "effects": [{"op": "query", "attrs": ["call_records"]}]},
    {"name": "conversation_contact_hag_view", "description": "Query user's contact list",
     "effects": [{"op": "query", "attrs": ["contacts"]}]},
    {"name": "conversation_call_handsFree_switch", "description": "Hands-free switch",
     "params": [{"name": "switch", "kind": "boolean"}],
     "required": [["switch"]],
     "effects": [{"op": "set", "target": "hands_free", "from": ["switch"]}]},
    {"name": "conversation_contact_delete", "description": "Delete contact",
     "params": [{"name": "contact", "kind": "string"}],
     "required": [["contact"]],
     "effects": [
       {"op": "require", "target": "contacts", "check": "contains", "from": ["contact"], "message": "contact not found"},
       {"op": "remove", "target": "contacts", "from": ["contact"]}]}
  ]
},
{
  "device": "airConditioner",
  "description": "Climate control",
  "domain": "car_control",
  "attributes": [
    {"name": "is_on", "type": "boolean", "default": false, "description": "Power state"},
    {"name": "temperature", "type": "real", "default": 24.0, "min": 16.0, "max": 32.0, "description": "Target temperature in degrees Celsius"},
    {"name": "fan_speed", "type": "integer", "default": 3, "min": 1, "max": 7, "description": "Fan level"},
    {"name": "mode", "type": "string", "default": "auto", "allowed": ["auto", "cool", "heat", "ventilate"], "description": "Operating mode"}
  ],
  "presets": {
    "off_default": {"is_on": false},
    "cooling": {"is_on": true, "mode": "cool", "temperature": 20.0}
  },
  "apis": [
    {"name": "airconditioner_switch", "description": "Turn the air conditioner on or off",
     "params": [{"name": "on", "kind": "boolean"}],
     "required": [["on"]],
     "effects": [{"op": "set", "target": "is_on", "from": ["on"]}]},
    {"name": "airconditioner_temperature_set", "description": "Set target temperature (16--32)",
     "params": [{"name": "value", "kind": "real", "min": 16, "max": 32}],
     "required": [["value"]],
     "effects": [
       {"op": "set", "target": "temperature", "from": ["value"]},
       {"op": "set", "target": "environment.temperature", "from_attr": "temperature"}]},
    {"name": "airconditioner_temperature_increase", "description": "Raise target temperature (default 1 degree)",
     "params": [{"name": "value", "kind": "real", "min": 0, "max": 16}],
     "effects": [
       {"op": "increase", "target": "temperature", "from": ["value"], "value": 1.0},
       {"op": "set", "target": "environment.temperature", "from_attr": "temperature"}]},
    {"name": "airconditioner_temperature_decrease", "description": "Lower target temperature (default 1 degree)",
     "params": [{"name": "value", "kind": "real", "min": 0, "max": 16}],
     "effects": [
       {"op": "decrease", "target": "temperature", "from": ["value"], "value": 1.0},
       {"op": "set", "target": "environment.temperature", "from_attr": "temperature"}]},
    {"name": "airconditioner_fanSpeed_set", "description": "Set fan level (1--7)",
     "params": [{"name": "value", "kind": "integer", "min": 1, "max": 7}],
     "required": [["value"]],
     "effects": [{"op": "set", "target": "fan_speed", "from": ["value"]}]},
    {"name": "airconditioner_mode_set", "description": "Set operating mode",
     "params": [{"name": "mode", "kind": "enum", "values": ["auto", "cool", "heat", "ventilate"]}],
     "required": [["mode"]],
     "effects": [{"op": "set", "target": "mode", "from": ["mode"]}]}
  ]
},
{
  "device": "door",
  "description": "Driver door lock and latch",
  "domain": "car_control",
  "attributes": [
    {"name": "is_locked", "type": "boolean", "default": true, "description": "Lock state"},
    {"name": "status", "type": "string", "default": "closed", "allowed": ["open", "closed"], "description": "Latch state"}
  ],
  "presets": {
    "locked_closed": {"is_locked": true, "status": "closed"},
    "open_unlocked": {"is_locked": false, "status": "open"}
  },
  "apis": [
    {"name": "door_lock_switch", "description": "Lock or unlock the door",
     "params": [{"name": "switch", "kind": "boolean"}],
     "required": [["switch"]],
     "effects": [{"op": "set", "target": "is_locked", "from": ["switch"]}]},
    {"name": "door_open", "description": "Open the door",
     "effects": [
       {"op": "require", "target": "is_locked", "check": "equals", "value": false, "message": "door is locked"},
       {"op": "set", "target": "status", "value": "open"}]},
    {"name": "door_close", "description": "Close the door",
     "effects": [{"op": "set", "target": "status", "value": "closed"}]},
    {"name": "door_status_view", "description": "Show lock and latch state",
     "effects": [{"op": "query", "attrs": ["is_locked", "status"]}]}
  ]
},
{
  "device": "ambientLight",
  "description": "Interior ambient lighting",
  "domain": "light",
  "attributes": [
    {"name": "is_on", "type": "boolean", "default": false, "description": "Power state"},
    {"name": "color", "type": "string", "default": "white", "allowed": ["white", "red", "orange", "yellow", "green", "blue", "purple"], "description": "Light colour"},
    {"name": "brightness", "type": "integer", "default": 50, "min": 0, "max": 100, "description": "Brightness percentage"},
    {"name": "mode", "type": "string", "default": "static", "allowed": ["static", "breathing", "music_rhythm"], "description": "Lighting effect"}
  ],
  "presets": {
    "on_blue": {"is_on": true, "color": "blue"}
  },
  "apis": [
    {"name": "ambientLight_switch", "description": "Turn ambient light on or off",
     "params": [{"name": "switch", "kind": "boolean"}],
     "required": [["switch"]],
     "effects": [{"op": "set", "target": "is_on", "from": ["switch"]}]},
    {"name": "ambientLight_color_set", "description": "Set light colour",
     "params": [{"name": "color", "kind": "enum", "values": ["white", "red", "orange", "yellow", "green", "blue", "purple"]}],
     "required": [["color"]],
     "effects": [{"op": "set", "target": "color", "from": ["color"]}]},
    {"name": "ambientLight_brightness_set", "description": "Set brightness (0--100); must provide either value or degree",
     "params": [
       {"name": "value", "kind": "integer", "min": 0, "max": 100, "exclusive": "amount"},
       {"name": "degree", "kind": "enum", "values": ["max", "high", "medium", "low", "min"], "degrees": "level", "exclusive": "amount"}],
     "required": [["value"], ["degree"]],
     "effects": [{"op": "set", "target": "brightness", "from": ["value", "degree"]}]},
    {"name": "ambientLight_brightness_increase", "description": "Increase brightness (0--100); use value or degree",
     "params": [
       {"name": "value", "kind": "integer", "min": 0, "max": 100, "exclusive": "amount"},
       {"name": "degree", "kind": "enum", "values": ["large", "little", "tiny"], "degrees": "step", "exclusive": "amount"}],
     "effects": [{"op": "increase", "target": "brightness", "from": ["value", "degree"], "value": 10}]},
    {"name": "ambientLight_brightness_decrease", "description": "Decrease brightness (0--100); use value or degree",
     "params": [
       {"name": "value", "kind": "integer", "min": 0, "max": 100, "exclusive": "amount"},
       {"name": "degree", "kind": "enum", "values": ["large", "little", "tiny"], "degrees": "step", "exclusive": "amount"}],
     "effects": [{"op": "decrease", "target": "brightness", "from": ["value", "degree"], "value": 10}]},
    {"name": "ambientLight_mode_set", "description": "Set lighting effect",
     "params": [{"name": "mode", "kind": "enum", "values": ["static", "breathing", "music_rhythm"]}],
     "required": [["mode"]],
     "effects": [{"op": "set", "target": "mode", "from": ["mode"]}]}
  ]
},
{
  "device": "seat",
  "description": "Front seat heating, ventilation and massage",
  "domain": "car_control",
  "attributes": [
    {"name": "driver.heating", "type": "integer", "default": 0, "min": 0, "max": 3, "description": "Driver seat heating level"},
    {"name": "driver.ventilation", "type": "integer", "default": 0, "min": 0, "max": 3, "description": "Driver seat ventilation level"},
    {"name": "driver.massage", "type": "boolean", "default": false, "description": "Driver seat massage"},
    {"name": "passenger.heating", "type": "integer", "default": 0, "min": 0, "max": 3, "description": "Passenger seat heating level"},
    {"name": "passenger.ventilation", "type": "integer", "default": 0, "min": 0, "max": 3, "description": "Passenger seat ventilation level"}
  ],
  "presets": {
    "winter": {"driver.heating": 2, "passenger.heating": 1}
  },
  "apis": [
    {"name": "seat_heating_set", "description": "Set seat heating level (0--3)",
     "params": [{"name": "position", "kind": "enum", "values": ["driver", "passenger"]},
                {"name": "level", "kind": "integer", "min": 0, "max": 3}],
     "required": [["position", "level"]],
     "effects": [{"op": "set", "target": "{position}.heating", "from": ["level"]}]},
    {"name": "seat_ventilation_set", "description": "Set seat ventilation level (0--3)",
     "params": [{"name": "position", "kind": "enum", "values": ["driver", "passenger"]},
                {"name": "level", "kind": "integer", "min": 0, "max": 3}],
     "required": [["position", "level"]],
     "effects": [{"op": "set", "target": "{position}.ventilation", "from": ["level"]}]},
    {"name": "seat_massage_switch", "description": "Driver seat massage on/off",
     "params": [{"name": "switch", "kind": "boolean"}],
     "required": [["switch"]],
     "effects": [{"op": "set", "target": "driver.massage", "from": ["switch"]}]}
  ]
},
{
  "device": "window",
  "description": "Power windows",
  "domain": "car_control",
  "attributes": [
    {"name": "front_left.openness", "type": "integer", "default": 0, "min": 0, "max": 100, "description": "Front left window opening percentage"},
    {"name": "front_right.openness", "type": "integer", "default": 0, "min": 0, "max": 100, "description": "Front right window opening percentage"},
    {"name": "rear_left.openness", "type": "integer", "default": 0, "min": 0, "max": 100, "description": "Rear left window opening percentage"},
    {"name": "rear_right.openness", "type": "integer", "default": 0, "min": 0, "max": 100, "description": "Rear right window opening percentage"},
    {"name": "child_lock", "type": "boolean", "default": false, "description": "Rear window child lock"}
  ],
  "presets": {
    "all_half_open": {"front_left.openness": 50, "front_right.openness": 50, "rear_left.openness": 50, "rear_right.openness": 50}
  },
  "apis": [
    {"name": "window_openness_set", "description": "Open a window to a percentage; use value or degree",
     "params": [
       {"name": "position", "kind": "enum", "values": ["front_left", "front_right", "rear_left", "rear_right"]},
       {"name": "value", "kind": "integer", "min": 0, "max": 100, "exclusive": "amount"},
       {"name": "degree", "kind": "enum", "values": ["max", "high", "medium", "low", "min"], "degrees": "level", "exclusive": "amount"}],
     "required": [["position", "value"], ["position", "degree"]],
     "effects": [{"op": "set", "target": "{position}.openness", "from": ["value", "degree"]}]},
    {"name": "window_close_all", "description": "Close every window",
     "effects": [
       {"op": "set", "target": "front_left.openness", "value": 0},
       {"op": "set", "target": "front_right.openness", "value": 0},
       {"op": "set", "target": "rear_left.openness", "value": 0},
       {"op": "set", "target": "rear_right.openness", "value": 0}]},
    {"name": "window_childLock_switch", "description": "Rear window child lock on/off",
     "params": [{"name": "switch", "kind": "boolean"}],
     "required": [["switch"]],
     "effects": [{"op": "set", "target": "child_lock", "from": ["switch"]}]}
  ]
},
{
  "device": "wiper",
  "description": "Windscreen wipers",
  "domain": "car_control",
  "attributes": [
    {"name": "is_on", "type": "boolean", "default": false, "description": "Wiper running"},
    {"name": "speed", "type": "string", "default": "low", "allowed": ["low", "medium", "high", "auto"], "description": "Wiper speed"}
  ],
  "apis": [
    {"name": "wiper_switch", "description": "Turn wipers on or off",
     "params": [{"name": "switch", "kind": "boolean"}],
     "required": [["switch"]],
     "effects": [{"op": "set", "target": "is_on", "from": ["switch"]}]},
    {"name": "wiper_speed_set", "description": "Set wiper speed",
     "params": [{"name": "speed", "kind": "enum", "values": ["low", "medium", "high", "auto"]}],
     "required": [["speed"]],
     "effects": [{"op": "set", "target": "speed", "from": ["speed"]}]}
  ]
}
]
})json";
    return doc;
}

}  // namespace cabin
