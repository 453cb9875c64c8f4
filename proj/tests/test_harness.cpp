#include <gtest/gtest.h>

#include <deque>

#include "cabin/call_syntax.hpp"
#include "cabin/harness/session.hpp"
#include "test_support.hpp"

using namespace cabin;
using namespace cabin::harness;

namespace {

std::string fenced(const std::string& body) { return "```action\n" + body + "\n```"; }

// Replies from a per-stage queue; answers "done" once a queue runs dry.
class ScriptedAgent : public Agent {
public:
    std::map<Stage, std::deque<std::string>> script;
    std::vector<Exchange> seen_stages_only;
    std::vector<std::pair<Stage, std::size_t>> asked;

    std::string reply(const Exchange& ex) override {
        asked.emplace_back(ex.stage, ex.step);
        auto& q = script[ex.stage];
        if (q.empty()) return "done";
        std::string r = q.front();
        q.pop_front();
        return r;
    }
};

class ThrowingAgent : public Agent {
public:
    std::string reply(const Exchange&) override { throw EndpointError("endpoint failed: HTTP 503"); }
};

SessionConfig config(Mode mode, Strategy strategy = Strategy::react) {
    SessionConfig c;
    c.mode = mode;
    c.strategy = strategy;
    return c;
}

}  // namespace

TEST(ExtractAction, Kinds) {
    auto fc = extract_action("Thinking...\n" + fenced("fc: door_close(); door_lock_switch(switch=true)"), Mode::fc);
    ASSERT_TRUE(std::holds_alternative<FcAction>(fc));
    EXPECT_EQ(std::get<FcAction>(fc).calls.size(), 2u);

    auto sfc = extract_action(fenced("sfc: {environment.volume: 80}"), Mode::sfc);
    ASSERT_TRUE(std::holds_alternative<SfcAction>(sfc));
    EXPECT_EQ(std::get<SfcAction>(sfc).patch.assignments.at("environment.volume"), Value(80));

    auto sel = extract_action(fenced("select: [navigation, video]"), Mode::sfc, Stage::select);
    ASSERT_TRUE(std::holds_alternative<DeviceSelection>(sel));
    EXPECT_EQ(std::get<DeviceSelection>(sel).device_ids.size(), 2u);

    EXPECT_TRUE(std::holds_alternative<DoneAction>(extract_action("done", Mode::fc)));
    EXPECT_TRUE(std::holds_alternative<DoneAction>(extract_action(fenced("DONE"), Mode::hybrid)));
    // only the first action block counts
    auto first = extract_action(fenced("fc: door_close()") + "\n" + fenced("fc: door_open()"), Mode::fc);
    EXPECT_EQ(std::get<FcAction>(first).calls[0].api_name, "door_close");
}

TEST(ExtractAction, Rejections) {
    auto message = [](const std::string& reply, Mode mode, Stage stage = Stage::act) -> std::string {
        try {
            extract_action(reply, mode, stage);
        } catch (const ActionError& e) {
            return e.what();
        }
        return "<accepted>";
    };
    EXPECT_EQ(message("I will close the door.", Mode::fc), "no ```action block found");
    EXPECT_EQ(message(fenced("sfc: {door.status: \"closed\"}"), Mode::fc), "'sfc' action not allowed here; expected fc or done");
    EXPECT_NE(message(fenced("fc: door_close()"), Mode::sfc).find("not allowed"), std::string::npos);
    EXPECT_NE(message(fenced("fc: door_close()"), Mode::sfc, Stage::select).find("not allowed"), std::string::npos);
    EXPECT_NE(message(fenced("fc: door_close("), Mode::fc).find("cannot parse fc action"), std::string::npos);
    EXPECT_NE(message(fenced("teleport: now"), Mode::fc).find("unknown action kind"), std::string::npos);
    EXPECT_NE(message(fenced("fc:"), Mode::fc), "<accepted>");
    EXPECT_NE(message(fenced("sfc: {}"), Mode::sfc), "<accepted>");
}

TEST(Feedback, FcAndSfcShapes) {
    World w(builtin_registry());
    w.init_device("door", "open_unlocked");
    auto fc = compose_feedback(execute_fc(w, parse_calls("door_close()")), Mode::fc);
    EXPECT_EQ(fc.role, Role::tool);
    EXPECT_EQ(fc.content.rfind("Execution feedback:\n", 0), 0u);
    EXPECT_EQ(fc.content.find("```state"), std::string::npos);

    auto sfc = compose_feedback(execute_sfc(w, {{{"door.is_locked", Value(true)}}}), Mode::sfc);
    EXPECT_NE(sfc.content.find("Current device states:\n```state\n"), std::string::npos);
    EXPECT_NE(sfc.content.find("door.is_locked = true -> applied"), std::string::npos) << sfc.content;
}

TEST(Context, KeepsOnlyNewestState) {
    std::vector<ChatMessage> h{{Role::system, "sys"},
                               {Role::user, "q1\n" + state_block("{\"a\":1}")},
                               {Role::assistant, "ok"},
                               {Role::tool, "fb\n" + state_block("{\"a\":2}")},
                               {Role::user, "q2\n" + state_block("{\"a\":3}")}};
    EXPECT_EQ(count_state_blocks(h), 3u);
    auto managed = manage_context(h);
    EXPECT_EQ(managed.size(), h.size());
    EXPECT_EQ(count_state_blocks(managed), 1u);
    EXPECT_NE(managed.back().content.find("\"a\":3"), std::string::npos);
    EXPECT_NE(managed[1].content.find("q1"), std::string::npos);
    EXPECT_EQ(managed[1].content.find("\"a\":1"), std::string::npos);
}

TEST(Distractors, InjectFirstUnusedDevices) {
    World w(builtin_registry());
    w.init_device("navigation", "idle");
    auto added = inject_distractors(w, 2);
    EXPECT_EQ(added, (std::vector<std::string>{"video", "music"}));
    EXPECT_EQ(w.device_ids().size(), 3u);
    EXPECT_TRUE(inject_distractors(w, 0).empty());

    World crowded(builtin_registry());
    for (const auto& id : builtin_registry()->device_ids())
        if (id != "environment") crowded.init_device(id);
    EXPECT_THROW(inject_distractors(crowded, 1), Error);

    World nearly(builtin_registry());
    auto ids = builtin_registry()->device_ids();
    for (std::size_t i = 1; i + 3 < ids.size(); ++i) nearly.init_device(ids[i]);
    auto before = nearly.snapshot();
    EXPECT_THROW(inject_distractors(nearly, 4), Error);
    EXPECT_EQ(nearly.snapshot(), before);
}

TEST(Session, OracleScoresPerfectlyInEveryMode) {
    auto reg = builtin_registry();
    auto rec = cabin::testing::seed_record("tc_mm_airport_trip");
    for (auto mode : {Mode::fc, Mode::sfc, Mode::hybrid}) {
        OracleAgent agent(rec, mode, reg);
        auto res = run_session(rec, agent, config(mode), reg);
        ASSERT_FALSE(res.error) << *res.error;
        ASSERT_EQ(res.turns.size(), rec.scenario.turns.size());
        for (const auto& t : res.turns) {
            EXPECT_DOUBLE_EQ(t.f1_positive, 1.0);
            EXPECT_DOUBLE_EQ(t.f1_negative, 1.0);
            EXPECT_DOUBLE_EQ(t.accuracy, 1.0);
        }
        for (const auto& o : res.transcript.outcomes) EXPECT_EQ(o, "done");
    }
}

TEST(Session, NullAgentChangesNothing) {
    auto reg = builtin_registry();
    auto rec = cabin::testing::seed_record("cc_mm_rainy_day");
    NullAgent agent;
    auto res = run_session(rec, agent, config(Mode::sfc), reg);
    ASSERT_FALSE(res.error);
    for (const auto& t : res.turns) {
        EXPECT_DOUBLE_EQ(t.f1_positive, 0.0);
        EXPECT_DOUBLE_EQ(t.f1_negative, 1.0);
        EXPECT_DOUBLE_EQ(t.accuracy, 0.0);
    }
    EXPECT_TRUE(diff_snapshots(rec.truth_states.front(), res.transcript.model_states.back()).empty());
}

TEST(Session, ReflectionOffersExactlyTheBudget) {
    auto reg = builtin_registry();
    auto rec = cabin::testing::seed_record("lt_ss_purple");
    OracleAgent agent(rec, Mode::fc, reg);
    auto res = run_session(rec, agent, config(Mode::fc, Strategy::react_reflection), reg);
    ASSERT_FALSE(res.error);
    for (std::size_t t = 0; t < rec.scenario.turns.size(); ++t) {
        EXPECT_EQ(res.transcript.agent_replies(Stage::reflect, t), 3u);
        EXPECT_EQ(res.transcript.agent_replies(Stage::select, t), 0u);
    }
    auto plain = run_session(rec, agent, config(Mode::fc, Strategy::react), reg);
    EXPECT_EQ(plain.transcript.agent_replies(Stage::reflect, 0), 0u);
}

TEST(Session, ReflectionCanRepairAMistake) {
    auto reg = builtin_registry();
    auto rec = cabin::testing::seed_record("lt_ss_purple");
    ScriptedAgent agent;
    // Act with nothing, then fix the state during the second reflection.
    agent.script[Stage::reflect] = {"done", fenced("fc: " + format_calls(rec.scenario.turns[0].truth_calls)), "done"};
    auto res = run_session(rec, agent, config(Mode::fc, Strategy::react_reflection), reg);
    ASSERT_FALSE(res.error);
    EXPECT_DOUBLE_EQ(res.turns[0].accuracy, 1.0);
}

TEST(Session, RetryBudgetThenFailureRestoresWorld) {
    auto reg = builtin_registry();
    auto rec = cabin::testing::seed_record("lt_ss_purple");
    ScriptedAgent agent;
    // A good action followed by gibberish: the turn fails and its changes are rolled back.
    agent.script[Stage::act] = {fenced("fc: " + format_calls(rec.scenario.turns[0].truth_calls)), "hmm", "hmm", "hmm"};
    auto res = run_session(rec, agent, config(Mode::fc), reg);
    ASSERT_FALSE(res.error);
    EXPECT_EQ(res.transcript.outcomes[0].rfind("failed: ", 0), 0u);
    EXPECT_EQ(res.transcript.agent_replies(Stage::act, 0), 4u);  // 1 action + first try + 2 retries
    EXPECT_DOUBLE_EQ(res.turns[0].accuracy, 0.0);

    ScriptedAgent recovering;
    recovering.script[Stage::act] = {"hmm", "hmm", fenced("fc: " + format_calls(rec.scenario.turns[0].truth_calls))};
    auto ok = run_session(rec, recovering, config(Mode::fc), reg);
    EXPECT_EQ(ok.transcript.outcomes[0], "done");
    EXPECT_DOUBLE_EQ(ok.turns[0].accuracy, 1.0);
}

TEST(Session, StepLimit) {
    auto reg = builtin_registry();
    auto rec = cabin::testing::seed_record("lt_ss_purple");
    ScriptedAgent agent;
    for (int i = 0; i < 10; ++i) agent.script[Stage::act].push_back(fenced("fc: search_module()"));
    auto cfg = config(Mode::fc);
    cfg.max_turns_per_query = 3;
    auto res = run_session(rec, agent, cfg, reg);
    EXPECT_EQ(res.transcript.outcomes[0], "step limit");
    EXPECT_EQ(res.transcript.agent_replies(Stage::act, 0), 3u);
}

TEST(Session, EndpointFailureFailsTurnOnly) {
    auto reg = builtin_registry();
    auto rec = cabin::testing::seed_record("lt_ss_purple");
    ThrowingAgent agent;
    auto res = run_session(rec, agent, config(Mode::fc), reg);
    ASSERT_FALSE(res.error);
    EXPECT_NE(res.transcript.outcomes[0].find("HTTP 503"), std::string::npos);
}

TEST(Session, SfcSelectionScopesThePatch) {
    auto reg = builtin_registry();
    auto rec = cabin::testing::seed_record("sample_ac_door");
    ScriptedAgent agent;
    agent.script[Stage::select] = {fenced("select: [door]")};
    agent.script[Stage::act] = {fenced("sfc: {door.status: \"closed\", airConditioner.is_on: true}")};
    auto res = run_session(rec, agent, config(Mode::sfc), reg);
    ASSERT_FALSE(res.error);
    const auto& state = res.transcript.model_states[0];
    EXPECT_EQ(state.at("door.status"), Value("closed"));
    EXPECT_EQ(state.at("airConditioner.is_on"), Value(false));
    // the select exchange is independent and carries the compact snapshot
    bool saw_select_state = false;
    for (const auto& e : res.transcript.entries)
        if (e.stage == Stage::select && e.message.content.find("```state") != std::string::npos) saw_select_state = true;
    EXPECT_TRUE(saw_select_state);
}

TEST(Session, SelectionOfUnknownDeviceRetries) {
    auto reg = builtin_registry();
    auto rec = cabin::testing::seed_record("sample_ac_door");
    ScriptedAgent agent;
    agent.script[Stage::select] = {fenced("select: [zeppelin]"), fenced("select: [door, airConditioner]")};
    OracleAgent oracle(rec, Mode::sfc, reg);
    auto res = run_session(rec, agent, config(Mode::sfc), reg);
    EXPECT_EQ(res.transcript.agent_replies(Stage::select, 0), 2u);
    EXPECT_EQ(res.transcript.outcomes[0], "done");
}

TEST(Session, DistractorsDoNotChangeScores) {
    auto reg = builtin_registry();
    auto rec = cabin::testing::seed_record("mm_ms_radio");
    std::string baseline;
    for (std::size_t k : {0u, 2u, 4u, 6u}) {
        auto cfg = config(Mode::sfc);
        cfg.distractor_count = k;
        OracleAgent agent(rec, Mode::sfc, reg);
        auto res = run_session(rec, agent, cfg, reg);
        ASSERT_FALSE(res.error) << *res.error;
        EXPECT_EQ(res.transcript.model_states[0].devices.size(), rec.truth_states[0].devices.size() + k);
        auto doc = report_to_json(aggregate(res.turns)).dump();
        if (baseline.empty()) baseline = doc;
        EXPECT_EQ(doc, baseline) << "k=" << k;
    }
}

TEST(Session, RunSessionsKeepsOrder) {
    auto reg = builtin_registry();
    auto records = cabin::testing::seed_records();
    AgentFactory factory = [&](const ScenarioRecord& r) { return std::make_unique<OracleAgent>(r, Mode::fc, reg); };
    auto results = run_sessions(records, factory, config(Mode::fc), reg, 4);
    ASSERT_EQ(results.size(), records.size());
    for (std::size_t i = 0; i < records.size(); ++i)
        EXPECT_EQ(results[i].transcript.scenario_id, records[i].scenario.id);
}

TEST(Transcript, Rendering) {
    auto reg = builtin_registry();
    auto rec = cabin::testing::seed_record("lt_ss_purple");
    OracleAgent agent(rec, Mode::fc, reg);
    auto text = render_transcript(run_session(rec, agent, config(Mode::fc), reg).transcript);
    EXPECT_EQ(text.rfind("# scenario lt_ss_purple", 0), 0u);
    EXPECT_NE(text.find("## turn 1"), std::string::npos);
    EXPECT_NE(text.find("## outcome: done"), std::string::npos);
}

TEST(RunConfigParsing, Fields) {
    auto c = parse_run_config(R"({"mode": "hybrid", "strategy": "reflect", "distractors": 4, "jobs": 3,
        "temperature": 0.2, "endpoint": {"url": "http://localhost:1/v1/chat/completions", "model": "m",
        "api_key_env": "MY_KEY", "timeout_seconds": 5}})");
    EXPECT_EQ(c.session.mode, Mode::hybrid);
    EXPECT_EQ(c.session.strategy, Strategy::react_reflection);
    EXPECT_EQ(c.session.distractor_count, 4u);
    EXPECT_EQ(c.jobs, 3u);
    ASSERT_TRUE(c.endpoint.has_value());
    EXPECT_EQ(c.endpoint->api_key_env, "MY_KEY");
    EXPECT_DOUBLE_EQ(c.endpoint->temperature, 0.2);
    EXPECT_EQ(c.endpoint->timeout, std::chrono::seconds(5));
}

TEST(RunConfigParsing, Rejections) {
    auto message = [](const std::string& doc) -> std::string {
        try {
            parse_run_config(doc);
        } catch (const Error& e) {
            return e.what();
        }
        return "<accepted>";
    };
    EXPECT_NE(message(R"({"mode": "telepathy"})"), "<accepted>");
    EXPECT_NE(message(R"({"distractors": 3})"), "<accepted>");
    EXPECT_NE(message(R"({"colour": "red"})").find("colour"), std::string::npos);
    EXPECT_NE(message(R"({"endpoint": {"url": "http://x/y", "api_key": "sk-123"}})")
                  .find("credentials must come from an environment variable"),
              std::string::npos);
    EXPECT_NE(message(R"({"token": "abc"})").find("environment variable"), std::string::npos);
    EXPECT_NE(message("{not json"), "<accepted>");
}

TEST(SessionConfigValidation, Domains) {
    SessionConfig c;
    EXPECT_NO_THROW(c.validate());
    c.distractor_count = 5;
    EXPECT_THROW(c.validate(), Error);
    EXPECT_EQ(mode_from_string("sfc"), Mode::sfc);
    EXPECT_EQ(strategy_from_string("noexamples"), Strategy::react_no_examples);
    EXPECT_FALSE(mode_from_string("FC2").has_value());
}
