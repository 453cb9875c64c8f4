#include "cabin/harness/session.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "cabin/call_syntax.hpp"
#include "cabin/snapshot_io.hpp"

namespace cabin::harness {

std::vector<std::string> inject_distractors(World& world, std::size_t k) {
    std::vector<std::string> picked;
    for (const auto& id : world.registry().device_ids()) {
        if (picked.size() == k) break;
        if (id == kEnvironmentId || world.has_device(id)) continue;
        picked.push_back(id);
    }
    if (picked.size() < k)
        throw Error("cannot add " + std::to_string(k) + " distractors: only " + std::to_string(picked.size()) +
                    " unused devices registered");
    for (const auto& id : picked) world.init_device(id);
    return picked;
}

std::size_t AgentTranscript::agent_replies(Stage stage, std::size_t turn) const {
    return static_cast<std::size_t>(std::count_if(entries.begin(), entries.end(), [&](const TranscriptEntry& e) {
        return e.turn == turn && e.stage == stage && e.message.role == Role::assistant;
    }));
}

std::string render_transcript(const AgentTranscript& t) {
    std::string out = "# scenario " + t.scenario_id + "  mode=" + std::string(to_string(t.mode)) +
                      "  strategy=" + std::string(to_string(t.strategy)) + "\n";
    std::optional<std::size_t> turn;
    for (const auto& e : t.entries) {
        if (turn != e.turn) {
            if (turn && *turn < t.outcomes.size()) out += "\n## outcome: " + t.outcomes[*turn] + "\n";
            turn = e.turn;
            out += "\n## turn " + std::to_string(e.turn + 1) + "\n";
        }
        out += "\n### " + std::string(to_string(e.stage)) + " / " + std::string(to_string(e.message.role)) + "\n";
        out += e.message.content;
        if (e.message.content.empty() || e.message.content.back() != '\n') out += '\n';
    }
    if (turn && *turn < t.outcomes.size()) out += "\n## outcome: " + t.outcomes[*turn] + "\n";
    return out;
}

namespace {

std::string render_action(const Action& a) {
    if (auto* fc = std::get_if<FcAction>(&a)) return "fc: " + format_calls(fc->calls);
    if (auto* sfc = std::get_if<SfcAction>(&a)) return "sfc: " + format_patch(sfc->patch.assignments);
    if (auto* sel = std::get_if<DeviceSelection>(&a)) {
        std::string list;
        for (const auto& id : sel->device_ids) list += (list.empty() ? "" : ", ") + id;
        return "select: [" + list + "]";
    }
    return "done";
}

class TurnFailed : public Error {
public:
    using Error::Error;
};

class SessionRunner {
public:
    SessionRunner(const ScenarioRecord& record, Agent& agent, const SessionConfig& config,
                  std::shared_ptr<const Registry> registry)
        : record_(record), agent_(agent), config_(config), world_(std::move(registry)) {}

    SessionResult run() {
        SessionResult result;
        auto& t = result.transcript;
        t.scenario_id = record_.scenario.id;
        t.mode = config_.mode;
        t.strategy = config_.strategy;
        transcript_ = &t;
        try {
            config_.validate();
            prepare();
        } catch (const Error& e) {
            result.error = e.what();
            return result;
        }

        const bool examples = config_.strategy != Strategy::react_no_examples;
        std::string system = config_.mode == Mode::fc    ? fc_system_prompt(examples, config_.plan_first)
                             : config_.mode == Mode::sfc ? sfc_system_prompt(examples, config_.plan_first)
                                                         : hybrid_system_prompt(examples, config_.plan_first);
        turn_ = 0;
        push(history_, Stage::act, {Role::system, system});

        WorldSnapshot model_prev = world_.snapshot();
        for (turn_ = 0; turn_ < record_.scenario.turns.size(); ++turn_) {
            World backup = world_;
            std::string outcome;
            try {
                outcome = run_turn(record_.scenario.turns[turn_]);
            } catch (const TurnFailed& e) {
                outcome = std::string("failed: ") + e.what();
                world_ = std::move(backup);
            } catch (const EndpointError& e) {
                outcome = std::string("failed: ") + e.what();
                world_ = std::move(backup);
            }
            t.outcomes.push_back(outcome);

            WorldSnapshot model_next = world_.snapshot(turn_label(turn_ + 1));
            try {
                ChangeSets sets = compute_change_sets(truth_[turn_], truth_[turn_ + 1], model_prev, model_next);
                result.turns.push_back(score_turn(record_.scenario.id, record_.scenario.domain, turn_ + 1, sets,
                                                  record_.scenario.turns[turn_].trend_scored));
            } catch (const Error& e) {
                result.error = "turn " + std::to_string(turn_ + 1) + " cannot be scored: " + e.what();
                return result;
            }
            t.model_states.push_back(model_next);
            model_prev = std::move(model_next);
        }
        return result;
    }

private:
    static std::string turn_label(std::size_t i) { return i == 0 ? "init" : "turn " + std::to_string(i); }

    void prepare() {
        if (record_.truth_states.size() != record_.scenario.turns.size() + 1)
            throw Error("record has " + std::to_string(record_.truth_states.size()) + " truth states for " +
                        std::to_string(record_.scenario.turns.size()) + " turns");
        apply_inits(record_.scenario, world_);
        WorldSnapshot start = world_.snapshot();
        if (start.device_ids() != record_.truth_states.front().device_ids() ||
            !diff_snapshots(start, record_.truth_states.front()).empty())
            throw Error("initial state differs from the stored record; replay the record");

        auto distractors = inject_distractors(world_, config_.distractor_count);
        WorldSnapshot base = world_.snapshot();
        truth_ = record_.truth_states;
        for (auto& s : truth_)
            for (const auto& id : distractors) s.devices.emplace(id, base.devices.at(id));
    }

    void push(std::vector<ChatMessage>& conversation, Stage stage, ChatMessage m) {
        transcript_->entries.push_back({turn_, stage, m});
        conversation.push_back(std::move(m));
    }

    std::string ask(std::vector<ChatMessage>& conversation, Stage stage, std::size_t step) {
        std::string reply = agent_.reply(Exchange{stage, turn_, step, conversation});
        push(conversation, stage, {Role::assistant, reply});
        return reply;
    }

    std::vector<std::string> scope() const {
        return selection_.empty() ? std::vector<std::string>{std::string(kEnvironmentId)} : selection_;
    }

    std::string projected_state() const { return state_block(project_snapshot(world_, scope())); }

    // Independent exchange: full compact snapshot plus the query, no shared history.
    void select_devices(const Turn& turn) {
        std::vector<ChatMessage> conv;
        push(conv, Stage::select, {Role::system, sfc_select_prompt(config_.strategy != Strategy::react_no_examples)});
        push(conv, Stage::select,
             {Role::user, turn.query + "\n\nCurrent cockpit state:\n" +
                              state_block(serialize_snapshot(world_.snapshot(), RenderMode::compact))});
        for (std::size_t attempt = 0;; ++attempt) {
            std::string reply = ask(conv, Stage::select, attempt);
            try {
                Action a = extract_action(reply, config_.mode, Stage::select);
                selection_.clear();
                if (auto* sel = std::get_if<DeviceSelection>(&a)) {
                    for (const auto& id : sel->device_ids) {
                        if (id != kEnvironmentId && !world_.has_device(id)) throw ActionError("unknown device: " + id);
                        if (std::find(selection_.begin(), selection_.end(), id) == selection_.end())
                            selection_.push_back(id);
                    }
                }
                transcript_->actions.push_back(render_action(a));
                return;
            } catch (const ActionError& e) {
                if (attempt >= config_.retry_budget) throw TurnFailed(std::string("device selection: ") + e.what());
                push(conv, Stage::select, {Role::user, retry_prompt(e.what())});
            }
        }
    }

    std::string query_message(const Turn& turn) const {
        switch (config_.mode) {
        case Mode::fc: return turn.query;
        case Mode::sfc: return turn.query + "\n\nCurrent state of the selected devices:\n" + projected_state();
        case Mode::hybrid: {
            nlohmann::json apis = nlohmann::json::array();
            std::vector<std::string> ids = scope();
            if (std::find(ids.begin(), ids.end(), kEnvironmentId) == ids.end()) ids.insert(ids.begin(), std::string(kEnvironmentId));
            for (const auto& id : ids)
                if (world_.registry().find_device(id))
                    for (const auto& api : search_api(world_.registry(), id)) apis.push_back(render_api_spec(api));
            return turn.query + "\n\nAvailable APIs:\n" + apis.dump(1) + "\n\nCurrent state of the selected devices:\n" +
                   projected_state();
        }
        }
        return turn.query;
    }

    ChatMessage execute(const Action& a) {
        ExecutionFeedback fb;
        if (auto* fc = std::get_if<FcAction>(&a))
            fb = config_.mode == Mode::hybrid ? execute_hybrid(world_, scope(), fc->calls) : execute_fc(world_, fc->calls);
        else if (auto* sfc = std::get_if<SfcAction>(&a))
            fb = execute_sfc(world_, sfc->patch, scope());
        return compose_feedback(fb, config_.mode);
    }

    std::string run_turn(const Turn& turn) {
        selection_.clear();
        if (config_.mode != Mode::fc) select_devices(turn);

        push(history_, Stage::act, {Role::user, query_message(turn)});
        history_ = manage_context(std::move(history_));

        std::string outcome = "step limit";
        std::size_t replies = 0, retries = 0, actions = 0;
        while (actions < config_.max_turns_per_query) {
            std::string reply = ask(history_, Stage::act, replies++);
            Action a;
            try {
                a = extract_action(reply, config_.mode, Stage::act);
            } catch (const ActionError& e) {
                if (++retries > config_.retry_budget) throw TurnFailed(e.what());
                push(history_, Stage::act, {Role::user, retry_prompt(e.what())});
                continue;
            }
            transcript_->actions.push_back(render_action(a));
            if (std::holds_alternative<DoneAction>(a)) {
                outcome = "done";
                break;
            }
            push(history_, Stage::act, execute(a));
            ++actions;
        }

        if (config_.strategy == Strategy::react_reflection) {
            for (std::size_t r = 1; r <= config_.reflection_budget; ++r) {
                std::string prompt = reflection_prompt(r, config_.reflection_budget);
                if (config_.mode != Mode::fc) prompt += "\n\nCurrent state of the selected devices:\n" + projected_state();
                push(history_, Stage::reflect, {Role::user, prompt});
                history_ = manage_context(std::move(history_));
                std::string reply = ask(history_, Stage::reflect, r - 1);
                try {
                    Action a = extract_action(reply, config_.mode, Stage::reflect);
                    transcript_->actions.push_back(render_action(a));
                    if (!std::holds_alternative<DoneAction>(a)) push(history_, Stage::reflect, execute(a));
                } catch (const ActionError& e) {
                    // The unusable reply spends this opportunity; the next prompt asks again.
                    push(history_, Stage::reflect, {Role::user, retry_prompt(e.what())});
                }
            }
        }
        return outcome;
    }

    const ScenarioRecord& record_;
    Agent& agent_;
    const SessionConfig& config_;
    World world_;
    std::vector<WorldSnapshot> truth_;
    std::vector<ChatMessage> history_;
    std::vector<std::string> selection_;
    AgentTranscript* transcript_ = nullptr;
    std::size_t turn_ = 0;
};

}  // namespace

SessionResult run_session(const ScenarioRecord& record, Agent& agent, const SessionConfig& config,
                          std::shared_ptr<const Registry> registry) {
    return SessionRunner(record, agent, config, std::move(registry)).run();
}

std::vector<SessionResult> run_sessions(const std::vector<ScenarioRecord>& records, const AgentFactory& make_agent,
                                        const SessionConfig& config, std::shared_ptr<const Registry> registry,
                                        std::size_t jobs) {
    std::vector<SessionResult> results(records.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < records.size(); i = next++) {
            try {
                auto agent = make_agent(records[i]);
                results[i] = run_session(records[i], *agent, config, registry);
            } catch (const std::exception& e) {
                results[i].transcript.scenario_id = records[i].scenario.id;
                results[i].error = e.what();
            }
        }
    };
    jobs = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(records.size(), 1));
    std::vector<std::thread> pool;
    for (std::size_t j = 1; j < jobs; ++j) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    return results;
}

// ---------------------------------------------------------------------------------------------
// Config file

namespace {

bool looks_like_secret(const std::string& key) {
    std::string k = key;
    std::transform(k.begin(), k.end(), k.begin(), ::tolower);
    if (k == "api_key_env") return false;
    for (const char* word : {"key", "token", "secret", "password", "authorization"})
        if (k.find(word) != std::string::npos) return true;
    return false;
}

void check_keys(const nlohmann::json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
    for (const auto& [key, _] : obj.items()) {
        if (looks_like_secret(key))
            throw Error(where + key + ": credentials must come from an environment variable (set api_key_env)");
        if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }))
            throw Error("unknown config key: " + where + key);
    }
}

template <typename T>
T get_as(const nlohmann::json& obj, const char* key, T fallback) {
    if (!obj.contains(key)) return fallback;
    try {
        return obj.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw Error(std::string("config key ") + key + " has the wrong type");
    }
}

}  // namespace

RunConfig parse_run_config(std::string_view document) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(document);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw Error("config must be a JSON object");
    check_keys(j,
               {"mode", "strategy", "distractors", "jobs", "temperature", "max_steps", "reflection_budget",
                "retry_budget", "plan", "endpoint"},
               "");

    RunConfig rc;
    auto& s = rc.session;
    if (j.contains("mode")) {
        auto m = mode_from_string(get_as<std::string>(j, "mode", ""));
        if (!m) throw Error("config mode must be fc, sfc or hybrid");
        s.mode = *m;
    }
    if (j.contains("strategy")) {
        auto st = strategy_from_string(get_as<std::string>(j, "strategy", ""));
        if (!st) throw Error("config strategy must be react, reflect or noexamples");
        s.strategy = *st;
    }
    s.distractor_count = get_as<std::size_t>(j, "distractors", s.distractor_count);
    s.temperature = get_as<double>(j, "temperature", s.temperature);
    s.max_turns_per_query = get_as<std::size_t>(j, "max_steps", s.max_turns_per_query);
    s.reflection_budget = get_as<std::size_t>(j, "reflection_budget", s.reflection_budget);
    s.retry_budget = get_as<std::size_t>(j, "retry_budget", s.retry_budget);
    s.plan_first = get_as<bool>(j, "plan", s.plan_first);
    rc.jobs = get_as<std::size_t>(j, "jobs", rc.jobs);
    s.validate();

    if (j.contains("endpoint")) {
        const auto& e = j["endpoint"];
        if (!e.is_object()) throw Error("config endpoint must be an object");
        check_keys(e, {"url", "model", "api_key_env", "timeout_seconds", "max_retries", "retry_backoff_ms"}, "endpoint.");
        EndpointConfig ec;
        ec.url = get_as<std::string>(e, "url", "");
        if (ec.url.empty()) throw Error("config endpoint.url is required");
        ec.model = get_as<std::string>(e, "model", "");
        ec.api_key_env = get_as<std::string>(e, "api_key_env", ec.api_key_env);
        ec.timeout = std::chrono::seconds(get_as<int>(e, "timeout_seconds", static_cast<int>(ec.timeout.count())));
        ec.max_retries = get_as<std::size_t>(e, "max_retries", ec.max_retries);
        ec.retry_backoff = std::chrono::milliseconds(get_as<int>(e, "retry_backoff_ms", static_cast<int>(ec.retry_backoff.count())));
        ec.temperature = s.temperature;
        rc.endpoint = ec;
    }
    return rc;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot read config file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_run_config(ss.str());
}

}  // namespace cabin::harness
