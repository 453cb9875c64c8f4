#include "cli.hpp"

#include <fnmatch.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "cabin/harness/session.hpp"
#include "cabin/metrics.hpp"
#include "cabin/scenario.hpp"
#include "cabin/world.hpp"

namespace fs = std::filesystem;

namespace cabin::cli {

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_text(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw Error("cannot read " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const fs::path& p, const std::string& text) {
    fs::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + p.string());
    out << text;
}

constexpr std::string_view kScenarioExt = ".scenario";

// Files, directories (their *.scenario files) and shell-style patterns, sorted and de-duplicated.
std::vector<fs::path> expand_inputs(const std::vector<std::string>& args) {
    std::vector<fs::path> out;
    for (const auto& a : args) {
        if (a.find_first_of("*?[") != std::string::npos) {
            fs::path pattern(a);
            fs::path dir = pattern.has_parent_path() ? pattern.parent_path() : fs::path(".");
            std::string name = pattern.filename().string();
            if (fs::is_directory(dir))
                for (const auto& e : fs::directory_iterator(dir))
                    if (e.is_regular_file() && fnmatch(name.c_str(), e.path().filename().c_str(), 0) == 0)
                        out.push_back(e.path());
        } else if (fs::is_directory(a)) {
            for (const auto& e : fs::directory_iterator(a))
                if (e.is_regular_file() && e.path().extension() == kScenarioExt) out.push_back(e.path());
        } else {
            out.emplace_back(a);  // missing files are reported per file
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    if (out.empty()) throw UsageError("no scenario files matched");
    return out;
}

struct Loaded {
    fs::path file;
    std::optional<ScenarioRecord> record;
    std::string error;
};

Loaded load_and_validate(const fs::path& file, const std::shared_ptr<const Registry>& registry) {
    Loaded l{file, std::nullopt, ""};
    try {
        Scenario s = parse_scenario(read_text(file), *registry);
        ValidationReport report = validate_scenario(s, registry);
        if (!report.ok()) {
            std::string why;
            for (const auto& d : report.diagnostics) why += (why.empty() ? "" : "; ") + d;
            l.error = why.empty() ? "validation failed" : why;
            return l;
        }
        l.record = execute_truth(s, registry);
    } catch (const Error& e) {
        l.error = e.what();
    }
    return l;
}

// ---------------------------------------------------------------------------------------------

int cmd_validate(const std::vector<std::string>& inputs, const std::string& out_dir, std::ostream& out,
                 std::ostream& err) {
    auto registry = builtin_registry();
    int failures = 0;
    for (const auto& file : expand_inputs(inputs)) {
        Loaded l = load_and_validate(file, registry);
        if (!l.record) {
            ++failures;
            err << "FAIL " << file.string() << ": " << l.error << "\n";
            continue;
        }
        out << "ok   " << file.string() << " (" << l.record->scenario.id << ", " << l.record->scenario.turns.size()
            << " turn" << (l.record->scenario.turns.size() == 1 ? "" : "s") << ")\n";
        if (!out_dir.empty()) save_record(*l.record, fs::path(out_dir) / "records" / l.record->scenario.id);
    }
    return failures ? kExitFailure : kExitOk;
}

int cmd_devices(const std::string& api_device, bool as_json, std::ostream& out) {
    auto registry = builtin_registry();
    if (api_device.empty()) {
        auto modules = search_module(*registry);
        if (as_json) {
            out << render_module_list(modules).dump(2) << "\n";
            return kExitOk;
        }
        std::size_t w = 0;
        for (const auto& m : modules) w = std::max(w, m.device_id.size());
        for (const auto& m : modules) out << std::left << std::setw(static_cast<int>(w) + 2) << m.device_id << m.description << "\n";
        return kExitOk;
    }
    const std::vector<ApiSpec>* apis = nullptr;
    try {
        apis = &search_api(*registry, api_device);
    } catch (const NotFoundError& e) {
        throw UsageError(e.what());
    }
    if (as_json) {
        nlohmann::json j = nlohmann::json::array();
        for (const auto& a : *apis) j.push_back(render_api_spec(a));
        out << j.dump(2) << "\n";
        return kExitOk;
    }
    for (const auto& a : *apis) {
        out << a.api_name << "\n  " << a.description << "\n";
        for (const auto& p : a.params) {
            out << "  - " << p.name << ": " << to_string(p.kind);
            if (!p.allowed_values.empty()) {
                out << " {";
                for (std::size_t i = 0; i < p.allowed_values.size(); ++i) out << (i ? ", " : "") << p.allowed_values[i];
                out << "}";
            }
            if (p.min || p.max) out << " [" << (p.min ? render(Value(*p.min)) : "") << ".." << (p.max ? render(Value(*p.max)) : "") << "]";
            if (p.exclusive_group) out << " (exclusive group " << *p.exclusive_group << ")";
            out << "\n";
        }
        out << "  required: " << a.required_text() << "\n";
    }
    const DeviceDefinition* def = registry->find_device(api_device);
    if (!def->presets.empty()) {
        out << "presets:";
        for (const auto& [name, _] : def->presets) out << " " << name;
        out << "\n";
    }
    return kExitOk;
}

struct RunOptions {
    std::vector<std::string> inputs;
    std::string mode, strategy, agent = "endpoint", config, out_dir = "cabin-out";
    std::optional<std::size_t> distractors, jobs;
};

int cmd_run(const RunOptions& o, std::ostream& out, std::ostream& err) {
    harness::RunConfig rc;
    if (!o.config.empty()) {
        try {
            rc = harness::load_run_config(o.config);
        } catch (const Error& e) {
            throw UsageError(e.what());
        }
    }
    auto& s = rc.session;
    if (!o.mode.empty()) s.mode = *harness::mode_from_string(o.mode);
    if (!o.strategy.empty()) s.strategy = *harness::strategy_from_string(o.strategy);
    if (o.distractors) s.distractor_count = *o.distractors;
    if (o.jobs) rc.jobs = *o.jobs;
    try {
        s.validate();
    } catch (const Error& e) {
        throw UsageError(e.what());
    }

    auto registry = builtin_registry();
    harness::AgentFactory factory;
    if (o.agent == "oracle") {
        factory = [&](const ScenarioRecord& r) { return std::make_unique<harness::OracleAgent>(r, s.mode, registry); };
    } else if (o.agent == "null") {
        factory = [](const ScenarioRecord&) { return std::make_unique<harness::NullAgent>(); };
    } else {
        if (!rc.endpoint) throw UsageError("--agent endpoint needs a config file with an \"endpoint\" section (--config)");
        std::shared_ptr<const harness::EndpointClient> client;
        try {
            client = std::make_shared<const harness::EndpointClient>(*rc.endpoint);
        } catch (const Error& e) {
            throw UsageError(e.what());
        }
        factory = [client](const ScenarioRecord&) { return std::make_unique<harness::EndpointAgent>(client); };
    }

    int failures = 0;
    std::vector<ScenarioRecord> records;
    for (const auto& file : expand_inputs(o.inputs)) {
        Loaded l = load_and_validate(file, registry);
        if (!l.record) {
            ++failures;
            err << "FAIL " << file.string() << ": " << l.error << "\n";
        } else {
            records.push_back(std::move(*l.record));
        }
    }

    auto results = harness::run_sessions(records, factory, s, registry, std::max<std::size_t>(rc.jobs, 1));
    fs::path dir(o.out_dir);
    std::vector<TurnReport> turns;
    for (const auto& r : results) {
        const std::string& id = r.transcript.scenario_id;
        write_text(dir / "transcripts" / (id + ".txt"), harness::render_transcript(r.transcript));
        if (r.error) {
            ++failures;
            err << "FAIL session " << id << ": " << *r.error << "\n";
            continue;
        }
        nlohmann::json detail = report_to_json(aggregate(r.turns));
        detail["scenario"] = id;
        detail["outcomes"] = r.transcript.outcomes;
        write_text(dir / "scenarios" / (id + ".json"), detail.dump(2) + "\n");
        turns.insert(turns.end(), r.turns.begin(), r.turns.end());
    }
    if (turns.empty()) {
        err << "no turns were scored\n";
        return kExitFailure;
    }
    MetricReport report = aggregate(turns);
    nlohmann::json j = report_to_json(report);
    j["run"] = {{"mode", to_string(s.mode)}, {"strategy", to_string(s.strategy)}, {"agent", o.agent}};
    write_text(dir / "report.json", j.dump(2) + "\n");
    std::string table = report_to_text(report);
    write_text(dir / "report.txt", table);
    out << table;
    return failures ? kExitFailure : kExitOk;
}

// Record directories: the given directories themselves or their immediate children holding a manifest.
std::vector<fs::path> record_dirs(const std::vector<std::string>& inputs) {
    std::vector<fs::path> out;
    for (const auto& a : inputs) {
        fs::path p(a);
        if (fs::exists(p / "manifest.json")) {
            out.push_back(p);
        } else if (fs::is_directory(p)) {
            for (const auto& e : fs::directory_iterator(p))
                if (e.is_directory() && fs::exists(e.path() / "manifest.json")) out.push_back(e.path());
        } else {
            out.push_back(p);
        }
    }
    std::sort(out.begin(), out.end());
    if (out.empty()) throw UsageError("no record directories found");
    return out;
}

int cmd_replay(const std::vector<std::string>& inputs, std::ostream& out, std::ostream& err) {
    auto registry = builtin_registry();
    int failures = 0;
    for (const auto& dir : record_dirs(inputs)) {
        try {
            ReplayReport r = replay_record(load_record(dir, *registry), registry);
            if (r.clean()) {
                out << "clean " << dir.string() << " (" << r.scenario_id << ")\n";
                continue;
            }
            ++failures;
            if (r.error) err << "DRIFT " << dir.string() << ": " << *r.error << "\n";
            for (const auto& d : r.drift) {
                err << "DRIFT " << dir.string() << " state " << d.state_index << ": " << d.note;
                for (const auto& p : d.paths) err << " " << p;
                err << "\n";
            }
        } catch (const Error& e) {
            ++failures;
            err << "FAIL " << dir.string() << ": " << e.what() << "\n";
        }
    }
    return failures ? kExitFailure : kExitOk;
}

TurnReport turn_from_json(const nlohmann::json& t) {
    TurnReport r;
    r.scenario_id = t.at("scenario").get<std::string>();
    r.domain = t.at("domain").get<std::string>();
    r.turn = t.at("turn").get<std::size_t>();
    r.f1_positive = t.at("f1_positive").get<double>();
    r.f1_negative = t.at("f1_negative").get<double>();
    r.accuracy = t.at("accuracy").get<double>();
    r.counters.total_should_changed = r.counters.n_total = t.value("should_change", std::size_t{0});
    r.counters.tp = t.value("tp", std::size_t{0});
    r.counters.fp = t.value("fp", std::size_t{0});
    r.counters.n_correct = t.value("n_correct", std::size_t{0});
    return r;
}

int cmd_report(const std::vector<std::string>& inputs, bool as_json, std::ostream& out) {
    std::vector<TurnReport> turns;
    for (const auto& a : inputs) {
        fs::path p(a);
        if (fs::is_directory(p)) p /= "report.json";
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(read_text(p));
            for (const auto& t : j.at("turns")) turns.push_back(turn_from_json(t));
        } catch (const nlohmann::json::exception& e) {
            throw Error(p.string() + ": not a report document (" + e.what() + ")");
        }
    }
    if (turns.empty()) throw Error("reports contain no turns");
    MetricReport report = aggregate(turns);
    if (as_json) out << report_to_json(report).dump(2) << "\n";
    else out << report_to_text(report);
    return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Cockpit agent simulator: scenario validation, agent evaluation and reports"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "cabin 0.1.0");

    std::vector<std::string> inputs;
    std::string out_dir;
    auto* validate = app.add_subcommand("validate", "Parse, validate and execute scenario files");
    validate->add_option("paths", inputs, "Scenario files, directories or patterns")->required();
    validate->add_option("--out", out_dir, "Write truth records under DIR/records");

    RunOptions ro;
    auto* run_cmd = app.add_subcommand("run", "Evaluate an agent on scenarios");
    run_cmd->add_option("paths", ro.inputs, "Scenario files, directories or patterns")->required();
    run_cmd->add_option("--mode", ro.mode, "Execution paradigm")->check(CLI::IsMember({"fc", "sfc", "hybrid"}));
    run_cmd->add_option("--strategy", ro.strategy, "Prompting strategy")->check(CLI::IsMember({"react", "reflect", "noexamples"}));
    run_cmd->add_option("--agent", ro.agent, "Agent backend (default endpoint)")->check(CLI::IsMember({"oracle", "endpoint", "null"}));
    run_cmd->add_option("--distractors", ro.distractors, "Irrelevant devices added to each world")->check(CLI::IsMember({0, 2, 4, 6}));
    run_cmd->add_option("--jobs", ro.jobs, "Concurrent sessions")->check(CLI::PositiveNumber);
    run_cmd->add_option("--out", ro.out_dir, "Output directory")->capture_default_str();
    run_cmd->add_option("--config", ro.config, "JSON config file (endpoint, defaults)");

    std::string api_device;
    bool devices_json = false;
    auto* devices = app.add_subcommand("devices", "List devices or a device's APIs");
    devices->add_option("--api", api_device, "Show the APIs of DEVICE");
    devices->add_flag("--json", devices_json, "Machine-readable output");

    std::vector<std::string> record_inputs;
    auto* replay = app.add_subcommand("replay", "Re-execute stored records and report drift");
    replay->add_option("records", record_inputs, "Record directories or their parent")->required();

    std::vector<std::string> report_inputs;
    bool report_json = false;
    auto* report = app.add_subcommand("report", "Aggregate and render stored run reports");
    report->add_option("reports", report_inputs, "report.json files or run output directories")->required();
    report->add_flag("--json", report_json, "Machine-readable output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*validate) return cmd_validate(inputs, out_dir, out, err);
        if (*run_cmd) return cmd_run(ro, out, err);
        if (*devices) return cmd_devices(api_device, devices_json, out);
        if (*replay) return cmd_replay(record_inputs, out, err);
        if (*report) return cmd_report(report_inputs, report_json, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitFailure;
    }
    return kExitUsage;
}

}  // namespace cabin::cli
