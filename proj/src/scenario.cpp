#include "cabin/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cabin/call_syntax.hpp"
#include "cabin/snapshot_io.hpp"

namespace cabin {

namespace {

// ---------------------------------------------------------------------------------------------
// Tag scanning

bool iequals_at(std::string_view text, std::size_t pos, std::string_view word) {
    if (pos + word.size() > text.size()) return false;
    for (std::size_t i = 0; i < word.size(); ++i)
        if (std::tolower(static_cast<unsigned char>(text[pos + i])) != std::tolower(static_cast<unsigned char>(word[i])))
            return false;
    return true;
}

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::string decode_entities(std::string_view s) {
    static const std::pair<std::string_view, char> table[] = {
        {"&lt;", '<'}, {"&gt;", '>'}, {"&quot;", '"'}, {"&apos;", '\''}, {"&amp;", '&'}};
    std::string out;
    for (std::size_t i = 0; i < s.size(); ++i) {
        bool hit = false;
        if (s[i] == '&') {
            for (const auto& [name, c] : table) {
                if (s.substr(i, name.size()) == name) {
                    out += c;
                    i += name.size() - 1;
                    hit = true;
                    break;
                }
            }
        }
        if (!hit) out += s[i];
    }
    return out;
}

std::string encode_entities(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

struct Element {
    std::string tag;  // lower case
    std::size_t offset = 0;
    std::string_view body;
    std::size_t body_offset = 0;
};

class TagScanner {
public:
    explicit TagScanner(std::string_view text) : text_(text) {}

    // Skips whitespace and <!-- comments -->. Fails on other text when `strict`.
    void skip_filler() {
        while (pos_ < text_.size()) {
            if (std::isspace(static_cast<unsigned char>(text_[pos_]))) {
                ++pos_;
            } else if (text_.substr(pos_, 4) == "<!--") {
                auto end = text_.find("-->", pos_ + 4);
                if (end == std::string_view::npos) throw SyntaxError("unterminated comment", pos_);
                pos_ = end + 3;
            } else {
                break;
            }
        }
    }

    bool at_end() const { return pos_ >= text_.size(); }
    std::size_t pos() const { return pos_; }
    bool at(std::string_view s) const { return iequals_at(text_, pos_, s); }

    // Reads `<name attr="v" ...>` and returns the lower-cased name.
    std::string open_tag(std::map<std::string, std::string>& attrs) {
        std::size_t start = pos_;
        if (text_[pos_] != '<') throw SyntaxError("stray text outside a tag", pos_);
        ++pos_;
        std::string name = word();
        if (name.empty()) throw SyntaxError("malformed tag", start);
        while (true) {
            skip_space();
            if (pos_ >= text_.size()) throw SyntaxError("unterminated tag <" + name + ">", start);
            if (text_[pos_] == '>') {
                ++pos_;
                break;
            }
            std::size_t at = pos_;
            std::string key = word();
            if (key.empty()) throw SyntaxError("malformed attribute in <" + name + ">", at);
            skip_space();
            if (pos_ >= text_.size() || text_[pos_] != '=') throw SyntaxError("expected '=' after attribute " + key, pos_);
            ++pos_;
            skip_space();
            char q = pos_ < text_.size() ? text_[pos_] : '\0';
            if (q != '"' && q != '\'') throw SyntaxError("attribute value must be quoted", pos_);
            auto end = text_.find(q, pos_ + 1);
            if (end == std::string_view::npos) throw SyntaxError("unterminated attribute value", pos_);
            attrs[lower(key)] = decode_entities(text_.substr(pos_ + 1, end - pos_ - 1));
            pos_ = end + 1;
        }
        return lower(name);
    }

    // Body up to the matching `</name>`; nested tags are rejected.
    Element element(const std::string& name, std::size_t tag_offset) {
        Element e{name, tag_offset, {}, pos_};
        for (std::size_t i = pos_; i < text_.size(); ++i) {
            if (text_[i] != '<') continue;
            if (iequals_at(text_, i, "</" + name)) {
                std::size_t j = i + 2 + name.size();
                while (j < text_.size() && std::isspace(static_cast<unsigned char>(text_[j]))) ++j;
                if (j >= text_.size() || text_[j] != '>') throw SyntaxError("malformed closing tag </" + name + ">", i);
                e.body = text_.substr(pos_, i - pos_);
                pos_ = j + 1;
                return e;
            }
            throw SyntaxError("unexpected tag inside <" + name + ">", i);
        }
        throw SyntaxError("missing closing tag </" + name + ">", tag_offset);
    }

    void close_tag(std::string_view name) {
        std::size_t start = pos_;
        if (!at("</") || !iequals_at(text_, pos_ + 2, name)) throw SyntaxError("expected </" + std::string(name) + ">", pos_);
        pos_ += 2 + name.size();
        skip_space();
        if (pos_ >= text_.size() || text_[pos_] != '>') throw SyntaxError("malformed closing tag", start);
        ++pos_;
    }

private:
    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    std::string word() {
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_' || text_[pos_] == '-'))
            ++pos_;
        return std::string(text_.substr(start, pos_ - start));
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

// Re-bases a SyntaxError raised on a sub-view to the full document.
template <typename F>
auto at_offset(std::size_t base, F&& f) {
    try {
        return f();
    } catch (const SyntaxError& e) {
        throw SyntaxError(e.detail(), base + e.position());
    }
}

std::vector<InitStep> parse_inits(const Element& e) {
    std::vector<InitStep> steps;
    std::size_t line_start = 0;
    std::string_view body = e.body;
    while (line_start <= body.size()) {
        auto nl = body.find('\n', line_start);
        if (nl == std::string_view::npos) nl = body.size();
        std::string_view line = body.substr(line_start, nl - line_start);
        std::size_t base = e.body_offset + line_start;
        line_start = nl + 1;

        if (auto hash = line.find('#'); hash != std::string_view::npos && line.find('(') == std::string_view::npos)
            line = line.substr(0, hash);
        std::string_view t = trim(line);
        if (t.empty()) continue;
        std::size_t off = base + static_cast<std::size_t>(t.data() - line.data());
        if (t.find('(') != std::string_view::npos) {
            steps.push_back({"", "", at_offset(off, [&] { return parse_call(t); })});
            continue;
        }
        auto dot = t.find('.');
        if (dot == std::string_view::npos || dot == 0 || dot + 1 == t.size())
            throw SyntaxError("init line must be device.preset or an api call", off);
        steps.push_back({std::string(t.substr(0, dot)), std::string(t.substr(dot + 1)), std::nullopt});
    }
    return steps;
}

std::set<std::string> parse_trend(const Element& e) {
    std::set<std::string> out;
    std::string token;
    for (char c : std::string(e.body) + ",") {
        if (c == ',' || std::isspace(static_cast<unsigned char>(c))) {
            if (!token.empty()) out.insert(token);
            token.clear();
        } else {
            token += c;
        }
    }
    return out;
}

}  // namespace

// ---------------------------------------------------------------------------------------------

std::vector<std::string> Scenario::device_ids(const Registry& registry) const {
    std::vector<std::string> out;
    auto add = [&](const std::string& id) {
        if (id != kEnvironmentId && std::find(out.begin(), out.end(), id) == out.end()) out.push_back(id);
    };
    for (const auto& step : inits) {
        if (!step.call) {
            add(step.device_id);
        } else if (const ApiSpec* api = registry.find_api(step.call->api_name)) {
            add(api->device_id);
        }
    }
    return out;
}

Scenario parse_scenario_text(std::string_view text) {
    TagScanner scan(text);
    scan.skip_filler();
    if (scan.at_end() || !scan.at("<scenario")) throw SyntaxError("missing <scenario> element", scan.pos());

    std::map<std::string, std::string> attrs;
    std::size_t open_at = scan.pos();
    scan.open_tag(attrs);
    Scenario s;
    if (!attrs.count("id") || trim(attrs["id"]).empty()) throw SyntaxError("<scenario> needs an id attribute", open_at);
    s.id = std::string(trim(attrs["id"]));
    s.domain = attrs.count("domain") ? attrs["domain"] : "";
    s.category = attrs.count("category") ? attrs["category"] : "";
    if (!s.category.empty() && s.category != "S-S" && s.category != "S-M" && s.category != "M-S" && s.category != "M-M")
        throw SyntaxError("category must be one of S-S, S-M, M-S, M-M", open_at);

    bool have_inits = false;
    constexpr std::size_t kNone = std::string_view::npos;
    std::size_t open_query = kNone;  // offset of a query still waiting for its <api_call>
    while (true) {
        scan.skip_filler();
        if (scan.at_end()) throw SyntaxError("missing closing tag </scenario>", open_at);
        if (scan.at("</")) {
            scan.close_tag("scenario");
            break;
        }
        std::size_t tag_at = scan.pos();
        std::map<std::string, std::string> ignored;
        std::string name = scan.open_tag(ignored);
        if (name == "scenario") throw SyntaxError("nested <scenario>", tag_at);
        if (name != "inits" && name != "query" && name != "api_call" && name != "trend")
            throw SyntaxError("unknown tag <" + name + ">", tag_at);
        Element e = scan.element(name, tag_at);

        if (name == "inits") {
            if (have_inits) throw SyntaxError("duplicate <inits>", tag_at);
            if (!s.turns.empty()) throw SyntaxError("<inits> must precede the first <query>", tag_at);
            have_inits = true;
            s.inits = parse_inits(e);
        } else if (name == "query") {
            if (open_query != kNone) throw SyntaxError("<query> without a following <api_call>", open_query);
            std::string q = decode_entities(trim(e.body));
            if (q.empty()) throw SyntaxError("empty <query>", tag_at);
            s.turns.push_back({std::move(q), {}, {}});
            open_query = tag_at;
        } else if (name == "api_call") {
            if (s.turns.empty()) throw SyntaxError("<api_call> without a preceding <query>", tag_at);
            auto calls = at_offset(e.body_offset, [&] { return parse_calls(e.body); });
            if (calls.empty()) throw SyntaxError("empty <api_call>", tag_at);
            auto& dst = s.turns.back().truth_calls;
            dst.insert(dst.end(), calls.begin(), calls.end());
            open_query = kNone;
        } else {  // trend
            if (s.turns.empty()) throw SyntaxError("<trend> without a preceding <query>", tag_at);
            auto paths = parse_trend(e);
            s.turns.back().trend_scored.insert(paths.begin(), paths.end());
        }
    }
    if (open_query != kNone) throw SyntaxError("<query> without a following <api_call>", open_query);
    if (s.turns.empty()) throw SyntaxError("scenario has no <query>", open_at);

    scan.skip_filler();
    if (!scan.at_end()) {
        if (scan.at("<scenario")) throw SyntaxError("multiple <scenario> elements", scan.pos());
        throw SyntaxError("trailing text after </scenario>", scan.pos());
    }
    return s;
}

Scenario parse_scenario(std::string_view text, const Registry& registry) {
    Scenario s = parse_scenario_text(text);
    for (const auto& step : s.inits) {
        if (step.call) {
            if (!registry.find_api(step.call->api_name))
                throw SchemaError("inits", "unknown api: " + step.call->api_name);
            continue;
        }
        const DeviceDefinition* d = registry.find_device(step.device_id);
        if (!d) throw SchemaError("inits", "unknown device: " + step.device_id);
        if (!d->preset(step.preset))
            throw SchemaError("inits", "unknown preset '" + step.preset + "' for device " + step.device_id);
    }
    for (std::size_t i = 0; i < s.turns.size(); ++i) {
        const std::string where = "turn " + std::to_string(i + 1);
        for (const auto& c : s.turns[i].truth_calls)
            if (!registry.find_api(c.api_name)) throw SchemaError(where, "unknown api: " + c.api_name);
        for (const auto& path : s.turns[i].trend_scored) {
            const AttributeTemplate* t = registry.attribute(path);
            if (!t) throw SchemaError(path, "unknown trend path");
            if (t->type != TypeTag::integer && t->type != TypeTag::real)
                throw SchemaError(path, "trend path must be numeric");
        }
    }
    return s;
}

std::string format_scenario(const Scenario& s) {
    std::string out = "<scenario id=\"" + encode_entities(s.id) + "\"";
    if (!s.domain.empty()) out += " domain=\"" + encode_entities(s.domain) + "\"";
    if (!s.category.empty()) out += " category=\"" + s.category + "\"";
    out += ">\n";
    if (!s.inits.empty()) {
        out += "<inits>\n";
        for (const auto& step : s.inits) out += (step.call ? format_call(*step.call) : step.device_id + "." + step.preset) + "\n";
        out += "</inits>\n";
    }
    for (const auto& t : s.turns) {
        out += "<query>" + encode_entities(t.query) + "</query>\n<api_call>\n";
        for (const auto& c : t.truth_calls) out += format_call(c) + "\n";
        out += "</api_call>\n";
        if (!t.trend_scored.empty()) {
            out += "<trend>";
            bool first = true;
            for (const auto& p : t.trend_scored) {
                out += (first ? "" : ", ") + p;
                first = false;
            }
            out += "</trend>\n";
        }
    }
    return out + "</scenario>\n";
}

// ---------------------------------------------------------------------------------------------
// Execution

namespace {

std::string state_label(std::size_t index) { return index == 0 ? "init" : "turn " + std::to_string(index); }

struct TruthRun {
    ScenarioRecord record;
    bool executable = true;
    bool state_changing = true;
    std::vector<std::string> diagnostics;
};

// strict: throw ScenarioError on the first defect; otherwise collect and keep going.
TruthRun run_truth(const Scenario& scenario, World& world, bool strict) {
    TruthRun run;
    run.record.scenario = scenario;
    auto defect = [&](std::optional<std::size_t> turn, const std::string& what, bool* flag) {
        if (strict) throw ScenarioError(turn, what);
        *flag = false;
        run.diagnostics.push_back(ScenarioError(turn, what).what());
    };

    for (const auto& step : scenario.inits) {
        try {
            if (!step.call) {
                world.init_device(step.device_id, step.preset);
                continue;
            }
            const ApiSpec* api = world.registry().find_api(step.call->api_name);
            if (api && api->device_id != kEnvironmentId && !world.has_device(api->device_id))
                world.init_device(api->device_id);
            ApiResult r = world.invoke(*step.call);
            if (!r.success) defect(std::nullopt, format_call(*step.call) + " failed: " + r.message, &run.executable);
        } catch (const ScenarioError&) {
            throw;
        } catch (const Error& e) {
            defect(std::nullopt, e.what(), &run.executable);
        }
    }
    run.record.truth_states.push_back(world.snapshot(state_label(0)));

    for (std::size_t i = 0; i < scenario.turns.size(); ++i) {
        bool calls_ok = true;
        for (const auto& call : scenario.turns[i].truth_calls) {
            ApiResult r = world.invoke(call);
            if (!r.success) {
                calls_ok = false;
                defect(i, format_call(call) + " failed: " + r.message, &run.executable);
            }
        }
        WorldSnapshot after = world.snapshot(state_label(i + 1));
        // A turn with a failed call is already reported; its state change is not judged.
        if (calls_ok && diff_snapshots(run.record.truth_states.back(), after).empty())
            defect(i, "no meaningful modification", &run.state_changing);
        run.record.truth_states.push_back(std::move(after));
    }
    return run;
}

}  // namespace

void apply_inits(const Scenario& scenario, World& world) {
    Scenario inits_only = scenario;
    inits_only.turns.clear();
    run_truth(inits_only, world, true);
}

ScenarioRecord execute_truth(const Scenario& scenario, World& world) {
    return run_truth(scenario, world, true).record;
}

ScenarioRecord execute_truth(const Scenario& scenario, std::shared_ptr<const Registry> registry) {
    World world(std::move(registry));
    return execute_truth(scenario, world);
}

ValidationReport validate_scenario(const Scenario& scenario, World& world) {
    ValidationReport report;
    report.resolvable = true;
    const Registry& reg = world.registry();
    auto unresolved = [&](const std::string& what) {
        report.resolvable = false;
        report.diagnostics.push_back(what);
    };
    for (const auto& step : scenario.inits) {
        if (step.call) {
            if (!reg.find_api(step.call->api_name)) unresolved("inits: unknown api: " + step.call->api_name);
        } else if (const DeviceDefinition* d = reg.find_device(step.device_id); !d) {
            unresolved("inits: unknown device: " + step.device_id);
        } else if (!d->preset(step.preset)) {
            unresolved("inits: unknown preset " + step.device_id + "." + step.preset);
        }
    }
    for (std::size_t i = 0; i < scenario.turns.size(); ++i) {
        for (const auto& c : scenario.turns[i].truth_calls)
            if (!reg.find_api(c.api_name)) unresolved("turn " + std::to_string(i + 1) + ": unknown api: " + c.api_name);
        for (const auto& p : scenario.turns[i].trend_scored)
            if (!reg.attribute(p)) unresolved("turn " + std::to_string(i + 1) + ": unknown trend path: " + p);
    }

    TruthRun run = run_truth(scenario, world, false);
    report.executable = run.executable;
    report.state_changing = run.state_changing;
    report.diagnostics.insert(report.diagnostics.end(), run.diagnostics.begin(), run.diagnostics.end());
    return report;
}

ValidationReport validate_scenario(const Scenario& scenario, std::shared_ptr<const Registry> registry) {
    World world(std::move(registry));
    return validate_scenario(scenario, world);
}

// ---------------------------------------------------------------------------------------------
// Persistence

namespace {

constexpr const char* kScenarioFile = "scenario.txt";
constexpr const char* kManifestFile = "manifest.json";

std::string state_file(std::size_t i) {
    std::string n = std::to_string(i);
    return "state_" + std::string(n.size() < 3 ? 3 - n.size() : 0, '0') + n + ".json";
}

std::vector<std::pair<std::string, std::string>> record_files(const ScenarioRecord& record) {
    std::vector<std::pair<std::string, std::string>> files;
    files.emplace_back(kScenarioFile, format_scenario(record.scenario));
    nlohmann::json manifest{{"format", "cabin-record/1"},
                            {"id", record.scenario.id},
                            {"domain", record.scenario.domain},
                            {"category", record.scenario.category},
                            {"turns", record.scenario.turns.size()},
                            {"states", nlohmann::json::array()}};
    for (std::size_t i = 0; i < record.truth_states.size(); ++i) manifest["states"].push_back(state_file(i));
    files.emplace_back(kManifestFile, manifest.dump(2) + "\n");
    for (std::size_t i = 0; i < record.truth_states.size(); ++i)
        files.emplace_back(state_file(i), serialize_snapshot(record.truth_states[i]));
    return files;
}

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw NotFoundError("cannot read " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

std::string serialize_record(const ScenarioRecord& record) {
    std::string out;
    for (const auto& [_, content] : record_files(record)) out += content;
    return out;
}

void save_record(const ScenarioRecord& record, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    for (const auto& [name, content] : record_files(record)) {
        std::ofstream out(dir / name, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write " + (dir / name).string());
        out << content;
    }
}

ScenarioRecord load_record(const std::filesystem::path& dir, const Registry& registry) {
    ScenarioRecord record;
    record.scenario = parse_scenario(read_file(dir / kScenarioFile), registry);
    nlohmann::json manifest;
    try {
        manifest = nlohmann::json::parse(read_file(dir / kManifestFile));
    } catch (const nlohmann::json::parse_error& e) {
        throw SyntaxError(std::string("manifest: ") + e.what(), e.byte);
    }
    if (!manifest.contains("states") || !manifest["states"].is_array())
        throw SchemaError("states", "manifest lacks a states list");
    for (const auto& name : manifest["states"]) {
        if (!name.is_string()) throw SchemaError("states", "state entries must be file names");
        record.truth_states.push_back(parse_snapshot(read_file(dir / name.get<std::string>()), registry));
    }
    if (record.truth_states.size() != record.scenario.turns.size() + 1)
        throw SchemaError("states", "expected " + std::to_string(record.scenario.turns.size() + 1) + " states, found " +
                                        std::to_string(record.truth_states.size()));
    return record;
}

ReplayReport replay_record(const ScenarioRecord& stored, std::shared_ptr<const Registry> registry) {
    ReplayReport report;
    report.scenario_id = stored.scenario.id;
    ScenarioRecord fresh;
    try {
        fresh = execute_truth(stored.scenario, std::move(registry));
    } catch (const Error& e) {
        report.error = e.what();
        return report;
    }
    std::size_t n = std::max(fresh.truth_states.size(), stored.truth_states.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (i >= fresh.truth_states.size() || i >= stored.truth_states.size()) {
            report.drift.push_back({i, {}, "state missing"});
            continue;
        }
        const auto& a = stored.truth_states[i];
        const auto& b = fresh.truth_states[i];
        if (serialize_snapshot(a) == serialize_snapshot(b)) continue;
        try {
            report.drift.push_back({i, diff_snapshots(a, b).changed_paths(), "values differ"});
        } catch (const SchemaError& e) {
            report.drift.push_back({i, {}, e.what()});
        }
    }
    return report;
}

}  // namespace cabin
