#pragma once

#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "cabin/errors.hpp"
#include "cabin/state.hpp"
#include "cabin/world.hpp"

namespace cabin {

// One <inits> line: either `device.preset` or a raw API call.
struct InitStep {
    std::string device_id;
    std::string preset;
    std::optional<ApiCall> call;

    friend bool operator==(const InitStep&, const InitStep&) = default;
};

struct Turn {
    std::string query;
    std::vector<ApiCall> truth_calls;
    std::set<std::string> trend_scored;  // flat paths scored by direction instead of exact value

    friend bool operator==(const Turn&, const Turn&) = default;
};

struct Scenario {
    std::string id;
    std::string domain;    // optional attribute
    std::string category;  // S-S | S-M | M-S | M-M, optional
    std::vector<InitStep> inits;
    std::vector<Turn> turns;

    // Devices the scenario brings up, in first-mention order (call-form inits contribute the
    // API's owning device).
    std::vector<std::string> device_ids(const Registry& registry) const;

    friend bool operator==(const Scenario&, const Scenario&) = default;
};

struct ScenarioRecord {
    Scenario scenario;
    std::vector<WorldSnapshot> truth_states;  // initial state, then one per turn
};

// Failure while executing a scenario. turn() is 0-based, or nullopt for the init phase.
class ScenarioError : public Error {
public:
    ScenarioError(std::optional<std::size_t> turn, const std::string& what)
        : Error((turn ? "turn " + std::to_string(*turn + 1) : std::string("inits")) + ": " + what), turn_(turn) {}

    std::optional<std::size_t> turn() const noexcept { return turn_; }

private:
    std::optional<std::size_t> turn_;
};

// Syntax only: tags, pairing, call expressions. Throws SyntaxError.
Scenario parse_scenario_text(std::string_view text);
// parse_scenario_text plus name resolution against the registry (devices, presets, APIs and
// trend paths). Throws SyntaxError or SchemaError.
Scenario parse_scenario(std::string_view text, const Registry& registry);

// Canonical DSL text; parse_scenario_text(format_scenario(s)) == s.
std::string format_scenario(const Scenario& scenario);

// Brings up the scenario's devices on `world`. Throws ScenarioError on failure.
void apply_inits(const Scenario& scenario, World& world);

// Runs inits and every turn on `world` (expected fresh) and captures the truth trace. Throws
// ScenarioError on a failed init or call, or on a turn that leaves the state unchanged.
ScenarioRecord execute_truth(const Scenario& scenario, World& world);
ScenarioRecord execute_truth(const Scenario& scenario, std::shared_ptr<const Registry> registry);

inline constexpr std::string_view kHumanReview = "requires human review";

struct ValidationReport {
    bool executable = false;
    bool state_changing = false;
    bool resolvable = false;
    std::string semantic_alignment{kHumanReview};
    std::vector<std::string> diagnostics;

    bool ok() const noexcept { return executable && state_changing && resolvable; }
};

// Never throws for scenario defects; they land in the report.
ValidationReport validate_scenario(const Scenario& scenario, World& world);
ValidationReport validate_scenario(const Scenario& scenario, std::shared_ptr<const Registry> registry);

// Record persistence: a directory holding scenario.txt, manifest.json and one canonical snapshot
// document per truth state (state_000.json, ...).
void save_record(const ScenarioRecord& record, const std::filesystem::path& dir);
ScenarioRecord load_record(const std::filesystem::path& dir, const Registry& registry);
// Byte-exact concatenation of everything save_record writes, in file order.
std::string serialize_record(const ScenarioRecord& record);

struct DriftEntry {
    std::size_t state_index;
    std::vector<std::string> paths;  // differing flat paths; empty when a state is missing
    std::string note;
};

struct ReplayReport {
    std::string scenario_id;
    std::vector<DriftEntry> drift;
    std::optional<std::string> error;  // re-execution failed

    bool clean() const noexcept { return drift.empty() && !error; }
};

// Re-executes the stored scenario on a fresh world and compares against the stored states.
ReplayReport replay_record(const ScenarioRecord& stored, std::shared_ptr<const Registry> registry);

}  // namespace cabin
