#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "cabin/state.hpp"
#include "cabin/world.hpp"

namespace cabin {

struct ChangeSets {
    std::set<std::string> should_change;    // truth diff
    std::set<std::string> should_unchange;  // complement over the full path set
    std::set<std::string> model_changed;    // model diff
    std::map<std::string, std::pair<Value, Value>> truth_values;  // should_change path -> (before, after)
    std::map<std::string, std::pair<Value, Value>> model_values;  // model_changed path -> (before, after)
};

// Throws SchemaError when the four snapshots do not share one device set.
ChangeSets compute_change_sets(const WorldSnapshot& truth_prev, const WorldSnapshot& truth_next,
                               const WorldSnapshot& model_prev, const WorldSnapshot& model_next);

// What counts as a negative false positive.
enum class NegativeFpRule {
    stays_changed,    // should-stay path the model changed (default; keeps the null agent at F1- = 1)
    missed_changes,   // should-change path the model left untouched
};

struct MetricCounters {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t negative_tp = 0;
    std::size_t negative_fp = 0;
    std::size_t total_should_changed = 0;
    std::size_t total_should_unchanged = 0;
    std::size_t n_correct = 0;
    std::size_t n_total = 0;

    friend bool operator==(const MetricCounters&, const MetricCounters&) = default;
};

// A should-change path is correct when the model changed it and either reached the truth value
// exactly or, for paths in `trend_scored`, moved it in the same direction.
bool path_correct(const ChangeSets& sets, const std::string& path, const std::set<std::string>& trend_scored);

MetricCounters compute_counters(const ChangeSets& sets, const std::set<std::string>& trend_scored,
                                NegativeFpRule rule = NegativeFpRule::stays_changed);

// Harmonic mean of precision and recall; a zero denominator scores 0.
double f1_positive(const MetricCounters& c);
double f1_negative(const MetricCounters& c);
// n_correct / n_total. Throws Error when n_total is 0.
double accuracy(const MetricCounters& c);
double accuracy(const ChangeSets& sets, const std::set<std::string>& trend_scored);

// Exact ordered comparison of API names and argument maps.
bool rule_based_evaluate(const std::vector<ApiCall>& expected, const std::vector<ApiCall>& produced);

// Share of positions where the two label vectors disagree. Throws Error on empty or unequal input.
double error_rate(const std::vector<bool>& automatic, const std::vector<bool>& expert);

struct Distribution {
    std::vector<std::string> labels;
    std::vector<double> probs;

    // Normalises non-negative counts; labels come out sorted.
    static Distribution from_counts(const std::map<std::string, double>& counts);
};

// Jensen-Shannon divergence in nats (bounded by ln 2). Throws Error when the supports differ or
// either input is not a probability vector (tolerance 1e-9).
double jsd(const Distribution& p, const Distribution& q);
double jsd(const std::vector<double>& p, const std::vector<double>& q);

struct TurnReport {
    std::string scenario_id;
    std::string domain;
    std::size_t turn = 0;  // 1-based
    MetricCounters counters;
    double f1_positive = 0;
    double f1_negative = 0;
    double accuracy = 0;
};

TurnReport score_turn(std::string scenario_id, std::string domain, std::size_t turn, const ChangeSets& sets,
                      const std::set<std::string>& trend_scored, NegativeFpRule rule = NegativeFpRule::stays_changed);

struct MetricSummary {
    double f1_positive = 0;
    double f1_negative = 0;
    double accuracy = 0;
    std::size_t turns = 0;
};

struct MetricReport {
    MetricSummary overall;
    std::map<std::string, MetricSummary> by_domain;
    std::vector<TurnReport> turns;
};

// Unweighted mean across turns, with per-domain rollups. Throws Error on empty input.
MetricReport aggregate(const std::vector<TurnReport>& turns);

// Structured document. Counters that scale with world size (negative_tp, negative_fp,
// total_should_unchanged) are left out so reports compare equal across distractor counts.
nlohmann::json report_to_json(const MetricReport& report);
// Aligned-column table: overall, per domain, then one row per turn.
std::string report_to_text(const MetricReport& report);

}  // namespace cabin
