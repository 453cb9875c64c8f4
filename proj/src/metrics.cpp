#include "cabin/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "cabin/errors.hpp"

namespace cabin {

ChangeSets compute_change_sets(const WorldSnapshot& truth_prev, const WorldSnapshot& truth_next,
                               const WorldSnapshot& model_prev, const WorldSnapshot& model_next) {
    if (truth_prev.device_ids() != model_prev.device_ids())
        throw SchemaError("", "device-set mismatch between truth and model snapshots");
    StateDiff truth = diff_snapshots(truth_prev, truth_next);
    StateDiff model = diff_snapshots(model_prev, model_next);

    ChangeSets sets;
    for (const auto& c : truth.changed) {
        sets.should_change.insert(c.path);
        sets.truth_values.emplace(c.path, std::make_pair(c.before, c.after));
    }
    sets.should_unchange.insert(truth.unchanged.begin(), truth.unchanged.end());
    for (const auto& c : model.changed) {
        sets.model_changed.insert(c.path);
        sets.model_values.emplace(c.path, std::make_pair(c.before, c.after));
    }
    return sets;
}

bool path_correct(const ChangeSets& sets, const std::string& path, const std::set<std::string>& trend_scored) {
    auto model = sets.model_values.find(path);
    auto truth = sets.truth_values.find(path);
    if (model == sets.model_values.end() || truth == sets.truth_values.end()) return false;
    const auto& [tb, ta] = truth->second;
    const auto& [mb, ma] = model->second;
    if (trend_scored.count(path) && tb.is_numeric() && ta.is_numeric() && mb.is_numeric() && ma.is_numeric())
        return classify_trend(mb, ma) == classify_trend(tb, ta);
    return ma == ta;
}

MetricCounters compute_counters(const ChangeSets& sets, const std::set<std::string>& trend_scored, NegativeFpRule rule) {
    MetricCounters c;
    c.total_should_changed = sets.should_change.size();
    c.total_should_unchanged = sets.should_unchange.size();
    for (const auto& p : sets.should_change) {
        bool touched = sets.model_changed.count(p) > 0;
        if (touched) ++c.tp;
        else if (rule == NegativeFpRule::missed_changes) ++c.negative_fp;
        if (path_correct(sets, p, trend_scored)) ++c.n_correct;
    }
    for (const auto& p : sets.should_unchange) {
        if (sets.model_changed.count(p)) {
            ++c.fp;
            if (rule == NegativeFpRule::stays_changed) ++c.negative_fp;
        } else {
            ++c.negative_tp;
        }
    }
    c.n_total = c.total_should_changed;
    return c;
}

namespace {

double f1(std::size_t tp, std::size_t fp, std::size_t total) {
    if (tp == 0 || tp + fp == 0 || total == 0) return 0.0;
    double p = static_cast<double>(tp) / static_cast<double>(tp + fp);
    double r = static_cast<double>(tp) / static_cast<double>(total);
    return 2 * p * r / (p + r);
}

}  // namespace

double f1_positive(const MetricCounters& c) { return f1(c.tp, c.fp, c.total_should_changed); }
double f1_negative(const MetricCounters& c) { return f1(c.negative_tp, c.negative_fp, c.total_should_unchanged); }

double accuracy(const MetricCounters& c) {
    if (c.n_total == 0) throw Error("accuracy undefined: turn has no required change");
    return static_cast<double>(c.n_correct) / static_cast<double>(c.n_total);
}

double accuracy(const ChangeSets& sets, const std::set<std::string>& trend_scored) {
    return accuracy(compute_counters(sets, trend_scored));
}

bool rule_based_evaluate(const std::vector<ApiCall>& expected, const std::vector<ApiCall>& produced) {
    return expected == produced;
}

double error_rate(const std::vector<bool>& automatic, const std::vector<bool>& expert) {
    if (automatic.empty()) throw Error("error_rate needs at least one label");
    if (automatic.size() != expert.size()) throw Error("error_rate: label vectors differ in length");
    std::size_t mismatches = 0;
    for (std::size_t i = 0; i < automatic.size(); ++i) mismatches += automatic[i] != expert[i];
    return static_cast<double>(mismatches) / static_cast<double>(automatic.size());
}

Distribution Distribution::from_counts(const std::map<std::string, double>& counts) {
    Distribution d;
    double total = 0;
    for (const auto& [label, n] : counts) {
        if (n < 0) throw Error("negative count for " + label);
        total += n;
    }
    if (total <= 0) throw Error("distribution needs a positive total");
    for (const auto& [label, n] : counts) {
        d.labels.push_back(label);
        d.probs.push_back(n / total);
    }
    return d;
}

namespace {

void check_probabilities(const std::vector<double>& p) {
    double sum = 0;
    for (double x : p) {
        if (!(x >= 0)) throw Error("probabilities must be non-negative");
        sum += x;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw Error("probabilities must sum to 1");
}

double kl_to_mix(const std::vector<double>& p, const std::vector<double>& m) {
    double s = 0;
    for (std::size_t i = 0; i < p.size(); ++i)
        if (p[i] > 0) s += p[i] * std::log(p[i] / m[i]);
    return s;
}

}  // namespace

double jsd(const std::vector<double>& p, const std::vector<double>& q) {
    if (p.size() != q.size() || p.empty()) throw Error("jsd: supports differ");
    check_probabilities(p);
    check_probabilities(q);
    std::vector<double> m(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) m[i] = 0.5 * (p[i] + q[i]);
    double d = 0.5 * kl_to_mix(p, m) + 0.5 * kl_to_mix(q, m);
    return std::clamp(d, 0.0, std::log(2.0));  // rounding can stray past the bounds by an ulp
}

double jsd(const Distribution& p, const Distribution& q) {
    if (p.labels != q.labels) throw Error("jsd: supports differ");
    return jsd(p.probs, q.probs);
}

TurnReport score_turn(std::string scenario_id, std::string domain, std::size_t turn, const ChangeSets& sets,
                      const std::set<std::string>& trend_scored, NegativeFpRule rule) {
    TurnReport r;
    r.scenario_id = std::move(scenario_id);
    r.domain = std::move(domain);
    r.turn = turn;
    r.counters = compute_counters(sets, trend_scored, rule);
    r.f1_positive = f1_positive(r.counters);
    r.f1_negative = f1_negative(r.counters);
    r.accuracy = accuracy(r.counters);
    return r;
}

namespace {

struct Sum {
    double f1p = 0, f1n = 0, acc = 0;
    std::size_t n = 0;

    void add(const TurnReport& t) {
        f1p += t.f1_positive;
        f1n += t.f1_negative;
        acc += t.accuracy;
        ++n;
    }
    MetricSummary mean() const {
        double d = static_cast<double>(n);
        return {f1p / d, f1n / d, acc / d, n};
    }
};

nlohmann::json summary_json(const MetricSummary& s) {
    return {{"f1_positive", s.f1_positive}, {"f1_negative", s.f1_negative}, {"accuracy", s.accuracy}, {"turns", s.turns}};
}

std::string fixed(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

}  // namespace

MetricReport aggregate(const std::vector<TurnReport>& turns) {
    if (turns.empty()) throw Error("aggregate needs at least one turn report");
    Sum all;
    std::map<std::string, Sum> domains;
    for (const auto& t : turns) {
        all.add(t);
        domains[t.domain.empty() ? "unlabeled" : t.domain].add(t);
    }
    MetricReport r;
    r.overall = all.mean();
    for (const auto& [d, s] : domains) r.by_domain.emplace(d, s.mean());
    r.turns = turns;
    return r;
}

nlohmann::json report_to_json(const MetricReport& report) {
    nlohmann::json j;
    j["overall"] = summary_json(report.overall);
    j["by_domain"] = nlohmann::json::object();
    for (const auto& [d, s] : report.by_domain) j["by_domain"][d] = summary_json(s);
    j["turns"] = nlohmann::json::array();
    for (const auto& t : report.turns) {
        j["turns"].push_back({{"scenario", t.scenario_id},
                              {"domain", t.domain},
                              {"turn", t.turn},
                              {"f1_positive", t.f1_positive},
                              {"f1_negative", t.f1_negative},
                              {"accuracy", t.accuracy},
                              {"should_change", t.counters.total_should_changed},
                              {"tp", t.counters.tp},
                              {"fp", t.counters.fp},
                              {"n_correct", t.counters.n_correct}});
    }
    return j;
}

std::string report_to_text(const MetricReport& report) {
    std::vector<std::vector<std::string>> rows;
    rows.push_back({"scope", "turns", "F1+", "F1-", "acc"});
    auto summary_row = [&](const std::string& name, const MetricSummary& s) {
        rows.push_back({name, std::to_string(s.turns), fixed(s.f1_positive), fixed(s.f1_negative), fixed(s.accuracy)});
    };
    summary_row("overall", report.overall);
    for (const auto& [d, s] : report.by_domain) summary_row("domain:" + d, s);
    for (const auto& t : report.turns)
        rows.push_back({t.scenario_id + "#" + std::to_string(t.turn), "1", fixed(t.f1_positive), fixed(t.f1_negative),
                        fixed(t.accuracy)});

    std::vector<std::size_t> width(rows.front().size(), 0);
    for (const auto& row : rows)
        for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
    std::string out;
    for (const auto& row : rows) {
        std::string line;
        for (std::size_t i = 0; i < row.size(); ++i) {
            std::string cell = row[i];
            if (i == 0) line += cell + std::string(width[i] - cell.size(), ' ');
            else line += "  " + std::string(width[i] - cell.size(), ' ') + cell;
        }
        out += line + "\n";
    }
    return out;
}

}  // namespace cabin
