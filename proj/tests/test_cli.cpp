#include <gtest/gtest.h>

#include <sstream>

#include <nlohmann/json.hpp>

#include "cli.hpp"
#include "test_support.hpp"

namespace fs = std::filesystem;
using cabin::testing::read_file;
using cabin::testing::seeds_dir;
using cabin::testing::temp_dir;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result cli(std::vector<std::string> args) {
    args.insert(args.begin(), "cabin");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    int code = cabin::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

std::vector<fs::path> tree(const fs::path& root) {
    std::vector<fs::path> out;
    for (const auto& e : fs::recursive_directory_iterator(root)) out.push_back(fs::relative(e.path(), root));
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

TEST(Cli, UsageErrors) {
    EXPECT_EQ(cli({}).code, 2);
    EXPECT_EQ(cli({"frobnicate"}).code, 2);
    EXPECT_EQ(cli({"run", seeds_dir().string(), "--mode", "telepathy"}).code, 2);
    EXPECT_EQ(cli({"run", seeds_dir().string(), "--distractors", "3"}).code, 2);
    EXPECT_EQ(cli({"run", seeds_dir().string(), "--jobs", "0"}).code, 2);
    EXPECT_EQ(cli({"validate", (seeds_dir() / "*.nothing").string()}).code, 2);
    EXPECT_EQ(cli({"--help"}).code, 0);
}

TEST(Cli, EndpointAgentNeedsConfig) {
    auto dir = temp_dir("cli-noconf");
    auto r = cli({"run", seeds_dir().string(), "--mode", "hybrid", "--out", dir.string()});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("--config"), std::string::npos);
    EXPECT_TRUE(fs::is_empty(dir));
    fs::remove_all(dir);
}

TEST(Cli, ConfigWithSecretIsRejected) {
    auto dir = temp_dir("cli-secret");
    std::ofstream(dir / "c.json") << R"({"endpoint": {"url": "http://127.0.0.1:1/v1", "api_key": "sk-x"}})";
    auto r = cli({"run", seeds_dir().string(), "--config", (dir / "c.json").string(), "--out", (dir / "o").string()});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("environment variable"), std::string::npos);
    fs::remove_all(dir);
}

TEST(Cli, ValidateSeeds) {
    auto r = cli({"validate", seeds_dir().string()});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(count_lines(r.out), cabin::testing::seed_files().size());

    auto glob = cli({"validate", (seeds_dir() / "sample_*.scenario").string()});
    EXPECT_EQ(glob.code, 0);
    EXPECT_EQ(count_lines(glob.out), 2u);
}

TEST(Cli, ValidateReportsBadFile) {
    auto dir = temp_dir("cli-bad");
    std::ofstream(dir / "broken.scenario") << "<scenario id=\"b\"><query>hello</query></scenario>";
    std::ofstream(dir / "noop.scenario")
        << "<scenario id=\"n\"><inits>door.default</inits><query>q</query><api_call>door_close()</api_call></scenario>";
    fs::copy_file(seeds_dir() / "lt_ss_purple.scenario", dir / "good.scenario");
    auto r = cli({"validate", dir.string()});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("broken.scenario"), std::string::npos) << r.err;
    EXPECT_NE(r.err.find("noop.scenario"), std::string::npos) << r.err;
    EXPECT_NE(r.out.find("good.scenario"), std::string::npos);
    EXPECT_EQ(cli({"validate", (dir / "missing.scenario").string()}).code, 1);
    fs::remove_all(dir);
}

TEST(Cli, Devices) {
    auto all = cli({"devices"});
    EXPECT_EQ(all.code, 0);
    EXPECT_EQ(count_lines(all.out), 12u);
    auto conv = cli({"devices", "--api", "conversation", "--json"});
    EXPECT_EQ(conv.code, 0);
    EXPECT_EQ(nlohmann::json::parse(conv.out).size(), 15u);
    EXPECT_NE(cli({"devices", "--api", "conversation"}).out.find("required: One of: value, degree"), std::string::npos);
    EXPECT_EQ(cli({"devices", "--api", "zeppelin"}).code, 2);
}

TEST(Cli, RunWritesOnlyUnderOut) {
    auto dir = temp_dir("cli-run");
    auto out = dir / "run";
    auto r = cli({"run", (seeds_dir() / "lt_*.scenario").string(), "--agent", "oracle", "--mode", "sfc", "--jobs", "2",
                  "--out", out.string()});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("overall"), std::string::npos);
    auto report = nlohmann::json::parse(read_file(out / "report.json"));
    EXPECT_DOUBLE_EQ(report["overall"]["accuracy"].get<double>(), 1.0);
    EXPECT_EQ(report["run"]["mode"], "sfc");
    EXPECT_TRUE(fs::exists(out / "report.txt"));
    EXPECT_TRUE(fs::exists(out / "transcripts" / "lt_ss_purple.txt"));
    EXPECT_TRUE(fs::exists(out / "scenarios" / "lt_ss_purple.json"));
    // Nothing outside --out.
    EXPECT_EQ(tree(dir), (std::vector<fs::path>{"run", "run/report.json", "run/report.txt", "run/scenarios",
                                                "run/scenarios/lt_mm_music_rhythm.json", "run/scenarios/lt_ms_dimming.json",
                                                "run/scenarios/lt_sm_breathing.json", "run/scenarios/lt_ss_purple.json",
                                                "run/transcripts", "run/transcripts/lt_mm_music_rhythm.txt",
                                                "run/transcripts/lt_ms_dimming.txt", "run/transcripts/lt_sm_breathing.txt",
                                                "run/transcripts/lt_ss_purple.txt"}));

    auto rep = cli({"report", out.string(), "--json"});
    EXPECT_EQ(rep.code, 0);
    EXPECT_DOUBLE_EQ(nlohmann::json::parse(rep.out)["overall"]["f1_positive"].get<double>(), 1.0);
    EXPECT_EQ(cli({"report", (dir / "nowhere").string()}).code, 1);
    fs::remove_all(dir);
}

TEST(Cli, LowScoresAreNotFailures) {
    auto dir = temp_dir("cli-null");
    auto r = cli({"run", (seeds_dir() / "lt_ss_purple.scenario").string(), "--agent", "null", "--out", dir.string()});
    EXPECT_EQ(r.code, 0) << r.err;
    fs::remove_all(dir);
}

TEST(Cli, ReplayRecords) {
    auto dir = temp_dir("cli-replay");
    ASSERT_EQ(cli({"validate", seeds_dir().string(), "--out", dir.string()}).code, 0);
    auto clean = cli({"replay", (dir / "records").string()});
    EXPECT_EQ(clean.code, 0) << clean.err;
    EXPECT_EQ(count_lines(clean.out), cabin::testing::seed_files().size());

    // Corrupt one stored state.
    auto state = dir / "records" / "lt_ss_purple" / "state_001.json";
    auto j = nlohmann::json::parse(read_file(state));
    j["environment"]["volume"]["value"] = 3;
    std::ofstream(state, std::ios::trunc) << j.dump();
    auto drift = cli({"replay", (dir / "records" / "lt_ss_purple").string()});
    EXPECT_EQ(drift.code, 1);
    EXPECT_NE(drift.err.find("environment.volume"), std::string::npos) << drift.err;
    fs::remove_all(dir);
}
