#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cabin/registry.hpp"
#include "cabin/scenario.hpp"

namespace cabin::testing {

inline std::filesystem::path source_dir() { return CABIN_SOURCE_DIR; }
inline std::filesystem::path seeds_dir() { return source_dir() / "scenarios" / "seeds"; }

inline std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::vector<std::filesystem::path> seed_files() {
    std::vector<std::filesystem::path> out;
    for (const auto& e : std::filesystem::directory_iterator(seeds_dir()))
        if (e.path().extension() == ".scenario") out.push_back(e.path());
    std::sort(out.begin(), out.end());
    return out;
}

inline std::vector<ScenarioRecord> seed_records() {
    auto reg = builtin_registry();
    std::vector<ScenarioRecord> out;
    for (const auto& f : seed_files()) out.push_back(execute_truth(parse_scenario(read_file(f), *reg), reg));
    return out;
}

inline ScenarioRecord seed_record(const std::string& name) {
    auto reg = builtin_registry();
    return execute_truth(parse_scenario(read_file(seeds_dir() / (name + ".scenario")), *reg), reg);
}

// Fresh directory under the system temp dir.
inline std::filesystem::path temp_dir(const std::string& tag) {
    static std::mt19937_64 rng{std::random_device{}()};
    auto p = std::filesystem::temp_directory_path() / ("cabin-" + tag + "-" + std::to_string(rng()));
    std::filesystem::create_directories(p);
    return p;
}

}  // namespace cabin::testing
