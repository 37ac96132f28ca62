#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "fedsust/federation_config.hpp"
#include "fedsust/reference_data.hpp"

namespace testing {

inline const fedsust::ReferenceData& reference() {
    static const auto ref = fedsust::load_reference_data(fedsust::default_data_dir());
    return ref;
}

inline std::filesystem::path scenario(const std::string& name) {
    return std::filesystem::path(FEDSUST_SCENARIO_DIR) / name;
}

inline fedsust::FederationConfig load_scenario(const std::string& name) {
    return fedsust::load_federation_config(scenario(name));
}

inline std::filesystem::path scratch(const std::string& name) {
    auto dir = std::filesystem::path(FEDSUST_TEST_TMP) / name;
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

inline std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void spit(const std::filesystem::path& p, const std::string& bytes) {
    std::ofstream out(p, std::ios::binary);
    out << bytes;
}

}  // namespace testing
