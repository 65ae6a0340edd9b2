#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace fluor::cli {

/// Everything a command needs; echoed into the metadata of every artifact.
struct RunConfig {
    std::string command;
    std::string grid = "300:800:1";
    std::vector<std::string> bases{"xyz"};
    std::vector<std::string> methods{"ours", "naive"};
    std::string naive_norm = "l2";
    std::uint64_t seed = 0;
    std::string out = "out";
    std::vector<std::string> materials;
    std::vector<std::string> illuminants;
    std::vector<double> uv_knots;
    std::string cmf;
    std::string scene;
    std::string manifest;
    std::string swipe_range = "300:700:1";
    bool rgb = false;
    bool panels = false;
    int spp = 0;
    int width = 0;
    int height = 0;
    unsigned threads = 0;
    double max_anti_stokes = -1.0;

    nlohmann::json to_json() const;
};

// Each returns the process exit code (0, or 2 when an asserted property fails).
int cmd_reduce(const RunConfig& config);
int cmd_patch(const RunConfig& config);
int cmd_swipe(const RunConfig& config);
int cmd_render(const RunConfig& config);
int cmd_eval(const RunConfig& config);
int cmd_validate(const RunConfig& config);

}  // namespace fluor::cli
