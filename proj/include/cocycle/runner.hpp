#pragma once

#include "cocycle/discretizer.hpp"
#include "cocycle/types.hpp"

#include "json.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace cocycle {

inline constexpr const char* library_version = "0.1.0";
inline constexpr const char* rng_identifier = "mt19937_64";

/// One analysis per invocation; everything an analysis needs travels here.
/// All randomness flows from the single seed.
struct RunConfig {
    std::string analysis;
    std::string scenario;
    nlohmann::json params = nlohmann::json::object();
    IntegratorConfig integrator;
    nlohmann::json knobs = nlohmann::json::object();
    std::uint64_t seed = 1;
    std::string out_dir = "out";
    bool wc2_raw_signs = false;
};

const std::vector<std::string>& analysis_names();

/// Parse and schema-check a config file; throws ConfigError with a 1-based
/// line number pointing at the offending key (line 0 when unknown).
RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_file(const std::string& path);

/// Execute the analysis: writes result.json, manifest.json and per-analysis
/// CSV artifacts into out_dir. Returns 0 on verdict-pass, 1 on verdict-fail.
/// Config and input errors surface as exceptions (the CLI maps them to 2).
int run_analysis(const RunConfig& config);

std::uint64_t fnv1a64(const std::string& bytes);

}  // namespace cocycle
