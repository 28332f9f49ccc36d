#include "cocycle/runner.hpp"

#include "CLI11.hpp"

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

int main(int argc, char** argv) {
    CLI::App app{"cocycle-lab: numerical experiments on difference cocycles over torus rotations"};
    app.footer("Exit codes: 0 analysis verdict pass, 1 verdict fail, 2 config or input error.");

    std::string analysis;
    std::string config_path;
    std::string out_dir;
    long long seed = -1;
    std::vector<std::string> flags;

    std::string analyses_help = "analysis to run (overrides the config field); one of:";
    for (const auto& n : cocycle::analysis_names()) analyses_help += " " + n;
    app.add_option("analysis", analysis, analyses_help);
    app.add_option("--config", config_path, "path to a JSON run config")->required();
    app.add_option("--out", out_dir, "output directory (overrides the config)");
    app.add_option("--seed", seed, "RNG seed (overrides the config)");
    app.add_option("--flag", flags, "feature flag by name; may be given repeatedly");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        cocycle::RunConfig cfg = cocycle::parse_config_file(config_path);
        if (!analysis.empty()) cfg.analysis = analysis;
        if (cfg.analysis.empty())
            throw cocycle::ConfigError(
                "no analysis selected (give it as the positional argument or the "
                "'analysis' config field)",
                0);
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);
        for (const auto& f : flags) {
            if (f == "wc2-raw-signs") {
                cfg.wc2_raw_signs = true;
            } else {
                std::cerr << "error: unknown flag '" << f << "' (known: wc2-raw-signs)\n";
                return 2;
            }
        }
        return cocycle::run_analysis(cfg);
    } catch (const cocycle::ConfigError& e) {
        if (e.line > 0)
            std::cerr << "config error at line " << e.line << ": " << e.what() << "\n";
        else
            std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
