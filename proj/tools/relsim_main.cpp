#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "relsim/scenario.hpp"

int main(int argc, char** argv) {
    CLI::App app{"relsim -- measurement-field ordering and Bell-layout scenario runner"};
    std::string config_path;
    std::string out_dir = "out";
    std::string format = "csv";
    std::uint64_t seed = 0;
    std::uint64_t trials = 0;
    bool seed_set = false;
    bool trials_set = false;
    app.add_option("--config", config_path, "Scenario configuration JSON")->required();
    app.add_option("--seed", seed, "Override the config's RNG seed")
        ->each([&](const std::string&) { seed_set = true; });
    app.add_option("--trials", trials, "Override the config's trial count")
        ->each([&](const std::string&) { trials_set = true; });
    app.add_option("--out", out_dir, "Output directory");
    app.add_option("--format", format, "Table format")
        ->check(CLI::IsMember({"csv", "json"}));
    CLI11_PARSE(app, argc, argv);

    std::ifstream in(config_path);
    if (!in) {
        std::cerr << "error: cannot read config file " << config_path << "\n";
        return 1;
    }
    std::stringstream buffer;
    buffer << in.rdbuf();

    relsim::scenario::ScenarioConfig config;
    try {
        config = relsim::scenario::parse_config(buffer.str());
    } catch (const relsim::scenario::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    if (seed_set) config.seed = seed;
    if (trials_set) {
        if (trials == 0) {
            std::cerr << "error: --trials must be >= 1\n";
            return 1;
        }
        config.trials = trials;
    }

    try {
        const auto fmt = format == "json" ? relsim::scenario::Format::Json
                                          : relsim::scenario::Format::Csv;
        std::cout << relsim::scenario::run(config, out_dir, fmt);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
