// Command-line front end: whichpath <simulate|sweep|decompose|erase> --config FILE.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "whichpath/cli/runner.h"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

int exit_code_for(const std::exception &e) {
    using namespace whichpath;
    if (dynamic_cast<const NumericalError *>(&e) || dynamic_cast<const IllConditionedError *>(&e)) {
        return kExitNumerical;
    }
    if (dynamic_cast<const Error *>(&e) || dynamic_cast<const std::invalid_argument *>(&e)) {
        return kExitConfig;
    }
    return kExitNumerical;
}

}  // namespace

int main(int argc, char **argv) {
    using namespace whichpath::cli;

    CLI::App app{"Which-path interference simulator"};
    app.set_version_flag("--version", std::string(kToolVersion));
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = ".";
    bool svg = false;
    bool quiet = false;
    std::optional<uint64_t> seed;

    for (auto mode : {RunMode::simulate, RunMode::sweep, RunMode::decompose, RunMode::erase}) {
        auto *sub = app.add_subcommand(std::string(name_of(mode)));
        sub->add_option("--config", config_path, "scenario config file")->required();
        sub->add_option("--out", out_dir, "output directory");
        sub->add_flag("--svg", svg, "also write SVG line charts");
        sub->add_option("--seed", seed, "seed for random-basis runs (overrides the config)");
        sub->add_flag("--quiet", quiet, "do not print the summary");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : kExitConfig;
    }

    RunMode mode = *parse_run_mode(app.get_subcommands().front()->get_name());
    try {
        std::ifstream in(config_path, std::ios::binary);
        if (!in) {
            std::cerr << "error: cannot read config '" << config_path << "'\n";
            return kExitConfig;
        }
        std::stringstream text;
        text << in.rdbuf();
        ScenarioConfig config = parse_config(text.str());

        RunOptions options;
        options.out_dir = out_dir;
        options.svg = svg;
        options.seed = seed;
        RunSummary summary = run(mode, config, options);
        if (!quiet) {
            std::cout << to_json(summary).dump(2) << "\n";
        }
        return 0;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e);
    }
}
