#ifndef WHICHPATH_CLI_RUNNER_H
#define WHICHPATH_CLI_RUNNER_H

#include <complex>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "whichpath/cli/config.h"
#include "whichpath/cli/output.h"

namespace whichpath::cli {

inline constexpr std::string_view kToolVersion = "0.1.0";

struct RunOptions {
    std::filesystem::path out_dir = ".";
    bool svg = false;
    /// Overrides the config's seed when set.
    std::optional<uint64_t> seed;
};

struct RunSummary {
    RunMode mode = RunMode::simulate;
    ScenarioKind scenario = ScenarioKind::heisenberg;
    std::optional<std::complex<double>> overlap;
    std::optional<double> fitted_visibility;
    std::optional<double> fitted_phase;
    size_t component_count = 0;
    size_t defined_components = 0;
    /// Mode-specific diagnostics (spread measures, sweep maxima, residuals).
    nlohmann::ordered_json diagnostics = nlohmann::ordered_json::object();
    std::vector<FileEntry> files;
    std::string config_echo;
};

nlohmann::ordered_json to_json(const RunSummary &summary);

/// Runs one subcommand and writes its files under options.out_dir.
/// Parameter problems surface as ConfigError or ConfigurationError;
/// numerical failures as NumericalError / IllConditionedError.
RunSummary run(RunMode mode, const ScenarioConfig &config, const RunOptions &options);

RunSummary run_simulate(const ScenarioConfig &config, const RunOptions &options);
RunSummary run_sweep(const ScenarioConfig &config, const RunOptions &options);
RunSummary run_decompose(const ScenarioConfig &config, const RunOptions &options);
RunSummary run_erase(const ScenarioConfig &config, const RunOptions &options);

}  // namespace whichpath::cli

#endif
