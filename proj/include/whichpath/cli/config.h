#ifndef WHICHPATH_CLI_CONFIG_H
#define WHICHPATH_CLI_CONFIG_H

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "whichpath/apertures.h"
#include "whichpath/detectors.h"
#include "whichpath/errors.h"

namespace whichpath::cli {

enum class ScenarioKind { heisenberg, micromaser, custom, eraser };
enum class RunMode { simulate, sweep, decompose, erase };
enum class SweepParameter { k_gamma_d, shift_over_L };
enum class DecomposeBasis { native, plus_minus, random };

std::string_view name_of(ScenarioKind v);
std::string_view name_of(RunMode v);
std::string_view name_of(SweepParameter v);
std::string_view name_of(DecomposeBasis v);
std::optional<RunMode> parse_run_mode(std::string_view text);

struct GeometryConfig {
    double d = 1.0;
    ApertureProfile profile;
    double lambda_db = 1.0;

    bool operator==(const GeometryConfig &) const = default;
};

struct GridConfig {
    /// Unset means 8 * 2 pi / d.
    std::optional<double> p_max;
    size_t n_points = 4096;

    bool operator==(const GridConfig &) const = default;
};

struct HeisenbergConfig {
    /// Required for simulate/decompose; a sweep overrides it.
    std::optional<double> k_gamma;
    double gamma_over_c = 0.0;
    DipoleSpec dipole;
    PhotonQuadrature quadrature;

    bool operator==(const HeisenbergConfig &) const = default;
};

struct MicromaserConfig {
    double L = 0.0;
    /// Unset means 400 pi / L.
    std::optional<double> k_max;
    size_t n_k = 4001;

    bool operator==(const MicromaserConfig &) const = default;
};

struct SweepConfig {
    SweepParameter parameter = SweepParameter::k_gamma_d;
    double from = 0.0;
    double to = 1.0;
    size_t count = 2;

    bool operator==(const SweepConfig &) const = default;
};

struct DecomposeConfig {
    DecomposeBasis basis = DecomposeBasis::native;
    size_t bins = 32;

    bool operator==(const DecomposeConfig &) const = default;
};

struct EraserConfig {
    size_t n_chi = 8;
    /// Explicit phase list; overrides n_chi when nonempty.
    std::vector<double> chi;

    bool operator==(const EraserConfig &) const = default;
};

struct ScenarioConfig {
    ScenarioKind kind = ScenarioKind::heisenberg;
    std::optional<RunMode> mode;
    uint64_t seed = 0;
    GeometryConfig geometry;
    GridConfig grid;
    std::optional<HeisenbergConfig> heisenberg;
    std::optional<MicromaserConfig> micromaser;
    std::vector<ChannelSpec> channels;
    std::optional<SweepConfig> sweep;
    DecomposeConfig decompose;
    EraserConfig eraser;

    bool operator==(const ScenarioConfig &) const = default;
};

/// Parse failure with the offending line (0 when not tied to a line) and
/// the dotted field name.
struct ConfigError : Error {
    ConfigError(size_t line, std::string field, const std::string &message);

    size_t line;
    std::string field;
};

/// Parses the sectioned key = value format. Unknown sections or keys,
/// duplicated keys and out-of-range values are errors.
ScenarioConfig parse_config(std::string_view text);

/// Canonical text form; parse_config(to_text(c)) == c.
std::string to_text(const ScenarioConfig &config);

/// Numeric literal with optional pi factors: "0.5", "4*pi", "pi/2", "2pi/3".
double parse_number(std::string_view text);

}  // namespace whichpath::cli

#endif
