#include "whichpath/cli/runner.h"

#include <cmath>
#include <random>

#include "whichpath/analysis.h"
#include "whichpath/eraser.h"
#include "whichpath/numeric.h"

namespace whichpath::cli {

namespace {

using nlohmann::ordered_json;

constexpr size_t kMaxRandomBasisDim = 256;

ApertureSetup build_setup(const ScenarioConfig &c) {
    ApertureSetup setup{c.geometry.d, c.geometry.profile, c.geometry.lambda_db};
    setup.validate();
    return setup;
}

MomentumGrid build_grid(const ScenarioConfig &c) {
    if (c.grid.p_max) {
        return MomentumGrid(*c.grid.p_max, c.grid.n_points);
    }
    return MomentumGrid::for_separation(c.geometry.d, c.grid.n_points);
}

CavityGrid cavity_grid(const MicromaserConfig &m) {
    return {m.k_max.value_or(default_cavity_grid(m.L).k_max), m.n_k};
}

DipoleSpec dipole_of(const HeisenbergConfig &h) {
    return h.dipole.kind == DipoleSpec::Kind::fixed ? DipoleSpec::fixed(h.dipole.direction) : DipoleSpec::isotropic();
}

DetectorModel heisenberg_at(const ScenarioConfig &c, double k_gamma) {
    const auto &h = *c.heisenberg;
    return heisenberg_model(k_gamma, h.gamma_over_c, dipole_of(h), c.geometry.d, h.quadrature);
}

DetectorModel build_model(const ScenarioConfig &c) {
    switch (c.kind) {
        case ScenarioKind::heisenberg:
            if (!c.heisenberg || !c.heisenberg->k_gamma) {
                throw ConfigError(0, "heisenberg.k_gamma", "missing (give k_gamma or k_gamma_d)");
            }
            return heisenberg_at(c, *c.heisenberg->k_gamma);
        case ScenarioKind::micromaser:
            return micromaser_model(c.micromaser->L, c.geometry.d, cavity_grid(*c.micromaser));
        case ScenarioKind::custom:
            return custom_model(c.channels);
        case ScenarioKind::eraser:
            // Ideal which-path marker; the eraser itself lives in run_erase.
            return custom_model({{1.0, {1.0, 0.0}, {0.0, 0.0}}, {1.0, {0.0, 0.0}, {1.0, 0.0}}});
    }
    throw ConfigError(0, "scenario.kind", "unsupported");
}

void check_mode(const ScenarioConfig &c, RunMode mode) {
    if (c.mode && *c.mode != mode) {
        throw ConfigError(0, "scenario.mode",
                          "config is for '" + std::string(name_of(*c.mode)) + "' but the command is '" +
                              std::string(name_of(mode)) + "'");
    }
}

RunSummary start(const ScenarioConfig &c, RunMode mode) {
    check_mode(c, mode);
    RunSummary s;
    s.mode = mode;
    s.scenario = c.kind;
    s.config_echo = to_text(c);
    return s;
}

void add_coherence(RunSummary &s, const DetectorModel &model, const ApertureSetup &setup) {
    auto decomp = decompose(model, setup);
    auto coh = decomp.coherence();
    s.overlap = overlap(model);
    s.component_count = decomp.components.size();
    s.defined_components = 0;
    for (const auto &comp : decomp.components) {
        s.defined_components += comp.phase_defined ? 1 : 0;
    }
    s.diagnostics["global_visibility"] = std::abs(coh);
    s.diagnostics["global_phase"] = std::abs(coh) > 0.0 ? wrap_phase(std::arg(coh)) : 0.0;
}

std::vector<double> chi_values(const EraserConfig &e) {
    if (!e.chi.empty()) {
        return e.chi;
    }
    std::vector<double> out(e.n_chi);
    for (size_t j = 0; j < e.n_chi; ++j) {
        out[j] = kTwoPi * static_cast<double>(j) / static_cast<double>(e.n_chi);
    }
    return out;
}

std::string two_digit(size_t j) {
    std::string s = std::to_string(j);
    return s.size() < 2 ? "0" + s : s;
}

}  // namespace

ordered_json to_json(const RunSummary &s) {
    ordered_json j;
    j["tool"] = "whichpath";
    j["version"] = std::string(kToolVersion);
    j["mode"] = std::string(name_of(s.mode));
    j["scenario"] = std::string(name_of(s.scenario));
    if (s.overlap) {
        j["overlap"] = {{"re", s.overlap->real()},
                        {"im", s.overlap->imag()},
                        {"abs", std::abs(*s.overlap)},
                        {"arg", std::abs(*s.overlap) > 0.0 ? std::arg(*s.overlap) : 0.0}};
    } else {
        j["overlap"] = nullptr;
    }
    j["fitted_visibility"] = s.fitted_visibility ? ordered_json(*s.fitted_visibility) : ordered_json(nullptr);
    j["fitted_phase"] = s.fitted_phase ? ordered_json(*s.fitted_phase) : ordered_json(nullptr);
    j["components"] = {{"count", s.component_count}, {"defined", s.defined_components}};
    j["diagnostics"] = s.diagnostics;
    ordered_json files = ordered_json::array();
    for (const auto &f : s.files) {
        files.push_back({{"path", f.path}, {"bytes", f.bytes}});
    }
    j["files"] = files;
    j["config_echo"] = s.config_echo;
    return j;
}

RunSummary run_simulate(const ScenarioConfig &c, const RunOptions &o) {
    RunSummary s = start(c, RunMode::simulate);
    auto setup = build_setup(c);
    auto grid = build_grid(c);
    auto model = build_model(c);
    add_coherence(s, model, setup);

    Pattern marginal = marginal_pattern(model, setup, grid);
    Pattern env = envelope_pattern(setup.profile, grid);
    FringeFit fit = fitted_visibility(marginal, setup);
    s.fitted_visibility = fit.visibility;
    s.fitted_phase = fit.phase;

    CsvTable table({"p_x [1/length]", "P [length]", "envelope [length]"});
    for (size_t i = 0; i < grid.size(); ++i) {
        table.add_row(std::vector<double>{grid.at(i), marginal.values[i], env.values[i]});
    }
    s.files.push_back(write_file(o.out_dir, "pattern.csv", table.str()));
    if (o.svg) {
        s.files.push_back(write_file(o.out_dir, "pattern.svg",
                                     svg_line_chart("marginal pattern", "p_x", grid.points(),
                                                    {{"P", marginal.values}, {"envelope", env.values}})));
    }
    return s;
}

RunSummary run_sweep(const ScenarioConfig &c, const RunOptions &o) {
    RunSummary s = start(c, RunMode::sweep);
    if (!c.sweep) {
        throw ConfigError(0, "sweep", "sweep mode needs a [sweep] section");
    }
    const auto &sw = *c.sweep;
    auto setup = build_setup(c);
    auto grid = build_grid(c);
    if (sw.parameter == SweepParameter::k_gamma_d && c.heisenberg->dipole.kind != DipoleSpec::Kind::isotropic) {
        throw ConfigError(0, "heisenberg.dipole", "the sweep's analytic column needs dipole = isotropic");
    }

    std::string x_name = std::string(name_of(sw.parameter));
    CsvTable table({x_name, "V_fitted", "phi_fitted [rad]", "V_signed", "V_analytic", "overlap_re"});
    std::vector<double> xs, v_signed, v_analytic;
    double max_err = 0.0;
    for (size_t i = 1; i <= sw.count; ++i) {
        // Left-open range: the first point sits one step above `from`.
        double x = sw.from + (sw.to - sw.from) * static_cast<double>(i) / static_cast<double>(sw.count);
        DetectorModel model;
        double analytic = 0.0;
        if (sw.parameter == SweepParameter::k_gamma_d) {
            model = heisenberg_at(c, x / c.geometry.d);
            analytic = f0_isotropic(x, c.heisenberg->gamma_over_c * c.geometry.d / 2.0);
        } else {
            double L = c.micromaser->L;
            model = rect_cavity_model(L, x * L, cavity_grid(*c.micromaser));
            analytic = wk_visibility_rect(L, x * L);
        }
        FringeFit fit = fitted_visibility(marginal_pattern(model, setup, grid), setup);
        // The fit returns |F0|; the sign is carried by a pi phase.
        double signed_v = fit.visibility * std::cos(fit.phase);
        max_err = std::max(max_err, std::abs(signed_v - analytic));
        table.add_row(std::vector<double>{x, fit.visibility, fit.phase, signed_v, analytic, overlap(model).real()});
        xs.push_back(x);
        v_signed.push_back(signed_v);
        v_analytic.push_back(analytic);
    }
    s.diagnostics["sweep_parameter"] = x_name;
    s.diagnostics["points"] = sw.count;
    s.diagnostics["max_abs_error"] = max_err;
    s.files.push_back(write_file(o.out_dir, "sweep.csv", table.str()));
    if (o.svg) {
        s.files.push_back(write_file(o.out_dir, "sweep.svg",
                                     svg_line_chart("visibility sweep", x_name, xs,
                                                    {{"V_signed", v_signed}, {"V_analytic", v_analytic}})));
    }
    return s;
}

RunSummary run_decompose(const ScenarioConfig &c, const RunOptions &o) {
    RunSummary s = start(c, RunMode::decompose);
    auto setup = build_setup(c);
    DetectorModel model = build_model(c);
    switch (c.decompose.basis) {
        case DecomposeBasis::native:
            break;
        case DecomposeBasis::plus_minus:
            model = plus_minus_basis(model);
            break;
        case DecomposeBasis::random: {
            if (model.channels.size() > kMaxRandomBasisDim) {
                throw ConfigError(0, "decompose.basis",
                                  "random basis supports at most " + std::to_string(kMaxRandomBasisDim) +
                                      " channels, model has " + std::to_string(model.channels.size()));
            }
            std::mt19937_64 rng(o.seed.value_or(c.seed));
            auto flat = canonicalize(model);
            model = basis_rotate(flat, random_unitary(flat.channels.size(), rng));
            break;
        }
    }
    add_coherence(s, model, setup);
    auto decomp = decompose(model, setup);
    auto hist = transfer_histogram(decomp, c.decompose.bins);
    double d = setup.separation;

    CsvTable comps({"label", "mass", "V", "phi [rad]", "p [1/length]", "p_d", "phase_defined", "unwrapped_phase [rad]"});
    ordered_json transfers = ordered_json::array();
    for (const auto &comp : decomp.components) {
        comps.add_row(std::vector<std::string>{
            comp.label, format_number(comp.mass), format_number(comp.visibility), format_number(comp.phase),
            format_number(comp.momentum_transfer), format_number(comp.momentum_transfer * d),
            comp.phase_defined ? "1" : "0", comp.unwrapped_phase ? format_number(*comp.unwrapped_phase) : ""});
        if (comp.phase_defined) {
            transfers.push_back({{"label", comp.label}, {"p", comp.momentum_transfer}, {"p_d", comp.momentum_transfer * d}});
        }
    }
    CsvTable bins({"bin_center_p [1/length]", "bin_lower_p [1/length]", "bin_upper_p [1/length]", "mass"});
    // Only occupied bins; an ideal marker leaves the table empty.
    for (size_t b = 0; b < hist.masses.size(); ++b) {
        if (hist.masses[b] <= 0.0) {
            continue;
        }
        bins.add_row(std::vector<double>{hist.bin_centers[b], hist.bin_lower[b], hist.bin_upper[b], hist.masses[b]});
    }

    s.diagnostics["basis"] = std::string(name_of(c.decompose.basis));
    s.diagnostics["spread_measure"] = std::string(TransferHistogram::kSpreadMeasure);
    s.diagnostics["phase_iqr"] = hist.phase_iqr;
    s.diagnostics["momentum_iqr"] = hist.momentum_iqr;
    s.diagnostics["spread_product"] = hist.spread_product;
    s.diagnostics["unwrapped_phase_iqr"] =
        hist.unwrapped_phase_iqr ? ordered_json(*hist.unwrapped_phase_iqr) : ordered_json(nullptr);
    s.diagnostics["excluded_mass"] = hist.excluded_mass;
    s.diagnostics["transfers"] = transfers;

    s.files.push_back(write_file(o.out_dir, "components.csv", comps.str()));
    s.files.push_back(write_file(o.out_dir, "histogram.csv", bins.str()));
    if (o.svg && !hist.masses.empty()) {
        s.files.push_back(write_file(o.out_dir, "histogram.svg",
                                     svg_line_chart("momentum transfer histogram", "p", hist.bin_centers,
                                                    {{"mass", hist.masses}})));
    }
    return s;
}

RunSummary run_erase(const ScenarioConfig &c, const RunOptions &o) {
    RunSummary s = start(c, RunMode::erase);
    if (c.kind != ScenarioKind::eraser) {
        throw ConfigError(0, "scenario.kind", "erase needs kind = eraser");
    }
    auto setup = build_setup(c);
    auto grid = build_grid(c);
    add_coherence(s, build_model(c), setup);

    auto chis = chi_values(c.eraser);
    CsvTable table({"index", "chi [rad]", "V_plus", "phi_plus [rad]", "V_minus", "phi_minus [rad]", "p_plus [1/length]",
                    "p_minus [1/length]", "sum_rule_residual"});
    ordered_json points = ordered_json::array();
    double max_residual = 0.0;
    for (size_t j = 0; j < chis.size(); ++j) {
        EraserResult r = eraser_patterns(setup, grid, chis[j]);
        CsvTable pat({"p_x [1/length]", "P_plus [length]", "P_minus [length]", "envelope [length]"});
        for (size_t i = 0; i < grid.size(); ++i) {
            pat.add_row(std::vector<double>{grid.at(i), r.pattern_plus.values[i], r.pattern_minus.values[i],
                                            r.envelope.values[i]});
        }
        std::string stem = "erase_chi_" + two_digit(j);
        s.files.push_back(write_file(o.out_dir, stem + ".csv", pat.str()));
        if (o.svg) {
            s.files.push_back(write_file(o.out_dir, stem + ".svg",
                                         svg_line_chart("eraser coincidences, chi = " + format_number(r.chi), "p_x",
                                                        grid.points(),
                                                        {{"P_plus", r.pattern_plus.values},
                                                         {"P_minus", r.pattern_minus.values},
                                                         {"envelope", r.envelope.values}})));
        }
        table.add_row(std::vector<double>{static_cast<double>(j), r.chi, r.visibility_plus, r.phase_plus,
                                          r.visibility_minus, r.phase_minus, r.p_plus, r.p_minus,
                                          r.sum_rule_residual});
        points.push_back({{"chi", r.chi},
                          {"visibility_plus", r.visibility_plus},
                          {"phase_plus", r.phase_plus},
                          {"p_plus_d", r.p_plus * setup.separation},
                          {"p_minus_d", r.p_minus * setup.separation},
                          {"sum_rule_residual", r.sum_rule_residual}});
        max_residual = std::max(max_residual, r.sum_rule_residual);
        if (j == 0) {
            s.fitted_visibility = r.visibility_plus;
            s.fitted_phase = r.phase_plus;
        }
    }
    s.files.push_back(write_file(o.out_dir, "erase_sweep.csv", table.str()));
    s.diagnostics["max_sum_rule_residual"] = max_residual;
    s.diagnostics["chi_sweep"] = points;
    return s;
}

RunSummary run(RunMode mode, const ScenarioConfig &config, const RunOptions &o) {
    ScenarioConfig c = config;
    if (o.seed) {
        c.seed = *o.seed;
    }
    RunSummary s;
    switch (mode) {
        case RunMode::simulate:
            s = run_simulate(c, o);
            break;
        case RunMode::sweep:
            s = run_sweep(c, o);
            break;
        case RunMode::decompose:
            s = run_decompose(c, o);
            break;
        case RunMode::erase:
            s = run_erase(c, o);
            break;
    }
    // The summary lists itself; its byte count settles after a few passes.
    FileEntry self{"summary.json", 0};
    for (int pass = 0; pass < 8; ++pass) {
        auto files = s.files;
        files.push_back(self);
        RunSummary probe = s;
        probe.files = files;
        std::string text = to_json(probe).dump(2) + "\n";
        if (text.size() == self.bytes) {
            break;
        }
        self.bytes = text.size();
    }
    s.files.push_back(self);
    write_file(o.out_dir, "summary.json", to_json(s).dump(2) + "\n");
    return s;
}

}  // namespace whichpath::cli
