#include "whichpath/eraser.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "whichpath/analysis.h"
#include "whichpath/errors.h"
#include "whichpath/numeric.h"

namespace whichpath {

DetectorModel plus_minus_basis(const DetectorModel &model, double tolerance) {
    std::complex<double> ov = overlap(model);
    if (!(std::abs(ov) <= tolerance)) {
        throw PreconditionError(
            "plus/minus basis needs orthogonal path states; |<gamma_B|gamma_A>| = " + std::to_string(std::abs(ov)));
    }
    const double s = 1.0 / std::sqrt(2.0);
    DetectorModel out;
    out.kind = DetectorKind::plus_minus;
    out.parameters = model.parameters;
    out.parameters["source_overlap_abs"] = std::abs(ov);
    // <gamma_+-|gamma_A> = (<gamma_B|gamma_A> +- 1)/sqrt2, <gamma_+-|gamma_B> = (1 +- <gamma_A|gamma_B>)/sqrt2.
    out.channels.push_back({"+", 1.0, (ov + 1.0) * s, (1.0 + std::conj(ov)) * s, 0.0});
    out.channels.push_back({"-", 1.0, (ov - 1.0) * s, (1.0 - std::conj(ov)) * s, kPi});
    return out;
}

EraserResult eraser_patterns(const ApertureSetup &setup, const MomentumGrid &grid, double chi, const EraserOptions &options) {
    setup.validate();
    if (options.block_a && options.block_b) {
        throw ConfigurationError("eraser: both paths blocked");
    }
    auto spectrum = single_aperture_amplitude(setup.profile, grid);
    const double s = 1.0 / std::sqrt(2.0);
    const double d = setup.separation;
    const std::complex<double> beam_splitter_phase = std::polar(1.0, -chi);

    std::vector<double> plus(grid.size());
    std::vector<double> minus(grid.size());
    std::vector<double> envelope(grid.size());
    for (size_t i = 0; i < grid.size(); ++i) {
        double p = grid.at(i);
        std::complex<double> psi_a = options.block_a ? 0.0 : std::polar(s, 0.5 * p * d) * spectrum.values[i];
        std::complex<double> psi_b = options.block_b ? 0.0 : std::polar(s, -0.5 * p * d) * spectrum.values[i];
        plus[i] = std::norm((psi_a + beam_splitter_phase * psi_b) * s);
        minus[i] = std::norm((psi_a - beam_splitter_phase * psi_b) * s);
        envelope[i] = std::norm(psi_a) + std::norm(psi_b);
    }

    EraserResult out{
        make_pattern(grid, std::move(plus), Normalization::none),
        make_pattern(grid, std::move(minus), Normalization::none),
        make_pattern(grid, std::move(envelope), Normalization::none),
        chi,
    };
    double peak = out.envelope.max();
    double worst = 0.0;
    for (size_t i = 0; i < grid.size(); ++i) {
        worst = std::max(worst, std::abs(out.pattern_plus.values[i] + out.pattern_minus.values[i] - out.envelope.values[i]));
    }
    out.sum_rule_residual = worst / peak;

    auto fit_plus = fitted_visibility(out.pattern_plus, setup);
    auto fit_minus = fitted_visibility(out.pattern_minus, setup);
    out.visibility_plus = fit_plus.visibility;
    out.visibility_minus = fit_minus.visibility;
    out.phase_plus = fit_plus.phase;
    out.phase_minus = fit_minus.phase;
    out.p_plus = fit_plus.phase / d;
    out.p_minus = fit_minus.phase / d;
    return out;
}

std::vector<EraserSweepPoint> eraser_phase_sweep(const ApertureSetup &setup, const MomentumGrid &grid, size_t n_chi) {
    if (n_chi < 2) {
        throw DomainError("eraser phase sweep needs at least two phase values");
    }
    std::vector<EraserSweepPoint> out;
    out.reserve(n_chi);
    for (size_t j = 0; j < n_chi; ++j) {
        double chi = kTwoPi * static_cast<double>(j) / static_cast<double>(n_chi);
        auto r = eraser_patterns(setup, grid, chi);
        out.push_back({chi, r.visibility_plus, r.phase_plus, r.sum_rule_residual});
    }
    return out;
}

}  // namespace whichpath
