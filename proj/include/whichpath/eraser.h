#ifndef WHICHPATH_ERASER_H
#define WHICHPATH_ERASER_H

#include <vector>

#include "whichpath/apertures.h"
#include "whichpath/detectors.h"
#include "whichpath/grid.h"

namespace whichpath {

/// Re-expresses an ideal which-path detector (<gamma_B|gamma_A> = 0) in the
/// basis |gamma_+-> = (|gamma_B> +- |gamma_A>) / sqrt(2). The result has two
/// flat-weight channels labeled "+" and "-" with
/// amp_a = <gamma_+-|gamma_A>, amp_b = <gamma_+-|gamma_B>.
DetectorModel plus_minus_basis(const DetectorModel &model, double tolerance = 1e-6);

/// Test hooks for blocking one of the two paths.
struct EraserOptions {
    bool block_a = false;
    bool block_b = false;
};

/// Coincidence patterns behind a 50-50 recombination of the two photon paths.
///
/// The photon from B picks up the phase chi before the beam splitter; D1 ("+")
/// and D2 ("-") project onto (|gamma_A> +- e^{i chi}|gamma_B>) / sqrt(2). The
/// conditional atom amplitudes are (Psi_A +- e^{-i chi} Psi_B) / sqrt(2), so
/// for point apertures P_+- = envelope [1 +- cos(p d + chi)] / 2. Each
/// pattern keeps its detection probability as mass; the envelope is
/// |Psi_A|^2 + |Psi_B|^2.
struct EraserResult {
    Pattern pattern_plus;
    Pattern pattern_minus;
    Pattern envelope;
    double chi = 0.0;
    /// Fitted fringe parameters of the two coincidence patterns.
    double visibility_plus = 0.0;
    double visibility_minus = 0.0;
    double phase_plus = 0.0;
    double phase_minus = 0.0;
    /// phase_plus / d and phase_minus / d.
    double p_plus = 0.0;
    double p_minus = 0.0;
    /// max |P_+ + P_- - envelope| / max envelope.
    double sum_rule_residual = 0.0;
};

EraserResult eraser_patterns(
    const ApertureSetup &setup, const MomentumGrid &grid, double chi, const EraserOptions &options = {});

struct EraserSweepPoint {
    double chi = 0.0;
    double visibility = 0.0;
    double phase = 0.0;
    double sum_rule_residual = 0.0;
};

/// chi on the uniform grid 2 pi j / n_chi, j = 0..n_chi-1, with the fitted
/// fringe of pattern_plus at each value.
std::vector<EraserSweepPoint> eraser_phase_sweep(const ApertureSetup &setup, const MomentumGrid &grid, size_t n_chi);

}  // namespace whichpath

#endif
