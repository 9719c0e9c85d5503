#ifndef WHICHPATH_ANALYSIS_H
#define WHICHPATH_ANALYSIS_H

#include <complex>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "whichpath/apertures.h"
#include "whichpath/detectors.h"
#include "whichpath/grid.h"

namespace whichpath {

/// Elementary fringe recorded in coincidence with detector outcome xi.
struct FringeComponent {
    std::string label;
    /// w (|amp_a|^2 + |amp_b|^2), normalized over the model.
    double mass = 0.0;
    double visibility = 0.0;
    /// arg(amp_a) - arg(amp_b) in (-pi, pi]; 0 when undefined.
    double phase = 0.0;
    /// phase / d (hbar = 1).
    double momentum_transfer = 0.0;
    /// False exactly when visibility == 0.
    bool phase_defined = false;
    std::optional<double> unwrapped_phase;
};

struct FringeDecomposition {
    std::vector<FringeComponent> components;
    ApertureSetup setup;

    /// sum_xi mass V e^{i phi}. The marginal pattern is
    /// envelope * (1 + Re(coherence * e^{i p d})).
    std::complex<double> coherence() const;
};

FringeDecomposition decompose(const DetectorModel &model, const ApertureSetup &setup);

/// Pattern recorded without looking at the detector:
/// sum_xi mass [1 + V cos(p d + phi)] envelope, normalized to unit mass.
Pattern marginal_pattern(const DetectorModel &model, const ApertureSetup &setup, const MomentumGrid &grid);

/// [1 + V_xi cos(p d + phi_xi)] envelope for one outcome.
///
/// Conditionals share the marginal's normalization constant, so
/// sum_xi mass_xi * conditional_xi reproduces marginal_pattern exactly. For
/// non-overlapping apertures each conditional has unit mass up to the grid's
/// truncation of the envelope (exactly, for point apertures).
Pattern conditional_pattern(
    const DetectorModel &model, const ApertureSetup &setup, const MomentumGrid &grid, std::string_view label);

/// Shared state behind marginal_pattern and conditional_pattern, for
/// building many conditionals of one model without redoing the setup.
class ConditionalPatterns {
   public:
    ConditionalPatterns(const DetectorModel &model, const ApertureSetup &setup, const MomentumGrid &grid);

    const FringeDecomposition &decomposition() const {
        return decomp_;
    }
    Pattern marginal() const;
    Pattern conditional(const FringeComponent &component) const;
    /// LookupError for labels not in the model.
    Pattern conditional(std::string_view label) const;

   private:
    Pattern fringe_over_envelope(double visibility, double phase) const;

    FringeDecomposition decomp_;
    Pattern envelope_;
    MomentumGrid grid_;
    std::vector<std::string> labels_;
    std::vector<double> marginal_raw_;
    double norm_ = 1.0;
};

/// Narrow-aperture (momentum kick) form:
/// sum_xi mass [(1 - V) envelope + V P0(p + p_xi)], normalized.
Pattern correlation_form_pattern(const FringeDecomposition &decomp, const Pattern &p0, const Pattern &envelope);

/// Half-width of the region where every shifted copy of P0 in the
/// correlation form stays on the grid: p_max - max |p_xi|.
double correlation_form_window(const FringeDecomposition &decomp, const MomentumGrid &grid);

/// max |a - b| / max b over |p| <= window, after rescaling both patterns to
/// unit mass on that window.
double windowed_linf_relative_error(const Pattern &a, const Pattern &b, double window);

struct TransferHistogram {
    /// Bins are centered on phases 2 pi j / bins (so 0 and, for an even
    /// count, pi are bin centers); reported in momentum units phi / d.
    std::vector<double> bin_centers;
    std::vector<double> bin_lower;
    std::vector<double> bin_upper;
    std::vector<double> masses;
    /// Mass of components whose phase is undefined (V = 0).
    double excluded_mass = 0.0;
    /// Mass-weighted interquartile ranges over the defined components.
    double phase_iqr = 0.0;
    double momentum_iqr = 0.0;
    /// IQR of the unwrapped model phases, when every defined component has one.
    std::optional<double> unwrapped_phase_iqr;
    /// momentum_iqr * d (dimensionless with hbar = 1).
    double spread_product = 0.0;
    static constexpr std::string_view kSpreadMeasure = "mass-weighted interquartile range";
};

TransferHistogram transfer_histogram(const FringeDecomposition &decomp, size_t bins);

/// Mass-weighted quantile: the smallest value whose cumulative mass reaches
/// q of the total.
double weighted_quantile(std::vector<std::pair<double, double>> value_mass, double q);

struct FringeFit {
    double visibility = 0.0;
    double phase = 0.0;
};

/// Measures (V, phi) of a pattern by least squares of P against
/// envelope * {1, cos(p d), sin(p d)} over |p| <= p_max / 2.
FringeFit fitted_visibility(const Pattern &pattern, const ApertureSetup &setup);

/// Normalized autocorrelation of a width-L rectangle at the given lag:
/// max(0, 1 - shift / L).
double wk_visibility_rect(double L, double shift);

/// Applies the change of basis |xi'> = sum U_{xi' xi} |xi> to a flat-weight
/// model (see canonicalize). U must be unitary within 1e-9.
DetectorModel basis_rotate(const DetectorModel &model, const Eigen::MatrixXcd &U);

/// max |U U^dagger - I| over entries.
double unitarity_defect(const Eigen::MatrixXcd &U);

/// Haar-random unitary of the given dimension.
Eigen::MatrixXcd random_unitary(size_t dim, std::mt19937_64 &rng);

}  // namespace whichpath

#endif
