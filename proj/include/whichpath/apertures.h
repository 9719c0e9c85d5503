#ifndef WHICHPATH_APERTURES_H
#define WHICHPATH_APERTURES_H

#include <string_view>

#include "whichpath/grid.h"

namespace whichpath {

/// Transmission profile of one aperture, centered at the origin.
struct ApertureProfile {
    enum class Kind { point, rectangular, gaussian };

    Kind kind = Kind::point;
    /// Full width a for rectangular holes, position rms sigma for gaussian
    /// ones. Unused for point apertures.
    double width = 0.0;

    static ApertureProfile point();
    static ApertureProfile rectangular(double a);
    static ApertureProfile gaussian(double sigma);

    void validate() const;

    bool operator==(const ApertureProfile &other) const = default;
};

std::string_view kind_name(ApertureProfile::Kind kind);

/// Two identical apertures at x = +-d/2 and the incoming particle.
struct ApertureSetup {
    double separation = 1.0;
    ApertureProfile profile;
    double de_broglie_wavelength = 1.0;

    void validate() const;

    bool operator==(const ApertureSetup &other) const = default;
};

/// Unnormalized Fourier transform of the profile at momentum p:
/// 1 (point), sinc(p a / 2) (rectangular), exp(-sigma^2 p^2) (gaussian).
double profile_transform(const ApertureProfile &profile, double p);

/// Single-aperture momentum amplitude, normalized so that the trapezoid
/// integral of |value|^2 is 1.
ComplexSpectrum single_aperture_amplitude(const ApertureProfile &profile, const MomentumGrid &grid);

/// |single_aperture_amplitude|^2, the diffraction envelope (unit mass).
Pattern envelope_pattern(const ApertureProfile &profile, const MomentumGrid &grid);

/// |spectrum|^2 * [1 + V cos(p d + phase)].
///
/// With Normalization::none the envelope keeps the spectrum's own scale, so
/// (1 - V) envelope <= P <= (1 + V) envelope holds pointwise.
Pattern fringe_pattern(
    const ComplexSpectrum &spectrum,
    double d,
    double visibility,
    double phase,
    Normalization norm = Normalization::unit);

/// The ideal two-aperture pattern |Psi_A + Psi_B|^2, i.e. V = 1 and zero phase.
Pattern p0_pattern(const ComplexSpectrum &spectrum, double d);

/// Returns Q(p) = P(p + dp) by linear interpolation between grid nodes.
/// Samples that land off the grid are zero. The result is not renormalized.
Pattern shift_pattern(const Pattern &pattern, double dp);

/// Transverse momentum for a far-field direction cosine x.r: 2 pi x / lambda_dB.
double farfield_map(double direction_cosine, double de_broglie_wavelength);

}  // namespace whichpath

#endif
