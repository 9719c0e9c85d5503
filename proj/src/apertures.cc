#include "whichpath/apertures.h"

#include <cmath>
#include <string>

#include "whichpath/errors.h"
#include "whichpath/numeric.h"

namespace whichpath {

ApertureProfile ApertureProfile::point() {
    return {};
}

ApertureProfile ApertureProfile::rectangular(double a) {
    ApertureProfile p{Kind::rectangular, a};
    p.validate();
    return p;
}

ApertureProfile ApertureProfile::gaussian(double sigma) {
    ApertureProfile p{Kind::gaussian, sigma};
    p.validate();
    return p;
}

void ApertureProfile::validate() const {
    if (kind != Kind::point && !(width > 0.0 && std::isfinite(width))) {
        throw InvalidProfileError(
            std::string(kind_name(kind)) + " aperture needs a positive width, got " + std::to_string(width));
    }
}

std::string_view kind_name(ApertureProfile::Kind kind) {
    switch (kind) {
        case ApertureProfile::Kind::point:
            return "point";
        case ApertureProfile::Kind::rectangular:
            return "rectangular";
        case ApertureProfile::Kind::gaussian:
            return "gaussian";
    }
    return "?";
}

void ApertureSetup::validate() const {
    if (!(separation > 0.0 && std::isfinite(separation))) {
        throw ConfigurationError("aperture separation must be positive");
    }
    if (!(de_broglie_wavelength > 0.0 && std::isfinite(de_broglie_wavelength))) {
        throw ConfigurationError("de Broglie wavelength must be positive");
    }
    profile.validate();
    if (profile.kind == ApertureProfile::Kind::rectangular && !(profile.width < separation)) {
        throw ConfigurationError("rectangular apertures overlap: width must be smaller than the separation");
    }
}

double profile_transform(const ApertureProfile &profile, double p) {
    switch (profile.kind) {
        case ApertureProfile::Kind::point:
            return 1.0;
        case ApertureProfile::Kind::rectangular:
            return sinc(0.5 * p * profile.width);
        case ApertureProfile::Kind::gaussian:
            return std::exp(-profile.width * profile.width * p * p);
    }
    return 0.0;
}

ComplexSpectrum single_aperture_amplitude(const ApertureProfile &profile, const MomentumGrid &grid) {
    profile.validate();
    ComplexSpectrum out{grid, std::vector<std::complex<double>>(grid.size())};
    std::vector<double> intensity(grid.size());
    for (size_t i = 0; i < grid.size(); ++i) {
        double v = profile_transform(profile, grid.at(i));
        out.values[i] = v;
        intensity[i] = v * v;
    }
    double norm = std::sqrt(trapezoid(grid, intensity));
    if (!(norm > 0.0)) {
        throw NumericalError("single aperture amplitude vanishes on the whole grid");
    }
    for (auto &v : out.values) {
        v /= norm;
    }
    return out;
}

Pattern envelope_pattern(const ApertureProfile &profile, const MomentumGrid &grid) {
    return make_pattern(grid, single_aperture_amplitude(profile, grid).intensity(), Normalization::unit);
}

Pattern fringe_pattern(const ComplexSpectrum &spectrum, double d, double visibility, double phase, Normalization norm) {
    if (!(visibility >= 0.0 && visibility <= 1.0)) {
        throw DomainError("fringe visibility must lie in [0, 1], got " + std::to_string(visibility));
    }
    if (!(d > 0.0)) {
        throw ConfigurationError("aperture separation must be positive");
    }
    const auto &grid = spectrum.grid;
    std::vector<double> values(grid.size());
    for (size_t i = 0; i < grid.size(); ++i) {
        values[i] = std::norm(spectrum.values[i]) * (1.0 + visibility * std::cos(grid.at(i) * d + phase));
    }
    return make_pattern(grid, std::move(values), norm);
}

Pattern p0_pattern(const ComplexSpectrum &spectrum, double d) {
    return fringe_pattern(spectrum, d, 1.0, 0.0);
}

Pattern shift_pattern(const Pattern &pattern, double dp) {
    const auto &grid = pattern.grid;
    if (!(std::abs(dp) < grid.p_max())) {
        throw OutOfRangeError(
            "momentum shift " + std::to_string(dp) + " exceeds the grid half-width " + std::to_string(grid.p_max()));
    }
    double bins = dp / grid.spacing();
    double last = static_cast<double>(grid.size() - 1);
    std::vector<double> out(grid.size(), 0.0);
    for (size_t i = 0; i < grid.size(); ++i) {
        double pos = static_cast<double>(i) + bins;
        if (pos < 0.0 || pos > last) {
            continue;
        }
        double base = std::floor(pos);
        size_t j = static_cast<size_t>(base);
        double t = pos - base;
        if (j + 1 >= grid.size() || t == 0.0) {
            out[i] = pattern.values[j];
        } else {
            out[i] = (1.0 - t) * pattern.values[j] + t * pattern.values[j + 1];
        }
    }
    return make_pattern(grid, std::move(out), Normalization::none);
}

double farfield_map(double direction_cosine, double de_broglie_wavelength) {
    if (!(std::abs(direction_cosine) <= 1.0)) {
        throw DomainError("direction cosine must lie in [-1, 1], got " + std::to_string(direction_cosine));
    }
    if (!(de_broglie_wavelength > 0.0)) {
        throw DomainError("de Broglie wavelength must be positive");
    }
    return direction_cosine * kTwoPi / de_broglie_wavelength;
}

}  // namespace whichpath
