#ifndef WHICHPATH_DETECTORS_H
#define WHICHPATH_DETECTORS_H

#include <array>
#include <complex>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace whichpath {

/// One outcome xi of a which-path detector measured in some basis.
///
/// The path amplitudes are gamma^{A,B}_xi = sqrt(weight) * amp_{a,b}; the
/// split keeps quadrature weights separate from the phases they multiply.
struct DetectorChannel {
    std::string label;
    double weight = 0.0;
    std::complex<double> amp_a;
    std::complex<double> amp_b;
    /// Unwrapped relative phase carried by this outcome when the model knows
    /// it (k_x d for a free photon, k_x L for the cavity). Metadata only.
    std::optional<double> nominal_phase;
};

enum class DetectorKind { heisenberg, micromaser, cavity, custom, rotated, plus_minus };

std::string_view kind_name(DetectorKind kind);

/// Detector states |gamma_A>, |gamma_B> expanded over an ordered list of
/// channels. Both states are unit-normalized.
struct DetectorModel {
    std::vector<DetectorChannel> channels;
    DetectorKind kind = DetectorKind::custom;
    std::map<std::string, double> parameters;

    /// Squared norms sum_xi w |amp_a|^2 and sum_xi w |amp_b|^2.
    std::pair<double, double> norms() const;
    /// Channel index for a label, or LookupError.
    size_t index_of(std::string_view label) const;
};

/// Orientation of the atomic transition dipole.
struct DipoleSpec {
    enum class Kind { isotropic, fixed };

    Kind kind = Kind::isotropic;
    std::array<double, 3> direction{0.0, 0.0, 1.0};

    static DipoleSpec isotropic();
    /// Normalizes `direction`; a zero vector is a ConfigurationError.
    static DipoleSpec fixed(std::array<double, 3> direction);

    bool operator==(const DipoleSpec &other) const = default;
};

/// Discretization of the emission sphere (and optionally the line shape).
///
/// Polar nodes are Gauss-Legendre in cos(theta) about the z axis, azimuthal
/// nodes uniform. With n_omega > 1 and a nonzero linewidth the photon
/// frequency is sampled too: omega = omega_gamma + (Gamma/2) tan(t) maps the
/// Lorentzian onto a uniform measure in t, and t is Gauss-Legendre over
/// |omega - omega_gamma| <= omega_window * Gamma / 2 (clipped at omega > 0).
struct PhotonQuadrature {
    size_t n_theta = 64;
    size_t n_phi = 64;
    size_t n_omega = 1;
    double omega_window = 50.0;

    bool operator==(const PhotonQuadrature &other) const = default;
};

/// Spontaneous emission near the apertures (free photon, c = 1).
///
/// Channels are photon wave vectors k; the weight is the node weight times the
/// polarization-summed dipole factor |mu|^2 - |mu.k|^2/k^2, and
/// amp_{a,b} = exp(+-i k_x d / 2) so each outcome carries the phase k_x d.
DetectorModel heisenberg_model(
    double k_gamma, double gamma_over_c, const DipoleSpec &dipole, double d, const PhotonQuadrature &quad = {});

struct CavityGrid {
    double k_max = 0.0;
    size_t n_k = 0;

    bool operator==(const CavityGrid &other) const = default;
};

/// Default cavity k-grid for cavity length L: k_max = 400 pi / L, 4001 nodes.
CavityGrid default_cavity_grid(double L);

/// Two cavities of width L centered at x = +-L/2 (field along x).
///
/// Channels are uniform k_x nodes with trapezoid weights times
/// sinc^2(k_x L / 2); amp_{a,b} = exp(+-i k_x L / 2). Requires L > d and
/// k_max L >= 40 pi.
DetectorModel micromaser_model(double L, double d, const CavityGrid &grid);

/// Same sinc^2 spectrum of a width-L cavity but with an arbitrary lag between
/// the two path states: amp_{a,b} = exp(+-i k_x lag / 2). lag = L reproduces
/// the micromaser; lag = 0 gives identical states.
DetectorModel rect_cavity_model(double L, double lag, const CavityGrid &grid);

struct ChannelSpec {
    double weight = 1.0;
    std::complex<double> amp_a;
    std::complex<double> amp_b;

    bool operator==(const ChannelSpec &other) const = default;
};

/// Arbitrary detector; both path states are rescaled to unit norm.
DetectorModel custom_model(const std::vector<ChannelSpec> &channels);

/// <gamma_B|gamma_A> = sum_xi w conj(amp_b) amp_a.
std::complex<double> overlap(const DetectorModel &model);

/// Closed-form isotropic visibility sin(x)/x * exp(-decay), x = k_gamma d,
/// decay = Gamma d / (2c).
double f0_isotropic(double x, double decay);

/// Folds sqrt(weight) into the amplitudes so every weight becomes 1.
DetectorModel canonicalize(const DetectorModel &model);

/// True when every weight is 1 within 1e-12.
bool is_flat(const DetectorModel &model);

}  // namespace whichpath

#endif
