#include "whichpath/detectors.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "whichpath/errors.h"
#include "whichpath/numeric.h"
#include "whichpath/quadrature.h"

namespace whichpath {

namespace {

// Rescales both path states to unit norm.
void normalize_states(DetectorModel &model) {
    auto [norm_a, norm_b] = model.norms();
    if (!(norm_a > 0.0)) {
        throw DegenerateStateError("detector state for path A has zero norm");
    }
    if (!(norm_b > 0.0)) {
        throw DegenerateStateError("detector state for path B has zero norm");
    }
    double scale_a = 1.0 / std::sqrt(norm_a);
    double scale_b = 1.0 / std::sqrt(norm_b);
    for (auto &ch : model.channels) {
        ch.amp_a *= scale_a;
        ch.amp_b *= scale_b;
    }
}

// Folds the total weight into 1 when all amplitudes are unimodular.
void normalize_weights(DetectorModel &model) {
    std::vector<double> weights;
    weights.reserve(model.channels.size());
    for (const auto &ch : model.channels) {
        weights.push_back(ch.weight);
    }
    double total = pairwise_sum(weights);
    if (!(total > 0.0)) {
        throw ConfigurationError("degenerate quadrature: channel weights sum to zero");
    }
    for (auto &ch : model.channels) {
        ch.weight /= total;
    }
}

}  // namespace

std::string_view kind_name(DetectorKind kind) {
    switch (kind) {
        case DetectorKind::heisenberg:
            return "heisenberg";
        case DetectorKind::micromaser:
            return "micromaser";
        case DetectorKind::cavity:
            return "cavity";
        case DetectorKind::custom:
            return "custom";
        case DetectorKind::rotated:
            return "rotated";
        case DetectorKind::plus_minus:
            return "plus_minus";
    }
    return "?";
}

std::pair<double, double> DetectorModel::norms() const {
    std::vector<double> a(channels.size());
    std::vector<double> b(channels.size());
    for (size_t i = 0; i < channels.size(); ++i) {
        a[i] = channels[i].weight * std::norm(channels[i].amp_a);
        b[i] = channels[i].weight * std::norm(channels[i].amp_b);
    }
    return {pairwise_sum(a), pairwise_sum(b)};
}

size_t DetectorModel::index_of(std::string_view label) const {
    for (size_t i = 0; i < channels.size(); ++i) {
        if (channels[i].label == label) {
            return i;
        }
    }
    throw LookupError("no detector channel labeled '" + std::string(label) + "'");
}

DipoleSpec DipoleSpec::isotropic() {
    return {};
}

DipoleSpec DipoleSpec::fixed(std::array<double, 3> direction) {
    double n = std::sqrt(direction[0] * direction[0] + direction[1] * direction[1] + direction[2] * direction[2]);
    if (!(n > 0.0) || !std::isfinite(n)) {
        throw ConfigurationError("fixed dipole direction must be a nonzero finite vector");
    }
    for (double &c : direction) {
        c /= n;
    }
    return {Kind::fixed, direction};
}

DetectorModel heisenberg_model(
    double k_gamma, double gamma_over_c, const DipoleSpec &dipole, double d, const PhotonQuadrature &quad) {
    if (!(k_gamma > 0.0) || !std::isfinite(k_gamma)) {
        throw ConfigurationError("photon wave number k_gamma must be positive");
    }
    if (!(gamma_over_c >= 0.0) || !std::isfinite(gamma_over_c)) {
        throw ConfigurationError("linewidth Gamma/c must be nonnegative");
    }
    if (!(d > 0.0)) {
        throw ConfigurationError("aperture separation must be positive");
    }
    if (quad.n_theta < 4 || quad.n_phi < 4) {
        throw ConfigurationError("degenerate quadrature: need n_theta, n_phi >= 4");
    }
    if (quad.n_omega == 0) {
        throw ConfigurationError("degenerate quadrature: n_omega must be at least 1");
    }
    const auto &mu = dipole.direction;
    if (dipole.kind == DipoleSpec::Kind::fixed) {
        double n2 = mu[0] * mu[0] + mu[1] * mu[1] + mu[2] * mu[2];
        if (std::abs(std::sqrt(n2) - 1.0) > 1e-12) {
            throw ConfigurationError("fixed dipole direction must have unit norm");
        }
    }

    // Radial shells |k| with their Lorentzian weights.
    std::vector<std::pair<double, double>> shells;
    bool resolve_line = quad.n_omega > 1 && gamma_over_c > 0.0;
    if (resolve_line) {
        if (!(quad.omega_window > 0.0)) {
            throw ConfigurationError("degenerate quadrature: omega_window must be positive");
        }
        double half_width = 0.5 * gamma_over_c;
        double t_hi = std::atan(quad.omega_window);
        double t_lo = std::max(-t_hi, -std::atan(k_gamma / half_width));
        auto rule = gauss_legendre(quad.n_omega, t_lo, t_hi);
        for (size_t s = 0; s < rule.nodes.size(); ++s) {
            shells.emplace_back(k_gamma + half_width * std::tan(rule.nodes[s]), rule.weights[s]);
        }
    } else {
        shells.emplace_back(k_gamma, 1.0);
    }

    auto polar = gauss_legendre(quad.n_theta);
    double azimuth_weight = kTwoPi / static_cast<double>(quad.n_phi);

    DetectorModel model;
    model.kind = DetectorKind::heisenberg;
    model.channels.reserve(shells.size() * quad.n_theta * quad.n_phi);
    for (size_t s = 0; s < shells.size(); ++s) {
        auto [k, shell_weight] = shells[s];
        for (size_t i = 0; i < quad.n_theta; ++i) {
            double u = polar.nodes[i];
            double sin_theta = std::sqrt(std::max(0.0, 1.0 - u * u));
            for (size_t j = 0; j < quad.n_phi; ++j) {
                double az = azimuth_weight * static_cast<double>(j);
                std::array<double, 3> khat{sin_theta * std::cos(az), sin_theta * std::sin(az), u};
                double factor = 2.0 / 3.0;
                if (dipole.kind == DipoleSpec::Kind::fixed) {
                    double proj = mu[0] * khat[0] + mu[1] * khat[1] + mu[2] * khat[2];
                    factor = std::max(0.0, 1.0 - proj * proj);
                }
                double kx = k * khat[0];
                DetectorChannel ch;
                ch.label = resolve_line ? "w" + std::to_string(s) + ".t" + std::to_string(i) + ".p" + std::to_string(j)
                                        : "t" + std::to_string(i) + ".p" + std::to_string(j);
                ch.weight = shell_weight * polar.weights[i] * azimuth_weight * factor;
                ch.amp_a = std::polar(1.0, 0.5 * kx * d);
                ch.amp_b = std::polar(1.0, -0.5 * kx * d);
                ch.nominal_phase = kx * d;
                model.channels.push_back(std::move(ch));
            }
        }
    }
    normalize_weights(model);

    model.parameters = {
        {"k_gamma", k_gamma},
        {"gamma_over_c", gamma_over_c},
        {"d", d},
        {"n_theta", static_cast<double>(quad.n_theta)},
        {"n_phi", static_cast<double>(quad.n_phi)},
        {"n_omega", static_cast<double>(resolve_line ? quad.n_omega : 1)},
        {"omega_window", quad.omega_window},
        {"dipole_fixed", dipole.kind == DipoleSpec::Kind::fixed ? 1.0 : 0.0},
    };
    if (dipole.kind == DipoleSpec::Kind::fixed) {
        model.parameters["dipole_x"] = mu[0];
        model.parameters["dipole_y"] = mu[1];
        model.parameters["dipole_z"] = mu[2];
    }
    return model;
}

CavityGrid default_cavity_grid(double L) {
    if (!(L > 0.0)) {
        throw ConfigurationError("cavity length must be positive");
    }
    return {400.0 * kPi / L, 4001};
}

DetectorModel rect_cavity_model(double L, double lag, const CavityGrid &grid) {
    if (!(L > 0.0) || !std::isfinite(L)) {
        throw ConfigurationError("cavity length must be positive");
    }
    if (!std::isfinite(lag)) {
        throw ConfigurationError("cavity lag must be finite");
    }
    if (!(grid.k_max > 0.0) || grid.n_k < 2) {
        throw ConfigurationError("degenerate cavity k-grid: need k_max > 0 and n_k >= 2");
    }
    double span = static_cast<double>(grid.n_k - 1);
    double dk = 2.0 * grid.k_max / span;

    DetectorModel model;
    model.kind = DetectorKind::cavity;
    model.channels.reserve(grid.n_k);
    for (size_t j = 0; j < grid.n_k; ++j) {
        double k = grid.k_max * ((2.0 * static_cast<double>(j) - span) / span);
        double s = sinc(0.5 * k * L);
        double edge = (j == 0 || j + 1 == grid.n_k) ? 0.5 : 1.0;
        DetectorChannel ch;
        ch.label = "k" + std::to_string(j);
        ch.weight = edge * dk * s * s;
        ch.amp_a = std::polar(1.0, 0.5 * k * lag);
        ch.amp_b = std::polar(1.0, -0.5 * k * lag);
        ch.nominal_phase = k * lag;
        model.channels.push_back(std::move(ch));
    }
    normalize_weights(model);
    model.parameters = {
        {"L", L},
        {"lag", lag},
        {"k_max", grid.k_max},
        {"n_k", static_cast<double>(grid.n_k)},
    };
    return model;
}

DetectorModel micromaser_model(double L, double d, const CavityGrid &grid) {
    if (!(d > 0.0)) {
        throw ConfigurationError("aperture separation must be positive");
    }
    if (!(L > d)) {
        throw ConfigurationError("micromaser cavities overlap: need L > d");
    }
    if (!(grid.k_max * L >= 40.0 * kPi * (1.0 - 1e-12))) {
        throw ConfigurationError("micromaser k-grid too narrow: need k_max * L >= 40 pi");
    }
    DetectorModel model = rect_cavity_model(L, L, grid);
    model.kind = DetectorKind::micromaser;
    model.parameters["d"] = d;
    return model;
}

DetectorModel custom_model(const std::vector<ChannelSpec> &channels) {
    if (channels.empty()) {
        throw ConfigurationError("custom detector needs at least one channel");
    }
    DetectorModel model;
    model.kind = DetectorKind::custom;
    for (size_t i = 0; i < channels.size(); ++i) {
        const auto &spec = channels[i];
        if (!(spec.weight >= 0.0) || !std::isfinite(spec.weight)) {
            throw ConfigurationError("custom channel " + std::to_string(i) + " has a negative or non-finite weight");
        }
        if (!std::isfinite(std::abs(spec.amp_a)) || !std::isfinite(std::abs(spec.amp_b))) {
            throw ConfigurationError("custom channel " + std::to_string(i) + " has a non-finite amplitude");
        }
        model.channels.push_back({std::to_string(i), spec.weight, spec.amp_a, spec.amp_b, std::nullopt});
    }
    normalize_states(model);
    model.parameters = {{"channels", static_cast<double>(channels.size())}};
    return model;
}

std::complex<double> overlap(const DetectorModel &model) {
    std::vector<std::complex<double>> terms(model.channels.size());
    for (size_t i = 0; i < terms.size(); ++i) {
        const auto &ch = model.channels[i];
        terms[i] = ch.weight * std::conj(ch.amp_b) * ch.amp_a;
    }
    return pairwise_sum(terms);
}

double f0_isotropic(double x, double decay) {
    return sinc(x) * std::exp(-decay);
}

DetectorModel canonicalize(const DetectorModel &model) {
    DetectorModel out = model;
    for (auto &ch : out.channels) {
        double s = std::sqrt(ch.weight);
        ch.amp_a *= s;
        ch.amp_b *= s;
        ch.weight = 1.0;
    }
    return out;
}

bool is_flat(const DetectorModel &model) {
    for (const auto &ch : model.channels) {
        if (std::abs(ch.weight - 1.0) > 1e-12) {
            return false;
        }
    }
    return true;
}

}  // namespace whichpath
