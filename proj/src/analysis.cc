#include "whichpath/analysis.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "whichpath/errors.h"
#include "whichpath/numeric.h"

namespace whichpath {

namespace {

Pattern scaled_pattern(const MomentumGrid &grid, std::vector<double> values, double norm) {
    for (double &v : values) {
        v /= norm;
    }
    return make_pattern(grid, std::move(values), Normalization::none);
}

// Trapezoid over the closed index range [lo, hi].
double partial_trapezoid(const MomentumGrid &grid, const std::vector<double> &values, size_t lo, size_t hi) {
    if (hi <= lo) {
        return 0.0;
    }
    std::vector<double> part(values.begin() + static_cast<std::ptrdiff_t>(lo),
                             values.begin() + static_cast<std::ptrdiff_t>(hi) + 1);
    part.front() *= 0.5;
    part.back() *= 0.5;
    return pairwise_sum(part) * grid.spacing();
}

}  // namespace

std::complex<double> FringeDecomposition::coherence() const {
    std::vector<std::complex<double>> terms;
    terms.reserve(components.size());
    for (const auto &c : components) {
        terms.push_back(c.mass * c.visibility * std::polar(1.0, c.phase));
    }
    return pairwise_sum(terms);
}

FringeDecomposition decompose(const DetectorModel &model, const ApertureSetup &setup) {
    setup.validate();
    std::vector<double> raw(model.channels.size());
    for (size_t i = 0; i < raw.size(); ++i) {
        const auto &ch = model.channels[i];
        raw[i] = ch.weight * (std::norm(ch.amp_a) + std::norm(ch.amp_b));
    }
    double total = pairwise_sum(raw);
    if (!(total > 0.0)) {
        throw DegenerateStateError("detector model carries no probability mass");
    }

    FringeDecomposition out;
    out.setup = setup;
    out.components.reserve(model.channels.size());
    for (size_t i = 0; i < raw.size(); ++i) {
        const auto &ch = model.channels[i];
        double na = std::norm(ch.amp_a);
        double nb = std::norm(ch.amp_b);
        double s = na + nb;
        if (s == 0.0) {
            continue;
        }
        FringeComponent c;
        c.label = ch.label;
        c.mass = raw[i] / total;
        c.visibility = std::min(1.0, 2.0 * std::sqrt(na * nb) / s);
        c.phase_defined = c.visibility > 0.0;
        if (c.phase_defined) {
            c.phase = wrap_phase(std::arg(ch.amp_a * std::conj(ch.amp_b)));
        }
        c.momentum_transfer = c.phase / setup.separation;
        c.unwrapped_phase = ch.nominal_phase;
        out.components.push_back(std::move(c));
    }
    return out;
}

ConditionalPatterns::ConditionalPatterns(
    const DetectorModel &model, const ApertureSetup &setup, const MomentumGrid &grid)
    : decomp_(decompose(model, setup)), envelope_(envelope_pattern(setup.profile, grid)), grid_(grid) {
    labels_.reserve(model.channels.size());
    for (const auto &ch : model.channels) {
        labels_.push_back(ch.label);
    }
    std::complex<double> c = decomp_.coherence();
    double d = setup.separation;
    marginal_raw_.resize(grid.size());
    for (size_t i = 0; i < grid.size(); ++i) {
        std::complex<double> phase = std::polar(1.0, grid.at(i) * d);
        marginal_raw_[i] = envelope_.values[i] * (1.0 + (c * phase).real());
    }
    norm_ = trapezoid(grid, marginal_raw_);
    if (!(norm_ > 0.0)) {
        throw NumericalError("marginal pattern has zero mass");
    }
}

Pattern ConditionalPatterns::marginal() const {
    return scaled_pattern(grid_, marginal_raw_, norm_);
}

Pattern ConditionalPatterns::conditional(const FringeComponent &component) const {
    return fringe_over_envelope(component.visibility, component.phase);
}

Pattern ConditionalPatterns::conditional(std::string_view label) const {
    if (std::find(labels_.begin(), labels_.end(), label) == labels_.end()) {
        throw LookupError("no detector channel labeled '" + std::string(label) + "'");
    }
    for (const auto &c : decomp_.components) {
        if (c.label == label) {
            return conditional(c);
        }
    }
    // A zero-weight channel: no fringe term at all.
    return fringe_over_envelope(0.0, 0.0);
}

Pattern ConditionalPatterns::fringe_over_envelope(double visibility, double phase) const {
    double d = decomp_.setup.separation;
    std::vector<double> values(grid_.size());
    for (size_t i = 0; i < grid_.size(); ++i) {
        values[i] = envelope_.values[i] * (1.0 + visibility * std::cos(grid_.at(i) * d + phase));
    }
    return scaled_pattern(grid_, std::move(values), norm_);
}

Pattern marginal_pattern(const DetectorModel &model, const ApertureSetup &setup, const MomentumGrid &grid) {
    return ConditionalPatterns(model, setup, grid).marginal();
}

Pattern conditional_pattern(
    const DetectorModel &model, const ApertureSetup &setup, const MomentumGrid &grid, std::string_view label) {
    model.index_of(label);
    return ConditionalPatterns(model, setup, grid).conditional(label);
}

Pattern correlation_form_pattern(const FringeDecomposition &decomp, const Pattern &p0, const Pattern &envelope) {
    if (!(p0.grid == envelope.grid)) {
        throw ConfigurationError("correlation form: P0 and envelope live on different grids");
    }
    const auto &grid = p0.grid;
    std::vector<double> acc(grid.size(), 0.0);
    for (const auto &c : decomp.components) {
        double incoherent = c.mass * (1.0 - c.visibility);
        if (incoherent != 0.0) {
            for (size_t i = 0; i < grid.size(); ++i) {
                acc[i] += incoherent * envelope.values[i];
            }
        }
        if (c.visibility > 0.0) {
            Pattern kicked = shift_pattern(p0, c.momentum_transfer);
            double coherent = c.mass * c.visibility;
            for (size_t i = 0; i < grid.size(); ++i) {
                acc[i] += coherent * kicked.values[i];
            }
        }
    }
    return make_pattern(grid, std::move(acc), Normalization::unit);
}

double correlation_form_window(const FringeDecomposition &decomp, const MomentumGrid &grid) {
    double widest = 0.0;
    for (const auto &c : decomp.components) {
        if (c.visibility > 0.0) {
            widest = std::max(widest, std::abs(c.momentum_transfer));
        }
    }
    return grid.p_max() - widest;
}

double windowed_linf_relative_error(const Pattern &a, const Pattern &b, double window) {
    if (!(a.grid == b.grid)) {
        throw ConfigurationError("pattern comparison: grids differ");
    }
    const auto &grid = a.grid;
    size_t lo = grid.size();
    size_t hi = 0;
    for (size_t i = 0; i < grid.size(); ++i) {
        if (std::abs(grid.at(i)) <= window) {
            lo = std::min(lo, i);
            hi = std::max(hi, i);
        }
    }
    if (lo >= hi) {
        throw ConfigurationError("pattern comparison: window contains fewer than two grid points");
    }
    double mass_a = partial_trapezoid(grid, a.values, lo, hi);
    double mass_b = partial_trapezoid(grid, b.values, lo, hi);
    if (!(mass_a > 0.0) || !(mass_b > 0.0)) {
        throw NumericalError("pattern comparison: zero mass in window");
    }
    double worst = 0.0;
    double peak = 0.0;
    for (size_t i = lo; i <= hi; ++i) {
        double va = a.values[i] / mass_a;
        double vb = b.values[i] / mass_b;
        worst = std::max(worst, std::abs(va - vb));
        peak = std::max(peak, vb);
    }
    return worst / peak;
}

double weighted_quantile(std::vector<std::pair<double, double>> value_mass, double q) {
    if (value_mass.empty()) {
        throw DomainError("weighted quantile of an empty sample");
    }
    std::stable_sort(value_mass.begin(), value_mass.end(), [](const auto &x, const auto &y) {
        return x.first < y.first;
    });
    double total = 0.0;
    for (const auto &[v, m] : value_mass) {
        total += m;
    }
    double target = q * total * (1.0 - 1e-12);
    double cum = 0.0;
    for (const auto &[v, m] : value_mass) {
        cum += m;
        if (cum >= target) {
            return v;
        }
    }
    return value_mass.back().first;
}

TransferHistogram transfer_histogram(const FringeDecomposition &decomp, size_t bins) {
    if (bins == 0) {
        throw DomainError("transfer histogram needs at least one bin");
    }
    double d = decomp.setup.separation;
    double width = kTwoPi / static_cast<double>(bins);

    // Bin j is centered on the phase j * width; list them in ascending order.
    std::vector<std::pair<double, size_t>> centers;
    for (size_t j = 0; j < bins; ++j) {
        centers.emplace_back(wrap_phase(width * static_cast<double>(j)), j);
    }
    std::sort(centers.begin(), centers.end());
    std::vector<size_t> slot(bins);
    TransferHistogram out;
    for (size_t s = 0; s < bins; ++s) {
        slot[centers[s].second] = s;
        double c = centers[s].first;
        out.bin_centers.push_back(c / d);
        out.bin_lower.push_back((c - 0.5 * width) / d);
        out.bin_upper.push_back((c + 0.5 * width) / d);
    }
    out.masses.assign(bins, 0.0);

    std::vector<std::pair<double, double>> phases;
    std::vector<std::pair<double, double>> unwrapped;
    bool all_unwrapped = true;
    for (const auto &c : decomp.components) {
        if (!c.phase_defined) {
            out.excluded_mass += c.mass;
            continue;
        }
        auto j = static_cast<long long>(std::llround(c.phase / width));
        auto b = static_cast<long long>(bins);
        j = ((j % b) + b) % b;
        out.masses[slot[static_cast<size_t>(j)]] += c.mass;
        phases.emplace_back(c.phase, c.mass);
        if (c.unwrapped_phase) {
            unwrapped.emplace_back(*c.unwrapped_phase, c.mass);
        } else {
            all_unwrapped = false;
        }
    }
    if (!phases.empty()) {
        out.phase_iqr = weighted_quantile(phases, 0.75) - weighted_quantile(phases, 0.25);
        out.momentum_iqr = out.phase_iqr / d;
        out.spread_product = out.momentum_iqr * d;
        if (all_unwrapped) {
            out.unwrapped_phase_iqr = weighted_quantile(unwrapped, 0.75) - weighted_quantile(unwrapped, 0.25);
        }
    }
    return out;
}

FringeFit fitted_visibility(const Pattern &pattern, const ApertureSetup &setup) {
    setup.validate();
    const auto &grid = pattern.grid;
    double d = setup.separation;
    if (2.0 * grid.p_max() * d < 4.0 * kTwoPi * (1.0 - 1e-12)) {
        throw PreconditionError("fringe fit: the grid must span at least four fringe periods");
    }
    auto envelope = envelope_pattern(setup.profile, grid);
    double half = 0.5 * grid.p_max();

    std::vector<size_t> rows;
    double env_max = 0.0;
    for (size_t i = 0; i < grid.size(); ++i) {
        if (std::abs(grid.at(i)) <= half) {
            rows.push_back(i);
            env_max = std::max(env_max, envelope.values[i]);
        }
    }
    if (rows.size() < 3 || !(env_max > 1e-12)) {
        throw IllConditionedError("fringe fit: envelope vanishes over the fit window");
    }
    Eigen::MatrixXd design(static_cast<Eigen::Index>(rows.size()), 3);
    Eigen::VectorXd target(static_cast<Eigen::Index>(rows.size()));
    for (size_t r = 0; r < rows.size(); ++r) {
        size_t i = rows[r];
        double e = envelope.values[i];
        double arg = grid.at(i) * d;
        auto row = static_cast<Eigen::Index>(r);
        design(row, 0) = e;
        design(row, 1) = e * std::cos(arg);
        design(row, 2) = e * std::sin(arg);
        target(row) = pattern.values[i];
    }
    auto qr = design.colPivHouseholderQr();
    if (qr.rank() < 3) {
        throw IllConditionedError("fringe fit: design matrix is rank deficient");
    }
    Eigen::Vector3d coef = qr.solve(target);
    if (!(coef(0) > 0.0)) {
        throw IllConditionedError("fringe fit: nonpositive mean level");
    }
    FringeFit fit;
    fit.visibility = std::min(std::hypot(coef(1), coef(2)) / coef(0), 1.0 + 1e-6);
    fit.phase = wrap_phase(std::atan2(-coef(2), coef(1)));
    return fit;
}

double wk_visibility_rect(double L, double shift) {
    if (!(L > 0.0)) {
        throw DomainError("rectangle width must be positive");
    }
    if (!(shift >= 0.0)) {
        throw DomainError("autocorrelation lag must be nonnegative");
    }
    return std::max(0.0, 1.0 - shift / L);
}

double unitarity_defect(const Eigen::MatrixXcd &U) {
    if (U.rows() != U.cols()) {
        return INFINITY;
    }
    Eigen::MatrixXcd residual = U * U.adjoint() - Eigen::MatrixXcd::Identity(U.rows(), U.cols());
    return residual.cwiseAbs().maxCoeff();
}

DetectorModel basis_rotate(const DetectorModel &model, const Eigen::MatrixXcd &U) {
    if (!is_flat(model)) {
        throw PreconditionError("basis rotation needs a flat-weight model; canonicalize it first");
    }
    auto n = static_cast<Eigen::Index>(model.channels.size());
    if (U.rows() != n || U.cols() != n) {
        throw ValidationError(
            "basis rotation: matrix is " + std::to_string(U.rows()) + "x" + std::to_string(U.cols()) +
            " but the model has " + std::to_string(n) + " channels");
    }
    double defect = unitarity_defect(U);
    if (!(defect <= 1e-9)) {
        throw ValidationError("basis rotation: matrix is not unitary (max |UU^dagger - I| = " + std::to_string(defect) + ")");
    }
    Eigen::VectorXcd a(n);
    Eigen::VectorXcd b(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        a(i) = model.channels[static_cast<size_t>(i)].amp_a;
        b(i) = model.channels[static_cast<size_t>(i)].amp_b;
    }
    Eigen::VectorXcd ra = U * a;
    Eigen::VectorXcd rb = U * b;

    DetectorModel out;
    out.kind = DetectorKind::rotated;
    out.parameters = model.parameters;
    out.parameters["dim"] = static_cast<double>(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        out.channels.push_back({"b" + std::to_string(i), 1.0, ra(i), rb(i), std::nullopt});
    }
    return out;
}

Eigen::MatrixXcd random_unitary(size_t dim, std::mt19937_64 &rng) {
    if (dim == 0) {
        throw DomainError("random unitary needs a positive dimension");
    }
    std::normal_distribution<double> normal(0.0, 1.0);
    auto n = static_cast<Eigen::Index>(dim);
    Eigen::MatrixXcd z(n, n);
    for (Eigen::Index c = 0; c < n; ++c) {
        for (Eigen::Index r = 0; r < n; ++r) {
            double re = normal(rng);
            double im = normal(rng);
            z(r, c) = {re, im};
        }
    }
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
    Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(n, n);
    Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index c = 0; c < n; ++c) {
        std::complex<double> diag = r(c, c);
        double mag = std::abs(diag);
        if (mag > 0.0) {
            q.col(c) *= diag / mag;
        }
    }
    return q;
}

}  // namespace whichpath
