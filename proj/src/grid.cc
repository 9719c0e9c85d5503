#include "whichpath/grid.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "whichpath/errors.h"
#include "whichpath/numeric.h"

namespace whichpath {

MomentumGrid::MomentumGrid(double p_max, size_t n_points) : p_max_(p_max), n_points_(n_points) {
    if (!(p_max > 0.0) || !std::isfinite(p_max)) {
        throw ConfigurationError("momentum grid: p_max must be positive and finite, got " + std::to_string(p_max));
    }
    if (n_points < 2) {
        throw ConfigurationError("momentum grid: need at least 2 points, got " + std::to_string(n_points));
    }
}

MomentumGrid MomentumGrid::for_separation(double d, size_t n_points) {
    if (!(d > 0.0)) {
        throw ConfigurationError("momentum grid: separation must be positive");
    }
    return MomentumGrid(8.0 * kTwoPi / d, n_points);
}

double MomentumGrid::spacing() const {
    return 2.0 * p_max_ / static_cast<double>(n_points_ - 1);
}

double MomentumGrid::at(size_t i) const {
    double span = static_cast<double>(n_points_ - 1);
    return p_max_ * ((2.0 * static_cast<double>(i) - span) / span);
}

std::vector<double> MomentumGrid::points() const {
    std::vector<double> out(n_points_);
    for (size_t i = 0; i < n_points_; ++i) {
        out[i] = at(i);
    }
    return out;
}

double trapezoid(const MomentumGrid &grid, std::span<const double> values) {
    if (values.size() != grid.size()) {
        throw ConfigurationError("trapezoid: sample count does not match grid");
    }
    std::vector<double> scaled(values.begin(), values.end());
    scaled.front() *= 0.5;
    scaled.back() *= 0.5;
    return pairwise_sum(scaled) * grid.spacing();
}

double Pattern::integral() const {
    return trapezoid(grid, values);
}

double Pattern::max() const {
    return *std::max_element(values.begin(), values.end());
}

Pattern make_pattern(MomentumGrid grid, std::vector<double> values, Normalization norm) {
    if (values.size() != grid.size()) {
        throw ConfigurationError("pattern: sample count does not match grid");
    }
    for (double &v : values) {
        if (!std::isfinite(v)) {
            throw NumericalError("pattern: non-finite sample");
        }
        if (v < 0.0) {
            if (v > -1e-12) {
                v = 0.0;
            } else {
                throw NumericalError("pattern: negative sample " + std::to_string(v));
            }
        }
    }
    Pattern out{grid, std::move(values), false};
    double mass = out.integral();
    if (norm == Normalization::unit) {
        if (!(mass > 0.0)) {
            throw NumericalError("pattern: cannot normalize a pattern with zero mass");
        }
        for (double &v : out.values) {
            v /= mass;
        }
        mass = out.integral();
    }
    out.normalized = std::abs(mass - 1.0) <= 1e-9;
    return out;
}

std::vector<double> ComplexSpectrum::intensity() const {
    std::vector<double> out(values.size());
    for (size_t i = 0; i < values.size(); ++i) {
        out[i] = std::norm(values[i]);
    }
    return out;
}

}  // namespace whichpath
