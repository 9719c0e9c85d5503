#ifndef WHICHPATH_GRID_H
#define WHICHPATH_GRID_H

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace whichpath {

/// Uniform sampling of the transverse momentum p_x over [-p_max, +p_max].
///
/// Units follow hbar = 1: momenta are inverse lengths. Node i sits at
/// p_max * (2i - (n-1)) / (n-1), which makes the grid exactly symmetric
/// (node n-1-i is the bitwise negation of node i).
class MomentumGrid {
   public:
    static constexpr size_t kDefaultPoints = 4096;

    MomentumGrid(double p_max, size_t n_points);

    /// Default grid for a double aperture of separation d: eight fringe
    /// periods on each side of the axis, 4096 points.
    static MomentumGrid for_separation(double d, size_t n_points = kDefaultPoints);

    double p_max() const {
        return p_max_;
    }
    size_t size() const {
        return n_points_;
    }
    double spacing() const;
    double at(size_t i) const;
    std::vector<double> points() const;

    bool operator==(const MomentumGrid &other) const = default;

   private:
    double p_max_;
    size_t n_points_;
};

/// Trapezoid rule over the grid.
double trapezoid(const MomentumGrid &grid, std::span<const double> values);

enum class Normalization { unit, none };

/// Nonnegative momentum distribution P(p_x) sampled on a grid.
struct Pattern {
    MomentumGrid grid;
    std::vector<double> values;
    /// Set when the trapezoid integral equals 1 within 1e-9.
    bool normalized = false;

    double integral() const;
    double max() const;
};

/// Builds a pattern from raw samples. Values in (-1e-12, 0) are clipped to
/// zero; anything more negative is a NumericalError. With
/// Normalization::unit the samples are rescaled to unit trapezoid mass.
Pattern make_pattern(MomentumGrid grid, std::vector<double> values, Normalization norm);

/// Complex amplitude per grid point, e.g. the single-aperture transform.
struct ComplexSpectrum {
    MomentumGrid grid;
    std::vector<std::complex<double>> values;

    /// |values|^2 pointwise.
    std::vector<double> intensity() const;
};

}  // namespace whichpath

#endif
