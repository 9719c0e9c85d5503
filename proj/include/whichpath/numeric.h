#ifndef WHICHPATH_NUMERIC_H
#define WHICHPATH_NUMERIC_H

#include <complex>
#include <numbers>
#include <span>

namespace whichpath {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Wraps an angle into (-pi, pi].
double wrap_phase(double phase);

/// Circular distance between two angles, in [0, pi].
double phase_distance(double a, double b);

/// Pairwise (cascade) summation. The reduction tree depends only on the
/// length of the input, so results are bit-stable for a given input.
double pairwise_sum(std::span<const double> values);
std::complex<double> pairwise_sum(std::span<const std::complex<double>> values);

/// sin(x)/x with the removable singularity filled in.
double sinc(double x);

}  // namespace whichpath

#endif
