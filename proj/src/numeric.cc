#include "whichpath/numeric.h"

#include <cmath>

namespace whichpath {

namespace {

template <typename T>
T pairwise(std::span<const T> values) {
    constexpr size_t kLeaf = 8;
    if (values.size() <= kLeaf) {
        T total{};
        for (const auto &v : values) {
            total += v;
        }
        return total;
    }
    size_t half = values.size() / 2;
    return pairwise(values.first(half)) + pairwise(values.subspan(half));
}

}  // namespace

double wrap_phase(double phase) {
    double wrapped = std::remainder(phase, kTwoPi);
    if (wrapped <= -kPi) {
        wrapped += kTwoPi;
    }
    return wrapped;
}

double phase_distance(double a, double b) {
    return std::abs(std::remainder(a - b, kTwoPi));
}

double pairwise_sum(std::span<const double> values) {
    return pairwise(values);
}

std::complex<double> pairwise_sum(std::span<const std::complex<double>> values) {
    return pairwise(values);
}

double sinc(double x) {
    if (std::abs(x) < 1e-8) {
        return 1.0 - x * x / 6.0;
    }
    return std::sin(x) / x;
}

}  // namespace whichpath
