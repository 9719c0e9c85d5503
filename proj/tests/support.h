#ifndef WHICHPATH_TESTS_SUPPORT_H
#define WHICHPATH_TESTS_SUPPORT_H

// Independent reference computations and random generators for the tests.
// Nothing here calls into the library's numerics.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <random>
#include <utility>
#include <vector>

namespace whichpath::testing {

inline constexpr double kTestPi = std::numbers::pi;

/// Composite Simpson rule with n (even) intervals.
template <typename F>
auto simpson(F f, double lo, double hi, int n) -> decltype(f(lo)) {
    double h = (hi - lo) / n;
    auto sum = f(lo) + f(hi);
    for (int i = 1; i < n; ++i) {
        sum += f(lo + i * h) * (i % 2 ? 4.0 : 2.0);
    }
    return sum * (h / 3.0);
}

/// Orientation average over the unit sphere by the midpoint rule in the
/// polar angle theta (axis z) and the azimuth, weighted by `weight(khat)`:
/// returns (sum w e^{i x khat_x}) / (sum w).
inline std::complex<double> sphere_average_phase(
    double x, int n_theta, int n_phi, const std::function<double(double, double, double)> &weight) {
    std::complex<double> num = 0.0;
    double den = 0.0;
    for (int i = 0; i < n_theta; ++i) {
        double th = (i + 0.5) * kTestPi / n_theta;
        for (int j = 0; j < n_phi; ++j) {
            double ph = (j + 0.5) * 2.0 * kTestPi / n_phi;
            double kx = std::sin(th) * std::cos(ph);
            double ky = std::sin(th) * std::sin(ph);
            double kz = std::cos(th);
            double w = std::sin(th) * weight(kx, ky, kz);
            num += w * std::polar(1.0, x * kx);
            den += w;
        }
    }
    return num / den;
}

/// sin(x)/x evaluated directly.
inline double ref_sinc(double x) {
    return x == 0.0 ? 1.0 : std::sin(x) / x;
}

/// Mass-weighted quantile by sorting and scanning the cumulative mass.
inline double ref_weighted_quantile(std::vector<std::pair<double, double>> vm, double q) {
    std::sort(vm.begin(), vm.end());
    double total = 0.0;
    for (auto &e : vm) {
        total += e.second;
    }
    double acc = 0.0;
    for (auto &e : vm) {
        acc += e.second;
        if (acc >= q * total) {
            return e.first;
        }
    }
    return vm.back().first;
}

inline double ref_wrap(double a) {
    double w = std::fmod(a + kTestPi, 2.0 * kTestPi);
    if (w <= 0.0) {
        w += 2.0 * kTestPi;
    }
    return w - kTestPi;
}

inline double max_abs_diff(const std::vector<double> &a, const std::vector<double> &b) {
    double m = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        m = std::max(m, std::abs(a[i] - b[i]));
    }
    return m;
}

inline double max_abs(const std::vector<double> &a) {
    double m = 0.0;
    for (double v : a) {
        m = std::max(m, std::abs(v));
    }
    return m;
}

/// Random complex number with independent standard normal parts.
inline std::complex<double> random_complex(std::mt19937_64 &rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    double re = n(rng);
    return {re, n(rng)};
}

}  // namespace whichpath::testing

#endif
