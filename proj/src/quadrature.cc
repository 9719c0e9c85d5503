#include "whichpath/quadrature.h"

#include <cmath>

#include "whichpath/errors.h"
#include "whichpath/numeric.h"

namespace whichpath {

QuadratureRule gauss_legendre(size_t n, double lo, double hi) {
    if (n == 0) {
        throw ConfigurationError("Gauss-Legendre rule needs at least one node");
    }
    if (!(hi > lo)) {
        throw ConfigurationError("Gauss-Legendre rule needs lo < hi");
    }
    QuadratureRule rule{std::vector<double>(n), std::vector<double>(n)};
    double half = 0.5 * (hi - lo);
    double mid = 0.5 * (hi + lo);
    size_t m = (n + 1) / 2;
    for (size_t i = 0; i < m; ++i) {
        // Newton on P_n starting from the Tricomi estimate of the i-th root.
        double x = std::cos(kPi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = x;
            for (size_t k = 2; k <= n; ++k) {
                double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
                p0 = p1;
                p1 = pk;
            }
            dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
            double step = p1 / dp;
            x -= step;
            if (std::abs(step) < 1e-16) {
                break;
            }
        }
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        // Roots come out descending; store ascending and mirror.
        rule.nodes[i] = mid - half * x;
        rule.nodes[n - 1 - i] = mid + half * x;
        rule.weights[i] = half * w;
        rule.weights[n - 1 - i] = half * w;
    }
    if (n % 2 == 1) {
        rule.nodes[n / 2] = mid;
    }
    return rule;
}

}  // namespace whichpath
