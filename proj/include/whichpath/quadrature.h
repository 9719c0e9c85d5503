#ifndef WHICHPATH_QUADRATURE_H
#define WHICHPATH_QUADRATURE_H

#include <cstddef>
#include <vector>

namespace whichpath {

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [lo, hi], nodes ascending.
/// Exact for polynomials of degree 2n - 1.
QuadratureRule gauss_legendre(size_t n, double lo = -1.0, double hi = 1.0);

}  // namespace whichpath

#endif
