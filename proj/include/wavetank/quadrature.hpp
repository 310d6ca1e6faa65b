#pragma once

#include <vector>

namespace wavetank {

// Gauss-Legendre rule on [-1,1]. Exact for polynomials of degree <= 2n-1.
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
    int size() const { return static_cast<int>(nodes.size()); }
};

// Nodes and weights computed by Newton iteration on the Legendre recurrence.
// Supported orders: 1 <= n <= 16; throws std::invalid_argument otherwise.
QuadratureRule gauss_legendre(int n);

}  // namespace wavetank
