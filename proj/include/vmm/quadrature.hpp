#ifndef VMM_QUADRATURE_HPP
#define VMM_QUADRATURE_HPP

#include <vector>

#include "vmm/mesh.hpp"

namespace vmm {

/// Quadrature on the reference cell: [0,1] in 1-D (weights sum to 1) or the
/// unit triangle {x,y >= 0, x+y <= 1} in 2-D (weights sum to 1/2).
struct QuadratureRule {
    int dimension = 0;
    int exactness = 0;  // all polynomials of total degree <= exactness are exact
    std::vector<Vec2> points;
    std::vector<double> weights;
};

/// Gauss-Legendre nodes/weights on [0,1], exact through degree 2n-1.
void gauss_legendre_01(int n, std::vector<double>& points, std::vector<double>& weights);

/// Rule of requested exactness degree (1..24 supported).
QuadratureRule quadrature_rule(int dimension, int degree);

/// Default exactness used by assembly: 8 in 1-D, 12 in 2-D.
int default_quadrature_degree(int dimension);

}  // namespace vmm

#endif
