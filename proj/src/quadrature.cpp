#include "vmm/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace vmm {

void gauss_legendre_01(int n, std::vector<double>& points, std::vector<double>& weights) {
    points.resize(n);
    weights.resize(n);
    // Newton iteration on P_n over [-1,1], then map to [0,1].
    for (int i = 0; i < n; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            if (n == 1) p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            double pn = (n == 1) ? x : p1;
            double pm = (n == 1) ? 1.0 : p0;
            dp = n * (x * pn - pm) / (x * x - 1.0);
            double dx = pn / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        points[i] = 0.5 * (x + 1.0);
        weights[i] = 0.5 * w;
    }
}

int default_quadrature_degree(int dimension) { return dimension == 1 ? 8 : 12; }

QuadratureRule quadrature_rule(int dimension, int degree) {
    if (dimension != 1 && dimension != 2)
        throw std::invalid_argument("quadrature: dimension must be 1 or 2");
    if (degree < 1 || degree > 24)
        throw std::invalid_argument("quadrature: unsupported degree " + std::to_string(degree));

    QuadratureRule rule;
    rule.dimension = dimension;

    if (dimension == 1) {
        int n = (degree + 2) / 2;  // 2n-1 >= degree
        std::vector<double> p, w;
        gauss_legendre_01(n, p, w);
        for (int i = 0; i < n; ++i) {
            rule.points.emplace_back(p[i], 0.0);
            rule.weights.push_back(w[i]);
        }
        rule.exactness = 2 * n - 1;
        return rule;
    }

    // Conical product rule on the unit triangle: x = u(1-v), y = v with
    // Jacobian (1-v). A monomial x^a y^b picks up degree a+b+1 <= degree+1
    // in v, so the v-rule needs one extra order.
    int nu = (degree + 2) / 2;
    int nv = (degree + 3) / 2;
    std::vector<double> pu, wu, pv, wv;
    gauss_legendre_01(nu, pu, wu);
    gauss_legendre_01(nv, pv, wv);
    for (int j = 0; j < nv; ++j)
        for (int i = 0; i < nu; ++i) {
            double v = pv[j];
            double u = pu[i];
            rule.points.emplace_back(u * (1.0 - v), v);
            rule.weights.push_back(wu[i] * wv[j] * (1.0 - v));
        }
    rule.exactness = std::min(2 * nu - 1, 2 * nv - 2);
    return rule;
}

}  // namespace vmm
