#include "vmm/elements.hpp"

#include <cmath>
#include <stdexcept>

namespace vmm {

int local_dof_count(ElementKind kind) {
    return kind == ElementKind::Hermite3_1D ? 4 : 21;
}

int polynomial_degree(ElementKind kind) {
    return kind == ElementKind::Hermite3_1D ? 3 : 5;
}

int element_dimension(ElementKind kind) {
    return kind == ElementKind::Hermite3_1D ? 1 : 2;
}

std::array<BasisEval, 4> hermite_basis(double t, double cell_length) {
    const double L = cell_length;
    std::array<BasisEval, 4> out;

    const double v[4] = {1.0 - 3.0 * t * t + 2.0 * t * t * t,
                         L * (t - 2.0 * t * t + t * t * t),
                         3.0 * t * t - 2.0 * t * t * t,
                         L * (-t * t + t * t * t)};
    const double d[4] = {-6.0 * t + 6.0 * t * t,
                         L * (1.0 - 4.0 * t + 3.0 * t * t),
                         6.0 * t - 6.0 * t * t,
                         L * (-2.0 * t + 3.0 * t * t)};
    const double dd[4] = {-6.0 + 12.0 * t, L * (-4.0 + 6.0 * t),
                          6.0 - 12.0 * t, L * (-2.0 + 6.0 * t)};

    for (int i = 0; i < 4; ++i) {
        out[i].value = v[i];
        out[i].grad = Vec2(d[i] / L, 0.0);
        double uxx = dd[i] / (L * L);
        out[i].hess = Mat2::Zero();
        out[i].hess(0, 0) = uxx;
        out[i].laplacian = uxx;
    }
    return out;
}

namespace {

// Quintic monomials x^a y^b ordered by total degree, x-power descending.
struct Mono {
    int a, b;
};

constexpr std::array<Mono, 21> kMonos = {{{0, 0},
                                          {1, 0}, {0, 1},
                                          {2, 0}, {1, 1}, {0, 2},
                                          {3, 0}, {2, 1}, {1, 2}, {0, 3},
                                          {4, 0}, {3, 1}, {2, 2}, {1, 3}, {0, 4},
                                          {5, 0}, {4, 1}, {3, 2}, {2, 3}, {1, 4}, {0, 5}}};

double ipow(double x, int e) {
    if (e < 0) return 0.0;
    double r = 1.0;
    while (e-- > 0) r *= x;
    return r;
}

struct MonoEval {
    double v, gx, gy, hxx, hxy, hyy;
};

MonoEval eval_mono(const Mono& m, double x, double y) {
    MonoEval e;
    e.v = ipow(x, m.a) * ipow(y, m.b);
    e.gx = m.a * ipow(x, m.a - 1) * ipow(y, m.b);
    e.gy = m.b * ipow(x, m.a) * ipow(y, m.b - 1);
    e.hxx = m.a * (m.a - 1) * ipow(x, m.a - 2) * ipow(y, m.b);
    e.hxy = m.a * m.b * ipow(x, m.a - 1) * ipow(y, m.b - 1);
    e.hyy = m.b * (m.b - 1) * ipow(x, m.a) * ipow(y, m.b - 2);
    return e;
}

}  // namespace

ArgyrisElement::ArgyrisElement(const std::array<Vec2, 3>& vx,
                               const std::array<Vec2, 3>& edge_normals)
    : ArgyrisElement(vx, edge_normals,
                     {VertexFunctionals{}, VertexFunctionals{}, VertexFunctionals{}}) {}

ArgyrisElement::ArgyrisElement(const std::array<Vec2, 3>& vx,
                               const std::array<Vec2, 3>& edge_normals,
                               const std::array<VertexFunctionals, 3>& vfun) {
    double area2 = (vx[1].x() - vx[0].x()) * (vx[2].y() - vx[0].y()) -
                   (vx[1].y() - vx[0].y()) * (vx[2].x() - vx[0].x());
    if (!(area2 > 0.0))
        throw std::runtime_error("argyris: triangle not positively oriented");

    origin_ = vx[0];
    scale_ = std::max({(vx[1] - vx[0]).norm(), (vx[2] - vx[1]).norm(),
                       (vx[0] - vx[2]).norm()});
    const double s = scale_;

    std::array<Vec2, 3> node;  // scaled vertices
    for (int k = 0; k < 3; ++k) node[k] = (vx[k] - origin_) / s;
    const std::array<Vec2, 3> mid = {0.5 * (node[1] + node[2]),
                                     0.5 * (node[2] + node[0]),
                                     0.5 * (node[0] + node[1])};

    // Duality system in scaled coordinates. Derivative functionals are scaled
    // by s-powers so all entries stay O(1); the scaling is undone through the
    // right-hand side below.
    Eigen::Matrix<double, 21, 21> V;
    Eigen::Matrix<double, 21, 1> rhs_scale;
    for (int k = 0; k < 3; ++k) {
        const Mat2& G = vfun[k].grad;
        const Eigen::Matrix3d& Q = vfun[k].hess;
        for (int m = 0; m < 21; ++m) {
            MonoEval e = eval_mono(kMonos[m], node[k].x(), node[k].y());
            V(6 * k + 0, m) = e.v;
            V(6 * k + 1, m) = G(0, 0) * e.gx + G(0, 1) * e.gy;
            V(6 * k + 2, m) = G(1, 0) * e.gx + G(1, 1) * e.gy;
            V(6 * k + 3, m) = Q(0, 0) * e.hxx + Q(0, 1) * e.hxy + Q(0, 2) * e.hyy;
            V(6 * k + 4, m) = Q(1, 0) * e.hxx + Q(1, 1) * e.hxy + Q(1, 2) * e.hyy;
            V(6 * k + 5, m) = Q(2, 0) * e.hxx + Q(2, 1) * e.hxy + Q(2, 2) * e.hyy;
        }
        rhs_scale(6 * k + 0) = 1.0;
        rhs_scale(6 * k + 1) = s;
        rhs_scale(6 * k + 2) = s;
        rhs_scale(6 * k + 3) = s * s;
        rhs_scale(6 * k + 4) = s * s;
        rhs_scale(6 * k + 5) = s * s;
    }
    for (int k = 0; k < 3; ++k) {
        const Vec2& n = edge_normals[k];
        for (int m = 0; m < 21; ++m) {
            MonoEval e = eval_mono(kMonos[m], mid[k].x(), mid[k].y());
            V(18 + k, m) = n.x() * e.gx + n.y() * e.gy;
        }
        rhs_scale(18 + k) = s;
    }

    Eigen::PartialPivLU<Eigen::Matrix<double, 21, 21>> lu(V);
    rcond_ = lu.rcond();
    if (!(rcond_ > 1e-12))
        throw std::runtime_error("argyris: degenerate element (rcond " +
                                 std::to_string(rcond_) + ")");
    coeff_ = lu.solve(Eigen::Matrix<double, 21, 21>(rhs_scale.asDiagonal()));
}

void ArgyrisElement::eval(const Vec2& p, std::array<BasisEval, 21>& out) const {
    const double s = scale_;
    const Vec2 q = (p - origin_) / s;

    std::array<MonoEval, 21> me;
    for (int m = 0; m < 21; ++m) me[m] = eval_mono(kMonos[m], q.x(), q.y());

    for (int j = 0; j < 21; ++j) {
        double v = 0, gx = 0, gy = 0, hxx = 0, hxy = 0, hyy = 0;
        for (int m = 0; m < 21; ++m) {
            double c = coeff_(m, j);
            if (c == 0.0) continue;
            v += c * me[m].v;
            gx += c * me[m].gx;
            gy += c * me[m].gy;
            hxx += c * me[m].hxx;
            hxy += c * me[m].hxy;
            hyy += c * me[m].hyy;
        }
        out[j].value = v;
        out[j].grad = Vec2(gx / s, gy / s);
        out[j].hess(0, 0) = hxx / (s * s);
        out[j].hess(0, 1) = hxy / (s * s);
        out[j].hess(1, 0) = hxy / (s * s);
        out[j].hess(1, 1) = hyy / (s * s);
        out[j].laplacian = (hxx + hyy) / (s * s);
    }
}

}  // namespace vmm
