#include "vmm/dof_map.hpp"

#include <algorithm>
#include <stdexcept>

namespace vmm {

namespace {

const VertexFunctionals kIdentityFunctionals{};

// functional h -> a^T H b on the packed Hessian (hxx, hxy, hyy)
void set_quadratic_row(Eigen::Matrix3d& Q, int row, const Vec2& a, const Vec2& b) {
    Q(row, 0) = a.x() * b.x();
    Q(row, 1) = a.x() * b.y() + a.y() * b.x();
    Q(row, 2) = a.y() * b.y();
}

// Tangential/normal re-orientation of the derivative DOFs at boundary
// vertices, so the data determined by the trace becomes a plain DOF prefix.
void apply_minimal_trace(DofMap& dm) {
    const Mesh& mesh = *dm.mesh;
    std::vector<std::vector<Vec2>> tangents(mesh.vertices.size());
    for (int e : mesh.boundary_edges) {
        int a = mesh.edges[e][0], b = mesh.edges[e][1];
        Vec2 t = (mesh.vertices[b] - mesh.vertices[a]).normalized();
        tangents[a].push_back(t);
        tangents[b].push_back(t);
    }

    dm.vertex_functionals.assign(mesh.vertices.size(), VertexFunctionals{});
    for (int v : mesh.boundary_vertices) {
        std::vector<Vec2> dirs;
        for (const Vec2& t : tangents[v]) {
            bool parallel = false;
            for (const Vec2& s : dirs)
                if (std::abs(s.x() * t.y() - s.y() * t.x()) < 1e-8) parallel = true;
            if (!parallel) dirs.push_back(t);
        }
        VertexFunctionals& f = dm.vertex_functionals[v];
        if (dirs.size() >= 2) {
            // corner: the trace along two independent tangents fixes the full
            // gradient and two of the three second-derivative combinations
            const Vec2 &t1 = dirs[0], &t2 = dirs[1];
            f.grad = Mat2::Identity();
            set_quadratic_row(f.hess, 0, t1, t1);
            set_quadratic_row(f.hess, 1, t2, t2);
            set_quadratic_row(f.hess, 2, t1, t2);
            dm.vertex_pinned[v] = {2, 2};
        } else {
            // straight boundary: one tangential derivative and one tangential
            // second derivative are fixed, the normal data stays free
            const Vec2& t = dirs[0];
            Vec2 n(t.y(), -t.x());
            f.grad.row(0) = t;
            f.grad.row(1) = n;
            set_quadratic_row(f.hess, 0, t, t);
            set_quadratic_row(f.hess, 1, t, n);
            set_quadratic_row(f.hess, 2, n, n);
            dm.vertex_pinned[v] = {1, 1};
        }
    }
}

}  // namespace

const VertexFunctionals& DofMap::functionals_of(int vertex) const {
    if (vertex_functionals.empty()) return kIdentityFunctionals;
    return vertex_functionals[vertex];
}

bool DofMap::is_boundary_trace(int dof) const {
    return std::binary_search(boundary_trace_dofs.begin(), boundary_trace_dofs.end(), dof);
}

DofMap build_dof_map(std::shared_ptr<const Mesh> mesh, ElementKind kind,
                     BoundaryScheme scheme) {
    if (!mesh) throw std::invalid_argument("dof map: null mesh");
    if (element_dimension(kind) != mesh->dimension)
        throw std::invalid_argument("dof map: element/mesh dimension mismatch");

    DofMap dm;
    dm.mesh = mesh;
    dm.kind = kind;
    dm.scheme = scheme;
    dm.dofs_per_cell = local_dof_count(kind);

    if (kind == ElementKind::Hermite3_1D) {
        dm.total_dofs = 2 * static_cast<int>(mesh->vertices.size());
        dm.cell_dofs.reserve(4 * mesh->segments.size());
        for (const auto& s : mesh->segments) {
            dm.cell_dofs.push_back(2 * s[0]);
            dm.cell_dofs.push_back(2 * s[0] + 1);
            dm.cell_dofs.push_back(2 * s[1]);
            dm.cell_dofs.push_back(2 * s[1] + 1);
        }
        // only the endpoint values are essential in either scheme
        for (int v : mesh->boundary_vertices) dm.boundary_trace_dofs.push_back(2 * v);
        std::sort(dm.boundary_trace_dofs.begin(), dm.boundary_trace_dofs.end());
        return dm;
    }

    const int nv = static_cast<int>(mesh->vertices.size());
    dm.total_dofs = 6 * nv + static_cast<int>(mesh->edges.size());
    dm.cell_dofs.reserve(21 * mesh->triangles.size());
    dm.edge_normal_signs.resize(mesh->triangles.size());
    for (std::size_t c = 0; c < mesh->triangles.size(); ++c) {
        const auto& t = mesh->triangles[c];
        for (int k = 0; k < 3; ++k)
            for (int d = 0; d < 6; ++d) dm.cell_dofs.push_back(6 * t[k] + d);
        for (int k = 0; k < 3; ++k)
            dm.cell_dofs.push_back(6 * nv + mesh->cell_edges[c][k]);
        // Local edge k runs from t[(k+1)%3] to t[(k+2)%3]; for a CCW triangle
        // the outward normal matches the global (lo->hi) normal exactly when
        // the traversal goes from the lower to the higher vertex index.
        for (int k = 0; k < 3; ++k) {
            int a = t[(k + 1) % 3], b = t[(k + 2) % 3];
            dm.edge_normal_signs[c][k] = (a < b) ? 1 : -1;
        }
    }

    dm.edge_normals.resize(mesh->edges.size());
    for (std::size_t e = 0; e < mesh->edges.size(); ++e)
        dm.edge_normals[e] = mesh->edge_normal(static_cast<int>(e));

    dm.vertex_pinned.assign(nv, {0, 0});
    if (scheme == BoundaryScheme::FullVertex) {
        for (int v : mesh->boundary_vertices) dm.vertex_pinned[v] = {2, 3};
    } else {
        apply_minimal_trace(dm);
    }

    for (int v : mesh->boundary_vertices) {
        dm.boundary_trace_dofs.push_back(6 * v);
        for (int r = 0; r < dm.vertex_pinned[v][0]; ++r)
            dm.boundary_trace_dofs.push_back(6 * v + 1 + r);
        for (int r = 0; r < dm.vertex_pinned[v][1]; ++r)
            dm.boundary_trace_dofs.push_back(6 * v + 3 + r);
    }
    std::sort(dm.boundary_trace_dofs.begin(), dm.boundary_trace_dofs.end());
    return dm;
}

Eigen::VectorXd interpolate(const DofMap& dm,
                            const std::function<double(const Vec2&)>& value,
                            const std::function<Vec2(const Vec2&)>& grad,
                            const std::function<Mat2(const Vec2&)>& hess) {
    const Mesh& mesh = *dm.mesh;
    Eigen::VectorXd c = Eigen::VectorXd::Zero(dm.total_dofs);

    if (dm.kind == ElementKind::Hermite3_1D) {
        for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
            c[2 * v] = value(mesh.vertices[v]);
            c[2 * v + 1] = grad(mesh.vertices[v]).x();
        }
        return c;
    }

    const int nv = static_cast<int>(mesh.vertices.size());
    for (int v = 0; v < nv; ++v) {
        const Vec2& p = mesh.vertices[v];
        const VertexFunctionals& f = dm.functionals_of(v);
        Vec2 g = f.grad * grad(p);
        Mat2 H = hess(p);
        Eigen::Vector3d h = f.hess * Eigen::Vector3d(H(0, 0), H(0, 1), H(1, 1));
        c[6 * v + 0] = value(p);
        c[6 * v + 1] = g.x();
        c[6 * v + 2] = g.y();
        c[6 * v + 3] = h[0];
        c[6 * v + 4] = h[1];
        c[6 * v + 5] = h[2];
    }
    for (std::size_t e = 0; e < mesh.edges.size(); ++e) {
        Vec2 mid = 0.5 * (mesh.vertices[mesh.edges[e][0]] + mesh.vertices[mesh.edges[e][1]]);
        c[6 * nv + e] = dm.edge_normals[e].dot(grad(mid));
    }
    return c;
}

CellBasis::CellBasis(const DofMap& dm, std::size_t cell) {
    const Mesh& mesh = *dm.mesh;
    n_ = dm.dofs_per_cell;
    if (dm.kind == ElementKind::Hermite3_1D) {
        const auto& s = mesh.segments[cell];
        x_left_ = mesh.vertices[s[0]].x();
        length_ = mesh.vertices[s[1]].x() - x_left_;
        return;
    }
    const auto& t = mesh.triangles[cell];
    std::array<Vec2, 3> vx = {mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]]};
    std::array<Vec2, 3> normals;
    for (int k = 0; k < 3; ++k) normals[k] = dm.edge_normals[mesh.cell_edges[cell][k]];
    std::array<VertexFunctionals, 3> vfun = {dm.functionals_of(t[0]),
                                             dm.functionals_of(t[1]),
                                             dm.functionals_of(t[2])};
    argyris_.emplace(vx, normals, vfun);
}

void CellBasis::eval(const Vec2& p, std::span<BasisEval> out) const {
    if (argyris_) {
        std::array<BasisEval, 21> tmp;
        argyris_->eval(p, tmp);
        std::copy(tmp.begin(), tmp.end(), out.begin());
        return;
    }
    double t = (p.x() - x_left_) / length_;
    auto tmp = hermite_basis(t, length_);
    std::copy(tmp.begin(), tmp.end(), out.begin());
}

CellQuadrature map_quadrature(const Mesh& mesh, std::size_t cell,
                              const QuadratureRule& rule) {
    CellQuadrature q;
    q.points.reserve(rule.points.size());
    q.weights.reserve(rule.points.size());
    if (mesh.dimension == 1) {
        const auto& s = mesh.segments[cell];
        double a = mesh.vertices[s[0]].x();
        double L = mesh.vertices[s[1]].x() - a;
        for (std::size_t i = 0; i < rule.points.size(); ++i) {
            q.points.emplace_back(a + L * rule.points[i].x(), 0.0);
            q.weights.push_back(L * rule.weights[i]);
        }
        return q;
    }
    const auto& t = mesh.triangles[cell];
    const Vec2& v0 = mesh.vertices[t[0]];
    const Vec2 e1 = mesh.vertices[t[1]] - v0;
    const Vec2 e2 = mesh.vertices[t[2]] - v0;
    double jac = e1.x() * e2.y() - e1.y() * e2.x();  // = 2*area for CCW cells
    for (std::size_t i = 0; i < rule.points.size(); ++i) {
        const Vec2& r = rule.points[i];
        q.points.push_back(v0 + r.x() * e1 + r.y() * e2);
        q.weights.push_back(jac * rule.weights[i]);
    }
    return q;
}

}  // namespace vmm
