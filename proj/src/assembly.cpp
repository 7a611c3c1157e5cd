#include "vmm/assembly.hpp"

#include <stdexcept>

namespace vmm {

namespace {

QuadratureRule pick_rule(const DofMap& dm, const AssemblyOptions& opts) {
    int dim = dm.mesh->dimension;
    int degree = opts.quadrature_degree > 0 ? opts.quadrature_degree
                                            : default_quadrature_degree(dim);
    return quadrature_rule(dim, degree);
}

using Triplet = Eigen::Triplet<double>;
using RowSparse = Eigen::SparseMatrix<double, Eigen::RowMajor>;

// Runs `point_kernel(p, w, basis_at_p)` over every quadrature point of every
// cell, flushing `cell_done(dofs)` after each cell. Field-evaluation failures
// are rethrown with the cell index and point attached.
template <typename PointKernel, typename CellDone>
void for_each_cell(const DofMap& dm, const QuadratureRule& rule,
                   PointKernel&& point_kernel, CellDone&& cell_done) {
    const Mesh& mesh = *dm.mesh;
    std::vector<BasisEval> basis(dm.dofs_per_cell);
    for (std::size_t cell = 0; cell < mesh.cell_count(); ++cell) {
        CellBasis cb(dm, cell);
        CellQuadrature cq = map_quadrature(mesh, cell, rule);
        for (std::size_t q = 0; q < cq.points.size(); ++q) {
            cb.eval(cq.points[q], basis);
            try {
                point_kernel(cq.points[q], cq.weights[q], basis);
            } catch (const std::exception& e) {
                throw std::runtime_error(
                    "assembly failure in cell " + std::to_string(cell) + " at point (" +
                    std::to_string(cq.points[q].x()) + ", " +
                    std::to_string(cq.points[q].y()) + "): " + e.what());
            }
        }
        cell_done(dm.cell_global(cell));
    }
}

}  // namespace

SparseSystem assemble_operator(const DofMap& dm, const ProblemSpec& problem,
                               double eps, const AssemblyOptions& opts) {
    if (problem.dimension != dm.mesh->dimension)
        throw std::invalid_argument("assemble: problem/mesh dimension mismatch");

    const int nloc = dm.dofs_per_cell;
    std::vector<Triplet> trips;
    trips.reserve(dm.mesh->cell_count() * nloc * nloc);
    Eigen::MatrixXd local(nloc, nloc);
    local.setZero();

    QuadratureRule rule = pick_rule(dm, opts);
    const bool lower_order = static_cast<bool>(problem.b) || static_cast<bool>(problem.c);
    for_each_cell(
        dm, rule,
        [&](const Vec2& p, double w, const std::vector<BasisEval>& basis) {
            Mat2 A = problem.A(p);
            Vec2 bvec = problem.b ? problem.b(p) : Vec2(Vec2::Zero());
            double cval = problem.c ? problem.c(p) : 0.0;
            for (int j = 0; j < nloc; ++j) {
                const BasisEval& trial = basis[j];
                double a_hess = A(0, 0) * trial.hess(0, 0) +
                                2.0 * A(0, 1) * trial.hess(0, 1) +
                                A(1, 1) * trial.hess(1, 1);
                double lo = lower_order ? bvec.dot(trial.grad) + cval * trial.value : 0.0;
                double eps_lap = eps * trial.laplacian;
                for (int i = 0; i < nloc; ++i) {
                    const BasisEval& test = basis[i];
                    local(i, j) += w * (eps_lap * test.laplacian +
                                        (lo - a_hess) * test.value);
                }
            }
        },
        [&](std::span<const int> dofs) {
            for (int i = 0; i < nloc; ++i)
                for (int j = 0; j < nloc; ++j)
                    trips.emplace_back(dofs[i], dofs[j], local(i, j));
            local.setZero();
        });

    SparseSystem sys;
    sys.K.resize(dm.total_dofs, dm.total_dofs);
    sys.K.setFromTriplets(trips.begin(), trips.end());
    sys.F = Eigen::VectorXd::Zero(dm.total_dofs);
    sys.symmetric = false;
    return sys;
}

Eigen::VectorXd assemble_load(const DofMap& dm, const ProblemSpec& problem,
                              double eps, const AssemblyOptions& opts) {
    if (!problem.f) throw std::invalid_argument("assemble: problem provides no source");
    const int nloc = dm.dofs_per_cell;
    Eigen::VectorXd F = Eigen::VectorXd::Zero(dm.total_dofs);
    Eigen::VectorXd local = Eigen::VectorXd::Zero(nloc);
    QuadratureRule rule = pick_rule(dm, opts);
    for_each_cell(
        dm, rule,
        [&](const Vec2& p, double w, const std::vector<BasisEval>& basis) {
            double fv = problem.f(p, eps);
            for (int i = 0; i < nloc; ++i) local[i] += w * fv * basis[i].value;
        },
        [&](std::span<const int> dofs) {
            for (int i = 0; i < nloc; ++i) F[dofs[i]] += local[i];
            local.setZero();
        });
    return F;
}

RowSparse assemble_gram(const DofMap& dm, GramKind kind, double eps,
                        const AssemblyOptions& opts) {
    const int nloc = dm.dofs_per_cell;
    std::vector<Triplet> trips;
    trips.reserve(dm.mesh->cell_count() * nloc * nloc);
    Eigen::MatrixXd local(nloc, nloc);
    local.setZero();
    QuadratureRule rule = pick_rule(dm, opts);
    for_each_cell(
        dm, rule,
        [&](const Vec2&, double w, const std::vector<BasisEval>& basis) {
            for (int i = 0; i < nloc; ++i)
                for (int j = 0; j < nloc; ++j) {
                    const BasisEval &u = basis[j], &v = basis[i];
                    double val = 0.0;
                    switch (kind) {
                        case GramKind::L2: val = u.value * v.value; break;
                        case GramKind::H1:
                            val = u.value * v.value + u.grad.dot(v.grad);
                            break;
                        case GramKind::H2:
                            val = u.value * v.value + u.grad.dot(v.grad) +
                                  u.hess.cwiseProduct(v.hess).sum();
                            break;
                        case GramKind::Energy:
                            val = eps * u.laplacian * v.laplacian + u.grad.dot(v.grad);
                            break;
                    }
                    local(i, j) += w * val;
                }
        },
        [&](std::span<const int> dofs) {
            for (int i = 0; i < nloc; ++i)
                for (int j = 0; j < nloc; ++j)
                    trips.emplace_back(dofs[i], dofs[j], local(i, j));
            local.setZero();
        });
    RowSparse G(dm.total_dofs, dm.total_dofs);
    G.setFromTriplets(trips.begin(), trips.end());
    return G;
}

std::vector<std::pair<int, double>> boundary_values(const DofMap& dm,
                                                    const ProblemSpec& problem) {
    std::vector<std::pair<int, double>> out;
    out.reserve(dm.boundary_trace_dofs.size());
    const Mesh& mesh = *dm.mesh;

    if (!problem.exact) {
        // No exact bundle means homogeneous data u = 0.
        for (int d : dm.boundary_trace_dofs) out.emplace_back(d, 0.0);
        return out;
    }
    const ExactBundle& eb = *problem.exact;
    if (!eb.u || !eb.grad || (dm.kind == ElementKind::Argyris5_2D && !eb.hess))
        throw std::runtime_error(
            "boundary data: essential DOFs need value and derivative data");

    if (dm.kind == ElementKind::Hermite3_1D) {
        for (int v : mesh.boundary_vertices)
            out.emplace_back(2 * v, eb.u(mesh.vertices[v]));
        return out;
    }
    for (int v : mesh.boundary_vertices) {
        const Vec2& p = mesh.vertices[v];
        const VertexFunctionals& f = dm.functionals_of(v);
        Vec2 g = f.grad * eb.grad(p);
        Mat2 H = eb.hess(p);
        Eigen::Vector3d h = f.hess * Eigen::Vector3d(H(0, 0), H(0, 1), H(1, 1));
        out.emplace_back(6 * v + 0, eb.u(p));
        for (int r = 0; r < dm.vertex_pinned[v][0]; ++r)
            out.emplace_back(6 * v + 1 + r, g[r]);
        for (int r = 0; r < dm.vertex_pinned[v][1]; ++r)
            out.emplace_back(6 * v + 3 + r, h[r]);
    }
    return out;
}

SparseSystem apply_boundary_conditions(SparseSystem sys, const DofMap& dm,
                                       const ProblemSpec& problem) {
    auto bv = boundary_values(dm, problem);
    const int n = dm.total_dofs;
    if (sys.K.rows() != n || sys.F.size() != n)
        throw std::invalid_argument("apply bc: system size mismatch");

    std::vector<char> constrained(n, 0);
    std::vector<double> value(n, 0.0);
    for (const auto& [d, v] : bv) {
        constrained[d] = 1;
        value[d] = v;
    }

    std::vector<Triplet> trips;
    trips.reserve(sys.K.nonZeros());
    for (int r = 0; r < n; ++r) {
        if (constrained[r]) continue;
        for (RowSparse::InnerIterator it(sys.K, r); it; ++it) {
            if (constrained[it.col()])
                sys.F[r] -= it.value() * value[it.col()];
            else
                trips.emplace_back(r, it.col(), it.value());
        }
    }
    for (const auto& [d, v] : bv) {
        trips.emplace_back(d, d, 1.0);
        sys.F[d] = v;
    }
    sys.K.setZero();
    sys.K.setFromTriplets(trips.begin(), trips.end());
    sys.constraints = std::move(bv);
    return sys;
}

std::vector<int> free_dofs(const DofMap& dm) {
    std::vector<int> out;
    out.reserve(dm.total_dofs - dm.boundary_trace_dofs.size());
    std::size_t k = 0;
    for (int d = 0; d < dm.total_dofs; ++d) {
        if (k < dm.boundary_trace_dofs.size() && dm.boundary_trace_dofs[k] == d)
            ++k;
        else
            out.push_back(d);
    }
    return out;
}

}  // namespace vmm
