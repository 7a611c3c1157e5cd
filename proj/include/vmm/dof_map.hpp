#ifndef VMM_DOF_MAP_HPP
#define VMM_DOF_MAP_HPP

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "vmm/elements.hpp"
#include "vmm/mesh.hpp"
#include "vmm/quadrature.hpp"

namespace vmm {

/// How essential data u = g constrains the DOFs at boundary vertices.
///
/// FullVertex pins all six vertex DOFs (value, gradient, Hessian) to data
/// interpolated from the exact solution; simple, but over-constrains relative
/// to the trace and needs second derivatives of g everywhere.
///
/// MinimalTrace pins exactly what the boundary trace determines: the value,
/// tangential first derivatives and tangential second derivatives along each
/// incident boundary edge. Boundary-vertex derivative DOFs are re-oriented
/// into tangential/normal combinations so the constraints stay plain DOF
/// pinnings; the normal data remains free, which keeps the scheme consistent
/// with the continuum problem.
enum class BoundaryScheme { FullVertex, MinimalTrace };

/// Global numbering of the C1 degrees of freedom.
///
/// 1-D Hermite: vertex v owns (value, slope) = (2v, 2v+1).
/// 2-D Argyris: vertex v owns the value plus two first- and three
/// second-derivative DOFs (6v..6v+5, Cartesian unless re-oriented by the
/// boundary scheme), and edge e owns the normal-derivative DOF
/// 6*nvertices + e, taken along the global edge normal so both incident
/// cells reference the same functional.
struct DofMap {
    std::shared_ptr<const Mesh> mesh;
    ElementKind kind = ElementKind::Hermite3_1D;
    BoundaryScheme scheme = BoundaryScheme::FullVertex;
    int total_dofs = 0;
    int dofs_per_cell = 0;
    std::vector<int> cell_dofs;  // cell_count * dofs_per_cell, cell-major

    /// DOFs constrained by essential data u = g: endpoint values in 1-D;
    /// per boundary vertex in 2-D, the set selected by the boundary scheme.
    /// Boundary normal-derivative DOFs stay free (the condition
    /// laplacian u = 0 there is natural).
    std::vector<int> boundary_trace_dofs;  // sorted

    /// Pinned (gradient rows, Hessian rows) per vertex; zero for interior
    /// vertices, (2, 3) at FullVertex boundary vertices.
    std::vector<std::array<int, 2>> vertex_pinned;

    /// Per-vertex derivative functionals; empty when every vertex uses the
    /// plain Cartesian DOFs.
    std::vector<VertexFunctionals> vertex_functionals;
    const VertexFunctionals& functionals_of(int vertex) const;

    std::vector<Vec2> edge_normals;                     // per global edge (2-D)
    std::vector<std::array<int, 3>> edge_normal_signs;  // per cell: +1 if the global
                                                        // normal is outward for the cell

    std::span<const int> cell_global(std::size_t cell) const {
        return {cell_dofs.data() + cell * dofs_per_cell,
                static_cast<std::size_t>(dofs_per_cell)};
    }
    bool is_boundary_trace(int dof) const;
};

DofMap build_dof_map(std::shared_ptr<const Mesh> mesh, ElementKind kind,
                     BoundaryScheme scheme = BoundaryScheme::FullVertex);

/// Nodal interpolation I_h u from closed-form value/gradient/Hessian data.
Eigen::VectorXd interpolate(const DofMap& dofmap,
                            const std::function<double(const Vec2&)>& value,
                            const std::function<Vec2(const Vec2&)>& grad,
                            const std::function<Mat2(const Vec2&)>& hess);

/// Local basis evaluator for one cell (Hermite or Argyris picked by the map).
class CellBasis {
public:
    CellBasis(const DofMap& dofmap, std::size_t cell);

    int size() const { return n_; }
    void eval(const Vec2& p, std::span<BasisEval> out) const;

private:
    int n_;
    // 1-D data
    double x_left_ = 0.0, length_ = 1.0;
    // 2-D data
    std::optional<ArgyrisElement> argyris_;
};

/// Quadrature rule mapped to a physical cell (weights carry the Jacobian).
struct CellQuadrature {
    std::vector<Vec2> points;
    std::vector<double> weights;
};
CellQuadrature map_quadrature(const Mesh& mesh, std::size_t cell,
                              const QuadratureRule& rule);

}  // namespace vmm

#endif
