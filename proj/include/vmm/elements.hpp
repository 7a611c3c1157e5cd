#ifndef VMM_ELEMENTS_HPP
#define VMM_ELEMENTS_HPP

#include <array>

#include <Eigen/Dense>

#include "vmm/mesh.hpp"

namespace vmm {

enum class ElementKind { Hermite3_1D, Argyris5_2D };

int local_dof_count(ElementKind kind);
int polynomial_degree(ElementKind kind);
int element_dimension(ElementKind kind);

/// Value and derivatives of one basis function at one physical point.
/// In 1-D only the x components are populated.
struct BasisEval {
    double value = 0.0;
    Vec2 grad = Vec2::Zero();
    Mat2 hess = Mat2::Zero();
    double laplacian = 0.0;
};

/// Cubic Hermite shape functions on a cell of length cell_length at reference
/// coordinate t in [0,1]. DOF order: value, slope at the left node; value,
/// slope at the right node. Slopes are physical d/dx (chain rule applied).
std::array<BasisEval, 4> hermite_basis(double t, double cell_length);

/// Derivative functionals attached to one vertex: the first-derivative DOFs
/// are the rows of grad applied to the gradient, the second-derivative DOFs
/// the rows of hess applied to (dxx, dxy, dyy). Identity gives the plain
/// Cartesian DOFs; boundary vertices may use tangential/normal combinations
/// so essential trace data pins plain DOFs.
struct VertexFunctionals {
    Mat2 grad = Mat2::Identity();
    Eigen::Matrix3d hess = Eigen::Matrix3d::Identity();
};

/// The 21 quintic basis functions on a physical triangle, dual to the Argyris
/// degrees of freedom: per vertex the value plus two first- and three
/// second-derivative functionals; plus the normal derivative at each edge
/// midpoint. Local edge i is opposite vertex i and its derivative direction
/// is edge_normals[i] (a unit vector fixed by the caller, so two cells
/// sharing an edge can agree on one global DOF).
///
/// The construction inverts the 21x21 duality system against quintic
/// monomials in shifted coordinates (origin at vertex 0, scaled by the
/// longest edge), which keeps the system well conditioned on shape-regular
/// cells.
class ArgyrisElement {
public:
    static constexpr int ndofs = 21;

    ArgyrisElement(const std::array<Vec2, 3>& vertices,
                   const std::array<Vec2, 3>& edge_normals);
    ArgyrisElement(const std::array<Vec2, 3>& vertices,
                   const std::array<Vec2, 3>& edge_normals,
                   const std::array<VertexFunctionals, 3>& vertex_functionals);

    void eval(const Vec2& p, std::array<BasisEval, 21>& out) const;

    /// Reciprocal condition estimate of the duality system.
    double rcond() const { return rcond_; }

private:
    Vec2 origin_;
    double scale_ = 1.0;
    double rcond_ = 0.0;
    Eigen::Matrix<double, 21, 21> coeff_;  // column j: monomial coefficients of basis j
};

}  // namespace vmm

#endif
