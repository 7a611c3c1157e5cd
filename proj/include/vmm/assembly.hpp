#ifndef VMM_ASSEMBLY_HPP
#define VMM_ASSEMBLY_HPP

#include <utility>
#include <vector>

#include <Eigen/Sparse>

#include "vmm/dof_map.hpp"
#include "vmm/problems.hpp"

namespace vmm {

struct AssemblyOptions {
    int quadrature_degree = 0;  // 0 = default for the dimension (8 in 1-D, 12 in 2-D)
    // Consumed where the DOF map is built (solve_vmm, diagnostics), not by the
    // assembly routines themselves.
    BoundaryScheme boundary_scheme = BoundaryScheme::FullVertex;
};

/// Assembled operator in CSR layout, load vector and constraint bookkeeping.
/// After apply_boundary_conditions every constrained row is an identity row
/// with its prescribed value in F.
struct SparseSystem {
    Eigen::SparseMatrix<double, Eigen::RowMajor> K;
    Eigen::VectorXd F;
    std::vector<std::pair<int, double>> constraints;  // (dof, prescribed value), sorted
    bool symmetric = false;
};

/// Entry (i,j) = eps (lap phi_j, lap phi_i) - (A:D2 phi_j, phi_i)
///             + (b.grad phi_j + c phi_j, phi_i).
/// Assembly order is fixed (cells ascending), so re-assembly is bitwise
/// reproducible.
SparseSystem assemble_operator(const DofMap& dofmap, const ProblemSpec& problem,
                               double eps, const AssemblyOptions& opts = {});

Eigen::VectorXd assemble_load(const DofMap& dofmap, const ProblemSpec& problem,
                              double eps, const AssemblyOptions& opts = {});

enum class GramKind { L2, H1, H2, Energy };

/// Gram matrix of the requested inner product. H1/H2 are the full Sobolev
/// products; Energy is eps (lap, lap) + (grad, grad).
Eigen::SparseMatrix<double, Eigen::RowMajor> assemble_gram(
    const DofMap& dofmap, GramKind kind, double eps = 0.0,
    const AssemblyOptions& opts = {});

/// Prescribed values for the essential DOFs: interpolated from the problem's
/// exact bundle, or zero when none is given (homogeneous data).
std::vector<std::pair<int, double>> boundary_values(const DofMap& dofmap,
                                                    const ProblemSpec& problem);

/// Row replacement plus column elimination: constrained rows become identity
/// rows, known values move to the load vector of the free rows.
SparseSystem apply_boundary_conditions(SparseSystem system, const DofMap& dofmap,
                                       const ProblemSpec& problem);

std::vector<int> free_dofs(const DofMap& dofmap);

}  // namespace vmm

#endif
