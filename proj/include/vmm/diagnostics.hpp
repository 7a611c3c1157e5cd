#ifndef VMM_DIAGNOSTICS_HPP
#define VMM_DIAGNOSTICS_HPP

#include <memory>

#include "vmm/study.hpp"

namespace vmm {

enum class DualNormKind { L2h, Hm2h };

/// Discrete dual norms over the free (essentially constrained) subspace:
///   L2h  = sup (v, w_h) / ||w_h||_L2  = sqrt(r^T M^-1 r)
///   Hm2h = sup (v, w_h) / ||w_h||_H2  = sqrt(r^T H^-1 r)
/// with r_i = (v, phi_i). The supremum over a finite-dimensional space is a
/// Rayleigh quotient, so no search is involved.
double discrete_dual_norm(const ScalarField& v, const DofMap& dofmap, DualNormKind kind,
                          const AssemblyOptions& opts = {});
double discrete_dual_norm(const SolutionField& v, const DofMap& dofmap,
                          DualNormKind kind, const AssemblyOptions& opts = {});

struct CZReport {
    double eps = 0.0;
    double h = 0.0;
    int dof_count = 0;  // free DOFs entering the probe
    double c_h = 0.0;
    bool adjoint = false;
    Eigen::VectorXd mode;  // minimizing coefficients on the free DOFs
};

/// Smallest-constant probes of the discrete stability estimates:
///   primal:  c_h = min ||L_h^eps v||_{L2h} / ||v||_{H2}
///            (smallest eigenvalue of K^T M^-1 K v = lambda H v)
///   adjoint: c_h = min ||(L_h^eps)* v||_{H-2h} / ||v||_{L2}
///            (K H^-1 K^T v = lambda M v)
/// Dense eigensolves; refuses meshes above the free-DOF ceiling.
CZReport discrete_cz_constant(const ProblemSpec& problem,
                              std::shared_ptr<const Mesh> mesh, double eps,
                              bool adjoint, int dense_ceiling = 3000,
                              const AssemblyOptions& opts = {});

/// Matrix-level core of the probe, exposed for oracle checks.
double cz_constant_from_matrices(const Eigen::MatrixXd& K, const Eigen::MatrixXd& M,
                                 const Eigen::MatrixXd& H, bool adjoint,
                                 Eigen::VectorXd* mode = nullptr);

/// Dense restriction of a sparse matrix to an index subset.
Eigen::MatrixXd dense_submatrix(const Eigen::SparseMatrix<double, Eigen::RowMajor>& A,
                                const std::vector<int>& index);

}  // namespace vmm

#endif
