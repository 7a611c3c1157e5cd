#ifndef VMM_LINALG_HPP
#define VMM_LINALG_HPP

#include <utility>

#include <Eigen/Dense>

#include "vmm/assembly.hpp"

namespace vmm {

struct SolveReport {
    double rel_residual = 0.0;    // ||Kx - F|| / ||F||, from the unfactored system
    double growth_estimate = 0.0; // ||x||_inf ||K||_inf / ||F||_inf amplification
    bool singular = false;
};

/// Direct sparse LU with partial pivoting and one step of iterative
/// refinement. A factorization failure, a non-finite solution or a relative
/// residual above 1e-10 sets the singular flag instead of throwing, so
/// deliberately degenerate runs can inspect the outcome.
std::pair<Eigen::VectorXd, SolveReport> solve_linear(const SparseSystem& system);

/// Smallest eigenpair of A x = lambda B x for symmetric A and positive
/// definite B (dense; meant for diagnostic sizes).
std::pair<double, Eigen::VectorXd> generalized_symmetric_smallest_eig(
    const Eigen::MatrixXd& A, const Eigen::MatrixXd& B);

}  // namespace vmm

#endif
