#include "vmm/linalg.hpp"

#include <stdexcept>

#include <Eigen/SparseLU>

namespace vmm {

std::pair<Eigen::VectorXd, SolveReport> solve_linear(const SparseSystem& system) {
    SolveReport report;
    const Eigen::Index n = system.K.rows();
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);

    Eigen::SparseMatrix<double> K = system.K;  // SparseLU wants column-major
    K.makeCompressed();

    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.analyzePattern(K);
    lu.factorize(K);
    if (lu.info() != Eigen::Success) {
        report.singular = true;
        report.rel_residual = std::numeric_limits<double>::infinity();
        return {x, report};
    }

    x = lu.solve(system.F);
    Eigen::VectorXd r = system.F - K * x;
    x += lu.solve(r);  // one refinement step
    r = system.F - K * x;

    double fnorm = system.F.norm();
    report.rel_residual = fnorm > 0.0 ? r.norm() / fnorm : r.norm();

    double finf = system.F.lpNorm<Eigen::Infinity>();
    double kinf = 0.0;
    for (int row = 0; row < system.K.rows(); ++row) {
        double s = 0.0;
        for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(system.K, row);
             it; ++it)
            s += std::abs(it.value());
        kinf = std::max(kinf, s);
    }
    report.growth_estimate =
        x.lpNorm<Eigen::Infinity>() * kinf / (finf > 0.0 ? finf : 1.0);

    if (!x.allFinite() || !(report.rel_residual <= 1e-10)) {
        report.singular = true;
    }
    return {x, report};
}

std::pair<double, Eigen::VectorXd> generalized_symmetric_smallest_eig(
    const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
    if (A.rows() != A.cols() || B.rows() != B.cols() || A.rows() != B.rows())
        throw std::invalid_argument("generalized eig: size mismatch");

    Eigen::LLT<Eigen::MatrixXd> llt(B);
    if (llt.info() != Eigen::Success)
        throw std::invalid_argument("generalized eig: B is not positive definite");

    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(A, B);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("generalized eig: solver failed");

    double lambda = solver.eigenvalues()(0);
    Eigen::VectorXd vec = solver.eigenvectors().col(0);

    double resid = (A * vec - lambda * B * vec).norm();
    if (!(resid <= 1e-8 * std::max(A.norm(), 1e-300)))
        throw std::runtime_error("generalized eig: residual check failed");
    return {lambda, vec};
}

}  // namespace vmm
