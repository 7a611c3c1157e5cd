#include "vmm/diagnostics.hpp"

#include <stdexcept>

namespace vmm {

Eigen::MatrixXd dense_submatrix(const Eigen::SparseMatrix<double, Eigen::RowMajor>& A,
                                const std::vector<int>& index) {
    std::vector<int> where(A.rows(), -1);
    for (std::size_t k = 0; k < index.size(); ++k) where[index[k]] = static_cast<int>(k);
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(index.size(), index.size());
    for (int r = 0; r < A.rows(); ++r) {
        if (where[r] < 0) continue;
        for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(A, r); it; ++it)
            if (where[it.col()] >= 0) out(where[r], where[it.col()]) = it.value();
    }
    return out;
}

double discrete_dual_norm(const ScalarField& v, const DofMap& dm, DualNormKind kind,
                          const AssemblyOptions& opts) {
    ProblemSpec carrier;  // reuse the load-vector quadrature for r_i = (v, phi_i)
    carrier.dimension = dm.mesh->dimension;
    carrier.f = [&v](const Vec2& p, double) { return v(p); };
    Eigen::VectorXd r_full = assemble_load(dm, carrier, 0.0, opts);

    std::vector<int> free = free_dofs(dm);
    Eigen::VectorXd r(free.size());
    for (std::size_t k = 0; k < free.size(); ++k) r[k] = r_full[free[k]];

    auto G = assemble_gram(dm, kind == DualNormKind::L2h ? GramKind::L2 : GramKind::H2,
                           0.0, opts);
    Eigen::MatrixXd Gf = dense_submatrix(G, free);
    Eigen::LLT<Eigen::MatrixXd> llt(Gf);
    if (llt.info() != Eigen::Success)
        throw std::runtime_error("dual norm: Gram factorization failed");
    return std::sqrt(r.dot(llt.solve(r)));
}

double discrete_dual_norm(const SolutionField& v, const DofMap& dm, DualNormKind kind,
                          const AssemblyOptions& opts) {
    ScalarField f = [&v](const Vec2& p) {
        auto e = v.try_eval(p);
        if (!e) throw std::runtime_error("dual norm: point outside the field's mesh");
        return e->value;
    };
    return discrete_dual_norm(f, dm, kind, opts);
}

double cz_constant_from_matrices(const Eigen::MatrixXd& K, const Eigen::MatrixXd& M,
                                 const Eigen::MatrixXd& H, bool adjoint,
                                 Eigen::VectorXd* mode) {
    const Eigen::MatrixXd& inner = adjoint ? H : M;
    Eigen::LLT<Eigen::MatrixXd> llt(inner);
    if (llt.info() != Eigen::Success)
        throw std::runtime_error("cz probe: Gram matrix not positive definite");
    Eigen::MatrixXd Kt = K.transpose();
    Eigen::MatrixXd W = llt.solve(adjoint ? Kt : K);
    Eigen::MatrixXd G = adjoint ? Eigen::MatrixXd(K * W) : Eigen::MatrixXd(Kt * W);
    G = 0.5 * (G + G.transpose()).eval();  // clean up factorization roundoff
    auto [lambda, vec] = generalized_symmetric_smallest_eig(G, adjoint ? M : H);
    if (mode) *mode = vec;
    return std::sqrt(std::max(lambda, 0.0));
}

CZReport discrete_cz_constant(const ProblemSpec& problem,
                              std::shared_ptr<const Mesh> mesh, double eps, bool adjoint,
                              int dense_ceiling, const AssemblyOptions& opts) {
    ElementKind kind = mesh->dimension == 1 ? ElementKind::Hermite3_1D
                                            : ElementKind::Argyris5_2D;
    DofMap dm = build_dof_map(mesh, kind, opts.boundary_scheme);
    std::vector<int> free = free_dofs(dm);
    if (static_cast<int>(free.size()) > dense_ceiling)
        throw std::invalid_argument("cz probe: " + std::to_string(free.size()) +
                                    " free DOFs exceed the dense ceiling of " +
                                    std::to_string(dense_ceiling));

    SparseSystem sys = assemble_operator(dm, problem, eps, opts);
    Eigen::MatrixXd K = dense_submatrix(sys.K, free);
    Eigen::MatrixXd M = dense_submatrix(assemble_gram(dm, GramKind::L2, 0.0, opts), free);
    Eigen::MatrixXd H = dense_submatrix(assemble_gram(dm, GramKind::H2, 0.0, opts), free);

    CZReport report;
    report.eps = eps;
    report.h = mesh->h;
    report.dof_count = static_cast<int>(free.size());
    report.adjoint = adjoint;
    report.c_h = cz_constant_from_matrices(K, M, H, adjoint, &report.mode);
    return report;
}

}  // namespace vmm
