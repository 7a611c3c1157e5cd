#ifndef VMM_STUDY_HPP
#define VMM_STUDY_HPP

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "vmm/assembly.hpp"
#include "vmm/linalg.hpp"

namespace vmm {

/// A solved coefficient vector tied to its mesh and DOF map.
struct SolutionField {
    std::shared_ptr<const Mesh> mesh;
    std::shared_ptr<const DofMap> dofmap;
    Eigen::VectorXd coeffs;
    double eps = 0.0;
    SolveReport report;

    /// u_h and its derivatives at a point of the given cell.
    BasisEval eval_in_cell(std::size_t cell, const Vec2& p) const;
    /// Cell containing p, if any (1e-10 barycentric slack).
    std::optional<std::size_t> locate(const Vec2& p) const;
    std::optional<BasisEval> try_eval(const Vec2& p) const;
};

/// Assemble, constrain and solve the perturbed problem. eps = 0 is allowed;
/// solver failures land in the report rather than throwing.
SolutionField solve_vmm(const ProblemSpec& problem, std::shared_ptr<const Mesh> mesh,
                        double eps, const AssemblyOptions& opts = {});

struct ErrorNorms {
    double l2 = 0.0;
    double h1_seminorm = 0.0;
    double lap = 0.0;  // broken (cellwise) laplacian error
};
ErrorNorms error_norms(const SolutionField& field, const ExactBundle& exact,
                       const AssemblyOptions& opts = {});

struct Schedule {
    enum class Kind {
        EpsList,      // vary eps on one fixed mesh; orders vs eps
        CoupledBeta,  // eps = h^beta over a mesh sequence; orders vs h
        CeaFixedEps   // fixed eps over a mesh sequence; orders vs h
    };
    Kind kind = Kind::EpsList;
    std::vector<double> eps_list;
    double beta = 2.0;
    double eps_fixed = 0.0;

    static Schedule eps_schedule(std::vector<double> eps);
    static Schedule coupled(double beta);
    static Schedule cea(double eps);
};

struct ConvergenceRow {
    double eps = 0.0;
    double h = 0.0;
    double l2_err = 0.0, h1_err = 0.0, lap_err = 0.0;
    std::optional<double> l2_order, h1_order, lap_order;
    bool solve_failed = false;
    double h2_over_f = 0.0;  // ||u_h||_H2 / ||f||_L2 stability monitor
};

struct ConvergenceTable {
    std::string schedule;
    std::vector<ConvergenceRow> rows;
};

/// order = log(e_prev / e_curr) / log(p_prev / p_curr)
double convergence_order(double e_prev, double e_curr, double p_prev, double p_curr);

/// Runs the schedule; EpsList expects exactly one mesh, the other kinds one
/// mesh per level. Solve failures are recorded per row, not fatal. Rows are
/// computed in parallel when the VMM_THREADS environment variable asks for it.
ConvergenceTable convergence_study(const ProblemSpec& problem, const Schedule& schedule,
                                   const std::vector<std::shared_ptr<const Mesh>>& meshes,
                                   const AssemblyOptions& opts = {});

/// Mesh for a problem domain at resolution n (subdivisions per side for
/// interval/rectangle, refinement level for the disk).
std::shared_ptr<const Mesh> build_domain_mesh(const Domain& domain, int n,
                                              int disk_n_boundary = 24);

}  // namespace vmm

#endif
