#include "vmm/study.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <thread>

namespace vmm {

BasisEval SolutionField::eval_in_cell(std::size_t cell, const Vec2& p) const {
    CellBasis cb(*dofmap, cell);
    std::vector<BasisEval> basis(dofmap->dofs_per_cell);
    cb.eval(p, basis);
    auto dofs = dofmap->cell_global(cell);
    BasisEval out;
    for (std::size_t i = 0; i < dofs.size(); ++i) {
        double c = coeffs[dofs[i]];
        out.value += c * basis[i].value;
        out.grad += c * basis[i].grad;
        out.hess += c * basis[i].hess;
        out.laplacian += c * basis[i].laplacian;
    }
    return out;
}

std::optional<std::size_t> SolutionField::locate(const Vec2& p) const {
    const Mesh& m = *mesh;
    if (m.dimension == 1) {
        double a = m.vertices.front().x(), b = m.vertices.back().x();
        double tol = 1e-12 * (b - a);
        if (p.x() < a - tol || p.x() > b + tol) return std::nullopt;
        std::size_t lo = 0, hi = m.segments.size();
        while (lo + 1 < hi) {
            std::size_t mid = (lo + hi) / 2;
            if (p.x() < m.vertices[m.segments[mid][0]].x())
                hi = mid;
            else
                lo = mid;
        }
        return lo;
    }
    for (std::size_t c = 0; c < m.triangles.size(); ++c) {
        const auto& t = m.triangles[c];
        const Vec2& v0 = m.vertices[t[0]];
        Vec2 e1 = m.vertices[t[1]] - v0;
        Vec2 e2 = m.vertices[t[2]] - v0;
        Vec2 d = p - v0;
        double det = e1.x() * e2.y() - e1.y() * e2.x();
        double l1 = (d.x() * e2.y() - d.y() * e2.x()) / det;
        double l2 = (e1.x() * d.y() - e1.y() * d.x()) / det;
        if (l1 >= -1e-10 && l2 >= -1e-10 && l1 + l2 <= 1.0 + 1e-10) return c;
    }
    return std::nullopt;
}

std::optional<BasisEval> SolutionField::try_eval(const Vec2& p) const {
    auto cell = locate(p);
    if (!cell) return std::nullopt;
    return eval_in_cell(*cell, p);
}

SolutionField solve_vmm(const ProblemSpec& problem, std::shared_ptr<const Mesh> mesh,
                        double eps, const AssemblyOptions& opts) {
    if (eps < 0.0) throw std::invalid_argument("solve: eps must be >= 0");
    ElementKind kind = mesh->dimension == 1 ? ElementKind::Hermite3_1D
                                            : ElementKind::Argyris5_2D;
    auto dofmap = std::make_shared<DofMap>(build_dof_map(mesh, kind, opts.boundary_scheme));

    SparseSystem sys = assemble_operator(*dofmap, problem, eps, opts);
    sys.F = assemble_load(*dofmap, problem, eps, opts);
    sys = apply_boundary_conditions(std::move(sys), *dofmap, problem);

    auto [x, report] = solve_linear(sys);

    SolutionField field;
    field.mesh = std::move(mesh);
    field.dofmap = std::move(dofmap);
    field.coeffs = std::move(x);
    field.eps = eps;
    field.report = report;
    return field;
}

ErrorNorms error_norms(const SolutionField& field, const ExactBundle& exact,
                       const AssemblyOptions& opts) {
    const DofMap& dm = *field.dofmap;
    const Mesh& mesh = *field.mesh;
    int degree = opts.quadrature_degree > 0 ? opts.quadrature_degree
                                            : default_quadrature_degree(mesh.dimension);
    QuadratureRule rule = quadrature_rule(mesh.dimension, degree);

    double l2 = 0.0, h1 = 0.0, lap = 0.0;
    std::vector<BasisEval> basis(dm.dofs_per_cell);
    for (std::size_t cell = 0; cell < mesh.cell_count(); ++cell) {
        CellBasis cb(dm, cell);
        CellQuadrature cq = map_quadrature(mesh, cell, rule);
        auto dofs = dm.cell_global(cell);
        for (std::size_t q = 0; q < cq.points.size(); ++q) {
            cb.eval(cq.points[q], basis);
            double uh = 0.0, lh = 0.0;
            Vec2 gh = Vec2::Zero();
            for (std::size_t i = 0; i < dofs.size(); ++i) {
                double c = field.coeffs[dofs[i]];
                uh += c * basis[i].value;
                gh += c * basis[i].grad;
                lh += c * basis[i].laplacian;
            }
            const Vec2& p = cq.points[q];
            double w = cq.weights[q];
            double de = uh - exact.u(p);
            Vec2 dg = gh - exact.grad(p);
            double dl = lh - exact.lap(p);
            l2 += w * de * de;
            h1 += w * dg.squaredNorm();
            lap += w * dl * dl;
        }
    }
    return {std::sqrt(l2), std::sqrt(h1), std::sqrt(lap)};
}

Schedule Schedule::eps_schedule(std::vector<double> eps) {
    Schedule s;
    s.kind = Kind::EpsList;
    s.eps_list = std::move(eps);
    return s;
}
Schedule Schedule::coupled(double beta) {
    Schedule s;
    s.kind = Kind::CoupledBeta;
    s.beta = beta;
    return s;
}
Schedule Schedule::cea(double eps) {
    Schedule s;
    s.kind = Kind::CeaFixedEps;
    s.eps_fixed = eps;
    return s;
}

double convergence_order(double e_prev, double e_curr, double p_prev, double p_curr) {
    return std::log(e_prev / e_curr) / std::log(p_prev / p_curr);
}

namespace {

int requested_threads() {
    const char* env = std::getenv("VMM_THREADS");
    if (!env) return 1;
    int n = std::atoi(env);
    return n > 0 ? n : 1;
}

double l2_norm_of_source(const ProblemSpec& problem, const Mesh& mesh, double eps,
                         const AssemblyOptions& opts) {
    int degree = opts.quadrature_degree > 0 ? opts.quadrature_degree
                                            : default_quadrature_degree(mesh.dimension);
    QuadratureRule rule = quadrature_rule(mesh.dimension, degree);
    double acc = 0.0;
    for (std::size_t cell = 0; cell < mesh.cell_count(); ++cell) {
        CellQuadrature cq = map_quadrature(mesh, cell, rule);
        for (std::size_t q = 0; q < cq.points.size(); ++q) {
            double f = problem.f(cq.points[q], eps);
            acc += cq.weights[q] * f * f;
        }
    }
    return std::sqrt(acc);
}

}  // namespace

ConvergenceTable convergence_study(const ProblemSpec& problem, const Schedule& schedule,
                                   const std::vector<std::shared_ptr<const Mesh>>& meshes,
                                   const AssemblyOptions& opts) {
    if (!problem.exact)
        throw std::invalid_argument("study: problem has no exact solution to compare with");

    struct Job {
        double eps;
        std::shared_ptr<const Mesh> mesh;
    };
    std::vector<Job> jobs;
    ConvergenceTable table;

    switch (schedule.kind) {
        case Schedule::Kind::EpsList:
            if (meshes.size() != 1)
                throw std::invalid_argument("study: eps schedule expects one fixed mesh");
            for (double e : schedule.eps_list) jobs.push_back({e, meshes.front()});
            table.schedule = "eps schedule at fixed h";
            break;
        case Schedule::Kind::CoupledBeta:
            for (const auto& m : meshes)
                jobs.push_back({std::pow(m->h, schedule.beta), m});
            table.schedule = "coupled eps = h^" + std::to_string(schedule.beta);
            break;
        case Schedule::Kind::CeaFixedEps:
            for (const auto& m : meshes) jobs.push_back({schedule.eps_fixed, m});
            table.schedule = "h refinement at fixed eps";
            break;
    }
    if (jobs.size() < 2) throw std::invalid_argument("study: need at least 2 schedule points");

    table.rows.resize(jobs.size());
    auto run_job = [&](std::size_t i) {
        const Job& job = jobs[i];
        ConvergenceRow& row = table.rows[i];
        row.eps = job.eps;
        row.h = job.mesh->h;
        SolutionField field = solve_vmm(problem, job.mesh, job.eps, opts);
        row.solve_failed = field.report.singular;
        if (!field.coeffs.allFinite()) {
            row.l2_err = row.h1_err = row.lap_err =
                std::numeric_limits<double>::infinity();
            return;
        }
        ErrorNorms errs = error_norms(field, *problem.exact, opts);
        row.l2_err = errs.l2;
        row.h1_err = errs.h1_seminorm;
        row.lap_err = errs.lap;

        auto H = assemble_gram(*field.dofmap, GramKind::H2, 0.0, opts);
        double h2 = std::sqrt(field.coeffs.dot(H * field.coeffs));
        double fl2 = l2_norm_of_source(problem, *job.mesh, job.eps, opts);
        row.h2_over_f = fl2 > 0.0 ? h2 / fl2 : 0.0;
    };

    int nthreads = std::min<std::size_t>(requested_threads(), jobs.size());
    if (nthreads <= 1) {
        for (std::size_t i = 0; i < jobs.size(); ++i) run_job(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (int t = 0; t < nthreads; ++t)
            pool.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < jobs.size();
                     i = next.fetch_add(1))
                    run_job(i);
            });
        for (auto& th : pool) th.join();
    }

    for (std::size_t i = 1; i < table.rows.size(); ++i) {
        const ConvergenceRow& prev = table.rows[i - 1];
        ConvergenceRow& cur = table.rows[i];
        double p_prev = schedule.kind == Schedule::Kind::EpsList ? prev.eps : prev.h;
        double p_cur = schedule.kind == Schedule::Kind::EpsList ? cur.eps : cur.h;
        if (prev.solve_failed || cur.solve_failed) continue;
        if (!(p_prev > 0.0) || !(p_cur > 0.0) || p_prev == p_cur) continue;
        auto order = [&](double ep, double ec) -> std::optional<double> {
            if (!std::isfinite(ep) || !std::isfinite(ec) || ep <= 0.0 || ec <= 0.0)
                return std::nullopt;
            return convergence_order(ep, ec, p_prev, p_cur);
        };
        cur.l2_order = order(prev.l2_err, cur.l2_err);
        cur.h1_order = order(prev.h1_err, cur.h1_err);
        cur.lap_order = order(prev.lap_err, cur.lap_err);
    }
    return table;
}

std::shared_ptr<const Mesh> build_domain_mesh(const Domain& domain, int n,
                                              int disk_n_boundary) {
    if (const auto* iv = std::get_if<IntervalDomain>(&domain))
        return std::make_shared<const Mesh>(build_interval_mesh(iv->a, iv->b, n));
    if (const auto* rc = std::get_if<RectangleDomain>(&domain))
        return std::make_shared<const Mesh>(
            build_rectangle_mesh({rc->x0, rc->x1}, {rc->y0, rc->y1}, n));
    const auto& dk = std::get<DiskDomain>(domain);
    return std::make_shared<const Mesh>(build_disk_mesh(dk.radius, disk_n_boundary, n));
}

}  // namespace vmm
