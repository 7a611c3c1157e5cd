#include "vmm/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "vmm/table_io.hpp"

namespace vmm {

namespace {

struct RunConfig {
    std::string problem;
    std::string config_path;
    std::string out_path;
    std::string dump_path;
    std::string mesh_kind;

    double eps = 0.0;
    std::vector<double> eps_list;
    double eps_start = -1.0;
    int halvings = -1;
    double coupled_beta = -1.0;
    double cea_eps = -1.0;
    int levels = 3;

    int n = 16;
    int n_boundary = 24;
    int refine = 2;
    int grid = 101;
    int quad_degree = 0;
    int ellipticity_samples = 0;
    int dense_ceiling = 3000;
    unsigned long long seed = 0;
    bool expect_singular = false;
    bool adjoint = false;
    bool strict = false;
    std::string bc_scheme = "full";

    double a = 0.0, b = 1.0;
    double x0 = 0.0, x1 = 1.0, y0 = 0.0, y1 = 1.0;
    double radius = 1.0;
    std::vector<int> n_list;
};

ProblemSpec load_problem(const RunConfig& cfg) {
    if (!cfg.config_path.empty()) return load_problem_config(cfg.config_path);
    if (cfg.problem.empty())
        throw std::invalid_argument("need --problem NAME or --config PATH");
    return builtin_problem(cfg.problem);
}

std::shared_ptr<const Mesh> problem_mesh(const RunConfig& cfg, const Domain& domain,
                                         int level) {
    if (std::holds_alternative<DiskDomain>(domain))
        return build_domain_mesh(domain, cfg.refine + level, cfg.n_boundary);
    return build_domain_mesh(domain, cfg.n << level, cfg.n_boundary);
}

AssemblyOptions assembly_options(const RunConfig& cfg) {
    AssemblyOptions opts;
    opts.quadrature_degree = cfg.quad_degree;
    if (cfg.bc_scheme == "minimal")
        opts.boundary_scheme = BoundaryScheme::MinimalTrace;
    else if (cfg.bc_scheme != "full")
        throw std::invalid_argument("--bc must be 'full' or 'minimal'");
    return opts;
}

int do_solve(const RunConfig& cfg) {
    ProblemSpec problem = load_problem(cfg);
    auto mesh = problem_mesh(cfg, problem.domain, 0);
    SolutionField field = solve_vmm(problem, mesh, cfg.eps, assembly_options(cfg));
    if (field.report.singular && !cfg.expect_singular) {
        std::cerr << "solve: singular system (relative residual "
                  << field.report.rel_residual << ")\n";
        return 2;
    }
    write_field(field, problem.exact ? &*problem.exact : nullptr, cfg.grid, cfg.out_path);
    return 0;
}

int do_study(const RunConfig& cfg) {
    int forms = 0;
    if (!cfg.eps_list.empty()) ++forms;
    if (cfg.eps_start > 0.0) ++forms;
    if (cfg.coupled_beta > 0.0) ++forms;
    if (cfg.cea_eps >= 0.0) ++forms;
    if (forms != 1) {
        std::cerr << "study: give exactly one schedule form (--eps-list, "
                     "--eps-start/--halvings, --coupled-beta or --cea-eps)\n";
        return 1;
    }

    ProblemSpec problem = load_problem(cfg);
    Schedule schedule;
    std::vector<std::shared_ptr<const Mesh>> meshes;
    if (!cfg.eps_list.empty()) {
        schedule = Schedule::eps_schedule(cfg.eps_list);
        meshes.push_back(problem_mesh(cfg, problem.domain, 0));
    } else if (cfg.eps_start > 0.0) {
        std::vector<double> eps;
        int steps = cfg.halvings < 0 ? 3 : cfg.halvings;
        for (int i = 0; i <= steps; ++i)
            eps.push_back(cfg.eps_start * std::pow(0.5, i));
        schedule = Schedule::eps_schedule(std::move(eps));
        meshes.push_back(problem_mesh(cfg, problem.domain, 0));
    } else {
        schedule = cfg.coupled_beta > 0.0 ? Schedule::coupled(cfg.coupled_beta)
                                          : Schedule::cea(cfg.cea_eps);
        for (int l = 0; l < cfg.levels; ++l)
            meshes.push_back(problem_mesh(cfg, problem.domain, l));
    }

    ConvergenceTable table =
        convergence_study(problem, schedule, meshes, assembly_options(cfg));
    write_table(table, cfg.out_path);

    bool failed = false;
    for (const auto& r : table.rows) failed = failed || r.solve_failed;
    if (failed && !cfg.expect_singular) {
        std::cerr << "study: at least one solve reported a singular system\n";
        return 2;
    }
    return 0;
}

int do_diagnose(const RunConfig& cfg) {
    ProblemSpec problem = load_problem(cfg);

    if (cfg.ellipticity_samples > 0) {
        EllipticityProbe probe = ellipticity_probe(problem.A, problem.domain,
                                                   cfg.ellipticity_samples, cfg.seed);
        std::cout << "ellipticity: min " << format_double(probe.min_eigenvalue) << " max "
                  << format_double(probe.max_eigenvalue) << " argmin ("
                  << format_double(probe.argmin.x()) << ", "
                  << format_double(probe.argmin.y()) << ") failures "
                  << probe.samples_failed << "\n";
    }

    if (cfg.n_list.empty()) {
        if (cfg.ellipticity_samples > 0) return 0;
        std::cerr << "diagnose: nothing to do (give --n-list and/or --ellipticity)\n";
        return 1;
    }
    if (cfg.out_path.empty()) {
        std::cerr << "diagnose: --n-list needs --out\n";
        return 1;
    }

    std::vector<CZReport> reports;
    for (int n : cfg.n_list) {
        auto mesh = build_domain_mesh(problem.domain, n, cfg.n_boundary);
        double eps = cfg.cea_eps >= 0.0
                         ? cfg.cea_eps
                         : std::pow(mesh->h, cfg.coupled_beta > 0.0 ? cfg.coupled_beta : 2.0);
        reports.push_back(discrete_cz_constant(problem, mesh, eps, cfg.adjoint,
                                               cfg.dense_ceiling, assembly_options(cfg)));
    }
    write_cz_reports(reports, cfg.out_path);
    return 0;
}

int do_validate(const RunConfig& cfg) {
    std::shared_ptr<const Mesh> mesh;
    if (!cfg.problem.empty() || !cfg.config_path.empty()) {
        ProblemSpec problem = load_problem(cfg);
        mesh = problem_mesh(cfg, problem.domain, 0);
    } else if (cfg.mesh_kind == "interval") {
        mesh = std::make_shared<const Mesh>(build_interval_mesh(cfg.a, cfg.b, cfg.n));
    } else if (cfg.mesh_kind == "rectangle") {
        mesh = std::make_shared<const Mesh>(
            build_rectangle_mesh({cfg.x0, cfg.x1}, {cfg.y0, cfg.y1}, cfg.n));
    } else if (cfg.mesh_kind == "disk") {
        mesh = std::make_shared<const Mesh>(
            build_disk_mesh(cfg.radius, cfg.n_boundary, cfg.refine));
    } else {
        std::cerr << "validate: give --problem/--config or --mesh "
                     "interval|rectangle|disk\n";
        return 1;
    }

    ValidationReport report = validate_mesh(*mesh);
    std::cout << "cells " << mesh->cell_count() << " vertices " << mesh->vertices.size()
              << "\n";
    std::cout << "h " << format_double(report.h) << "\n";
    std::cout << "min_diameter " << format_double(report.min_diameter) << "\n";
    std::cout << "max_diameter " << format_double(report.max_diameter) << "\n";
    std::cout << "worst_shape_ratio " << format_double(report.worst_shape_ratio) << "\n";
    std::cout << "conforming " << (report.conforming ? "yes" : "no") << "\n";
    for (const auto& issue : report.issues) std::cout << "issue: " << issue << "\n";

    if (!cfg.dump_path.empty()) {
        std::ostringstream ss;
        dump_mesh(*mesh, ss);
        atomic_write(cfg.dump_path, ss.str());
    }
    return (cfg.strict && !report.conforming) ? 2 : 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"C1 finite element solver for elliptic PDEs in non-divergence form,\n"
                 "regularized by a small biharmonic term"};
    app.require_subcommand(1);
    RunConfig cfg;

    auto add_problem_opts = [&cfg](CLI::App* cmd) {
        cmd->add_option("--problem", cfg.problem, "built-in problem name");
        cmd->add_option("--config", cfg.config_path, "problem config file (JSON)");
        cmd->add_option("--n", cfg.n, "subdivisions per side (interval/rectangle)");
        cmd->add_option("--n-boundary", cfg.n_boundary, "disk: boundary polygon vertices");
        cmd->add_option("--refine", cfg.refine, "disk: uniform refinement level");
        cmd->add_option("--quad-degree", cfg.quad_degree, "quadrature exactness override");
        cmd->add_option("--seed", cfg.seed, "seed for sampling probes");
        cmd->add_option("--bc", cfg.bc_scheme,
                        "essential constraint scheme: full (all six vertex DOFs) or "
                        "minimal (trace data only)");
    };

    CLI::App* solve = app.add_subcommand("solve", "solve one problem and dump the field");
    add_problem_opts(solve);
    solve->add_option("--eps", cfg.eps, "biharmonic weight")->required();
    solve->add_option("--grid", cfg.grid, "field dump resolution per axis");
    solve->add_option("--out", cfg.out_path, "output CSV")->required();
    solve->add_flag("--expect-singular", cfg.expect_singular,
                    "treat a singular solve as expected");

    CLI::App* study = app.add_subcommand("study", "run a convergence study");
    add_problem_opts(study);
    study->add_option("--eps-list", cfg.eps_list, "eps values at fixed mesh")
        ->delimiter(',');
    study->add_option("--eps-start", cfg.eps_start, "first eps for a halving schedule");
    study->add_option("--halvings", cfg.halvings, "number of eps halvings");
    study->add_option("--coupled-beta", cfg.coupled_beta,
                      "couple eps = h^beta over refined meshes");
    study->add_option("--cea-eps", cfg.cea_eps, "fixed eps over refined meshes");
    study->add_option("--levels", cfg.levels, "number of mesh levels");
    study->add_option("--out", cfg.out_path, "output CSV")->required();
    study->add_flag("--expect-singular", cfg.expect_singular,
                    "singular rows are expected (recorded in the table)");

    CLI::App* diagnose = app.add_subcommand(
        "diagnose", "stability probes: discrete CZ constants, ellipticity scan");
    add_problem_opts(diagnose);
    diagnose->add_option("--n-list", cfg.n_list,
                         "mesh resolutions (refine levels for disk domains)")
        ->delimiter(',');
    diagnose->add_option("--coupled-beta", cfg.coupled_beta, "eps = h^beta (default 2)");
    diagnose->add_option("--eps", cfg.cea_eps, "fixed eps instead of coupling");
    diagnose->add_flag("--adjoint", cfg.adjoint, "probe the adjoint estimate");
    diagnose->add_option("--ceiling", cfg.dense_ceiling, "dense diagnostics DOF ceiling");
    diagnose->add_option("--ellipticity", cfg.ellipticity_samples,
                         "sample count for the ellipticity probe");
    diagnose->add_option("--out", cfg.out_path, "output CSV");

    CLI::App* validate = app.add_subcommand("validate", "build and validate a mesh");
    add_problem_opts(validate);
    validate->add_option("--mesh", cfg.mesh_kind, "interval|rectangle|disk");
    validate->add_option("--a", cfg.a, "interval start");
    validate->add_option("--b", cfg.b, "interval end");
    validate->add_option("--x0", cfg.x0);
    validate->add_option("--x1", cfg.x1);
    validate->add_option("--y0", cfg.y0);
    validate->add_option("--y1", cfg.y1);
    validate->add_option("--radius", cfg.radius, "disk radius");
    validate->add_option("--dump", cfg.dump_path, "write a plain-text mesh dump");
    validate->add_flag("--strict", cfg.strict, "exit 2 if the mesh is not conforming");

    std::vector<const char*> argv;
    argv.push_back("vmm");
    for (const auto& s : args) argv.push_back(s.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (solve->parsed()) return do_solve(cfg);
        if (study->parsed()) return do_study(cfg);
        if (diagnose->parsed()) return do_diagnose(cfg);
        return do_validate(cfg);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace vmm
