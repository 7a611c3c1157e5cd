#include <doctest.h>

#include <random>

#include "test_helpers.hpp"
#include "vmm/assembly.hpp"
#include "vmm/linalg.hpp"

using namespace vmm;
using vmm_test::rel_err;

namespace {

ProblemSpec interval_problem(double a, double b) {
    ProblemSpec ps;
    ps.dimension = 1;
    ps.domain = IntervalDomain{a, b};
    ps.A = [](const Vec2&) {
        Mat2 A = Mat2::Zero();
        A(0, 0) = 1.0;
        return A;
    };
    ps.f = [](const Vec2&, double) { return 0.0; };
    return ps;
}

Eigen::MatrixXd dense(const Eigen::SparseMatrix<double, Eigen::RowMajor>& A) {
    return Eigen::MatrixXd(A);
}

}  // namespace

TEST_CASE("bilinear form value against the symbolic oracle") {
    // u = x^2 (1-x)^2 on (0,1):
    //   integral of (u'')^2 = 4/5, integral of (u')^2 = 2/105 (by parts),
    // so eps (u'', u'') - (u'', u) = 0.8 eps + 2/105 exactly.
    auto mesh = build_interval_mesh(0.0, 1.0, 4);
    auto u = [](double x) { return x * x * (1 - x) * (1 - x); };
    auto upp = [](double x) { return 2.0 - 12.0 * x + 12.0 * x * x; };

    QuadratureRule rule = quadrature_rule(1, default_quadrature_degree(1));
    for (double eps : {0.0, 1.0, 0.37}) {
        double form = 0.0;
        for (std::size_t cell = 0; cell < mesh.cell_count(); ++cell) {
            CellQuadrature cq = map_quadrature(mesh, cell, rule);
            for (std::size_t q = 0; q < cq.points.size(); ++q) {
                double x = cq.points[q].x(), w = cq.weights[q];
                form += w * (eps * upp(x) * upp(x) - upp(x) * u(x));
            }
        }
        CHECK(rel_err(form, 0.8 * eps + 2.0 / 105.0) < 1e-13);
    }

    // matrix path at the C1 interpolant converges to the same value
    auto fine = std::make_shared<const Mesh>(build_interval_mesh(0.0, 1.0, 64));
    DofMap dm = build_dof_map(fine, ElementKind::Hermite3_1D);
    ProblemSpec ps = interval_problem(0.0, 1.0);
    auto up = [](double x) { return 2.0 * x - 6.0 * x * x + 4.0 * x * x * x; };
    Eigen::VectorXd c = interpolate(
        dm, [&](const Vec2& p) { return u(p.x()); },
        [&](const Vec2& p) { return Vec2(up(p.x()), 0.0); },
        [&](const Vec2& p) {
            Mat2 H = Mat2::Zero();
            H(0, 0) = upp(p.x());
            return H;
        });
    double eps = 0.5;
    SparseSystem sys = assemble_operator(dm, ps, eps);
    double got = c.dot(sys.K * c);
    CHECK(rel_err(got, 0.8 * eps + 2.0 / 105.0) < 1e-2);
}

TEST_CASE("operator is linear in eps and the eps block is the laplacian gram") {
    auto mesh = std::make_shared<const Mesh>(build_rectangle_mesh({0, 1}, {0, 1}, 2));
    DofMap dm = build_dof_map(mesh, ElementKind::Argyris5_2D);
    ProblemSpec ps = builtin_problem("quintic2d");

    Eigen::MatrixXd K0 = dense(assemble_operator(dm, ps, 0.0).K);
    Eigen::MatrixXd K1 = dense(assemble_operator(dm, ps, 1.0).K);
    Eigen::MatrixXd Ka = dense(assemble_operator(dm, ps, 0.3).K);
    Eigen::MatrixXd Kb = dense(assemble_operator(dm, ps, 0.1).K);

    Eigen::MatrixXd lap_block =
        dense(assemble_gram(dm, GramKind::Energy, 1.0)) -
        dense(assemble_gram(dm, GramKind::Energy, 0.0));

    double scale = K1.cwiseAbs().maxCoeff();
    CHECK(((K1 - K0) - lap_block).cwiseAbs().maxCoeff() < 1e-13 * scale);
    CHECK(((Ka - Kb) - 0.2 * lap_block).cwiseAbs().maxCoeff() < 1e-13 * scale);

    // the eps block is symmetric
    CHECK((lap_block - lap_block.transpose()).cwiseAbs().maxCoeff() <
          1e-12 * lap_block.cwiseAbs().maxCoeff());

    // Energy(0) gram equals the H1-seminorm gram
    Eigen::MatrixXd energy0 = dense(assemble_gram(dm, GramKind::Energy, 0.0));
    Eigen::MatrixXd semi =
        dense(assemble_gram(dm, GramKind::H1)) - dense(assemble_gram(dm, GramKind::L2));
    CHECK((energy0 - semi).cwiseAbs().maxCoeff() < 1e-13 * energy0.cwiseAbs().maxCoeff());
}

TEST_CASE("eps = 0 with identity coefficients is the negated laplacian pairing") {
    auto mesh = std::make_shared<const Mesh>(build_rectangle_mesh({0, 1}, {0, 1}, 2));
    DofMap dm = build_dof_map(mesh, ElementKind::Argyris5_2D);
    ProblemSpec ps;
    ps.dimension = 2;
    ps.domain = RectangleDomain{0, 1, 0, 1};
    ps.A = [](const Vec2&) { return Mat2(Mat2::Identity()); };
    ps.f = [](const Vec2&, double) { return 0.0; };

    Eigen::MatrixXd K0 = dense(assemble_operator(dm, ps, 0.0).K);

    // independent pairing (lap phi_j, phi_i) via direct quadrature
    QuadratureRule rule = quadrature_rule(2, default_quadrature_degree(2));
    Eigen::MatrixXd P = Eigen::MatrixXd::Zero(dm.total_dofs, dm.total_dofs);
    std::vector<BasisEval> basis(dm.dofs_per_cell);
    for (std::size_t cell = 0; cell < mesh->cell_count(); ++cell) {
        CellBasis cb(dm, cell);
        CellQuadrature cq = map_quadrature(*mesh, cell, rule);
        auto dofs = dm.cell_global(cell);
        for (std::size_t q = 0; q < cq.points.size(); ++q) {
            cb.eval(cq.points[q], basis);
            for (std::size_t i = 0; i < dofs.size(); ++i)
                for (std::size_t j = 0; j < dofs.size(); ++j)
                    P(dofs[i], dofs[j]) +=
                        cq.weights[q] * basis[j].laplacian * basis[i].value;
        }
    }
    CHECK((K0 + P).cwiseAbs().maxCoeff() < 1e-12 * P.cwiseAbs().maxCoeff());
}

TEST_CASE("load vector basics") {
    auto mesh = std::make_shared<const Mesh>(build_interval_mesh(0.0, 1.0, 8));
    DofMap dm = build_dof_map(mesh, ElementKind::Hermite3_1D);

    ProblemSpec zero = interval_problem(0.0, 1.0);
    Eigen::VectorXd F0 = assemble_load(dm, zero, 0.0);
    CHECK(F0.lpNorm<Eigen::Infinity>() == 0.0);

    ProblemSpec one = interval_problem(0.0, 1.0);
    one.f = [](const Vec2&, double) { return 1.0; };
    Eigen::VectorXd F1 = assemble_load(dm, one, 0.0);
    double value_sum = 0.0;
    for (int i = 0; i < F1.size(); i += 2) value_sum += F1[i];
    CHECK(rel_err(value_sum, 1.0) < 1e-13);  // (1, I_h 1) = 1 by the partition property
}

TEST_CASE("test1 source equals -A:D2u with a finite-difference hessian") {
    ProblemSpec t1 = builtin_problem("test1");
    std::mt19937 rng(41);
    std::uniform_real_distribution<double> uni(-1.9, 1.9);
    const double step = 1e-4;
    int checked = 0;
    while (checked < 50) {
        Vec2 p(uni(rng), uni(rng));
        if (std::abs(p.x()) < 0.05) continue;
        ++checked;
        auto u = [&](double x, double y) { return t1.exact->u(Vec2(x, y)); };
        double x = p.x(), y = p.y();
        Mat2 H;
        H(0, 0) = (u(x + step, y) - 2 * u(x, y) + u(x - step, y)) / (step * step);
        H(1, 1) = (u(x, y + step) - 2 * u(x, y) + u(x, y - step)) / (step * step);
        H(0, 1) = (u(x + step, y + step) - u(x + step, y - step) - u(x - step, y + step) +
                   u(x - step, y - step)) /
                  (4 * step * step);
        Mat2 A = t1.A(p);
        double want = -(A(0, 0) * H(0, 0) + 2 * A(0, 1) * H(0, 1) + A(1, 1) * H(1, 1));
        CHECK(rel_err(t1.f(p, 0.0), want) < 1e-4);
    }
}

TEST_CASE("coefficient evaluation failures carry the cell and point") {
    ProblemSpec bad;
    bad.dimension = 1;
    bad.domain = IntervalDomain{0.0, 1.0};
    ScalarField field = parse_scalar_field("sqrt(x - 0.5)");  // domain error left of 0.5
    bad.A = [field](const Vec2& p) {
        Mat2 A = Mat2::Zero();
        A(0, 0) = field(p);
        return A;
    };
    bad.f = [](const Vec2&, double) { return 0.0; };
    auto mesh = std::make_shared<const Mesh>(build_interval_mesh(0.0, 1.0, 4));
    DofMap dm = build_dof_map(mesh, ElementKind::Hermite3_1D);
    try {
        assemble_operator(dm, bad, 1e-3);
        FAIL("expected an assembly failure");
    } catch (const std::runtime_error& e) {
        std::string msg = e.what();
        CHECK(msg.find("cell 0") != std::string::npos);
        CHECK(msg.find("at point") != std::string::npos);
    }
}

TEST_CASE("gram matrices: normalization and positivity") {
    auto single = std::make_shared<const Mesh>(build_interval_mesh(0.0, 1.0, 1));
    DofMap dm1 = build_dof_map(single, ElementKind::Hermite3_1D);
    Eigen::VectorXd ones = interpolate(
        dm1, [](const Vec2&) { return 1.0; }, [](const Vec2&) { return Vec2(Vec2::Zero()); },
        [](const Vec2&) { return Mat2(Mat2::Zero()); });
    Eigen::MatrixXd M = dense(assemble_gram(dm1, GramKind::L2));
    CHECK(rel_err(ones.dot(M * ones), 1.0) < 1e-13);

    auto mesh = std::make_shared<const Mesh>(build_interval_mesh(0.0, 1.0, 4));
    DofMap dm = build_dof_map(mesh, ElementKind::Hermite3_1D);
    Eigen::MatrixXd H = dense(assemble_gram(dm, GramKind::H2));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(H);
    CHECK(eig.eigenvalues()(0) > 0.0);  // SPD including the constrained DOFs
    CHECK((H - H.transpose()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("boundary values and constraint application") {
    // sine1d: endpoint value DOFs pinned to zero, slopes left free
    ProblemSpec s = builtin_problem("sine1d");
    auto mesh = std::make_shared<const Mesh>(build_interval_mesh(0.0, 1.0, 4));
    DofMap dm = build_dof_map(mesh, ElementKind::Hermite3_1D);
    auto bv = boundary_values(dm, s);
    REQUIRE(bv.size() == 2);
    CHECK(bv[0].first == 0);
    CHECK(std::abs(bv[0].second) < 1e-14);
    CHECK(bv[1].first == 8);
    CHECK(std::abs(bv[1].second) < 1e-13);

    // test1 at the boundary vertex (2, 0)
    ProblemSpec t1 = builtin_problem("test1");
    auto rect = std::make_shared<const Mesh>(build_rectangle_mesh({-2, 2}, {-2, 2}, 4));
    DofMap dm2 = build_dof_map(rect, ElementKind::Argyris5_2D);
    int vertex = -1;
    for (std::size_t v = 0; v < rect->vertices.size(); ++v)
        if ((rect->vertices[v] - Vec2(2.0, 0.0)).norm() < 1e-12) vertex = static_cast<int>(v);
    REQUIRE(vertex >= 0);
    auto bv2 = boundary_values(dm2, t1);
    auto value_of = [&](int dof) {
        for (const auto& [d, v] : bv2)
            if (d == dof) return v;
        FAIL("dof not constrained: ", dof);
        return 0.0;
    };
    CHECK(value_of(6 * vertex + 0) == doctest::Approx(4.0 / 3.0).epsilon(1e-13));
    CHECK(value_of(6 * vertex + 1) == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(value_of(6 * vertex + 2) == doctest::Approx(0.0));
    CHECK(value_of(6 * vertex + 3) == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(value_of(6 * vertex + 4) == doctest::Approx(0.0));
    CHECK(value_of(6 * vertex + 5) == doctest::Approx(-4.0 / 3.0).epsilon(1e-13));

    // homogeneous data: load vector untouched on free rows
    ProblemSpec hom = interval_problem(0.0, 1.0);
    hom.f = [](const Vec2& p, double) { return p.x(); };
    SparseSystem sys = assemble_operator(dm, hom, 1e-3);
    sys.F = assemble_load(dm, hom, 1e-3);
    Eigen::VectorXd F_before = sys.F;
    SparseSystem done = apply_boundary_conditions(std::move(sys), dm, hom);
    for (int d : free_dofs(dm)) CHECK(done.F[d] == F_before[d]);
    for (const auto& [d, v] : done.constraints) {
        CHECK(v == 0.0);
        CHECK(done.F[d] == 0.0);
    }

    // constrained rows become identity rows
    Eigen::MatrixXd Kd = dense(done.K);
    for (const auto& [d, v] : done.constraints) {
        CHECK(Kd.row(d).cwiseAbs().sum() == 1.0);
        CHECK(Kd(d, d) == 1.0);
    }
}

TEST_CASE("galerkin patch consistency for a constant-coefficient quintic") {
    ProblemSpec ps = builtin_problem("quintic2d");
    auto mesh = std::make_shared<const Mesh>(build_rectangle_mesh({0, 1}, {0, 1}, 2));
    DofMap dm = build_dof_map(mesh, ElementKind::Argyris5_2D);
    const double eps = 1e-2;

    SparseSystem sys = assemble_operator(dm, ps, eps);
    sys.F = assemble_load(dm, ps, eps);
    sys = apply_boundary_conditions(std::move(sys), dm, ps);

    Eigen::VectorXd c = interpolate(dm, ps.exact->u, ps.exact->grad, ps.exact->hess);
    Eigen::VectorXd resid = sys.K * c - sys.F;
    double fscale = sys.F.lpNorm<Eigen::Infinity>();
    CHECK(resid.lpNorm<Eigen::Infinity>() < 1e-9 * fscale);
}

TEST_CASE("deterministic reassembly is bitwise identical") {
    ProblemSpec t1 = builtin_problem("test1");
    auto mesh = std::make_shared<const Mesh>(build_rectangle_mesh({-2, 2}, {-2, 2}, 3));
    DofMap dm = build_dof_map(mesh, ElementKind::Argyris5_2D);
    SparseSystem a = assemble_operator(dm, t1, 1e-3);
    SparseSystem b = assemble_operator(dm, t1, 1e-3);
    REQUIRE(a.K.nonZeros() == b.K.nonZeros());
    CHECK(std::memcmp(a.K.valuePtr(), b.K.valuePtr(), sizeof(double) * a.K.nonZeros()) ==
          0);
    Eigen::VectorXd Fa = assemble_load(dm, t1, 1e-3);
    Eigen::VectorXd Fb = assemble_load(dm, t1, 1e-3);
    CHECK(std::memcmp(Fa.data(), Fb.data(), sizeof(double) * Fa.size()) == 0);
}

TEST_CASE("linear solver on small systems") {
    SparseSystem id;
    id.K.resize(3, 3);
    id.K.setIdentity();
    id.F = Eigen::VectorXd::Zero(3);
    id.F[0] = 1.0;
    auto [x1, r1] = solve_linear(id);
    CHECK(!r1.singular);
    CHECK(x1[0] == doctest::Approx(1.0));
    CHECK(r1.rel_residual == 0.0);

    SparseSystem swap;
    swap.K.resize(2, 2);
    std::vector<Eigen::Triplet<double>> trips = {{0, 1, 1.0}, {1, 0, 1.0}};
    swap.K.setFromTriplets(trips.begin(), trips.end());
    swap.F = Eigen::VectorXd(2);
    swap.F << 1.0, 2.0;
    auto [x2, r2] = solve_linear(swap);
    CHECK(!r2.singular);
    CHECK(x2[0] == doctest::Approx(2.0));
    CHECK(x2[1] == doctest::Approx(1.0));

    SparseSystem sing;
    sing.K.resize(2, 2);
    std::vector<Eigen::Triplet<double>> t2 = {{0, 0, 1.0}};
    sing.K.setFromTriplets(t2.begin(), t2.end());
    sing.F = Eigen::VectorXd::Ones(2);
    auto [x3, r3] = solve_linear(sing);
    CHECK(r3.singular);
}

TEST_CASE("solver residual contract on an assembled system") {
    ProblemSpec s = builtin_problem("sine1d");
    auto mesh = std::make_shared<const Mesh>(build_interval_mesh(0.0, 1.0, 64));
    DofMap dm = build_dof_map(mesh, ElementKind::Hermite3_1D);
    SparseSystem sys = assemble_operator(dm, s, 1e-4);
    sys.F = assemble_load(dm, s, 1e-4);
    sys = apply_boundary_conditions(std::move(sys), dm, s);
    auto [x, report] = solve_linear(sys);
    CHECK(!report.singular);
    CHECK(report.rel_residual <= 1e-10);
    CHECK(report.growth_estimate >= 0.0);
    CHECK(std::isfinite(report.growth_estimate));
}

namespace {

// independent shifted-inverse-iteration oracle for the smallest generalized pair
double inverse_iteration_smallest(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
    double shift = 1e-6 * A.norm() / B.norm();
    Eigen::LDLT<Eigen::MatrixXd> fac(A + shift * B);
    Eigen::VectorXd x = Eigen::VectorXd::Ones(A.rows()).normalized();
    for (int it = 0; it < 1000; ++it) x = fac.solve(B * x).normalized();
    return x.dot(A * x) / x.dot(B * x);
}

}  // namespace

TEST_CASE("generalized symmetric eigensolver") {
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(2, 2);
    A(0, 0) = 1.0;
    A(1, 1) = 2.0;
    Eigen::MatrixXd B = Eigen::MatrixXd::Identity(2, 2);
    auto [l1, v1] = generalized_symmetric_smallest_eig(A, B);
    CHECK(l1 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(v1[0]) / v1.norm() == doctest::Approx(1.0).epsilon(1e-10));

    std::mt19937 rng(8);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    Eigen::MatrixXd R(20, 20);
    for (int i = 0; i < 20; ++i)
        for (int j = 0; j < 20; ++j) R(i, j) = uni(rng);
    Eigen::MatrixXd spd = R.transpose() * R + 20.0 * Eigen::MatrixXd::Identity(20, 20);
    auto [l2, v2] = generalized_symmetric_smallest_eig(spd, spd);
    CHECK(l2 == doctest::Approx(1.0).epsilon(1e-10));

    Eigen::MatrixXd R2(20, 20);
    for (int i = 0; i < 20; ++i)
        for (int j = 0; j < 20; ++j) R2(i, j) = uni(rng);
    Eigen::MatrixXd Bpd = R2.transpose() * R2 + 5.0 * Eigen::MatrixXd::Identity(20, 20);
    Eigen::MatrixXd Apsd = R.transpose() * R;
    auto [l3, v3] = generalized_symmetric_smallest_eig(Apsd, Bpd);
    CHECK(l3 >= -1e-10);
    CHECK(rel_err(l3, inverse_iteration_smallest(Apsd, Bpd)) < 1e-8);

    Eigen::MatrixXd notpd = -Eigen::MatrixXd::Identity(4, 4);
    CHECK_THROWS_AS(generalized_symmetric_smallest_eig(Eigen::MatrixXd::Identity(4, 4), notpd),
                    std::invalid_argument);
}

TEST_CASE("generalized eigenvalue is congruence invariant") {
    std::mt19937 rng(13);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    const int n = 30;
    Eigen::MatrixXd R(n, n), R2(n, n), E(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            R(i, j) = uni(rng);
            R2(i, j) = uni(rng);
            E(i, j) = uni(rng);
        }
    Eigen::MatrixXd A = R.transpose() * R;
    Eigen::MatrixXd B = R2.transpose() * R2 + static_cast<double>(n) *
                                                  Eigen::MatrixXd::Identity(n, n);
    Eigen::MatrixXd S = Eigen::MatrixXd::Identity(n, n) + 0.1 * E;  // well conditioned

    auto [l0, v0] = generalized_symmetric_smallest_eig(A, B);
    Eigen::MatrixXd As = S.transpose() * A * S;
    Eigen::MatrixXd Bs = S.transpose() * B * S;
    As = 0.5 * (As + As.transpose()).eval();
    Bs = 0.5 * (Bs + Bs.transpose()).eval();
    auto [l1, v1] = generalized_symmetric_smallest_eig(As, Bs);
    CHECK(rel_err(l1, l0) < 1e-8);
}
