#include "vmm/problems.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace vmm {

namespace {

double sgn(double t) { return t > 0.0 ? 1.0 : (t < 0.0 ? -1.0 : 0.0); }

/// Coefficient matrix shared by tests 1-3: continuous and positive definite
/// on the test domains, with the odd cube root taken as the real branch.
Mat2 kinked_coefficient(const Vec2& p) {
    double x = p.x(), y = p.y();
    Mat2 A;
    A(0, 0) = sgnpow(2.0 * x - y, 1.0 / 3.0) + 4.0 * std::exp(2.0 - x);
    A(0, 1) = 0.5 * std::sin(10.0 * x * y) - 0.5 * std::sqrt(x + 2.0);
    A(1, 0) = A(0, 1);
    A(1, 1) = std::pow(std::abs(y - 2.0 * x), 0.25) + 3.0;
    return A;
}

/// f = -A:D2u + b.grad u + c u + eps * biharmonic, from closed forms.
SourceField manufactured_source(MatrixField A, ExactBundle bundle,
                                ScalarField biharmonic = nullptr,
                                VectorField b = nullptr, ScalarField c = nullptr) {
    return [=](const Vec2& p, double eps) {
        Mat2 a = A(p);
        Mat2 H = bundle.hess(p);
        double v = -(a(0, 0) * H(0, 0) + 2.0 * a(0, 1) * H(0, 1) + a(1, 1) * H(1, 1));
        if (b) v += b(p).dot(bundle.grad(p));
        if (c) v += c(p) * bundle.u(p);
        if (biharmonic && eps != 0.0) v += eps * biharmonic(p);
        return v;
    };
}

ProblemSpec make_test1() {
    ProblemSpec ps;
    ps.name = "test1";
    ps.dimension = 2;
    ps.domain = RectangleDomain{-2.0, 2.0, -2.0, 2.0};
    ps.A = kinked_coefficient;
    ExactBundle eb;
    eb.smoothness = "H3";
    eb.u = [](const Vec2& p) {
        double ax = std::abs(p.x());
        return ax * ax * ax * std::cos(p.y()) / 6.0;
    };
    eb.grad = [](const Vec2& p) {
        double x = p.x(), y = p.y();
        double ax = std::abs(x);
        return Vec2(x * ax * std::cos(y) / 2.0, -ax * ax * ax * std::sin(y) / 6.0);
    };
    eb.hess = [](const Vec2& p) {
        double x = p.x(), y = p.y();
        double ax = std::abs(x);
        Mat2 H;
        H(0, 0) = ax * std::cos(y);
        H(0, 1) = -x * ax * std::sin(y) / 2.0;
        H(1, 0) = H(0, 1);
        H(1, 1) = -ax * ax * ax * std::cos(y) / 6.0;
        return H;
    };
    eb.lap = [](const Vec2& p) {
        double ax = std::abs(p.x());
        return ax * std::cos(p.y()) - ax * ax * ax * std::cos(p.y()) / 6.0;
    };
    ps.exact = eb;
    ps.f = manufactured_source(ps.A, eb);
    return ps;
}

ProblemSpec make_test2() {
    ProblemSpec ps;
    ps.name = "test2";
    ps.dimension = 2;
    ps.domain = RectangleDomain{-2.0, 2.0, -2.0, 2.0};
    ps.A = kinked_coefficient;
    ExactBundle eb;
    eb.smoothness = "H2";
    eb.u = [](const Vec2& p) {
        return 0.5 * p.x() * std::abs(p.x()) * std::cos(p.y());
    };
    eb.grad = [](const Vec2& p) {
        double x = p.x(), y = p.y();
        return Vec2(std::abs(x) * std::cos(y), -0.5 * x * std::abs(x) * std::sin(y));
    };
    eb.hess = [](const Vec2& p) {
        double x = p.x(), y = p.y();
        Mat2 H;
        H(0, 0) = sgn(x) * std::cos(y);
        H(0, 1) = -std::abs(x) * std::sin(y);
        H(1, 0) = H(0, 1);
        H(1, 1) = -0.5 * x * std::abs(x) * std::cos(y);
        return H;
    };
    eb.lap = [](const Vec2& p) {
        double x = p.x(), y = p.y();
        return sgn(x) * std::cos(y) - 0.5 * x * std::abs(x) * std::cos(y);
    };
    ps.exact = eb;
    ps.f = manufactured_source(ps.A, eb);
    return ps;
}

ProblemSpec make_test3() {
    ProblemSpec ps;
    ps.name = "test3";
    ps.dimension = 2;
    ps.domain = DiskDomain{2.0};
    ps.A = kinked_coefficient;
    ExactBundle eb;
    eb.smoothness = "H2";
    // (x-y)^{8/3} with the real cube root, i.e. |x-y|^{8/3}.
    eb.u = [](const Vec2& p) {
        return std::pow(std::abs(p.x() - p.y()), 8.0 / 3.0);
    };
    eb.grad = [](const Vec2& p) {
        double us = (8.0 / 3.0) * sgnpow(p.x() - p.y(), 5.0 / 3.0);
        return Vec2(us, -us);
    };
    eb.hess = [](const Vec2& p) {
        double uss = (40.0 / 9.0) * std::pow(std::abs(p.x() - p.y()), 2.0 / 3.0);
        Mat2 H;
        H(0, 0) = uss;
        H(0, 1) = -uss;
        H(1, 0) = -uss;
        H(1, 1) = uss;
        return H;
    };
    eb.lap = [](const Vec2& p) {
        return (80.0 / 9.0) * std::pow(std::abs(p.x() - p.y()), 2.0 / 3.0);
    };
    ps.exact = eb;
    ps.f = manufactured_source(ps.A, eb);
    return ps;
}

ProblemSpec make_test4() {
    ProblemSpec ps;
    ps.name = "test4";
    ps.dimension = 2;
    ps.domain = RectangleDomain{-2.0, 2.0, -2.0, 2.0};
    // Degenerate coefficient: A = (16/9) v v^T with v = (x^{1/3}, -y^{1/3}),
    // so the ellipticity constant is identically zero.
    ps.A = [](const Vec2& p) {
        double cx = sgnpow(p.x(), 1.0 / 3.0);
        double cy = sgnpow(p.y(), 1.0 / 3.0);
        Mat2 A;
        A(0, 0) = (16.0 / 9.0) * cx * cx;
        A(0, 1) = -(16.0 / 9.0) * cx * cy;
        A(1, 0) = A(0, 1);
        A(1, 1) = (16.0 / 9.0) * cy * cy;
        return A;
    };
    ExactBundle eb;
    eb.smoothness = "H1";
    eb.u = [](const Vec2& p) {
        return sgnpow(p.x(), 4.0 / 3.0) - sgnpow(p.y(), 4.0 / 3.0);
    };
    eb.grad = [](const Vec2& p) {
        return Vec2((4.0 / 3.0) * std::pow(std::abs(p.x()), 1.0 / 3.0),
                    -(4.0 / 3.0) * std::pow(std::abs(p.y()), 1.0 / 3.0));
    };
    eb.hess = [](const Vec2& p) {
        Mat2 H = Mat2::Zero();
        H(0, 0) = (4.0 / 9.0) * sgnpow(p.x(), -2.0 / 3.0);
        H(1, 1) = -(4.0 / 9.0) * sgnpow(p.y(), -2.0 / 3.0);
        return H;
    };
    eb.lap = [](const Vec2& p) {
        return (4.0 / 9.0) * (sgnpow(p.x(), -2.0 / 3.0) - sgnpow(p.y(), -2.0 / 3.0));
    };
    ps.exact = eb;
    // A:D2u collapses to (64/81)(sgn x - sgn y); kept closed-form so the
    // source stays bounded where the Hessian blows up.
    ps.f = [](const Vec2& p, double) {
        return (64.0 / 81.0) * (sgn(p.y()) - sgn(p.x()));
    };
    return ps;
}

ProblemSpec make_sine1d() {
    ProblemSpec ps;
    ps.name = "sine1d";
    ps.dimension = 1;
    ps.domain = IntervalDomain{0.0, 1.0};
    ps.A = [](const Vec2&) {
        Mat2 A = Mat2::Zero();
        A(0, 0) = 1.0;
        return A;
    };
    ps.lambda_lower = 1.0;
    const double pi = M_PI;
    ExactBundle eb;
    eb.smoothness = "smooth";
    eb.u = [pi](const Vec2& p) { return std::sin(pi * p.x()); };
    eb.grad = [pi](const Vec2& p) { return Vec2(pi * std::cos(pi * p.x()), 0.0); };
    eb.hess = [pi](const Vec2& p) {
        Mat2 H = Mat2::Zero();
        H(0, 0) = -pi * pi * std::sin(pi * p.x());
        return H;
    };
    eb.lap = [pi](const Vec2& p) { return -pi * pi * std::sin(pi * p.x()); };
    ps.exact = eb;
    // sin(pi x) is an eigenfunction of both blocks, so with this source the
    // perturbed problem is solved exactly by u for every eps (both boundary
    // conditions hold since u'' vanishes at the endpoints).
    ps.f = [pi](const Vec2& p, double eps) {
        return (pi * pi + eps * pi * pi * pi * pi) * std::sin(pi * p.x());
    };
    return ps;
}

const Mat2 kConstA = (Mat2() << 2.0, 0.5, 0.5, 1.5).finished();

ProblemSpec make_quintic2d() {
    ProblemSpec ps;
    ps.name = "quintic2d";
    ps.dimension = 2;
    ps.domain = RectangleDomain{0.0, 1.0, 0.0, 1.0};
    ps.A = [](const Vec2&) { return kConstA; };
    ps.lambda_lower = 1.19;  // smallest eigenvalue of the constant matrix is ~1.1910
    ExactBundle eb;
    eb.smoothness = "smooth (quintic)";
    // Harmonic quintic: Re z^5 + Re z^3 + Re z^2 + xy + x + 2y + 1. Being
    // harmonic makes the biharmonic term drop out and the patch setup exact.
    eb.u = [](const Vec2& p) {
        double x = p.x(), y = p.y();
        return x * x * x * x * x - 10.0 * x * x * x * y * y + 5.0 * x * y * y * y * y +
               x * x * x - 3.0 * x * y * y + x * x - y * y + x * y + x + 2.0 * y + 1.0;
    };
    eb.grad = [](const Vec2& p) {
        double x = p.x(), y = p.y();
        return Vec2(5.0 * x * x * x * x - 30.0 * x * x * y * y + 5.0 * y * y * y * y +
                        3.0 * x * x - 3.0 * y * y + 2.0 * x + y + 1.0,
                    -20.0 * x * x * x * y + 20.0 * x * y * y * y - 6.0 * x * y - 2.0 * y +
                        x + 2.0);
    };
    eb.hess = [](const Vec2& p) {
        double x = p.x(), y = p.y();
        Mat2 H;
        H(0, 0) = 20.0 * x * x * x - 60.0 * x * y * y + 6.0 * x + 2.0;
        H(0, 1) = -60.0 * x * x * y + 20.0 * y * y * y - 6.0 * y + 1.0;
        H(1, 0) = H(0, 1);
        H(1, 1) = -H(0, 0);
        return H;
    };
    eb.lap = [](const Vec2&) { return 0.0; };
    ps.exact = eb;
    ps.f = manufactured_source(ps.A, eb, [](const Vec2&) { return 0.0; });
    return ps;
}

ProblemSpec make_const_coeff_2d() {
    ProblemSpec ps;
    ps.name = "const_coeff_2d";
    ps.dimension = 2;
    ps.domain = RectangleDomain{0.0, 1.0, 0.0, 1.0};
    ps.A = [](const Vec2&) { return kConstA; };
    ps.lambda_lower = 1.19;
    const double pi = M_PI;
    ExactBundle eb;
    eb.smoothness = "smooth (analytic)";
    eb.u = [pi](const Vec2& p) { return std::sin(pi * p.x()) * std::sin(pi * p.y()); };
    eb.grad = [pi](const Vec2& p) {
        return Vec2(pi * std::cos(pi * p.x()) * std::sin(pi * p.y()),
                    pi * std::sin(pi * p.x()) * std::cos(pi * p.y()));
    };
    eb.hess = [pi](const Vec2& p) {
        double sx = std::sin(pi * p.x()), cx = std::cos(pi * p.x());
        double sy = std::sin(pi * p.y()), cy = std::cos(pi * p.y());
        Mat2 H;
        H(0, 0) = -pi * pi * sx * sy;
        H(0, 1) = pi * pi * cx * cy;
        H(1, 0) = H(0, 1);
        H(1, 1) = -pi * pi * sx * sy;
        return H;
    };
    eb.lap = [pi](const Vec2& p) {
        return -2.0 * pi * pi * std::sin(pi * p.x()) * std::sin(pi * p.y());
    };
    ps.exact = eb;
    // Double eigenfunction trick as in sine1d: biharmonic(u) = 4 pi^4 u and
    // laplacian u = 0 on the unit-square boundary, so u solves the perturbed
    // problem exactly for every eps.
    const ScalarField biharm = [pi](const Vec2& p) {
        return 4.0 * pi * pi * pi * pi * std::sin(pi * p.x()) * std::sin(pi * p.y());
    };
    ps.f = manufactured_source(ps.A, eb, biharm);
    return ps;
}

}  // namespace

int domain_dimension(const Domain& d) {
    return std::holds_alternative<IntervalDomain>(d) ? 1 : 2;
}

const std::vector<std::string>& builtin_problem_names() {
    static const std::vector<std::string> names = {
        "test1", "test2", "test3", "test4", "sine1d", "quintic2d", "const_coeff_2d"};
    return names;
}

ProblemSpec builtin_problem(const std::string& name) {
    if (name == "test1") return make_test1();
    if (name == "test2") return make_test2();
    if (name == "test3") return make_test3();
    if (name == "test4") return make_test4();
    if (name == "sine1d") return make_sine1d();
    if (name == "quintic2d") return make_quintic2d();
    if (name == "const_coeff_2d") return make_const_coeff_2d();
    throw std::invalid_argument("unknown problem '" + name + "'");
}

ScalarField parse_scalar_field(const std::string& text) {
    Expr e = Expr::parse(text);
    return [e](const Vec2& p) { return e(p.x(), p.y()); };
}

ProblemSpec load_problem_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    nlohmann::json j;
    in >> j;

    ProblemSpec ps;
    ps.name = j.value("name", std::string("custom"));
    ps.dimension = j.at("dimension").get<int>();
    if (ps.dimension != 1 && ps.dimension != 2)
        throw std::runtime_error("config: dimension must be 1 or 2");

    const auto& dom = j.at("domain");
    std::string kind = dom.at("kind").get<std::string>();
    if (kind == "interval") {
        ps.domain = IntervalDomain{dom.at("a").get<double>(), dom.at("b").get<double>()};
    } else if (kind == "rectangle") {
        ps.domain = RectangleDomain{dom.at("x0").get<double>(), dom.at("x1").get<double>(),
                                    dom.at("y0").get<double>(), dom.at("y1").get<double>()};
    } else if (kind == "disk") {
        ps.domain = DiskDomain{dom.at("radius").get<double>()};
    } else {
        throw std::runtime_error("config: unknown domain kind '" + kind + "'");
    }
    if (domain_dimension(ps.domain) != ps.dimension)
        throw std::runtime_error("config: domain does not match dimension");

    const auto& amat = j.at("A");
    const int n = ps.dimension;
    if (!amat.is_array() || static_cast<int>(amat.size()) != n)
        throw std::runtime_error("config: A must be a dimension x dimension array");
    std::vector<ScalarField> entries;
    for (const auto& row : amat) {
        if (!row.is_array() || static_cast<int>(row.size()) != n)
            throw std::runtime_error("config: A must be a dimension x dimension array");
        for (const auto& cell : row)
            entries.push_back(parse_scalar_field(cell.get<std::string>()));
    }
    ps.A = [entries, n](const Vec2& p) {
        Mat2 A = Mat2::Zero();
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) A(r, c) = entries[r * n + c](p);
        return A;
    };

    if (j.contains("b")) {
        std::vector<ScalarField> bs;
        for (const auto& cell : j.at("b")) bs.push_back(parse_scalar_field(cell.get<std::string>()));
        if (static_cast<int>(bs.size()) != n)
            throw std::runtime_error("config: b must have one entry per dimension");
        ps.b = [bs, n](const Vec2& p) {
            return Vec2(bs[0](p), n == 2 ? bs[1](p) : 0.0);
        };
    }
    if (j.contains("c")) {
        ScalarField cf = parse_scalar_field(j.at("c").get<std::string>());
        ps.c = cf;
    }

    if (j.contains("exact")) {
        ProblemSpec ref = builtin_problem(j.at("exact").get<std::string>());
        if (ref.dimension != ps.dimension)
            throw std::runtime_error("config: exact-solution dimension mismatch");
        ps.exact = ref.exact;
    }

    if (j.contains("f")) {
        ScalarField ff = parse_scalar_field(j.at("f").get<std::string>());
        ps.f = [ff](const Vec2& p, double) { return ff(p); };
    } else if (ps.exact) {
        ps.f = manufactured_source(ps.A, *ps.exact, nullptr, ps.b, ps.c);
    } else {
        throw std::runtime_error("config: need f or an exact solution to manufacture it");
    }

    if (j.contains("lambda_lower")) ps.lambda_lower = j.at("lambda_lower").get<double>();
    return ps;
}

double halton(unsigned long long index, unsigned base) {
    double f = 1.0, r = 0.0;
    while (index > 0) {
        f /= base;
        r += f * (index % base);
        index /= base;
    }
    return r;
}

EllipticityProbe ellipticity_probe(const MatrixField& A, const Domain& domain,
                                   int n_samples, unsigned long long seed) {
    if (n_samples < 1) throw std::invalid_argument("ellipticity probe: n_samples >= 1");
    EllipticityProbe out;
    out.min_eigenvalue = std::numeric_limits<double>::infinity();
    out.max_eigenvalue = -std::numeric_limits<double>::infinity();

    const int dim = domain_dimension(domain);
    unsigned long long index = seed + 1;
    int accepted = 0;
    while (accepted < n_samples) {
        double u = halton(index, 2), v = halton(index, 3);
        ++index;
        Vec2 p;
        if (const auto* iv = std::get_if<IntervalDomain>(&domain)) {
            p = Vec2(iv->a + (iv->b - iv->a) * u, 0.0);
        } else if (const auto* rc = std::get_if<RectangleDomain>(&domain)) {
            p = Vec2(rc->x0 + (rc->x1 - rc->x0) * u, rc->y0 + (rc->y1 - rc->y0) * v);
        } else {
            const auto& dk = std::get<DiskDomain>(domain);
            p = Vec2(dk.radius * (2.0 * u - 1.0), dk.radius * (2.0 * v - 1.0));
            if (p.norm() > dk.radius) continue;  // rejection keeps the sequence deterministic
        }
        ++accepted;

        Mat2 a;
        try {
            a = A(p);
        } catch (const std::exception&) {
            ++out.samples_failed;
            continue;
        }
        double lo, hi;
        if (dim == 1) {
            lo = hi = a(0, 0);
        } else {
            double scale = a.cwiseAbs().maxCoeff();
            if (std::abs(a(0, 1) - a(1, 0)) > 1e-12 * std::max(1.0, scale))
                throw std::runtime_error("coefficient matrix not symmetric at (" +
                                         std::to_string(p.x()) + ", " +
                                         std::to_string(p.y()) + ")");
            double mean = 0.5 * (a(0, 0) + a(1, 1));
            double rad = std::hypot(0.5 * (a(0, 0) - a(1, 1)), a(0, 1));
            lo = mean - rad;
            hi = mean + rad;
        }
        ++out.samples_evaluated;
        if (lo < out.min_eigenvalue) {
            out.min_eigenvalue = lo;
            out.argmin = p;
        }
        out.max_eigenvalue = std::max(out.max_eigenvalue, hi);
    }
    return out;
}

}  // namespace vmm
