#ifndef VMM_PROBLEMS_HPP
#define VMM_PROBLEMS_HPP

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "vmm/expr.hpp"
#include "vmm/mesh.hpp"

namespace vmm {

struct IntervalDomain {
    double a, b;
};
struct RectangleDomain {
    double x0, x1, y0, y1;
};
struct DiskDomain {
    double radius;
};
using Domain = std::variant<IntervalDomain, RectangleDomain, DiskDomain>;

int domain_dimension(const Domain& d);

using ScalarField = std::function<double(const Vec2&)>;
using VectorField = std::function<Vec2(const Vec2&)>;
using MatrixField = std::function<Mat2(const Vec2&)>;
/// Source term; the biharmonic weight is passed so built-in problems can
/// manufacture right-hand sides whose perturbed solution is known exactly.
using SourceField = std::function<double(const Vec2&, double /*eps*/)>;

/// Exact solution with closed-form derivatives; supplies Dirichlet data and
/// the reference for error norms.
struct ExactBundle {
    ScalarField u;
    VectorField grad;
    MatrixField hess;
    ScalarField lap;
    std::string smoothness;
};

struct ProblemSpec {
    std::string name;
    int dimension = 1;
    Domain domain = IntervalDomain{0.0, 1.0};
    MatrixField A;   // 1-D problems use entry (0,0) only
    VectorField b;   // null means zero
    ScalarField c;   // null means zero
    SourceField f;
    std::optional<ExactBundle> exact;
    std::optional<double> lambda_lower;
};

/// Built-ins: test1..test4 (the reference experiments), sine1d, quintic2d,
/// const_coeff_2d.
ProblemSpec builtin_problem(const std::string& name);
const std::vector<std::string>& builtin_problem_names();

/// Compiles expression text into a scalar field (see Expr for the grammar).
ScalarField parse_scalar_field(const std::string& expr);

/// Reads a problem from a JSON config file; schema documented in the README.
ProblemSpec load_problem_config(const std::string& path);

struct EllipticityProbe {
    double min_eigenvalue = 0.0;
    double max_eigenvalue = 0.0;
    Vec2 argmin = Vec2::Zero();
    int samples_evaluated = 0;
    int samples_failed = 0;
};

/// Scans A over quasi-random points of the domain and reports the extreme
/// closed-form eigenvalues. Deterministic for a fixed seed; evaluation
/// failures are counted and skipped.
EllipticityProbe ellipticity_probe(const MatrixField& A, const Domain& domain,
                                   int n_samples, unsigned long long seed = 0);

/// Low-discrepancy helper (van der Corput radical inverse), used by the
/// sampling probes.
double halton(unsigned long long index, unsigned base);

}  // namespace vmm

#endif
