#ifndef VMM_EXPR_HPP
#define VMM_EXPR_HPP

#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

namespace vmm {

struct ExprParseError : std::runtime_error {
    std::size_t offset;
    ExprParseError(std::size_t off, const std::string& msg)
        : std::runtime_error(msg + " (at offset " + std::to_string(off) + ")"),
          offset(off) {}
};

struct ExprDomainError : std::runtime_error {
    std::size_t offset;
    double x, y;
    ExprDomainError(std::size_t off, double px, double py)
        : std::runtime_error("non-finite value at offset " + std::to_string(off) +
                             " for point (" + std::to_string(px) + ", " +
                             std::to_string(py) + ")"),
          offset(off), x(px), y(py) {}
};

/// Sign-preserving power: sign(t)*|t|^p, with sgnpow(0, p) = 0.
/// Gives the real odd roots, e.g. sgnpow(-8, 1/3) = -2.
double sgnpow(double t, double p);

/// Scalar field over (x, y) parsed from text.
///
/// Grammar: numbers, x, y, + - * / ^ (right associative), parentheses, and
/// the functions sin cos exp abs sqrt sgnpow(t, p).
class Expr {
public:
    static Expr parse(std::string_view text);

    double operator()(double x, double y) const;

    /// Fully parenthesized form; parsing it back gives an identical field.
    std::string pretty() const;

    struct Node;

private:
    std::shared_ptr<const Node> root_;
};

}  // namespace vmm

#endif
