#include "vmm/expr.hpp"

#include <charconv>
#include <cmath>

namespace vmm {

double sgnpow(double t, double p) {
    if (t == 0.0) return 0.0;
    double m = std::pow(std::abs(t), p);
    return t > 0.0 ? m : -m;
}

struct Expr::Node {
    enum class Op { Num, X, Y, Add, Sub, Mul, Div, Pow, Neg, Sin, Cos, Exp, Abs, Sqrt, Sgnpow };
    Op op;
    double num = 0.0;
    std::size_t offset = 0;
    std::shared_ptr<const Node> a, b;
};

namespace {

using Node = Expr::Node;
using Op = Node::Op;
using NodePtr = std::shared_ptr<const Node>;

NodePtr make(Op op, std::size_t off, NodePtr a = nullptr, NodePtr b = nullptr) {
    auto n = std::make_shared<Node>();
    n->op = op;
    n->offset = off;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    NodePtr run() {
        NodePtr e = expr();
        skip_ws();
        if (pos_ != text_.size()) throw ExprParseError(pos_, "unexpected trailing input");
        return e;
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    std::size_t mark() {
        skip_ws();
        return pos_;
    }
    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }
    bool accept(char c) {
        if (peek() == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!accept(c))
            throw ExprParseError(pos_, std::string("expected '") + c + "'");
    }

    NodePtr expr() {
        NodePtr lhs = term();
        for (;;) {
            std::size_t off = mark();
            if (accept('+'))
                lhs = make(Op::Add, off, lhs, term());
            else if (accept('-'))
                lhs = make(Op::Sub, off, lhs, term());
            else
                return lhs;
        }
    }

    NodePtr term() {
        NodePtr lhs = unary();
        for (;;) {
            std::size_t off = mark();
            if (accept('*'))
                lhs = make(Op::Mul, off, lhs, unary());
            else if (accept('/'))
                lhs = make(Op::Div, off, lhs, unary());
            else
                return lhs;
        }
    }

    NodePtr unary() {
        std::size_t off = mark();
        if (accept('-')) return make(Op::Neg, off, unary());
        return power();
    }

    NodePtr power() {
        NodePtr base = atom();
        std::size_t off = mark();
        if (accept('^')) return make(Op::Pow, off, base, unary());
        return base;
    }

    NodePtr atom() {
        char c = peek();
        std::size_t off = mark();
        if (c == '(') {
            ++pos_;
            NodePtr e = expr();
            expect(')');
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
        throw ExprParseError(off, "expected number, variable, function or '('");
    }

    NodePtr number() {
        skip_ws();
        std::size_t off = mark();
        double value = 0.0;
        auto res = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), value);
        if (res.ec != std::errc())
            throw ExprParseError(off, "malformed number");
        pos_ = static_cast<std::size_t>(res.ptr - text_.data());
        auto n = std::make_shared<Node>();
        n->op = Op::Num;
        n->num = value;
        n->offset = off;
        return n;
    }

    NodePtr identifier() {
        skip_ws();
        std::size_t off = mark();
        std::size_t end = pos_;
        while (end < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[end])) || text_[end] == '_'))
            ++end;
        std::string_view name = text_.substr(pos_, end - pos_);
        pos_ = end;
        if (name == "x") return make(Op::X, off);
        if (name == "y") return make(Op::Y, off);

        Op op;
        int arity = 1;
        if (name == "sin") op = Op::Sin;
        else if (name == "cos") op = Op::Cos;
        else if (name == "exp") op = Op::Exp;
        else if (name == "abs") op = Op::Abs;
        else if (name == "sqrt") op = Op::Sqrt;
        else if (name == "sgnpow") { op = Op::Sgnpow; arity = 2; }
        else throw ExprParseError(off, "unknown identifier '" + std::string(name) + "'");

        expect('(');
        NodePtr a = expr();
        NodePtr b;
        if (arity == 2) {
            expect(',');
            b = expr();
        }
        expect(')');
        return make(op, off, a, b);
    }
};

double eval(const Node& n, double x, double y) {
    double r;
    switch (n.op) {
        case Op::Num: return n.num;
        case Op::X: return x;
        case Op::Y: return y;
        case Op::Add: return eval(*n.a, x, y) + eval(*n.b, x, y);
        case Op::Sub: return eval(*n.a, x, y) - eval(*n.b, x, y);
        case Op::Mul: return eval(*n.a, x, y) * eval(*n.b, x, y);
        case Op::Div: r = eval(*n.a, x, y) / eval(*n.b, x, y); break;
        case Op::Pow: r = std::pow(eval(*n.a, x, y), eval(*n.b, x, y)); break;
        case Op::Neg: return -eval(*n.a, x, y);
        case Op::Sin: return std::sin(eval(*n.a, x, y));
        case Op::Cos: return std::cos(eval(*n.a, x, y));
        case Op::Exp: r = std::exp(eval(*n.a, x, y)); break;
        case Op::Abs: return std::abs(eval(*n.a, x, y));
        case Op::Sqrt: r = std::sqrt(eval(*n.a, x, y)); break;
        case Op::Sgnpow: r = sgnpow(eval(*n.a, x, y), eval(*n.b, x, y)); break;
        default: r = 0.0;
    }
    if (!std::isfinite(r)) throw ExprDomainError(n.offset, x, y);
    return r;
}

std::string format_num(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string print(const Node& n) {
    switch (n.op) {
        case Op::Num: return format_num(n.num);
        case Op::X: return "x";
        case Op::Y: return "y";
        case Op::Add: return "(" + print(*n.a) + " + " + print(*n.b) + ")";
        case Op::Sub: return "(" + print(*n.a) + " - " + print(*n.b) + ")";
        case Op::Mul: return "(" + print(*n.a) + " * " + print(*n.b) + ")";
        case Op::Div: return "(" + print(*n.a) + " / " + print(*n.b) + ")";
        case Op::Pow: return "(" + print(*n.a) + " ^ " + print(*n.b) + ")";
        case Op::Neg: return "(-" + print(*n.a) + ")";
        case Op::Sin: return "sin(" + print(*n.a) + ")";
        case Op::Cos: return "cos(" + print(*n.a) + ")";
        case Op::Exp: return "exp(" + print(*n.a) + ")";
        case Op::Abs: return "abs(" + print(*n.a) + ")";
        case Op::Sqrt: return "sqrt(" + print(*n.a) + ")";
        case Op::Sgnpow: return "sgnpow(" + print(*n.a) + ", " + print(*n.b) + ")";
    }
    return {};
}

}  // namespace

Expr Expr::parse(std::string_view text) {
    Expr e;
    e.root_ = Parser(text).run();
    return e;
}

double Expr::operator()(double x, double y) const { return eval(*root_, x, y); }

std::string Expr::pretty() const { return print(*root_); }

}  // namespace vmm
