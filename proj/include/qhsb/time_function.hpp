// time_function.hpp — immutable scalar time-course expressions with analytic
// derivatives, plus the tiny config grammar: numbers, t, sin, cos, +, -, *, parens.

#pragma once

#include <cctype>
#include <cmath>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>

namespace qhsb {

struct ParseError : std::runtime_error {
    std::size_t position;
    ParseError(const std::string& what, std::size_t pos)
        : std::runtime_error(what + " at column " + std::to_string(pos + 1)), position(pos) {}
};

class TimeFunction {
    enum class Kind { constant, time, sine, cosine, sum, product, smoothstep, derivative };

    struct Node {
        Kind kind;
        double a{0.0}, b{0.0}; // constant value, or ramp (t0, tau)
        std::shared_ptr<const Node> left, right;
    };
    using NodePtr = std::shared_ptr<const Node>;

    NodePtr root_;
    std::string repr_;

    TimeFunction(NodePtr n, std::string repr) : root_(std::move(n)), repr_(std::move(repr)) {}

    static double eval(const Node& n, double t) {
        switch (n.kind) {
            case Kind::constant: return n.a;
            case Kind::time: return t;
            case Kind::sine: return std::sin(eval(*n.left, t));
            case Kind::cosine: return std::cos(eval(*n.left, t));
            case Kind::sum: return eval(*n.left, t) + eval(*n.right, t);
            case Kind::product: return eval(*n.left, t) * eval(*n.right, t);
            case Kind::smoothstep: {
                const double x = (t - n.a) / n.b;
                if (x <= 0.0) return 0.0;
                if (x >= 1.0) return 1.0;
                return x * x * x * (10.0 + x * (-15.0 + 6.0 * x));
            }
            case Kind::derivative: return diff(*n.left, t);
        }
        return 0.0;
    }

    static double diff(const Node& n, double t) {
        switch (n.kind) {
            case Kind::constant: return 0.0;
            case Kind::time: return 1.0;
            case Kind::sine: return std::cos(eval(*n.left, t)) * diff(*n.left, t);
            case Kind::cosine: return -std::sin(eval(*n.left, t)) * diff(*n.left, t);
            case Kind::sum: return diff(*n.left, t) + diff(*n.right, t);
            case Kind::product:
                return diff(*n.left, t) * eval(*n.right, t) + eval(*n.left, t) * diff(*n.right, t);
            case Kind::smoothstep: {
                const double x = (t - n.a) / n.b;
                if (x <= 0.0 || x >= 1.0) return 0.0;
                const double y = x * (1.0 - x);
                return 30.0 * y * y / n.b;
            }
            case Kind::derivative: return diff2(*n.left, t);
        }
        return 0.0;
    }

    static double diff2(const Node& n, double t) {
        switch (n.kind) {
            case Kind::constant:
            case Kind::time: return 0.0;
            case Kind::sine: {
                const double u = eval(*n.left, t), du = diff(*n.left, t);
                return -std::sin(u) * du * du + std::cos(u) * diff2(*n.left, t);
            }
            case Kind::cosine: {
                const double u = eval(*n.left, t), du = diff(*n.left, t);
                return -std::cos(u) * du * du - std::sin(u) * diff2(*n.left, t);
            }
            case Kind::sum: return diff2(*n.left, t) + diff2(*n.right, t);
            case Kind::product:
                return diff2(*n.left, t) * eval(*n.right, t) +
                       2.0 * diff(*n.left, t) * diff(*n.right, t) +
                       eval(*n.left, t) * diff2(*n.right, t);
            case Kind::smoothstep: {
                const double x = (t - n.a) / n.b;
                if (x <= 0.0 || x >= 1.0) return 0.0;
                return 60.0 * x * (1.0 - x) * (1.0 - 2.0 * x) / (n.b * n.b);
            }
            case Kind::derivative:
                throw std::logic_error("second derivative of a derivative expression");
        }
        return 0.0;
    }

public:
    TimeFunction() : TimeFunction(constant(0.0)) {}

    double value(double t) const { return eval(*root_, t); }
    double derivative(double t) const { return diff(*root_, t); }
    double operator()(double t) const { return value(t); }
    const std::string& str() const { return repr_; }

    // The time derivative as a first-class expression (its own derivative is the
    // analytic second derivative of the original).
    TimeFunction derived() const {
        auto n = std::make_shared<Node>();
        n->kind = Kind::derivative;
        n->left = root_;
        return TimeFunction(n, "d/dt(" + repr_ + ")");
    }

    static TimeFunction constant(double c) {
        auto n = std::make_shared<Node>();
        n->kind = Kind::constant;
        n->a = c;
        std::ostringstream os;
        os.precision(17);
        os << c;
        return TimeFunction(n, os.str());
    }

    static TimeFunction time() {
        auto n = std::make_shared<Node>();
        n->kind = Kind::time;
        return TimeFunction(n, "t");
    }

    static TimeFunction sin_of(const TimeFunction& inner) {
        auto n = std::make_shared<Node>();
        n->kind = Kind::sine;
        n->left = inner.root_;
        return TimeFunction(n, "sin(" + inner.repr_ + ")");
    }

    static TimeFunction cos_of(const TimeFunction& inner) {
        auto n = std::make_shared<Node>();
        n->kind = Kind::cosine;
        n->left = inner.root_;
        return TimeFunction(n, "cos(" + inner.repr_ + ")");
    }

    // Quintic smoothstep from 0 to 1 over [t0, t0+tau]: C² at both ends, which
    // keeps the moving-boundary term continuous under rapid switching.
    static TimeFunction ramp(double t0, double tau) {
        if (tau <= 0.0) throw std::invalid_argument("ramp width must be positive");
        auto n = std::make_shared<Node>();
        n->kind = Kind::smoothstep;
        n->a = t0;
        n->b = tau;
        std::ostringstream os;
        os.precision(17);
        os << "ramp(" << t0 << "," << tau << ")";
        return TimeFunction(n, os.str());
    }

    friend TimeFunction operator+(const TimeFunction& l, const TimeFunction& r) {
        auto n = std::make_shared<Node>();
        n->kind = Kind::sum;
        n->left = l.root_;
        n->right = r.root_;
        return TimeFunction(n, l.repr_ + " + " + r.repr_);
    }

    friend TimeFunction operator*(const TimeFunction& l, const TimeFunction& r) {
        auto n = std::make_shared<Node>();
        n->kind = Kind::product;
        n->left = l.root_;
        n->right = r.root_;
        return TimeFunction(n, "(" + l.repr_ + ")*(" + r.repr_ + ")");
    }

    friend TimeFunction operator*(double c, const TimeFunction& r) { return constant(c) * r; }

    friend TimeFunction operator-(const TimeFunction& l, const TimeFunction& r) {
        return l + constant(-1.0) * r;
    }

    static TimeFunction parse(const std::string& text);
};

namespace detail {

// Recursive-descent parser for the flat config grammar.
class ExprParser {
    const std::string& s_;
    std::size_t p_{0};

    void skip() {
        while (p_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[p_]))) ++p_;
    }
    bool at(char c) {
        skip();
        return p_ < s_.size() && s_[p_] == c;
    }
    bool eat(char c) {
        if (!at(c)) return false;
        ++p_;
        return true;
    }

    TimeFunction factor() {
        skip();
        if (p_ >= s_.size()) throw ParseError("expected a value", p_);
        const char c = s_[p_];
        if (c == '(') {
            ++p_;
            TimeFunction e = expr();
            if (!eat(')')) throw ParseError("missing ')'", p_);
            return e;
        }
        if (c == '-') {
            ++p_;
            return TimeFunction::constant(-1.0) * factor();
        }
        if (c == '+') {
            ++p_;
            return factor();
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            std::size_t len = 0;
            double v = 0.0;
            try {
                v = std::stod(s_.substr(p_), &len);
            } catch (const std::exception&) {
                throw ParseError("malformed number", p_);
            }
            p_ += len;
            return TimeFunction::constant(v);
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t q = p_;
            while (q < s_.size() && std::isalpha(static_cast<unsigned char>(s_[q]))) ++q;
            const std::string name = s_.substr(p_, q - p_);
            p_ = q;
            if (name == "t") return TimeFunction::time();
            if (name == "sin" || name == "cos") {
                if (!eat('(')) throw ParseError("expected '(' after " + name, p_);
                TimeFunction inner = expr();
                if (!eat(')')) throw ParseError("missing ')'", p_);
                return name == "sin" ? TimeFunction::sin_of(inner) : TimeFunction::cos_of(inner);
            }
            throw ParseError("unknown name '" + name + "'", p_ - name.size());
        }
        throw ParseError(std::string("unexpected character '") + c + "'", p_);
    }

    TimeFunction term() {
        TimeFunction f = factor();
        while (eat('*')) f = f * factor();
        return f;
    }

public:
    explicit ExprParser(const std::string& s) : s_(s) {}

    TimeFunction expr() {
        TimeFunction e = term();
        for (;;) {
            if (eat('+')) e = e + term();
            else if (eat('-')) e = e - term();
            else break;
        }
        return e;
    }

    void expect_end() {
        skip();
        if (p_ < s_.size()) throw ParseError("trailing input", p_);
    }
};

} // namespace detail

inline TimeFunction TimeFunction::parse(const std::string& text) {
    detail::ExprParser p(text);
    TimeFunction f = p.expr();
    p.expect_end();
    return f;
}

// Complex-valued time course as a (re, im) pair of real expressions.
struct ComplexFunction {
    TimeFunction re, im;

    ComplexFunction() = default;
    ComplexFunction(TimeFunction r, TimeFunction i) : re(std::move(r)), im(std::move(i)) {}
    static ComplexFunction real(TimeFunction r) {
        return ComplexFunction{std::move(r), TimeFunction::constant(0.0)};
    }

    std::complex<double> value(double t) const { return {re.value(t), im.value(t)}; }
    std::complex<double> derivative(double t) const { return {re.derivative(t), im.derivative(t)}; }
};

} // namespace qhsb
