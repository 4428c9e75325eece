#pragma once

// Exact symbolic expressions over the coordinates y1..yn, t, r with complex
// constants, +,-,*,/, integer powers and exp/sin/cos.  Supports evaluation,
// exact differentiation, substitution, a printing/parsing round trip, and
// randomized-evaluation equality.  No canonical forms: only constant folding
// and trivial identity folds (x+0, x*1, x*0, x^1, ...) are applied.

#include <cmath>
#include <complex>
#include <cstdio>
#include <map>
#include <memory>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace schrod {

using Complex = std::complex<double>;

// Variable codes: k >= 1 is y_k, VT is t, VR is r.
inline constexpr int VT = 0;
inline constexpr int VR = -1;

struct eval_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct parse_error : std::runtime_error {
    std::size_t position;
    parse_error(const std::string& msg, std::size_t pos)
        : std::runtime_error("syntax error at position " + std::to_string(pos) + ": " + msg),
          position(pos) {}
};

/// Values a point assigns to the coordinates.  y[k-1] holds y_k.
struct EvalPoint {
    std::vector<Complex> y;
    Complex t{0.0, 0.0};
    Complex r{0.0, 0.0};
};

namespace detail {

enum class Op { Const, Var, Add, Sub, Mul, Div, Pow, Neg, Exp, Sin, Cos };

struct ExprNode;
using NodePtr = std::shared_ptr<const ExprNode>;

struct ExprNode {
    Op op;
    Complex value{};   // Const
    int var = 0;       // Var
    int ipow = 0;      // Pow exponent
    NodePtr a, b;
};

inline NodePtr make_const(Complex v) {
    auto n = std::make_shared<ExprNode>();
    n->op = Op::Const;
    n->value = v;
    return n;
}

inline bool is_const(const NodePtr& n, Complex v) {
    return n->op == Op::Const && n->value == v;
}

} // namespace detail

class Expr {
public:
    Expr() : node_(detail::make_const(Complex(0.0))) {}
    explicit Expr(double v) : node_(detail::make_const(Complex(v))) {}
    explicit Expr(Complex v) : node_(detail::make_const(v)) {}

    static Expr c(Complex v) { return Expr(v); }
    static Expr c(double v) { return Expr(v); }
    static Expr i() { return Expr(Complex(0.0, 1.0)); }
    static Expr y(int k) {
        if (k < 1) throw std::invalid_argument("Expr::y: index must be >= 1");
        return var(k);
    }
    static Expr t() { return var(VT); }
    static Expr r() { return var(VR); }

    bool is_constant() const { return node_->op == detail::Op::Const; }
    Complex constant_value() const {
        if (!is_constant()) throw std::logic_error("Expr: not a constant");
        return node_->value;
    }

    Complex eval(const EvalPoint& p) const { return eval_node(node_.get(), p); }

    Expr diff(int var) const { return Expr(diff_node(node_, var)); }

    Expr substitute(const std::map<int, Expr>& repl) const {
        return Expr(subst_node(node_, repl));
    }

    void collect_vars(std::set<int>& out) const { collect(node_.get(), out); }

    bool uses_var(int var) const {
        std::set<int> vs;
        collect_vars(vs);
        return vs.count(var) != 0;
    }

    int max_y_index() const {
        std::set<int> vs;
        collect_vars(vs);
        int m = 0;
        for (int v : vs) if (v > m) m = v;
        return m;
    }

    std::string to_string() const {
        std::string s;
        int prec;
        print_node(node_.get(), s, prec);
        return s;
    }

    friend Expr operator+(const Expr& a, const Expr& b) { return Expr(add(a.node_, b.node_)); }
    friend Expr operator-(const Expr& a, const Expr& b) { return Expr(sub(a.node_, b.node_)); }
    friend Expr operator*(const Expr& a, const Expr& b) { return Expr(mul(a.node_, b.node_)); }
    friend Expr operator/(const Expr& a, const Expr& b) { return Expr(div(a.node_, b.node_)); }
    friend Expr operator-(const Expr& a) { return Expr(neg(a.node_)); }

    friend Expr pow(const Expr& a, int k);
    friend Expr exp(const Expr& a);
    friend Expr sin(const Expr& a);
    friend Expr cos(const Expr& a);
    friend Expr parse(const std::string& src);

private:
    using Op = detail::Op;
    using NodePtr = detail::NodePtr;
    using ExprNode = detail::ExprNode;

    explicit Expr(NodePtr n) : node_(std::move(n)) {}

    static Expr var(int code) {
        auto n = std::make_shared<ExprNode>();
        n->op = Op::Var;
        n->var = code;
        return Expr(NodePtr(n));
    }

    static NodePtr binary(Op op, NodePtr a, NodePtr b) {
        auto n = std::make_shared<ExprNode>();
        n->op = op;
        n->a = std::move(a);
        n->b = std::move(b);
        return n;
    }

    static NodePtr unary(Op op, NodePtr a) {
        auto n = std::make_shared<ExprNode>();
        n->op = op;
        n->a = std::move(a);
        return n;
    }

    static NodePtr add(const NodePtr& a, const NodePtr& b) {
        if (a->op == Op::Const && b->op == Op::Const) return detail::make_const(a->value + b->value);
        if (detail::is_const(a, Complex(0.0))) return b;
        if (detail::is_const(b, Complex(0.0))) return a;
        return binary(Op::Add, a, b);
    }

    static NodePtr sub(const NodePtr& a, const NodePtr& b) {
        if (a->op == Op::Const && b->op == Op::Const) return detail::make_const(a->value - b->value);
        if (detail::is_const(b, Complex(0.0))) return a;
        if (detail::is_const(a, Complex(0.0))) return neg(b);
        return binary(Op::Sub, a, b);
    }

    static NodePtr mul(const NodePtr& a, const NodePtr& b) {
        if (a->op == Op::Const && b->op == Op::Const) return detail::make_const(a->value * b->value);
        if (detail::is_const(a, Complex(0.0)) || detail::is_const(b, Complex(0.0)))
            return detail::make_const(Complex(0.0));
        if (detail::is_const(a, Complex(1.0))) return b;
        if (detail::is_const(b, Complex(1.0))) return a;
        return binary(Op::Mul, a, b);
    }

    static NodePtr div(const NodePtr& a, const NodePtr& b) {
        if (a->op == Op::Const && b->op == Op::Const) {
            if (b->value == Complex(0.0)) throw eval_error("division by zero constant");
            return detail::make_const(a->value / b->value);
        }
        if (detail::is_const(a, Complex(0.0))) return detail::make_const(Complex(0.0));
        if (detail::is_const(b, Complex(1.0))) return a;
        return binary(Op::Div, a, b);
    }

    static NodePtr neg(const NodePtr& a) {
        if (a->op == Op::Const) return detail::make_const(-a->value);
        if (a->op == Op::Neg) return a->a;
        return unary(Op::Neg, a);
    }

    static NodePtr powi(const NodePtr& a, int k) {
        if (k == 0) return detail::make_const(Complex(1.0));
        if (k == 1) return a;
        if (a->op == Op::Const) return detail::make_const(const_pow(a->value, k));
        auto n = std::make_shared<ExprNode>();
        n->op = Op::Pow;
        n->a = a;
        n->ipow = k;
        return n;
    }

    static Complex const_pow(Complex z, int k) {
        if (k < 0) {
            if (z == Complex(0.0)) throw eval_error("0 raised to a negative power");
            return Complex(1.0) / const_pow(z, -k);
        }
        Complex out(1.0);
        while (k > 0) {
            if (k & 1) out *= z;
            z *= z;
            k >>= 1;
        }
        return out;
    }

    static Complex eval_node(const ExprNode* n, const EvalPoint& p) {
        switch (n->op) {
        case Op::Const: return n->value;
        case Op::Var:
            if (n->var == VT) return p.t;
            if (n->var == VR) return p.r;
            if (static_cast<std::size_t>(n->var) > p.y.size())
                throw std::out_of_range("eval: point does not provide y" + std::to_string(n->var));
            return p.y[static_cast<std::size_t>(n->var - 1)];
        case Op::Add: return eval_node(n->a.get(), p) + eval_node(n->b.get(), p);
        case Op::Sub: return eval_node(n->a.get(), p) - eval_node(n->b.get(), p);
        case Op::Mul: return eval_node(n->a.get(), p) * eval_node(n->b.get(), p);
        case Op::Div: {
            Complex num = eval_node(n->a.get(), p);
            Complex den = eval_node(n->b.get(), p);
            if (std::abs(den) < 1e-12)
                throw eval_error("near-singular division");
            return num / den;
        }
        case Op::Pow: {
            Complex base = eval_node(n->a.get(), p);
            if (n->ipow < 0 && std::abs(base) < 1e-12)
                throw eval_error("near-zero base of negative power");
            return const_pow(base, n->ipow);
        }
        case Op::Neg: return -eval_node(n->a.get(), p);
        case Op::Exp: return std::exp(eval_node(n->a.get(), p));
        case Op::Sin: return std::sin(eval_node(n->a.get(), p));
        case Op::Cos: return std::cos(eval_node(n->a.get(), p));
        }
        throw std::logic_error("eval: bad node");
    }

    static NodePtr diff_node(const NodePtr& n, int var) {
        switch (n->op) {
        case Op::Const: return detail::make_const(Complex(0.0));
        case Op::Var: return detail::make_const(Complex(n->var == var ? 1.0 : 0.0));
        case Op::Add: return add(diff_node(n->a, var), diff_node(n->b, var));
        case Op::Sub: return sub(diff_node(n->a, var), diff_node(n->b, var));
        case Op::Mul:
            return add(mul(diff_node(n->a, var), n->b), mul(n->a, diff_node(n->b, var)));
        case Op::Div:
            // (a/b)' = a'/b - a*b'/b^2
            return sub(div(diff_node(n->a, var), n->b),
                       div(mul(n->a, diff_node(n->b, var)), powi(n->b, 2)));
        case Op::Pow:
            return mul(mul(detail::make_const(Complex(double(n->ipow))), powi(n->a, n->ipow - 1)),
                       diff_node(n->a, var));
        case Op::Neg: return neg(diff_node(n->a, var));
        case Op::Exp: return mul(unary(Op::Exp, n->a), diff_node(n->a, var));
        case Op::Sin: return mul(unary(Op::Cos, n->a), diff_node(n->a, var));
        case Op::Cos: return neg(mul(unary(Op::Sin, n->a), diff_node(n->a, var)));
        }
        throw std::logic_error("diff: bad node");
    }

    static NodePtr subst_node(const NodePtr& n, const std::map<int, Expr>& repl) {
        switch (n->op) {
        case Op::Const: return n;
        case Op::Var: {
            auto it = repl.find(n->var);
            return it == repl.end() ? n : it->second.node_;
        }
        case Op::Add: return add(subst_node(n->a, repl), subst_node(n->b, repl));
        case Op::Sub: return sub(subst_node(n->a, repl), subst_node(n->b, repl));
        case Op::Mul: return mul(subst_node(n->a, repl), subst_node(n->b, repl));
        case Op::Div: return div(subst_node(n->a, repl), subst_node(n->b, repl));
        case Op::Pow: return powi(subst_node(n->a, repl), n->ipow);
        case Op::Neg: return neg(subst_node(n->a, repl));
        case Op::Exp: return unary(Op::Exp, subst_node(n->a, repl));
        case Op::Sin: return unary(Op::Sin, subst_node(n->a, repl));
        case Op::Cos: return unary(Op::Cos, subst_node(n->a, repl));
        }
        throw std::logic_error("substitute: bad node");
    }

    static void collect(const ExprNode* n, std::set<int>& out) {
        switch (n->op) {
        case Op::Const: return;
        case Op::Var: out.insert(n->var); return;
        default:
            if (n->a) collect(n->a.get(), out);
            if (n->b) collect(n->b.get(), out);
        }
    }

    // -- printing ---------------------------------------------------------

    static std::string fmt_double(double v) {
        if (v == 0.0) return "0";
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return buf;
    }

    // Emits src and reports the effective precedence of the printed form:
    // 1 add/sub, 2 mul/div, 3 unary minus, 4 pow, 5 atom.
    static void print_const(Complex v, std::string& out, int& prec) {
        const double re = v.real(), im = v.imag();
        if (im == 0.0) {
            out += fmt_double(re);
            prec = (re < 0.0) ? 3 : 5;
            return;
        }
        if (re == 0.0) {
            if (im == 1.0) {
                out += "i";
                prec = 5;
                return;
            }
            out += "(" + fmt_double(im) + "*i)";
            prec = 5;
            return;
        }
        out += "(" + fmt_double(re);
        if (im == 1.0) out += "+i";
        else if (im == -1.0) out += "-i";
        else if (im > 0.0) out += "+" + fmt_double(im) + "*i";
        else out += "-" + fmt_double(-im) + "*i";
        out += ")";
        prec = 5;
    }

    static void print_operand(const ExprNode* n, std::string& out, int min_prec) {
        std::string s;
        int prec;
        print_node(n, s, prec);
        if (prec < min_prec) out += "(" + s + ")";
        else out += s;
    }

    static void print_node(const ExprNode* n, std::string& out, int& prec) {
        switch (n->op) {
        case Op::Const: print_const(n->value, out, prec); return;
        case Op::Var:
            if (n->var == VT) out += "t";
            else if (n->var == VR) out += "r";
            else out += "y" + std::to_string(n->var);
            prec = 5;
            return;
        case Op::Add:
            print_operand(n->a.get(), out, 1);
            out += " + ";
            print_operand(n->b.get(), out, 2);
            prec = 1;
            return;
        case Op::Sub:
            print_operand(n->a.get(), out, 1);
            out += " - ";
            print_operand(n->b.get(), out, 2);
            prec = 1;
            return;
        case Op::Mul:
            print_operand(n->a.get(), out, 2);
            out += "*";
            print_operand(n->b.get(), out, 3);
            prec = 2;
            return;
        case Op::Div:
            print_operand(n->a.get(), out, 2);
            out += "/";
            print_operand(n->b.get(), out, 5);
            prec = 2;
            return;
        case Op::Neg:
            out += "-";
            print_operand(n->a.get(), out, 3);
            prec = 3;
            return;
        case Op::Pow:
            print_operand(n->a.get(), out, 5);
            out += "^" + std::to_string(n->ipow);
            prec = 4;
            return;
        case Op::Exp: out += "exp("; goto fn_arg;
        case Op::Sin: out += "sin("; goto fn_arg;
        case Op::Cos: out += "cos(";
        fn_arg: {
            std::string s;
            int p2;
            print_node(n->a.get(), s, p2);
            out += s + ")";
            prec = 5;
            return;
        }
        }
        throw std::logic_error("print: bad node");
    }

    NodePtr node_;

    friend class ExprParser;
};

inline Expr pow(const Expr& a, int k) { return Expr(Expr::powi(a.node_, k)); }
inline Expr exp(const Expr& a) { return Expr(Expr::unary(detail::Op::Exp, a.node_)); }
inline Expr sin(const Expr& a) { return Expr(Expr::unary(detail::Op::Sin, a.node_)); }
inline Expr cos(const Expr& a) { return Expr(Expr::unary(detail::Op::Cos, a.node_)); }

// -- parser ----------------------------------------------------------------

class ExprParser {
public:
    explicit ExprParser(const std::string& src) : src_(src) {}

    Expr run() {
        Expr e = parse_sum();
        skip_ws();
        if (pos_ != src_.size()) fail("unexpected trailing input");
        return e;
    }

private:
    void skip_ws() {
        while (pos_ < src_.size() && (src_[pos_] == ' ' || src_[pos_] == '\t' ||
                                      src_[pos_] == '\n' || src_[pos_] == '\r'))
            ++pos_;
    }

    [[noreturn]] void fail(const std::string& msg) { throw parse_error(msg, pos_); }

    bool peek(char c) {
        skip_ws();
        return pos_ < src_.size() && src_[pos_] == c;
    }

    bool eat(char c) {
        if (peek(c)) { ++pos_; return true; }
        return false;
    }

    Expr parse_sum() {
        Expr e = parse_term();
        for (;;) {
            if (eat('+')) e = e + parse_term();
            else if (eat('-')) e = e - parse_term();
            else return e;
        }
    }

    Expr parse_term() {
        Expr e = parse_unary();
        for (;;) {
            if (eat('*')) e = e * parse_unary();
            else if (eat('/')) e = e / parse_unary();
            else return e;
        }
    }

    Expr parse_unary() {
        if (eat('-')) return -parse_unary();
        if (eat('+')) return parse_unary();
        return parse_power();
    }

    Expr parse_power() {
        Expr base = parse_atom();
        if (eat('^')) return pow(base, parse_int_exponent());
        return base;
    }

    int parse_int_exponent() {
        skip_ws();
        bool negative = false;
        if (pos_ < src_.size() && (src_[pos_] == '-' || src_[pos_] == '+')) {
            negative = src_[pos_] == '-';
            ++pos_;
        }
        skip_ws();
        if (pos_ >= src_.size() || !std::isdigit(static_cast<unsigned char>(src_[pos_])))
            fail("expected integer exponent after '^'");
        long v = 0;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
            v = v * 10 + (src_[pos_] - '0');
            if (v > 1000000) fail("exponent too large");
            ++pos_;
        }
        return static_cast<int>(negative ? -v : v);
    }

    Expr parse_atom() {
        skip_ws();
        if (pos_ >= src_.size()) fail("unexpected end of input");
        char c = src_[pos_];
        if (c == '(') {
            ++pos_;
            Expr e = parse_sum();
            if (!eat(')')) fail("expected ')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_ident();
        fail(std::string("unexpected character '") + c + "'");
    }

    Expr parse_number() {
        std::size_t start = pos_;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        if (pos_ < src_.size() && src_[pos_] == '.') {
            ++pos_;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        }
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            std::size_t mark = pos_;
            ++pos_;
            if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
            if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
            } else {
                pos_ = mark;  // 'e' belonged to something else; not part of the number
            }
        }
        if (pos_ == start) fail("expected number");
        double v = 0.0;
        try {
            v = std::stod(src_.substr(start, pos_ - start));
        } catch (const std::exception&) {
            pos_ = start;
            fail("malformed number");
        }
        return Expr::c(v);
    }

    Expr parse_ident() {
        std::size_t start = pos_;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
            ++pos_;
        std::string name = src_.substr(start, pos_ - start);
        if (name == "t") return Expr::t();
        if (name == "r") return Expr::r();
        if (name == "i") return Expr::i();
        if (name == "exp" || name == "sin" || name == "cos") {
            if (!eat('(')) { pos_ = start; fail("expected '(' after function name"); }
            Expr arg = parse_sum();
            if (!eat(')')) fail("expected ')'");
            if (name == "exp") return exp(arg);
            if (name == "sin") return sin(arg);
            return cos(arg);
        }
        if (name.size() >= 2 && name[0] == 'y') {
            bool digits = true;
            for (std::size_t k = 1; k < name.size(); ++k)
                if (!std::isdigit(static_cast<unsigned char>(name[k]))) digits = false;
            if (digits) {
                int idx = std::stoi(name.substr(1));
                if (idx >= 1) return Expr::y(idx);
            }
        }
        pos_ = start;
        fail("unknown identifier '" + name + "'");
    }

    const std::string& src_;
    std::size_t pos_ = 0;
};

inline Expr parse(const std::string& src) { return ExprParser(src).run(); }

// -- randomized equality ----------------------------------------------------

struct EqualOptions {
    double tol = 1e-9;
    int points = 20;
    std::uint64_t seed = 0x5eed5eedULL;
    double imag_scale = 0.1;
    int max_resamples = 400;
};

/// Randomized-evaluation equality: samples complex-perturbed real points with
/// real parts in [-2,2] and compares |a-b| against tol*(1+max|a|,|b|).
/// Near-singular evaluations are resampled; too many resamples is an error.
inline bool equal(const Expr& a, const Expr& b, const EqualOptions& opt = {}) {
    std::set<int> vars;
    a.collect_vars(vars);
    b.collect_vars(vars);
    int max_y = 0;
    for (int v : vars) if (v > max_y) max_y = v;

    std::mt19937_64 rng(opt.seed);
    std::uniform_real_distribution<double> re(-2.0, 2.0);
    std::uniform_real_distribution<double> im(-opt.imag_scale, opt.imag_scale);

    auto draw = [&]() { return Complex(re(rng), im(rng)); };

    double max_diff = 0.0;
    double max_mag = 0.0;
    int accepted = 0;
    int attempts = 0;
    while (accepted < opt.points) {
        if (++attempts > opt.points + opt.max_resamples)
            throw eval_error("equal: too many singular sample points");
        EvalPoint p;
        p.y.resize(static_cast<std::size_t>(max_y));
        for (auto& z : p.y) z = draw();
        p.t = draw();
        p.r = draw();
        try {
            Complex va = a.eval(p);
            Complex vb = b.eval(p);
            max_diff = std::max(max_diff, std::abs(va - vb));
            max_mag = std::max({max_mag, std::abs(va), std::abs(vb)});
            ++accepted;
        } catch (const eval_error&) {
            continue;  // singular point: resample
        }
    }
    return max_diff <= opt.tol * (1.0 + max_mag);
}

inline bool equal(const Expr& a, const Expr& b, double tol) {
    EqualOptions opt;
    opt.tol = tol;
    return equal(a, b, opt);
}

/// The im/hbar-homogeneity test of wave-function extensions: df/dr == (i m/hbar) f.
inline bool is_homogeneous(const Expr& e, double m, double hbar, double tol = 1e-9) {
    return equal(e.diff(VR), Expr::c(Complex(0.0, m / hbar)) * e, tol);
}

} // namespace schrod
