#include "levilab/expr.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <unordered_map>
#include <unordered_set>

#include "levilab/error.hpp"

namespace levilab {

using detail::Node;

namespace {

Expr make(Op op, std::vector<Expr> args, int exponent = 0) {
    auto node = std::make_shared<Node>();
    node->op = op;
    node->args = std::move(args);
    node->exponent = exponent;
    return Expr(std::shared_ptr<const Node>(std::move(node)));
}

Expr make_constant(Complex c) {
    auto node = std::make_shared<Node>();
    node->op = Op::Constant;
    node->value = c;
    return Expr(std::shared_ptr<const Node>(std::move(node)));
}

Complex int_pow(Complex base, int k) {
    if (k < 0) return Complex(1.0) / int_pow(base, -k);
    Complex result(1.0);
    while (k > 0) {
        if (k & 1) result *= base;
        base *= base;
        k >>= 1;
    }
    return result;
}

const Expr& zero_expr() {
    static const Expr z = make_constant(Complex(0.0));
    return z;
}

const Expr& one_expr() {
    static const Expr o = make_constant(Complex(1.0));
    return o;
}

}  // namespace

Expr::Expr() : Expr(zero_expr()) {}
Expr::Expr(Complex c) : Expr(make_constant(c)) {}
Expr::Expr(double c) : Expr(make_constant(Complex(c))) {}
Expr::Expr(int c) : Expr(make_constant(Complex(static_cast<double>(c)))) {}
Expr::Expr(Var v) {
    auto node = std::make_shared<Node>();
    node->op = Op::Variable;
    node->var = v;
    node_ = std::move(node);
}

Op Expr::op() const noexcept { return node_->op; }

const Complex& Expr::constant() const {
    if (node_->op != Op::Constant) throw PreconditionError("expression is not a constant");
    return node_->value;
}

Var Expr::variable() const {
    if (node_->op != Op::Variable) throw PreconditionError("expression is not a variable");
    return node_->var;
}

int Expr::exponent() const { return node_->exponent; }

std::span<const Expr> Expr::args() const noexcept { return node_->args; }

bool Expr::is_zero() const noexcept {
    return node_->op == Op::Constant && node_->value == Complex(0.0);
}

bool Expr::is_one() const noexcept {
    return node_->op == Op::Constant && node_->value == Complex(1.0);
}

std::size_t Expr::dag_size() const {
    std::unordered_set<const void*> seen;
    std::vector<const Expr*> stack{this};
    while (!stack.empty()) {
        const Expr* e = stack.back();
        stack.pop_back();
        if (!seen.insert(e->id()).second) continue;
        for (const Expr& a : e->args()) stack.push_back(&a);
    }
    return seen.size();
}

// ---------------------------------------------------------------------------
// Builders

Expr sum(std::vector<Expr> terms) {
    std::vector<Expr> flat;
    flat.reserve(terms.size());
    Complex folded(0.0);
    for (Expr& t : terms) {
        if (t.op() == Op::Sum) {
            for (const Expr& inner : t.args()) {
                if (inner.is_constant())
                    folded += inner.constant();
                else
                    flat.push_back(inner);
            }
        } else if (t.is_constant()) {
            folded += t.constant();
        } else {
            flat.push_back(std::move(t));
        }
    }
    if (folded != Complex(0.0)) flat.push_back(make_constant(folded));
    if (flat.empty()) return zero_expr();
    if (flat.size() == 1) return flat.front();
    return make(Op::Sum, std::move(flat));
}

Expr product(std::vector<Expr> factors) {
    std::vector<Expr> flat;
    flat.reserve(factors.size());
    Complex folded(1.0);
    auto absorb = [&](const Expr& f) {
        if (f.is_constant())
            folded *= f.constant();
        else
            flat.push_back(f);
    };
    for (const Expr& f : factors) {
        if (f.op() == Op::Product) {
            for (const Expr& inner : f.args()) absorb(inner);
        } else if (f.op() == Op::Negate) {
            folded = -folded;
            absorb(f.args()[0]);
        } else {
            absorb(f);
        }
    }
    if (folded == Complex(0.0)) return zero_expr();
    if (flat.empty()) return make_constant(folded);
    if (folded == Complex(-1.0) && flat.size() == 1) return make(Op::Negate, {flat.front()});
    if (folded != Complex(1.0)) flat.insert(flat.begin(), make_constant(folded));
    if (flat.size() == 1) return flat.front();
    return make(Op::Product, std::move(flat));
}

Expr quotient(const Expr& num, const Expr& den) {
    if (den.is_zero()) throw PreconditionError("quotient with literal zero denominator");
    if (num.is_zero()) return zero_expr();
    if (den.is_one()) return num;
    if (den.is_constant()) return product({make_constant(Complex(1.0) / den.constant()), num});
    return make(Op::Quotient, {num, den});
}

Expr pow(const Expr& base, int exponent) {
    if (exponent == 0) return one_expr();
    if (exponent == 1) return base;
    if (base.is_constant()) {
        if (base.is_zero() && exponent < 0)
            throw PreconditionError("negative power of literal zero");
        return make_constant(int_pow(base.constant(), exponent));
    }
    if (base.op() == Op::Power) return pow(base.args()[0], base.exponent() * exponent);
    return make(Op::Power, {base}, exponent);
}

Expr negate(const Expr& e) {
    if (e.is_constant()) return make_constant(-e.constant());
    if (e.op() == Op::Negate) return e.args()[0];
    if (e.op() == Op::Product && e.args()[0].is_constant()) {
        std::vector<Expr> factors(e.args().begin(), e.args().end());
        factors[0] = make_constant(-factors[0].constant());
        return product(std::move(factors));
    }
    return make(Op::Negate, {e});
}

Expr sin(const Expr& e) {
    if (e.is_constant()) return make_constant(std::sin(e.constant()));
    return make(Op::Sin, {e});
}

Expr cos(const Expr& e) {
    if (e.is_constant()) return make_constant(std::cos(e.constant()));
    return make(Op::Cos, {e});
}

Expr exp(const Expr& e) {
    if (e.is_constant()) return make_constant(std::exp(e.constant()));
    return make(Op::Exp, {e});
}

Expr log(const Expr& e) {
    // log(0) stays symbolic so evaluation reports the domain error.
    if (e.is_constant() && !e.is_zero()) return make_constant(std::log(e.constant()));
    return make(Op::Log, {e});
}

Expr operator+(const Expr& a, const Expr& b) { return sum({a, b}); }
Expr operator-(const Expr& a, const Expr& b) { return sum({a, negate(b)}); }
Expr operator*(const Expr& a, const Expr& b) { return product({a, b}); }
Expr operator/(const Expr& a, const Expr& b) { return quotient(a, b); }
Expr operator-(const Expr& a) { return negate(a); }

Expr real_part(const Expr& e) { return product({Expr(0.5), sum({e, conjugate(e)})}); }

Expr imag_part(const Expr& e) {
    return product({Expr(Complex(0.0, -0.5)), sum({e, negate(conjugate(e))})});
}

Expr abs2(const Expr& e) { return product({e, conjugate(e)}); }

// ---------------------------------------------------------------------------
// Structural transforms

namespace {

Expr rebuild(const Expr& e, std::vector<Expr> args) {
    switch (e.op()) {
        case Op::Sum: return sum(std::move(args));
        case Op::Product: return product(std::move(args));
        case Op::Quotient: return quotient(args[0], args[1]);
        case Op::Power: return pow(args[0], e.exponent());
        case Op::Negate: return negate(args[0]);
        case Op::Sin: return sin(args[0]);
        case Op::Cos: return cos(args[0]);
        case Op::Exp: return exp(args[0]);
        case Op::Log: return log(args[0]);
        case Op::Constant:
        case Op::Variable: return e;
    }
    return e;
}

// Bottom-up map with a per-call memo keyed by node identity, so shared
// subtrees are transformed once and stay shared.
class Transformer {
public:
    using Leaf = std::function<Expr(const Expr&)>;
    explicit Transformer(Leaf leaf) : leaf_(std::move(leaf)) {}

    Expr operator()(const Expr& e) {
        if (auto it = memo_.find(e.id()); it != memo_.end()) return it->second;
        Expr out;
        if (e.op() == Op::Constant || e.op() == Op::Variable) {
            out = leaf_(e);
        } else {
            std::vector<Expr> args;
            args.reserve(e.args().size());
            for (const Expr& a : e.args()) args.push_back((*this)(a));
            out = rebuild(e, std::move(args));
        }
        memo_.emplace(e.id(), out);
        return out;
    }

private:
    Leaf leaf_;
    std::unordered_map<const void*, Expr> memo_;
};

class Deriver {
public:
    explicit Deriver(Var v) : v_(v) {}

    Expr operator()(const Expr& e) {
        if (auto it = memo_.find(e.id()); it != memo_.end()) return it->second;
        Expr d = compute(e);
        memo_.emplace(e.id(), d);
        return d;
    }

private:
    Expr compute(const Expr& e) {
        auto args = e.args();
        switch (e.op()) {
            case Op::Constant: return Expr();
            case Op::Variable: return e.variable() == v_ ? Expr(1) : Expr();
            case Op::Sum: {
                std::vector<Expr> terms;
                for (const Expr& a : args) terms.push_back((*this)(a));
                return sum(std::move(terms));
            }
            case Op::Product: {
                std::vector<Expr> terms;
                for (std::size_t i = 0; i < args.size(); ++i) {
                    Expr da = (*this)(args[i]);
                    if (da.is_zero()) continue;
                    std::vector<Expr> factors(args.begin(), args.end());
                    factors[i] = da;
                    terms.push_back(product(std::move(factors)));
                }
                return sum(std::move(terms));
            }
            case Op::Quotient: {
                const Expr& num = args[0];
                const Expr& den = args[1];
                Expr dn = (*this)(num);
                Expr dd = (*this)(den);
                if (dd.is_zero()) return quotient(dn, den);
                return quotient(dn * den - num * dd, pow(den, 2));
            }
            case Op::Power: {
                Expr da = (*this)(args[0]);
                if (da.is_zero()) return Expr();
                return product({Expr(e.exponent()), pow(args[0], e.exponent() - 1), da});
            }
            case Op::Negate: return negate((*this)(args[0]));
            case Op::Sin: {
                Expr da = (*this)(args[0]);
                if (da.is_zero()) return Expr();
                return cos(args[0]) * da;
            }
            case Op::Cos: {
                Expr da = (*this)(args[0]);
                if (da.is_zero()) return Expr();
                return negate(sin(args[0]) * da);
            }
            case Op::Exp: {
                Expr da = (*this)(args[0]);
                if (da.is_zero()) return Expr();
                return e * da;
            }
            case Op::Log: {
                Expr da = (*this)(args[0]);
                if (da.is_zero()) return Expr();
                return quotient(da, args[0]);
            }
        }
        return Expr();
    }

    Var v_;
    std::unordered_map<const void*, Expr> memo_;
};

bool any_leaf(const Expr& e, const std::function<bool(const Expr&)>& pred) {
    std::unordered_set<const void*> seen;
    std::vector<Expr> stack{e};
    while (!stack.empty()) {
        Expr cur = stack.back();
        stack.pop_back();
        if (!seen.insert(cur.id()).second) continue;
        if (cur.op() == Op::Variable || cur.op() == Op::Constant) {
            if (pred(cur)) return true;
            continue;
        }
        for (const Expr& a : cur.args()) stack.push_back(a);
    }
    return false;
}

}  // namespace

Expr conjugate(const Expr& e) {
    Transformer t([](const Expr& leaf) -> Expr {
        if (leaf.is_constant()) return Expr(std::conj(leaf.constant()));
        return Expr(leaf.variable().conjugate());
    });
    return t(e);
}

Expr derive(const Expr& e, Var v) {
    Deriver d(v);
    return d(e);
}

Expr normalize(const Expr& e) {
    Transformer t([](const Expr& leaf) { return leaf; });
    return t(e);
}

bool structurally_equal(const Expr& a, const Expr& b) {
    if (a.id() == b.id()) return true;
    if (a.op() != b.op()) return false;
    switch (a.op()) {
        case Op::Constant: return a.constant() == b.constant();
        case Op::Variable: return a.variable() == b.variable();
        case Op::Power:
            if (a.exponent() != b.exponent()) return false;
            break;
        default: break;
    }
    auto xs = a.args();
    auto ys = b.args();
    if (xs.size() != ys.size()) return false;
    if (a.op() == Op::Sum || a.op() == Op::Product) {
        // Commutative: compare as multisets.
        std::vector<bool> used(ys.size(), false);
        for (const Expr& x : xs) {
            bool matched = false;
            for (std::size_t j = 0; j < ys.size(); ++j) {
                if (!used[j] && structurally_equal(x, ys[j])) {
                    used[j] = true;
                    matched = true;
                    break;
                }
            }
            if (!matched) return false;
        }
        return true;
    }
    for (std::size_t i = 0; i < xs.size(); ++i)
        if (!structurally_equal(xs[i], ys[i])) return false;
    return true;
}

bool contains_var(const Expr& e, Var v) {
    return any_leaf(e, [v](const Expr& leaf) {
        return leaf.op() == Op::Variable && leaf.variable() == v;
    });
}

bool contains_kind(const Expr& e, VarKind kind) {
    return any_leaf(e, [kind](const Expr& leaf) {
        return leaf.op() == Op::Variable && leaf.variable().kind == kind;
    });
}

bool is_manifestly_real(const Expr& e) {
    return structurally_equal(normalize(e), conjugate(e));
}

// ---------------------------------------------------------------------------
// Printing

std::string VarNames::name(Var v) const {
    switch (v.kind) {
        case VarKind::Holo: return "z" + std::to_string(v.index + 1);
        case VarKind::AntiHolo: return "zb" + std::to_string(v.index + 1);
        case VarKind::Param:
            if (v.index >= 0 && static_cast<std::size_t>(v.index) < params.size())
                return params[static_cast<std::size_t>(v.index)];
            return "p" + std::to_string(v.index + 1);
    }
    return "?";
}

namespace {

std::string format_double(double x) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    if (ec != std::errc()) return std::to_string(x);
    return std::string(buf, ptr);
}

std::string format_constant(Complex c) {
    if (c.imag() == 0.0) return format_double(c.real());
    if (c.real() == 0.0) {
        if (c.imag() == 1.0) return "i";
        if (c.imag() == -1.0) return "-i";
        return format_double(c.imag()) + "*i";
    }
    std::string im = c.imag() < 0 ? " - " + format_double(-c.imag()) : " + " + format_double(c.imag());
    return "(" + format_double(c.real()) + im + "*i)";
}

int precedence(const Expr& e) {
    switch (e.op()) {
        case Op::Sum: return 1;
        case Op::Product:
        case Op::Quotient: return 2;
        case Op::Negate: return 3;
        case Op::Power: return 4;
        case Op::Constant: {
            Complex c = e.constant();
            if (c.imag() == 0.0 && c.real() < 0) return 3;
            if (c.real() == 0.0 && c.imag() != 0.0 && c.imag() != 1.0) return 2;
            return 5;
        }
        default: return 5;
    }
}

void print(const Expr& e, const VarNames& names, std::string& out);

void print_child(const Expr& child, int parent_prec, const VarNames& names, std::string& out,
                 bool strict = false) {
    int p = precedence(child);
    bool paren = strict ? p <= parent_prec : p < parent_prec;
    if (paren) out += '(';
    print(child, names, out);
    if (paren) out += ')';
}

void print(const Expr& e, const VarNames& names, std::string& out) {
    auto args = e.args();
    switch (e.op()) {
        case Op::Constant: out += format_constant(e.constant()); return;
        case Op::Variable: out += names.name(e.variable()); return;
        case Op::Sum:
            for (std::size_t i = 0; i < args.size(); ++i) {
                if (i > 0) {
                    if (args[i].is_constant() && args[i].constant().imag() == 0.0 &&
                        args[i].constant().real() < 0) {
                        out += " - " + format_double(-args[i].constant().real());
                        continue;
                    }
                    if (args[i].op() == Op::Negate) {
                        out += " - ";
                        print_child(args[i].args()[0], 2, names, out);
                        continue;
                    }
                    out += " + ";
                }
                print_child(args[i], 1, names, out);
            }
            return;
        case Op::Product:
            for (std::size_t i = 0; i < args.size(); ++i) {
                if (i > 0) out += '*';
                print_child(args[i], 2, names, out, i > 0);
            }
            return;
        case Op::Quotient:
            print_child(args[0], 2, names, out);
            out += '/';
            print_child(args[1], 2, names, out, true);
            return;
        case Op::Power:
            print_child(args[0], 4, names, out, true);
            out += '^';
            if (e.exponent() < 0)
                out += "(" + std::to_string(e.exponent()) + ")";
            else
                out += std::to_string(e.exponent());
            return;
        case Op::Negate:
            out += '-';
            print_child(args[0], 3, names, out, true);
            return;
        case Op::Sin: out += "sin("; break;
        case Op::Cos: out += "cos("; break;
        case Op::Exp: out += "exp("; break;
        case Op::Log: out += "log("; break;
    }
    print(args[0], names, out);
    out += ')';
}

}  // namespace

std::string to_string(const Expr& e, const VarNames& names) {
    std::string out;
    print(e, names, out);
    return out;
}

}  // namespace levilab
