#pragma once

// Immutable expression DAGs over holomorphic variables z_j, their formal
// conjugates zb_j, and real parameters. Every builder simplifies locally
// (constant folding, 0/1 identities, flattening), so trees built through
// this header are already in normal form.

#include <compare>
#include <complex>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace levilab {

using Complex = std::complex<double>;

enum class VarKind : std::uint8_t { Holo, AntiHolo, Param };

/// A formal variable. Indices are zero-based: z1 is Var::holo(0).
struct Var {
    VarKind kind = VarKind::Holo;
    int index = 0;

    static constexpr Var holo(int j) { return {VarKind::Holo, j}; }
    static constexpr Var antiholo(int j) { return {VarKind::AntiHolo, j}; }
    static constexpr Var param(int k) { return {VarKind::Param, k}; }

    /// z_j <-> zb_j; parameters are real and map to themselves.
    constexpr Var conjugate() const {
        switch (kind) {
            case VarKind::Holo: return antiholo(index);
            case VarKind::AntiHolo: return holo(index);
            case VarKind::Param: return *this;
        }
        return *this;
    }

    friend constexpr auto operator<=>(const Var&, const Var&) = default;
};

enum class Op : std::uint8_t {
    Constant,
    Variable,
    Sum,
    Product,
    Quotient,
    Power,
    Negate,
    Sin,
    Cos,
    Exp,
    Log,
};

class Expr;

namespace detail {
struct Node;
}

class Expr {
public:
    /// The zero constant.
    Expr();
    Expr(Complex c);  // NOLINT(google-explicit-constructor)
    Expr(double c);   // NOLINT(google-explicit-constructor)
    Expr(int c);      // NOLINT(google-explicit-constructor)
    Expr(Var v);      // NOLINT(google-explicit-constructor)

    Op op() const noexcept;
    const Complex& constant() const;
    Var variable() const;
    int exponent() const;
    std::span<const Expr> args() const noexcept;

    bool is_constant() const noexcept { return op() == Op::Constant; }
    bool is_zero() const noexcept;
    bool is_one() const noexcept;

    /// Node identity, stable for the lifetime of the expression. Used as a
    /// memo key by the derivative and evaluation engines.
    const void* id() const noexcept { return node_.get(); }

    /// Number of distinct nodes in the DAG.
    std::size_t dag_size() const;

    explicit Expr(std::shared_ptr<const detail::Node> node) : node_(std::move(node)) {}
    const detail::Node& node() const noexcept { return *node_; }

private:
    std::shared_ptr<const detail::Node> node_;
};

// Simplifying builders.
Expr sum(std::vector<Expr> terms);
Expr product(std::vector<Expr> factors);
Expr quotient(const Expr& num, const Expr& den);
Expr pow(const Expr& base, int exponent);
Expr negate(const Expr& e);
Expr sin(const Expr& e);
Expr cos(const Expr& e);
Expr exp(const Expr& e);
Expr log(const Expr& e);

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);

// Derived forms from the expression grammar.
Expr real_part(const Expr& e);  // (e + conj e) / 2
Expr imag_part(const Expr& e);  // (e - conj e) / (2i)
Expr abs2(const Expr& e);       // e * conj e

/// Swaps z_j and zb_j, conjugates constants, fixes parameters.
/// An involution on normalized expressions.
Expr conjugate(const Expr& e);

/// Partial derivative treating every z_j, zb_j, and parameter as an
/// independent formal variable.
Expr derive(const Expr& e, Var v);

/// Rebuilds `e` through the simplifying builders. Idempotent.
Expr normalize(const Expr& e);

bool structurally_equal(const Expr& a, const Expr& b);

bool contains_var(const Expr& e, Var v);
bool contains_kind(const Expr& e, VarKind kind);

/// True when `e` and conjugate(e) normalize to the same tree.
bool is_manifestly_real(const Expr& e);

/// Display names for parameters; holomorphic variables print as z1, zb1.
struct VarNames {
    std::vector<std::string> params;
    std::string name(Var v) const;
};

std::string to_string(const Expr& e, const VarNames& names = {});

namespace detail {

struct Node {
    Op op;
    Complex value{};
    Var var{};
    int exponent = 0;
    std::vector<Expr> args;
};

}  // namespace detail

}  // namespace levilab
