#pragma once

// Holomorphic tangent frames, vector-field brackets, Bloom-Graham type,
// and the higher Levi forms of a real hypersurface {rho = 0} in C^n.
// The domain is always {rho < 0}.

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "levilab/eval.hpp"
#include "levilab/expr.hpp"

namespace levilab {

using Point = std::vector<Complex>;

struct Tolerances {
    double zero = 1e-9;        // contraction / pivot magnitude threshold
    double on_surface = 1e-9;  // |rho(p)| admissible for "p on the surface"
    double tangency = 1e-8;    // normalized pairing with d rho

    friend bool operator==(const Tolerances&, const Tolerances&) = default;
};

/// Complexified tangent field sum_j a_j d/dz_j + sum_j b_j d/dzb_j.
class VectorField {
public:
    VectorField() = default;
    VectorField(std::vector<Expr> holo, std::vector<Expr> anti);

    static VectorField zero(int n);
    /// d/dz_j or d/dzb_j.
    static VectorField coordinate(int n, Var v);

    int dimension() const noexcept { return static_cast<int>(holo_.size()); }
    const Expr& holo(int j) const { return holo_.at(static_cast<std::size_t>(j)); }
    const Expr& anti(int j) const { return anti_.at(static_cast<std::size_t>(j)); }
    std::span<const Expr> holo_coeffs() const noexcept { return holo_; }
    std::span<const Expr> anti_coeffs() const noexcept { return anti_; }

    bool is_structurally_zero() const noexcept;
    /// No d/dzb components.
    bool is_type_10() const noexcept;

    /// Conjugate coefficients and swap the d/dz and d/dzb slots.
    VectorField conjugate() const;

    /// The coefficient vector (holo..., anti...) at an assignment.
    std::vector<Complex> evaluate(Evaluator& ev) const;

    friend VectorField operator*(const Expr& f, const VectorField& v);

private:
    std::vector<Expr> holo_;
    std::vector<Expr> anti_;
};

/// V(e) = sum_j a_j de/dz_j + sum_j b_j de/dzb_j.
Expr apply_field(const VectorField& v, const Expr& e);

/// [V, W], coefficientwise V(W_c) - W(V_c) over all 2n slots.
VectorField commutator(const VectorField& v, const VectorField& w);

/// Multi-index over the n-1 tangent directions.
class MultiIndex {
public:
    MultiIndex() = default;
    explicit MultiIndex(std::vector<int> entries);
    static MultiIndex unit(int dim, int j);

    int dim() const noexcept { return static_cast<int>(entries_.size()); }
    int operator[](int j) const { return entries_.at(static_cast<std::size_t>(j)); }
    std::span<const int> entries() const noexcept { return entries_; }

    int order() const noexcept;       // |alpha|
    double factorial() const noexcept;  // alpha!
    bool is_zero() const noexcept { return order() == 0; }

    /// Decrements entry mu when it is at least one, otherwise the zero
    /// multi-index.
    MultiIndex star(int mu) const;

    /// Smallest mu with entry >= 1.
    std::optional<int> first_admissible() const;

    /// All multi-indices of dimension `dim` and order `total`, in
    /// lexicographically decreasing order.
    static std::vector<MultiIndex> of_order(int dim, int total);

    friend bool operator==(const MultiIndex&, const MultiIndex&) = default;

private:
    std::vector<int> entries_;
};

std::string to_string(const MultiIndex& a);

/// The (1,0) frame S_j = d/dz_j - (rho_{z_j} / rho_{z_pivot}) d/dz_pivot,
/// j != pivot, together with the conjugate frame.
struct TangentBasis {
    int pivot = 0;
    std::vector<int> coords;  // the non-pivot coordinate index behind each S_j
    std::vector<VectorField> fields;
    std::vector<VectorField> conj_fields;
};

/// One iterated left-nested bracket of the generators
/// {S_1..S_{n-1}, Sb_1..Sb_{n-1}} (generator ids 0..2n-3).
struct Bracket {
    std::vector<int> word;
    VectorField field;
    Expr contraction;  // < field, dbar rho >
};

class Hypersurface {
public:
    /// `rho` may only reference z and zb variables and must be real valued.
    Hypersurface(int n, Expr rho, Tolerances tol = {});

    int n() const noexcept;
    const Expr& rho() const noexcept;
    const Tolerances& tolerances() const noexcept;

    const Expr& d_holo(int j) const;  // rho_{z_j}
    const Expr& d_anti(int j) const;  // rho_{zb_j}

    double value(std::span<const Complex> p) const;
    std::vector<Complex> gradient(std::span<const Complex> p) const;
    bool on_surface(std::span<const Complex> p) const;

    /// argmax_j |rho_{z_j}(p)|, ties to the lowest index. Throws
    /// SingularPointError when every |rho_{z_j}(p)| <= tolerances().zero.
    int pivot_at(std::span<const Complex> p) const;

    /// Symbolic frame for a fixed pivot; built once and shared.
    const TangentBasis& basis(int pivot) const;

    /// Left-nested brackets of exact length `length` for a pivot, built
    /// lazily and cached. Thread-safe.
    const std::vector<Bracket>& brackets(int pivot, int length) const;

    /// -S^{alpha*mu} Sb^{beta*nu} <[S_mu, Sb_nu], dbar rho> as an expression.
    Expr levi_coefficient_expr(int pivot, const MultiIndex& alpha, const MultiIndex& beta, int mu,
                               int nu) const;

private:
    struct Impl;
    std::shared_ptr<Impl> impl_;
};

/// Upper bound on brackets per level before enumeration gives up.
inline constexpr std::size_t kBracketBudget = 1u << 15;

TangentBasis holomorphic_tangent_basis(const Hypersurface& hs, std::span<const Complex> p);

/// sum_j (d/dzb_j coefficient of V) * rho_{zb_j}.
Expr contract_dbar_rho(const VectorField& v, const Hypersurface& hs);

struct TypeReport {
    Point point;
    std::optional<int> type;           // nullopt: exceeds max_order
    std::vector<double> level_witness;  // [j-1] = max |<bracket, dbar rho>| over length-j brackets
    double scale = 1.0;
    int pivot = 0;
    int max_order = 0;

    bool exceeds_max_order() const noexcept { return !type.has_value(); }
};

TypeReport bloom_graham_type(const Hypersurface& hs, std::span<const Complex> p, int max_order = 8);

/// Coefficient a_{alpha beta}(p) with the smallest admissible (mu, nu).
Complex levi_coefficient(const Hypersurface& hs, std::span<const Complex> p, const MultiIndex& alpha,
                         const MultiIndex& beta);

/// Same, with an explicit admissible (mu, nu) (zero-based).
Complex levi_coefficient(const Hypersurface& hs, std::span<const Complex> p, const MultiIndex& alpha,
                         const MultiIndex& beta, int mu, int nu);

struct LeviValue {
    int k = 0;
    double value = 0.0;
    double imag_residual = 0.0;
};

/// k-th Levi form at p on zeta, the coefficients of v in the S-frame of p.
LeviValue levi_form(const Hypersurface& hs, std::span<const Complex> p, int k, std::span<const Complex> zeta);

/// S-frame coordinates of the ambient vector xi in H_p.
std::vector<Complex> identify_tangent(const Hypersurface& hs, std::span<const Complex> p,
                                      std::span<const Complex> xi);

}  // namespace levilab
