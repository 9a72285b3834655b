#pragma once

#include <span>
#include <unordered_map>
#include <vector>

#include "levilab/expr.hpp"

namespace levilab {

/// Values for every formal variable of an evaluation. When the on-surface
/// flag is set, zb_j carries conj(z_j) for every j.
class Assignment {
public:
    Assignment() = default;

    /// Binds z to `point`, zb to its conjugate, and real parameters.
    static Assignment on_surface(std::span<const Complex> point, std::span<const double> params = {});

    /// Independent values for z, zb, and (possibly complex) parameters.
    static Assignment formal(std::span<const Complex> holo, std::span<const Complex> antiholo,
                             std::span<const Complex> params = {});

    /// Parameters only; used for manifold components, which carry no z.
    static Assignment parameters(std::span<const Complex> params);

    Complex get(Var v) const;
    bool has(Var v) const noexcept;
    bool on_surface() const noexcept { return on_surface_; }

    /// Copy with one variable rebound. Clears the on-surface flag.
    Assignment with(Var v, Complex value) const;

private:
    std::vector<Complex> holo_;
    std::vector<Complex> anti_;
    std::vector<Complex> params_;
    bool on_surface_ = false;
};

/// Memoizing evaluator: nodes shared between expressions evaluated through
/// the same instance are computed once. Not thread-safe; use one per worker.
class Evaluator {
public:
    explicit Evaluator(Assignment a) : assignment_(std::move(a)) {}

    Complex operator()(const Expr& e);
    const Assignment& assignment() const noexcept { return assignment_; }

private:
    Complex compute(const Expr& e);

    Assignment assignment_;
    std::unordered_map<const void*, Complex> memo_;
    VarNames names_;
};

/// Throws DomainError on log(0), division by zero, or an unbound variable.
Complex eval_complex(const Expr& e, const Assignment& a);

}  // namespace levilab
