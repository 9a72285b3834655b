#include "levilab/eval.hpp"

#include <cmath>

#include "levilab/error.hpp"

namespace levilab {

Assignment Assignment::on_surface(std::span<const Complex> point, std::span<const double> params) {
    Assignment a;
    a.holo_.assign(point.begin(), point.end());
    a.anti_.reserve(point.size());
    for (Complex z : point) a.anti_.push_back(std::conj(z));
    for (double p : params) a.params_.emplace_back(p);
    a.on_surface_ = true;
    return a;
}

Assignment Assignment::formal(std::span<const Complex> holo, std::span<const Complex> antiholo,
                              std::span<const Complex> params) {
    if (holo.size() != antiholo.size())
        throw PreconditionError("holomorphic and antiholomorphic slot counts differ");
    Assignment a;
    a.holo_.assign(holo.begin(), holo.end());
    a.anti_.assign(antiholo.begin(), antiholo.end());
    a.params_.assign(params.begin(), params.end());
    a.on_surface_ = true;
    for (std::size_t j = 0; j < holo.size(); ++j)
        if (a.anti_[j] != std::conj(a.holo_[j])) a.on_surface_ = false;
    for (Complex p : a.params_)
        if (p.imag() != 0.0) a.on_surface_ = false;
    return a;
}

Assignment Assignment::parameters(std::span<const Complex> params) {
    return formal({}, {}, params);
}

bool Assignment::has(Var v) const noexcept {
    auto idx = static_cast<std::size_t>(v.index);
    if (v.index < 0) return false;
    switch (v.kind) {
        case VarKind::Holo: return idx < holo_.size();
        case VarKind::AntiHolo: return idx < anti_.size();
        case VarKind::Param: return idx < params_.size();
    }
    return false;
}

Complex Assignment::get(Var v) const {
    if (!has(v)) throw DomainError("unbound variable", VarNames{}.name(v));
    auto idx = static_cast<std::size_t>(v.index);
    switch (v.kind) {
        case VarKind::Holo: return holo_[idx];
        case VarKind::AntiHolo: return anti_[idx];
        case VarKind::Param: return params_[idx];
    }
    return {};
}

Assignment Assignment::with(Var v, Complex value) const {
    Assignment a = *this;
    auto idx = static_cast<std::size_t>(v.index);
    auto& slot = v.kind == VarKind::Holo ? a.holo_ : v.kind == VarKind::AntiHolo ? a.anti_ : a.params_;
    if (slot.size() <= idx) slot.resize(idx + 1);
    slot[idx] = value;
    a.on_surface_ = false;
    return a;
}

Complex Evaluator::operator()(const Expr& e) {
    if (auto it = memo_.find(e.id()); it != memo_.end()) return it->second;
    Complex v = compute(e);
    memo_.emplace(e.id(), v);
    return v;
}

Complex Evaluator::compute(const Expr& e) {
    auto args = e.args();
    switch (e.op()) {
        case Op::Constant: return e.constant();
        case Op::Variable: {
            Var v = e.variable();
            if (!assignment_.has(v)) throw DomainError("unbound variable", names_.name(v));
            return assignment_.get(v);
        }
        case Op::Sum: {
            Complex s(0.0);
            for (const Expr& a : args) s += (*this)(a);
            return s;
        }
        case Op::Product: {
            Complex p(1.0);
            for (const Expr& a : args) p *= (*this)(a);
            return p;
        }
        case Op::Quotient: {
            Complex den = (*this)(args[1]);
            if (den == Complex(0.0)) throw DomainError("division by zero", to_string(e));
            return (*this)(args[0]) / den;
        }
        case Op::Power: {
            Complex base = (*this)(args[0]);
            int k = e.exponent();
            if (k < 0 && base == Complex(0.0))
                throw DomainError("negative power of zero", to_string(e));
            Complex r(1.0);
            Complex b = k < 0 ? Complex(1.0) / base : base;
            for (unsigned n = static_cast<unsigned>(k < 0 ? -k : k); n > 0; n >>= 1) {
                if (n & 1u) r *= b;
                b *= b;
            }
            return r;
        }
        case Op::Negate: return -(*this)(args[0]);
        case Op::Sin: return std::sin((*this)(args[0]));
        case Op::Cos: return std::cos((*this)(args[0]));
        case Op::Exp: return std::exp((*this)(args[0]));
        case Op::Log: {
            Complex x = (*this)(args[0]);
            if (x == Complex(0.0)) throw DomainError("log of zero", to_string(e));
            return std::log(x);
        }
    }
    return {};
}

Complex eval_complex(const Expr& e, const Assignment& a) {
    Evaluator ev(a);
    return ev(e);
}

}  // namespace levilab
