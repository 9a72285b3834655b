#include "levilab/cr_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <mutex>
#include <numeric>

#include "levilab/error.hpp"

namespace levilab {

// ---------------------------------------------------------------------------
// VectorField

VectorField::VectorField(std::vector<Expr> holo, std::vector<Expr> anti)
    : holo_(std::move(holo)), anti_(std::move(anti)) {
    if (holo_.size() != anti_.size())
        throw PreconditionError("vector field needs the same number of d/dz and d/dzb slots");
}

VectorField VectorField::zero(int n) {
    auto count = static_cast<std::size_t>(n);
    return VectorField(std::vector<Expr>(count), std::vector<Expr>(count));
}

VectorField VectorField::coordinate(int n, Var v) {
    VectorField f = zero(n);
    auto j = static_cast<std::size_t>(v.index);
    if (v.kind == VarKind::Holo)
        f.holo_.at(j) = Expr(1);
    else if (v.kind == VarKind::AntiHolo)
        f.anti_.at(j) = Expr(1);
    else
        throw PreconditionError("coordinate fields exist only for z and zb");
    return f;
}

bool VectorField::is_structurally_zero() const noexcept {
    auto zero = [](const Expr& e) { return e.is_zero(); };
    return std::all_of(holo_.begin(), holo_.end(), zero) && std::all_of(anti_.begin(), anti_.end(), zero);
}

bool VectorField::is_type_10() const noexcept {
    return std::all_of(anti_.begin(), anti_.end(), [](const Expr& e) { return e.is_zero(); });
}

VectorField VectorField::conjugate() const {
    std::vector<Expr> holo;
    std::vector<Expr> anti;
    for (const Expr& a : anti_) holo.push_back(levilab::conjugate(a));
    for (const Expr& h : holo_) anti.push_back(levilab::conjugate(h));
    return VectorField(std::move(holo), std::move(anti));
}

std::vector<Complex> VectorField::evaluate(Evaluator& ev) const {
    std::vector<Complex> out;
    out.reserve(holo_.size() * 2);
    for (const Expr& h : holo_) out.push_back(ev(h));
    for (const Expr& a : anti_) out.push_back(ev(a));
    return out;
}

VectorField operator*(const Expr& f, const VectorField& v) {
    std::vector<Expr> holo;
    std::vector<Expr> anti;
    for (const Expr& h : v.holo_) holo.push_back(f * h);
    for (const Expr& a : v.anti_) anti.push_back(f * a);
    return VectorField(std::move(holo), std::move(anti));
}

Expr apply_field(const VectorField& v, const Expr& e) {
    std::vector<Expr> terms;
    for (int j = 0; j < v.dimension(); ++j) {
        if (!v.holo(j).is_zero()) {
            Expr d = derive(e, Var::holo(j));
            if (!d.is_zero()) terms.push_back(v.holo(j) * d);
        }
        if (!v.anti(j).is_zero()) {
            Expr d = derive(e, Var::antiholo(j));
            if (!d.is_zero()) terms.push_back(v.anti(j) * d);
        }
    }
    return sum(std::move(terms));
}

VectorField commutator(const VectorField& v, const VectorField& w) {
    if (v.dimension() != w.dimension()) throw PreconditionError("commutator of fields of different dimension");
    bool same = true;
    for (int j = 0; j < v.dimension() && same; ++j)
        same = v.holo(j).id() == w.holo(j).id() && v.anti(j).id() == w.anti(j).id();
    if (same) return VectorField::zero(v.dimension());
    auto slot = [&](const Expr& vc, const Expr& wc) { return apply_field(v, wc) - apply_field(w, vc); };
    std::vector<Expr> holo;
    std::vector<Expr> anti;
    for (int j = 0; j < v.dimension(); ++j) {
        holo.push_back(slot(v.holo(j), w.holo(j)));
        anti.push_back(slot(v.anti(j), w.anti(j)));
    }
    return VectorField(std::move(holo), std::move(anti));
}

// ---------------------------------------------------------------------------
// MultiIndex

MultiIndex::MultiIndex(std::vector<int> entries) : entries_(std::move(entries)) {
    for (int e : entries_)
        if (e < 0) throw PreconditionError("multi-index entries must be nonnegative");
}

MultiIndex MultiIndex::unit(int dim, int j) {
    std::vector<int> e(static_cast<std::size_t>(dim), 0);
    e.at(static_cast<std::size_t>(j)) = 1;
    return MultiIndex(std::move(e));
}

int MultiIndex::order() const noexcept { return std::accumulate(entries_.begin(), entries_.end(), 0); }

double MultiIndex::factorial() const noexcept {
    double f = 1.0;
    for (int e : entries_)
        for (int k = 2; k <= e; ++k) f *= k;
    return f;
}

MultiIndex MultiIndex::star(int mu) const {
    std::vector<int> e = entries_;
    auto m = static_cast<std::size_t>(mu);
    if (e.at(m) >= 1) {
        --e[m];
        return MultiIndex(std::move(e));
    }
    return MultiIndex(std::vector<int>(entries_.size(), 0));
}

std::optional<int> MultiIndex::first_admissible() const {
    for (std::size_t j = 0; j < entries_.size(); ++j)
        if (entries_[j] >= 1) return static_cast<int>(j);
    return std::nullopt;
}

std::vector<MultiIndex> MultiIndex::of_order(int dim, int total) {
    std::vector<MultiIndex> out;
    std::vector<int> cur(static_cast<std::size_t>(dim), 0);
    auto rec = [&](auto&& self, int pos, int remaining) -> void {
        if (pos == dim - 1) {
            cur[static_cast<std::size_t>(pos)] = remaining;
            out.emplace_back(cur);
            return;
        }
        for (int v = remaining; v >= 0; --v) {
            cur[static_cast<std::size_t>(pos)] = v;
            self(self, pos + 1, remaining - v);
        }
    };
    if (dim > 0) rec(rec, 0, total);
    return out;
}

std::string to_string(const MultiIndex& a) {
    std::string s = "(";
    for (int j = 0; j < a.dim(); ++j) {
        if (j > 0) s += ",";
        s += std::to_string(a[j]);
    }
    return s + ")";
}

// ---------------------------------------------------------------------------
// Hypersurface

namespace {

double point_scale(std::span<const Complex> p) {
    double m = 0.0;
    for (Complex z : p) m = std::max(m, std::abs(z));
    return 1.0 + m;
}

}  // namespace

struct Hypersurface::Impl {
    int n = 0;
    Expr rho;
    Tolerances tol;
    std::vector<Expr> d_holo;
    std::vector<Expr> d_anti;
    std::vector<TangentBasis> bases;  // indexed by pivot

    struct Tower {
        std::mutex mutex;
        std::deque<std::vector<Bracket>> levels;  // levels[j-1] holds length-j brackets
    };
    std::vector<std::unique_ptr<Tower>> towers;

    std::mutex coeff_mutex;
    std::map<std::vector<int>, Expr> coeff_cache;
};

Hypersurface::Hypersurface(int n, Expr rho, Tolerances tol) : impl_(std::make_shared<Impl>()) {
    if (n < 2) throw ValidationError("hypersurface dimension n must be at least 2");
    if (contains_kind(rho, VarKind::Param)) throw ValidationError("defining function may not reference parameters");
    impl_->n = n;
    impl_->rho = rho;
    impl_->tol = tol;

    if (!is_manifestly_real(rho)) {
        // Fall back to sampling when the tree is not self-conjugate on its face.
        const Complex samples[] = {{0.3, -0.7}, {1.1, 0.4}, {-0.6, 0.2}, {0.9, 0.9}};
        for (int s = 0; s < 4; ++s) {
            Point p;
            for (int j = 0; j < n; ++j) p.push_back(samples[(s + j) % 4] * (1.0 + 0.1 * j));
            try {
                Complex v = eval_complex(rho, Assignment::on_surface(p));
                if (std::abs(v.imag()) > 1e-12 * (1.0 + std::abs(v)))
                    throw ValidationError("defining function is not real valued");
            } catch (const DomainError&) {
                // Sample outside the domain of rho; try the next one.
            }
        }
    }

    for (int j = 0; j < n; ++j) {
        impl_->d_holo.push_back(derive(rho, Var::holo(j)));
        impl_->d_anti.push_back(derive(rho, Var::antiholo(j)));
    }
    for (int pivot = 0; pivot < n; ++pivot) {
        TangentBasis b;
        b.pivot = pivot;
        const Expr& rp = impl_->d_holo[static_cast<std::size_t>(pivot)];
        for (int j = 0; j < n; ++j) {
            if (j == pivot) continue;
            b.coords.push_back(j);
            std::vector<Expr> holo(static_cast<std::size_t>(n));
            holo[static_cast<std::size_t>(j)] = Expr(1);
            const Expr& rj = impl_->d_holo[static_cast<std::size_t>(j)];
            if (!rj.is_zero()) {
                if (rp.is_zero())
                    holo[static_cast<std::size_t>(pivot)] = Expr(0);
                else
                    holo[static_cast<std::size_t>(pivot)] = negate(quotient(rj, rp));
            }
            VectorField s(std::move(holo), std::vector<Expr>(static_cast<std::size_t>(n)));
            b.conj_fields.push_back(s.conjugate());
            b.fields.push_back(std::move(s));
        }
        impl_->bases.push_back(std::move(b));
        impl_->towers.push_back(std::make_unique<Impl::Tower>());
    }
}

int Hypersurface::n() const noexcept { return impl_->n; }
const Expr& Hypersurface::rho() const noexcept { return impl_->rho; }
const Tolerances& Hypersurface::tolerances() const noexcept { return impl_->tol; }
const Expr& Hypersurface::d_holo(int j) const { return impl_->d_holo.at(static_cast<std::size_t>(j)); }
const Expr& Hypersurface::d_anti(int j) const { return impl_->d_anti.at(static_cast<std::size_t>(j)); }

double Hypersurface::value(std::span<const Complex> p) const {
    return eval_complex(impl_->rho, Assignment::on_surface(p)).real();
}

std::vector<Complex> Hypersurface::gradient(std::span<const Complex> p) const {
    Evaluator ev(Assignment::on_surface(p));
    std::vector<Complex> g;
    for (const Expr& d : impl_->d_holo) g.push_back(ev(d));
    return g;
}

bool Hypersurface::on_surface(std::span<const Complex> p) const {
    return std::abs(value(p)) <= impl_->tol.on_surface * point_scale(p);
}

int Hypersurface::pivot_at(std::span<const Complex> p) const {
    if (static_cast<int>(p.size()) != impl_->n) throw PreconditionError("point has the wrong dimension");
    std::vector<Complex> g = gradient(p);
    int best = 0;
    for (int j = 1; j < impl_->n; ++j)
        if (std::abs(g[static_cast<std::size_t>(j)]) > std::abs(g[static_cast<std::size_t>(best)])) best = j;
    if (std::abs(g[static_cast<std::size_t>(best)]) <= impl_->tol.zero)
        throw SingularPointError("singular point: every |rho_z_j| is below tolerance");
    return best;
}

const TangentBasis& Hypersurface::basis(int pivot) const {
    return impl_->bases.at(static_cast<std::size_t>(pivot));
}

const std::vector<Bracket>& Hypersurface::brackets(int pivot, int length) const {
    if (length < 1) throw PreconditionError("bracket length must be at least 1");
    Impl::Tower& tower = *impl_->towers.at(static_cast<std::size_t>(pivot));
    std::lock_guard lock(tower.mutex);
    const TangentBasis& b = basis(pivot);
    std::vector<const VectorField*> gens;
    for (const VectorField& f : b.fields) gens.push_back(&f);
    for (const VectorField& f : b.conj_fields) gens.push_back(&f);
    const int g = static_cast<int>(gens.size());

    while (static_cast<int>(tower.levels.size()) < length) {
        const int level = static_cast<int>(tower.levels.size()) + 1;
        std::vector<Bracket> next;
        auto add = [&](std::vector<int> word, VectorField field) {
            if (field.is_structurally_zero()) return;
            if (next.size() >= kBracketBudget)
                throw Error("bracket enumeration budget exceeded at length " + std::to_string(level));
            Expr c = contract_dbar_rho(field, *this);
            next.push_back(Bracket{std::move(word), std::move(field), std::move(c)});
        };
        if (level == 1) {
            for (int a = 0; a < g; ++a) add({a}, *gens[static_cast<std::size_t>(a)]);
        } else if (level == 2) {
            // [X_a, X_a] = 0 and [X_b, X_a] = -[X_a, X_b].
            for (int a = 0; a < g; ++a)
                for (int c = a + 1; c < g; ++c)
                    add({a, c}, commutator(*gens[static_cast<std::size_t>(a)], *gens[static_cast<std::size_t>(c)]));
        } else {
            const std::vector<Bracket>& prev = tower.levels.back();
            for (int a = 0; a < g; ++a)
                for (const Bracket& inner : prev) {
                    std::vector<int> word{a};
                    word.insert(word.end(), inner.word.begin(), inner.word.end());
                    add(std::move(word), commutator(*gens[static_cast<std::size_t>(a)], inner.field));
                }
        }
        tower.levels.push_back(std::move(next));
    }
    return tower.levels[static_cast<std::size_t>(length - 1)];
}

Expr Hypersurface::levi_coefficient_expr(int pivot, const MultiIndex& alpha, const MultiIndex& beta, int mu,
                                         int nu) const {
    const int dim = impl_->n - 1;
    if (alpha.dim() != dim || beta.dim() != dim)
        throw PreconditionError("multi-index dimension must be n-1 = " + std::to_string(dim));
    if (alpha.is_zero() || beta.is_zero())
        throw PreconditionError("Levi coefficient needs |alpha| >= 1 and |beta| >= 1");
    if (mu < 0 || mu >= dim || nu < 0 || nu >= dim || alpha[mu] < 1 || beta[nu] < 1)
        throw PreconditionError("(mu, nu) is not admissible for (alpha, beta)");

    std::vector<int> key{pivot, mu, nu};
    key.insert(key.end(), alpha.entries().begin(), alpha.entries().end());
    key.insert(key.end(), beta.entries().begin(), beta.entries().end());
    {
        std::lock_guard lock(impl_->coeff_mutex);
        if (auto it = impl_->coeff_cache.find(key); it != impl_->coeff_cache.end()) return it->second;
    }

    const TangentBasis& b = basis(pivot);
    const auto m = static_cast<std::size_t>(mu);
    const auto v = static_cast<std::size_t>(nu);
    Expr e = contract_dbar_rho(commutator(b.fields[m], b.conj_fields[v]), *this);
    MultiIndex a = alpha.star(mu);
    MultiIndex c = beta.star(nu);
    // S^a Sb^c acts right to left: Sb_{n-1} first, S_1 last.
    for (int j = dim - 1; j >= 0; --j)
        for (int r = 0; r < c[j]; ++r) e = apply_field(b.conj_fields[static_cast<std::size_t>(j)], e);
    for (int j = dim - 1; j >= 0; --j)
        for (int r = 0; r < a[j]; ++r) e = apply_field(b.fields[static_cast<std::size_t>(j)], e);
    e = negate(e);

    std::lock_guard lock(impl_->coeff_mutex);
    impl_->coeff_cache.emplace(std::move(key), e);
    return e;
}

// ---------------------------------------------------------------------------
// Operations

TangentBasis holomorphic_tangent_basis(const Hypersurface& hs, std::span<const Complex> p) {
    return hs.basis(hs.pivot_at(p));
}

Expr contract_dbar_rho(const VectorField& v, const Hypersurface& hs) {
    std::vector<Expr> terms;
    for (int j = 0; j < v.dimension(); ++j)
        if (!v.anti(j).is_zero()) terms.push_back(v.anti(j) * hs.d_anti(j));
    return sum(std::move(terms));
}

TypeReport bloom_graham_type(const Hypersurface& hs, std::span<const Complex> p, int max_order) {
    if (max_order < 2) throw PreconditionError("max_order must be at least 2");
    if (!hs.on_surface(p))
        throw OffSurfaceError("point is not on the hypersurface (|rho| = " + std::to_string(std::abs(hs.value(p))) +
                              ")");
    TypeReport report;
    report.point.assign(p.begin(), p.end());
    report.pivot = hs.pivot_at(p);
    report.max_order = max_order;

    const double eps = hs.tolerances().zero;
    Evaluator ev(Assignment::on_surface(p));
    double max_coeff = 0.0;
    for (int length = 1; length <= max_order; ++length) {
        double witness = 0.0;
        for (const Bracket& b : hs.brackets(report.pivot, length)) {
            for (Complex c : b.field.evaluate(ev)) max_coeff = std::max(max_coeff, std::abs(c));
            witness = std::max(witness, std::abs(ev(b.contraction)));
        }
        report.level_witness.push_back(witness);
        report.scale = 1.0 + max_coeff;
        if (witness > eps * report.scale) {
            report.type = length;
            break;
        }
    }
    return report;
}

Complex levi_coefficient(const Hypersurface& hs, std::span<const Complex> p, const MultiIndex& alpha,
                         const MultiIndex& beta) {
    auto mu = alpha.first_admissible();
    auto nu = beta.first_admissible();
    if (!mu || !nu) throw PreconditionError("Levi coefficient needs |alpha| >= 1 and |beta| >= 1");
    return levi_coefficient(hs, p, alpha, beta, *mu, *nu);
}

Complex levi_coefficient(const Hypersurface& hs, std::span<const Complex> p, const MultiIndex& alpha,
                         const MultiIndex& beta, int mu, int nu) {
    Expr e = hs.levi_coefficient_expr(hs.pivot_at(p), alpha, beta, mu, nu);
    return eval_complex(e, Assignment::on_surface(p));
}

LeviValue levi_form(const Hypersurface& hs, std::span<const Complex> p, int k, std::span<const Complex> zeta) {
    if (k < 1) throw PreconditionError("Levi form order k must be at least 1");
    const int dim = hs.n() - 1;
    if (static_cast<int>(zeta.size()) != dim)
        throw PreconditionError("zeta must have n-1 = " + std::to_string(dim) + " entries");
    const int pivot = hs.pivot_at(p);
    Evaluator ev(Assignment::on_surface(p));

    auto monomial = [&](const MultiIndex& a, bool conj) {
        Complex m(1.0);
        for (int j = 0; j < dim; ++j) {
            Complex z = conj ? std::conj(zeta[static_cast<std::size_t>(j)]) : zeta[static_cast<std::size_t>(j)];
            for (int r = 0; r < a[j]; ++r) m *= z;
        }
        return m;
    };

    Complex total(0.0);
    for (int nb = 1; nb <= k; ++nb) {
        const int na = k + 1 - nb;
        for (const MultiIndex& alpha : MultiIndex::of_order(dim, na)) {
            Complex za = monomial(alpha, false);
            if (za == Complex(0.0)) continue;
            for (const MultiIndex& beta : MultiIndex::of_order(dim, nb)) {
                Complex zb = monomial(beta, true);
                if (zb == Complex(0.0)) continue;
                Expr coeff = hs.levi_coefficient_expr(pivot, alpha, beta, *alpha.first_admissible(),
                                                      *beta.first_admissible());
                total += ev(coeff) / (alpha.factorial() * beta.factorial()) * za * zb;
            }
        }
    }
    return LeviValue{k, total.real(), std::abs(total.imag())};
}

std::vector<Complex> identify_tangent(const Hypersurface& hs, std::span<const Complex> p,
                                      std::span<const Complex> xi) {
    if (static_cast<int>(xi.size()) != hs.n()) throw PreconditionError("xi must have n entries");
    std::vector<Complex> g = hs.gradient(p);
    Complex pairing(0.0);
    double xi_norm = 0.0;
    double grad_norm = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) {
        pairing += xi[j] * g[j];
        xi_norm += std::norm(xi[j]);
        grad_norm += std::norm(g[j]);
    }
    xi_norm = std::sqrt(xi_norm);
    grad_norm = std::sqrt(grad_norm);
    if (std::abs(pairing) > hs.tolerances().tangency * xi_norm * grad_norm)
        throw NotInHError("vector is not in the complex tangent space (normalized residual " +
                          std::to_string(std::abs(pairing) / std::max(xi_norm * grad_norm, 1e-300)) + ")");
    const TangentBasis& b = hs.basis(hs.pivot_at(p));
    std::vector<Complex> zeta;
    for (int c : b.coords) zeta.push_back(xi[static_cast<std::size_t>(c)]);
    return zeta;
}

}  // namespace levilab
