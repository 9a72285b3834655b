#include "levilab/manifold.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "levilab/error.hpp"
#include "levilab/parallel.hpp"

namespace levilab {

ParamManifold::ParamManifold(std::vector<std::string> param_names, std::vector<Expr> components,
                             std::vector<Interval> domain)
    : names_(std::move(param_names)), components_(std::move(components)), domain_(std::move(domain)) {
    if (names_.empty()) throw ValidationError("manifold needs at least one parameter");
    if (domain_.size() != names_.size())
        throw ValidationError("domain has " + std::to_string(domain_.size()) + " intervals for " +
                              std::to_string(names_.size()) + " parameters");
    for (std::size_t k = 0; k < domain_.size(); ++k)
        if (!(domain_[k].lo < domain_[k].hi))
            throw ValidationError("empty domain interval for parameter '" + names_[k] + "'");
    for (const auto& c : components_)
        if (contains_kind(c, VarKind::Holo) || contains_kind(c, VarKind::AntiHolo))
            throw ValidationError("manifold components may only depend on the parameters");
    derivatives_.resize(components_.size());
    for (std::size_t j = 0; j < components_.size(); ++j)
        for (int k = 0; k < m(); ++k) derivatives_[j].push_back(derive(components_[j], Var::param(k)));
}

const Expr& ParamManifold::derivative(int j, int k) const {
    return derivatives_.at(static_cast<std::size_t>(j)).at(static_cast<std::size_t>(k));
}

Point ParamManifold::at(std::span<const double> x) const {
    std::vector<Complex> zeta(x.begin(), x.end());
    return at_complex(zeta);
}

Point ParamManifold::at_complex(std::span<const Complex> zeta) const {
    if (static_cast<int>(zeta.size()) != m())
        throw PreconditionError("expected " + std::to_string(m()) + " parameter values");
    Evaluator ev(Assignment::parameters(zeta));
    Point p;
    p.reserve(components_.size());
    for (const auto& c : components_) p.push_back(ev(c));
    return p;
}

GridSpec GridSpec::uniform(int m, int count, int directions) {
    return {std::vector<int>(static_cast<std::size_t>(m), count), directions};
}

std::vector<std::vector<double>> grid_points(const ParamManifold& gamma, const GridSpec& grid) {
    const int m = gamma.m();
    if (static_cast<int>(grid.counts.size()) != m)
        throw ValidationError("grid has " + std::to_string(grid.counts.size()) + " axes for m = " + std::to_string(m));
    std::vector<std::vector<double>> axes;
    for (int k = 0; k < m; ++k) {
        const int count = grid.counts[static_cast<std::size_t>(k)];
        if (count < 1) throw ValidationError("grid count must be positive");
        const Interval& iv = gamma.domain()[static_cast<std::size_t>(k)];
        std::vector<double> axis;
        if (count == 1) {
            axis.push_back(iv.lo);
        } else {
            const int denom = iv.periodic ? count : count - 1;
            for (int i = 0; i < count; ++i) axis.push_back(iv.lo + (iv.hi - iv.lo) * i / denom);
        }
        axes.push_back(std::move(axis));
    }
    std::vector<std::vector<double>> out{{}};
    for (const auto& axis : axes) {
        std::vector<std::vector<double>> next;
        for (const auto& prefix : out)
            for (double v : axis) {
                auto p = prefix;
                p.push_back(v);
                next.push_back(std::move(p));
            }
        out = std::move(next);
    }
    return out;
}

std::vector<std::vector<double>> direction_samples(int m, int count) {
    if (m < 1) throw PreconditionError("direction_samples: m must be positive");
    if (m == 1) return {{1.0}, {-1.0}};
    if (count < 1) throw ValidationError("direction count must be positive");
    std::vector<std::vector<double>> out;
    if (m == 2) {
        for (int k = 0; k < count; ++k) {
            double a = 2.0 * std::numbers::pi * k / count;
            out.push_back({std::cos(a), std::sin(a)});
        }
    } else if (m == 3) {
        const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
        for (int k = 0; k < count; ++k) {
            double z = count == 1 ? 0.0 : 1.0 - 2.0 * (k + 0.5) / count;
            double r = std::sqrt(std::max(0.0, 1.0 - z * z));
            double a = golden * k;
            out.push_back({r * std::cos(a), r * std::sin(a), z});
        }
    } else {
        std::mt19937_64 rng(0x5eed1e7f00dULL + static_cast<unsigned long long>(m));
        std::normal_distribution<double> normal;
        while (static_cast<int>(out.size()) < count) {
            std::vector<double> v(static_cast<std::size_t>(m));
            double norm = 0;
            for (auto& c : v) {
                c = normal(rng);
                norm += c * c;
            }
            norm = std::sqrt(norm);
            if (norm < 1e-12) continue;
            for (auto& c : v) c /= norm;
            out.push_back(std::move(v));
        }
    }
    return out;
}

std::vector<Point> tangent_frame(const ParamManifold& gamma, std::span<const double> x) {
    std::vector<Complex> zeta(x.begin(), x.end());
    Evaluator ev(Assignment::parameters(zeta));
    std::vector<Point> cols(static_cast<std::size_t>(gamma.m()), Point(static_cast<std::size_t>(gamma.n())));
    for (int k = 0; k < gamma.m(); ++k)
        for (int j = 0; j < gamma.n(); ++j)
            cols[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)] = ev(gamma.derivative(j, k));
    return cols;
}

namespace {

void check_dimensions(const Hypersurface& hs, const ParamManifold& gamma) {
    if (gamma.n() != hs.n())
        throw ValidationError("manifold has " + std::to_string(gamma.n()) + " components but n = " +
                              std::to_string(hs.n()));
    if (gamma.m() > hs.n() - 1)
        throw ValidationError("manifold dimension m = " + std::to_string(gamma.m()) + " exceeds n - 1");
}

double norm(std::span<const Complex> v) {
    double s = 0;
    for (const auto& c : v) s += std::norm(c);
    return std::sqrt(s);
}

}  // namespace

TotallyRealResult totally_real(const Hypersurface& hs, const ParamManifold& gamma, std::span<const double> x) {
    check_dimensions(hs, gamma);
    const auto frame = tangent_frame(gamma, x);
    const int n = gamma.n();
    const int m = gamma.m();
    Eigen::MatrixXd a(2 * n, 2 * m);
    for (int k = 0; k < m; ++k)
        for (int j = 0; j < n; ++j) {
            Complex v = frame[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)];
            a(j, k) = v.real();
            a(n + j, k) = v.imag();
            a(j, m + k) = -v.imag();  // J v = i v
            a(n + j, m + k) = v.real();
        }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
    const auto& s = svd.singularValues();
    TotallyRealResult r;
    r.largest_singular = s.maxCoeff();
    r.smallest_singular = s.minCoeff();
    r.totally_real = r.largest_singular > 0 && r.smallest_singular > 1e-8 * r.largest_singular;
    return r;
}

TangencyResult complex_tangency(const Hypersurface& hs, const ParamManifold& gamma, std::span<const double> x) {
    check_dimensions(hs, gamma);
    const Point p = gamma.at(x);
    if (!hs.on_surface(p))
        throw OffSurfaceError("gamma(x) is off the surface: |rho| = " + std::to_string(std::abs(hs.value(p))));
    const auto grad = hs.gradient(p);
    const double gnorm = norm(grad);
    TangencyResult r;
    for (const auto& col : tangent_frame(gamma, x)) {
        const double cnorm = norm(col);
        if (cnorm == 0.0 || gnorm == 0.0) continue;
        Complex pairing = 0;
        for (std::size_t j = 0; j < col.size(); ++j) pairing += grad[j] * col[j];
        r.residual = std::max(r.residual, std::abs(pairing) / (gnorm * cnorm));
    }
    r.tangential = r.residual <= hs.tolerances().tangency;
    return r;
}

namespace {

// Exceeding max_order ranks above every finite type.
int type_rank(const std::optional<int>& t) { return t ? *t : std::numeric_limits<int>::max(); }

void locate_witnesses(TypeScan& scan) {
    int hi = std::numeric_limits<int>::min();
    int lo = std::numeric_limits<int>::max();
    for (std::size_t i = 0; i < scan.reports.size(); ++i) {
        int r = type_rank(scan.reports[i].type);
        if (r > hi) {
            hi = r;
            scan.high_witness = i;
        }
        if (r <= lo) {
            lo = r;
            scan.low_witness = i;
        }
    }
    scan.constant = hi == lo;
    if (scan.constant && !scan.reports.empty()) scan.type = scan.reports.front().type;
}

}  // namespace

TypeScan type_scan(const Hypersurface& hs, const ParamManifold& gamma, const GridSpec& grid, int max_order,
                   int threads) {
    check_dimensions(hs, gamma);
    const auto xs = grid_points(gamma, grid);
    TypeScan scan;
    scan.reports.resize(xs.size());
    parallel_for(xs.size(), resolve_threads(threads),
                 [&](std::size_t i) { scan.reports[i] = bloom_graham_type(hs, gamma.at(xs[i]), max_order); });
    locate_witnesses(scan);
    return scan;
}

namespace {

struct PointLevi {
    double min = std::numeric_limits<double>::infinity();
    double max_abs = 0.0;
    double imag = 0.0;
};

PointLevi levi_at(const Hypersurface& hs, const ParamManifold& gamma, std::span<const double> x, int k,
                  const std::vector<std::vector<double>>& dirs) {
    const Point p = gamma.at(x);
    const auto frame = tangent_frame(gamma, x);
    PointLevi out;
    for (const auto& v : dirs) {
        Point xi(static_cast<std::size_t>(gamma.n()));
        for (std::size_t c = 0; c < v.size(); ++c)
            for (std::size_t j = 0; j < xi.size(); ++j) xi[j] += Complex(0, 1) * v[c] * frame[c][j];
        const auto zeta = identify_tangent(hs, p, xi);
        const LeviValue lv = levi_form(hs, p, k, zeta);
        out.min = std::min(out.min, lv.value);
        out.max_abs = std::max(out.max_abs, std::abs(lv.value));
        out.imag = std::max(out.imag, lv.imag_residual);
    }
    return out;
}

}  // namespace

PositivityScan positivity_scan(const Hypersurface& hs, const ParamManifold& gamma, const GridSpec& grid, int M,
                               int threads) {
    check_dimensions(hs, gamma);
    if (M < 2) throw PreconditionError("positivity_scan needs type M >= 2");
    const auto xs = grid_points(gamma, grid);
    const auto dirs = direction_samples(gamma.m(), grid.directions);
    std::vector<PointLevi> per(xs.size());
    parallel_for(xs.size(), resolve_threads(threads),
                 [&](std::size_t i) { per[i] = levi_at(hs, gamma, xs[i], M - 1, dirs); });
    PositivityScan s;
    s.direction_count = dirs.size();
    s.min_value = std::numeric_limits<double>::infinity();
    double max_abs = 0;
    for (const auto& pl : per) {
        s.per_point_min.push_back(pl.min);
        s.min_value = std::min(s.min_value, pl.min);
        max_abs = std::max(max_abs, pl.max_abs);
        s.max_imag_residual = std::max(s.max_imag_residual, pl.imag);
    }
    s.scale = 1.0 + max_abs;
    return s;
}

Verdict theorem_verdict(const Hypersurface& hs, const ParamManifold& gamma, const GridSpec& grid,
                        const CheckOptions& options) {
    check_dimensions(hs, gamma);
    const auto xs = grid_points(gamma, grid);
    const auto dirs = direction_samples(gamma.m(), grid.directions);
    const int threads = resolve_threads(options.threads);
    const double eps = hs.tolerances().zero;

    Verdict v;
    v.grid_points = xs.size();
    v.directions = dirs.size();
    v.points.resize(xs.size());
    std::vector<TypeReport> reports(xs.size());
    std::vector<char> tr_ok(xs.size(), 0), ct_ok(xs.size(), 0);

    parallel_for(xs.size(), threads, [&](std::size_t i) {
        PointRecord& rec = v.points[i];
        rec.x = xs[i];
        rec.point = gamma.at(xs[i]);
        try {
            auto tr = totally_real(hs, gamma, xs[i]);
            rec.totally_real_metric = tr.ratio();
            tr_ok[i] = tr.totally_real;
            auto ct = complex_tangency(hs, gamma, xs[i]);
            rec.tangency_residual = ct.residual;
            ct_ok[i] = ct.tangential;
            reports[i] = bloom_graham_type(hs, rec.point, options.max_order);
            rec.type = reports[i].type;
            rec.level_witness = reports[i].level_witness;
        } catch (const Error& e) {
            if (is_validation_error(e)) throw;
            rec.error = e.what();
        }
    });

    bool any_error = false;
    v.totally_real = true;
    v.complex_tangential = true;
    v.totally_real_min_metric = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const auto& rec = v.points[i];
        if (!rec.error.empty()) {
            any_error = true;
            continue;
        }
        v.totally_real = v.totally_real && tr_ok[i];
        v.complex_tangential = v.complex_tangential && ct_ok[i];
        v.totally_real_min_metric = std::min(v.totally_real_min_metric, rec.totally_real_metric);
        v.tangency_max_residual = std::max(v.tangency_max_residual, rec.tangency_residual);
    }
    if (any_error) {
        v.totally_real = false;
        v.complex_tangential = false;
        if (v.totally_real_min_metric == std::numeric_limits<double>::infinity()) v.totally_real_min_metric = 0;
        for (const auto& rec : v.points)
            if (!rec.error.empty()) {
                v.notes.push_back("grid point failed: " + rec.error);
                break;
            }
        v.reasons.push_back("grid point failure");
    }

    if (!any_error) {
        TypeScan scan;
        scan.reports = reports;
        locate_witnesses(scan);
        v.type_constant = scan.constant;
        v.type = scan.type;
        if (!scan.constant) {
            v.type_witnesses.push_back({xs[scan.high_witness], reports[scan.high_witness].type});
            v.type_witnesses.push_back({xs[scan.low_witness], reports[scan.low_witness].type});
        }
    }

    if (!v.totally_real && !any_error) v.reasons.push_back("not totally real");
    if (!v.complex_tangential && !any_error) v.reasons.push_back("not complex-tangential");
    if (!any_error && !v.type_constant) v.reasons.push_back("varying type");
    if (!any_error && v.type_constant && !v.type) v.reasons.push_back("type exceeds max_order");

    if (v.reasons.empty()) {
        const int M = *v.type;
        std::vector<PointLevi> per(xs.size());
        parallel_for(xs.size(), threads, [&](std::size_t i) { per[i] = levi_at(hs, gamma, xs[i], M - 1, dirs); });
        double min_value = std::numeric_limits<double>::infinity();
        double max_abs = 0, imag = 0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            v.points[i].levi_min = per[i].min;
            min_value = std::min(min_value, per[i].min);
            max_abs = std::max(max_abs, per[i].max_abs);
            imag = std::max(imag, per[i].imag);
        }
        v.positivity_min = min_value;
        v.positivity_positive = min_value > eps * (1.0 + max_abs);
        if (imag > eps * (1.0 + max_abs))
            v.notes.push_back("Levi form imaginary residual " + std::to_string(imag) + " exceeds tolerance");
        if (!v.positivity_positive) v.reasons.push_back("Levi form not positive");
    } else {
        v.notes.push_back("positivity not evaluated");
    }

    v.theorem_holds = v.reasons.empty();
    if (xs.size() == 1) v.notes.push_back("WARNING: single-point grid; constancy of type is not tested");
    v.notes.push_back("hypotheses certified on " + std::to_string(xs.size()) + " grid points and " +
                      std::to_string(dirs.size()) + " directions only");
    v.notes.push_back("positivity_min is the grid minimum, not a pointwise constant");
    return v;
}

}  // namespace levilab
