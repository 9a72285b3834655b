#pragma once

// Checks on a parametrized real submanifold gamma of a hypersurface:
// totally real, complex-tangential, constant Bloom-Graham type, and
// positivity of the (M-1)-th Levi form on J T(M). All hypotheses are
// certified on sample grids only.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "levilab/cr_geometry.hpp"

namespace levilab {

struct Interval {
    double lo = 0.0;
    double hi = 1.0;
    bool periodic = false;  // closed curve: the hi endpoint repeats lo

    friend bool operator==(const Interval&, const Interval&) = default;
};

class ParamManifold {
public:
    ParamManifold(std::vector<std::string> param_names, std::vector<Expr> components, std::vector<Interval> domain);

    int m() const noexcept { return static_cast<int>(names_.size()); }
    int n() const noexcept { return static_cast<int>(components_.size()); }
    const std::vector<std::string>& param_names() const noexcept { return names_; }
    const std::vector<Expr>& components() const noexcept { return components_; }
    const std::vector<Interval>& domain() const noexcept { return domain_; }

    /// d gamma_j / d x_k.
    const Expr& derivative(int j, int k) const;

    Point at(std::span<const double> x) const;
    /// The same component trees at complex parameter values.
    Point at_complex(std::span<const Complex> zeta) const;

private:
    std::vector<std::string> names_;
    std::vector<Expr> components_;
    std::vector<Interval> domain_;
    std::vector<std::vector<Expr>> derivatives_;  // [j][k]
};

struct GridSpec {
    std::vector<int> counts;  // samples per axis
    int directions = 64;      // unit-sphere samples for m > 1

    static GridSpec uniform(int m, int count, int directions = 64);
};

/// Tensor grid over the parameter box; periodic axes omit the right end.
std::vector<std::vector<double>> grid_points(const ParamManifold& gamma, const GridSpec& grid);

/// Unit directions in R^m: {+1, -1} for m = 1, evenly spaced angles for
/// m = 2, a Fibonacci sphere for m = 3, and seeded Gaussian samples above.
std::vector<std::vector<double>> direction_samples(int m, int count);

/// Columns d gamma(x) e_k, each a vector in C^n.
std::vector<Point> tangent_frame(const ParamManifold& gamma, std::span<const double> x);

struct TotallyRealResult {
    bool totally_real = false;
    double smallest_singular = 0.0;
    double largest_singular = 0.0;

    double ratio() const noexcept { return largest_singular > 0 ? smallest_singular / largest_singular : 0.0; }
};

TotallyRealResult totally_real(const Hypersurface& hs, const ParamManifold& gamma, std::span<const double> x);

struct TangencyResult {
    bool tangential = false;
    double residual = 0.0;
};

/// Throws OffSurfaceError when gamma(x) is not on the hypersurface.
TangencyResult complex_tangency(const Hypersurface& hs, const ParamManifold& gamma, std::span<const double> x);

struct TypeScan {
    bool constant = false;
    std::optional<int> type;  // the common type when constant
    std::vector<TypeReport> reports;
    // When varying: first grid index attaining the largest type and last
    // index attaining the smallest (exceeds max_order counts as largest).
    std::size_t high_witness = 0;
    std::size_t low_witness = 0;
};

TypeScan type_scan(const Hypersurface& hs, const ParamManifold& gamma, const GridSpec& grid, int max_order = 8,
                   int threads = 0);

struct PositivityScan {
    double min_value = 0.0;
    std::vector<double> per_point_min;
    double scale = 1.0;  // 1 + max |Levi value| seen
    double max_imag_residual = 0.0;
    std::size_t direction_count = 0;

    bool positive(double eps) const noexcept { return min_value > eps * scale; }
};

/// min over grid x and unit v of L^{M-1}(gamma(x); i dgamma(x) v).
PositivityScan positivity_scan(const Hypersurface& hs, const ParamManifold& gamma, const GridSpec& grid, int M,
                               int threads = 0);

struct PointRecord {
    std::vector<double> x;
    Point point;
    std::optional<int> type;
    std::vector<double> level_witness;
    double tangency_residual = 0.0;
    double totally_real_metric = 0.0;
    std::optional<double> levi_min;
    std::string error;

    friend bool operator==(const PointRecord&, const PointRecord&) = default;
};

struct TypeWitness {
    std::vector<double> x;
    std::optional<int> type;

    friend bool operator==(const TypeWitness&, const TypeWitness&) = default;
};

struct Verdict {
    bool totally_real = false;
    double totally_real_min_metric = 0.0;
    bool complex_tangential = false;
    double tangency_max_residual = 0.0;
    bool type_constant = false;
    std::optional<int> type;
    std::vector<TypeWitness> type_witnesses;  // two entries when varying
    std::optional<double> positivity_min;
    bool positivity_positive = false;
    bool theorem_holds = false;
    std::vector<std::string> reasons;  // failed hypotheses
    std::vector<std::string> notes;
    std::size_t grid_points = 0;
    std::size_t directions = 0;
    std::vector<PointRecord> points;

    friend bool operator==(const Verdict&, const Verdict&) = default;
};

struct CheckOptions {
    int max_order = 8;
    int threads = 0;
};

Verdict theorem_verdict(const Hypersurface& hs, const ParamManifold& gamma, const GridSpec& grid,
                        const CheckOptions& options = {});

}  // namespace levilab
