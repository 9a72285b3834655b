#include "levilab/probe.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "levilab/error.hpp"
#include "levilab/parallel.hpp"

namespace levilab {

std::vector<double> ProbeSpec::radii() const {
    std::vector<double> r;
    for (int s = 0; s < shells; ++s) r.push_back(delta / std::ldexp(1.0, shells - 1 - s));
    return r;
}

void ProbeSpec::validate() const {
    if (!(delta > 0)) throw ValidationError("probe delta must be positive");
    if (shells < 1) throw ValidationError("probe shell count must be positive");
    if (directions < 1) throw ValidationError("probe direction count must be positive");
    if (!(tau > 0)) throw ValidationError("probe tau must be positive");
}

namespace {

void scan_entire(const Expr& e, const VarNames& names) {
    if (!contains_kind(e, VarKind::Param)) return;
    const bool offending = e.op() == Op::Log || e.op() == Op::Quotient || (e.op() == Op::Power && e.exponent() < 0);
    if (offending) throw NonEntireError("component is not entire in the parameters: `" + to_string(e, names) + "`");
    for (const auto& a : e.args()) scan_entire(a, names);
}

}  // namespace

void require_entire(const ParamManifold& gamma) {
    VarNames names{gamma.param_names()};
    for (const auto& c : gamma.components()) scan_entire(c, names);
}

Complexification::Complexification(ParamManifold gamma) : gamma_(std::move(gamma)) { require_entire(gamma_); }

Complexification complexify(const ParamManifold& gamma) { return Complexification(gamma); }

double boundary_gap(const Hypersurface& hs, const Complexification& gamma_c, std::span<const Complex> zeta) {
    return hs.value(gamma_c(zeta));
}

std::vector<std::vector<Complex>> probe_offsets(int m, const ProbeSpec& spec) {
    spec.validate();
    const auto radii = spec.radii();
    std::vector<std::vector<Complex>> out;
    if (m == 1) {
        const double floor = radii.front() * (1.0 - 1e-12);
        for (double r : radii)
            for (int k = 0; k < spec.directions; ++k) {
                const double phi = 2.0 * std::numbers::pi * k / spec.directions;
                Complex off = std::polar(r, phi);
                if (std::abs(off.imag()) < floor) continue;
                out.push_back({off});
            }
    } else {
        const auto dirs = direction_samples(m, spec.directions);
        for (double r : radii)
            for (const auto& d : dirs) {
                std::vector<Complex> off;
                for (double c : d) off.emplace_back(0.0, r * c);
                out.push_back(std::move(off));
            }
    }
    return out;
}

const char* to_string(ContactKind kind) { return kind == ContactKind::Contact ? "contact" : "penetration"; }

ProbeResult germ_probe(const Hypersurface& hs, const Complexification& gamma_c,
                       const std::vector<std::vector<double>>& base_points, const ProbeSpec& spec, int threads) {
    const int m = gamma_c.manifold().m();
    const auto offsets = probe_offsets(m, spec);

    struct Sample {
        std::vector<Complex> zeta;
        double u = 0.0;
        bool ok = false;
        std::string error;
    };
    std::vector<std::vector<Sample>> per(base_points.size());
    parallel_for(base_points.size(), resolve_threads(threads), [&](std::size_t i) {
        const auto& x = base_points[i];
        auto& row = per[i];
        row.resize(offsets.size());
        for (std::size_t s = 0; s < offsets.size(); ++s) {
            Sample& smp = row[s];
            for (int k = 0; k < m; ++k)
                smp.zeta.push_back(Complex(x[static_cast<std::size_t>(k)]) + offsets[s][static_cast<std::size_t>(k)]);
            try {
                smp.u = boundary_gap(hs, gamma_c, smp.zeta);
                smp.ok = std::isfinite(smp.u);
                if (!smp.ok) smp.error = "non-finite u";
            } catch (const DomainError& e) {
                smp.error = e.what();
            }
        }
    });

    ProbeResult r;
    r.radii = spec.radii();
    r.directions = static_cast<std::size_t>(spec.directions);
    r.base_points = base_points.size();
    r.tau = spec.tau;
    r.min_u = std::numeric_limits<double>::infinity();
    std::string first_error;
    for (std::size_t i = 0; i < per.size(); ++i)
        for (const auto& smp : per[i]) {
            if (!smp.ok) {
                ++r.skipped;
                if (first_error.empty()) first_error = smp.error;
                continue;
            }
            ++r.samples;
            r.min_u = std::min(r.min_u, smp.u);
            if (std::abs(smp.u) <= spec.tau) {
                r.contacts.push_back({base_points[i], smp.zeta, smp.u, ContactKind::Contact});
                ++r.contact_count;
            } else if (smp.u < -spec.tau) {
                r.contacts.push_back({base_points[i], smp.zeta, smp.u, ContactKind::Penetration});
                ++r.penetration_count;
            }
        }
    r.obstruction = !r.contacts.empty();
    if (r.samples == 0) {
        r.min_u = 0.0;
        r.notes.push_back("no sample could be evaluated");
    }
    if (r.skipped > 0)
        r.notes.push_back(std::to_string(r.skipped) + " samples skipped after a domain error, first: " + first_error);
    if (!r.obstruction)
        r.notes.push_back("clear at the sampled resolution only");
    return r;
}

}  // namespace levilab
