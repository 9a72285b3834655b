#pragma once

// Complexification of a parametrized manifold and a sampling probe for
// points of the complexified germ that touch or enter the closed domain.

#include <span>
#include <string>
#include <vector>

#include "levilab/cr_geometry.hpp"
#include "levilab/manifold.hpp"

namespace levilab {

struct ProbeSpec {
    double delta = 0.5;
    int shells = 4;       // radii delta/2^(shells-1), ..., delta/2, delta
    int directions = 16;  // angles in the zeta-plane (m = 1) or sphere samples
    double tau = 1e-9;

    std::vector<double> radii() const;
    void validate() const;

    friend bool operator==(const ProbeSpec&, const ProbeSpec&) = default;
};

/// Gamma(zeta): the component trees of gamma at complex parameter values.
/// Construction rejects components that are not entire in the parameters.
class Complexification {
public:
    explicit Complexification(ParamManifold gamma);

    const ParamManifold& manifold() const noexcept { return gamma_; }
    Point operator()(std::span<const Complex> zeta) const { return gamma_.at_complex(zeta); }

private:
    ParamManifold gamma_;
};

/// Throws NonEntireError naming the first log, quotient, or negative power
/// whose argument depends on a parameter.
void require_entire(const ParamManifold& gamma);

Complexification complexify(const ParamManifold& gamma);

/// u(zeta) = rho(Gamma(zeta)), with zb slots bound to the conjugates of
/// Gamma(zeta). Positive outside the closed domain.
double boundary_gap(const Hypersurface& hs, const Complexification& gamma_c, std::span<const Complex> zeta);

enum class ContactKind { Contact, Penetration };

struct ContactEntry {
    std::vector<double> base;  // real grid point x
    std::vector<Complex> zeta;
    double u = 0.0;
    ContactKind kind = ContactKind::Contact;

    friend bool operator==(const ContactEntry&, const ContactEntry&) = default;
};

struct ProbeResult {
    std::vector<ContactEntry> contacts;  // in sample order
    bool obstruction = false;
    double min_u = 0.0;
    std::size_t samples = 0;   // evaluated samples
    std::size_t skipped = 0;   // samples dropped by a domain error
    std::size_t contact_count = 0;
    std::size_t penetration_count = 0;
    std::vector<double> radii;
    std::size_t directions = 0;
    std::size_t base_points = 0;
    double tau = 0.0;
    std::vector<std::string> notes;

    const char* verdict() const noexcept { return obstruction ? "obstruction" : samples > 0 ? "clear" : "inconclusive"; }
};

/// Offsets i r d for m > 1, r e^{i phi} for m = 1 (only offsets whose
/// imaginary part reaches the smallest radius are kept).
std::vector<std::vector<Complex>> probe_offsets(int m, const ProbeSpec& spec);

ProbeResult germ_probe(const Hypersurface& hs, const Complexification& gamma_c,
                       const std::vector<std::vector<double>>& base_points, const ProbeSpec& spec, int threads = 0);

const char* to_string(ContactKind kind);

}  // namespace levilab
