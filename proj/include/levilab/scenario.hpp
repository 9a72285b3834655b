#pragma once

// Line-oriented scenario files:
//
//   [scenario]      name = ...           (optional)
//   [hypersurface]  n = 2
//                   rho = abs2(z2)^2 - re(z1)
//   [manifold]      m = 1
//                   params = t
//                   component1 = t^4
//                   component2 = t
//                   domain t = -0.5 .. 0.5       (append `periodic` for loops)
//   [constants]     C = 1
//   [settings]      grid = 33, directions = 64, max_order = 8,
//                   tol_zero, tol_on_surface, tol_tangency,
//                   probe_delta, probe_shells, probe_directions, probe_tau
//
// Blank lines and '#' comments are ignored. Constants may be used by any
// expression regardless of section order.

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "levilab/cr_geometry.hpp"
#include "levilab/manifold.hpp"
#include "levilab/probe.hpp"

namespace levilab {

struct Settings {
    std::vector<int> grid;  // per axis; empty means 33 (32 on periodic axes)
    int directions = 64;
    int max_order = 8;
    Tolerances tol;
    ProbeSpec probe;
};

struct Scenario {
    std::string name;
    int n = 0;
    std::string rho_text;
    Expr rho;
    int m = 0;
    std::vector<std::string> params;
    std::vector<std::string> component_texts;
    std::vector<Expr> components;
    std::vector<Interval> domain;
    std::vector<std::pair<std::string, double>> constants;  // declaration order
    Settings settings;

    Hypersurface hypersurface() const;
    ParamManifold manifold() const;
    GridSpec grid() const;
    double constant(std::string_view name) const;
};

/// Replacement values for constants declared in [constants].
using ConstantOverrides = std::map<std::string, double>;

/// Throws ValidationError (with the offending line) on any malformed entry,
/// or when an override names an undeclared constant.
Scenario parse_scenario(std::string_view text, std::string default_name = "scenario",
                        const ConstantOverrides& overrides = {});

Scenario load_scenario(const std::filesystem::path& path, const ConstantOverrides& overrides = {});

/// `name=value,...` against the scenario's parameters; values are
/// constant expressions (pi and declared constants allowed).
std::vector<double> parse_parameter_values(const Scenario& s, std::string_view spec);

/// The real constant value of `text` (pi and scenario constants allowed).
double parse_real_constant(std::string_view text, const std::vector<std::pair<std::string, double>>& constants,
                           int line = 0);

}  // namespace levilab
