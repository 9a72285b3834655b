#pragma once

// Built-in scenarios: ex4_2, ex4_3, ex4_4, ex4_5 and the three-variable
// fixture model_n3.

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "levilab/report.hpp"
#include "levilab/scenario.hpp"

namespace levilab {

const std::vector<std::string>& gallery_ids();

/// Scenario file text; throws ValidationError for an unknown id.
std::string_view gallery_source(std::string_view id);

Scenario gallery_scenario(std::string_view id, const ConstantOverrides& overrides = {});

Report run_gallery(std::string_view id, const RunOptions& options = {});

/// Writes <dir>/<id>.scn and returns its path.
std::filesystem::path export_gallery(std::string_view id, const std::filesystem::path& dir);

/// The (1,0) field z(zb2 + B) d/dz1 - (i zb2 A - i z2 B + 4C L^3) d/dz2 on
/// ex4_5, with L = log(z1 zb1), A = e^{iL}, B = e^{-iL}.
VectorField ex4_5_field(const Scenario& ex4_5);

/// (z1, z2) -> ((z1 - 1)/(z1 + 1), sqrt(2) z2 / sqrt(z1 + 1)), taking
/// re(z1) > |z2|^4 onto the bounded domain of ex4_2_bounded_model().
Point ex4_2_map(std::span<const Complex> z);

/// |w1|^2 + |w2|^4 - 1.
Hypersurface ex4_2_bounded_model(Tolerances tol = {});

}  // namespace levilab
