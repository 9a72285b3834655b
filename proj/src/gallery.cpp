#include "levilab/gallery.hpp"

#include <array>
#include <cmath>
#include <fstream>

#include "levilab/error.hpp"
#include "levilab/parser.hpp"

namespace levilab {

namespace {

struct GalleryEntry {
    const char* id;
    const char* text;
};

constexpr const char* kEx42 = R"(# Quartic model re(z1) > |z2|^4 and the curve (t^4, t) through the origin.
[scenario]
name = ex4_2

[hypersurface]
n = 2
rho = abs2(z2)^2 - re(z1)

[manifold]
m = 1
params = t
component1 = t^4
component2 = t
domain t = -0.5 .. 0.5

[settings]
grid = 33
)";

constexpr const char* kEx43 = R"(# Sum of three quartics in C^4 with a closed curve at |z2| = 1.
[scenario]
name = ex4_3

[hypersurface]
n = 4
rho = abs2(z2)^2 + abs2(z3)^2 + abs2(z4)^2 - re(z1)

[manifold]
m = 1
params = theta
component1 = sin(theta)^4 + cos(theta)^4 + 1
component2 = 1
component3 = sin(theta)
component4 = cos(theta)
domain theta = -pi .. pi periodic

[settings]
grid = 32
)";

constexpr const char* kEx44 = R"(# Same quartic surface as ex4_3, with a curve in the slice z2 = 0.
[scenario]
name = ex4_4

[hypersurface]
n = 4
rho = abs2(z2)^2 + abs2(z3)^2 + abs2(z4)^2 - re(z1)

[manifold]
m = 1
params = theta
component1 = (2 + cos(theta))^4 + (2 + sin(theta))^4
component2 = 0
component3 = 2 + sin(theta)
component4 = 2 + cos(theta)
domain theta = -pi .. pi periodic

[settings]
grid = 32
)";

constexpr const char* kEx45 = R"(# Type-4 circle |z1| = 1, z2 = 0. The Levi values scale linearly in C.
[scenario]
name = ex4_5

[constants]
C = 1

[hypersurface]
n = 2
rho = abs2(z2 + exp(i*log(z1*zb1))) + C*log(z1*zb1)^4 - 1

[manifold]
m = 1
params = theta
component1 = exp(i*theta)
component2 = 0
domain theta = -pi .. pi periodic

[settings]
grid = 32
)";

constexpr const char* kModelN3 = R"(# |z1|^2 |z2|^2 = re(z3): type 4 at the origin, 2 elsewhere on the curve.
[scenario]
name = model_n3

[hypersurface]
n = 3
rho = abs2(z1)*abs2(z2) - re(z3)

[manifold]
m = 1
params = t
component1 = t
component2 = t
component3 = t^4
domain t = -0.5 .. 0.5

[settings]
grid = 33
)";

constexpr std::array<GalleryEntry, 5> kGallery{{
    {"ex4_2", kEx42},
    {"ex4_3", kEx43},
    {"ex4_4", kEx44},
    {"ex4_5", kEx45},
    {"model_n3", kModelN3},
}};

}  // namespace

const std::vector<std::string>& gallery_ids() {
    static const std::vector<std::string> ids = [] {
        std::vector<std::string> v;
        for (const auto& e : kGallery) v.emplace_back(e.id);
        return v;
    }();
    return ids;
}

std::string_view gallery_source(std::string_view id) {
    for (const auto& e : kGallery)
        if (id == e.id) return e.text;
    std::string known;
    for (const auto& e : kGallery) known += std::string(known.empty() ? "" : ", ") + e.id;
    throw ValidationError("unknown gallery id '" + std::string(id) + "' (known: " + known + ")");
}

Scenario gallery_scenario(std::string_view id, const ConstantOverrides& overrides) {
    return parse_scenario(gallery_source(id), std::string(id), overrides);
}

Report run_gallery(std::string_view id, const RunOptions& options) {
    return run_scenario(gallery_scenario(id), options);
}

std::filesystem::path export_gallery(std::string_view id, const std::filesystem::path& dir) {
    const std::string_view text = gallery_source(id);
    std::filesystem::create_directories(dir);
    const auto path = dir / (std::string(id) + ".scn");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write '" + path.string() + "'");
    out << text;
    return path;
}

VectorField ex4_5_field(const Scenario& s) {
    ParseContext ctx{2, {}, {s.constants.begin(), s.constants.end()}, 0};
    Expr a = parse_expr("z1*(zb2 + exp(-i*log(z1*zb1)))", ctx);
    Expr b = parse_expr("-(i*zb2*exp(i*log(z1*zb1)) - i*z2*exp(-i*log(z1*zb1)) + 4*C*log(z1*zb1)^3)", ctx);
    return VectorField({a, b}, {Expr(0), Expr(0)});
}

Point ex4_2_map(std::span<const Complex> z) {
    if (z.size() != 2) throw PreconditionError("ex4_2_map expects a point of C^2");
    const Complex s = std::sqrt(z[0] + 1.0);
    return {(z[0] - 1.0) / (z[0] + 1.0), std::sqrt(2.0) * z[1] / s};
}

Hypersurface ex4_2_bounded_model(Tolerances tol) {
    return Hypersurface(2, parse_expr("abs2(z1) + abs2(z2)^2 - 1", ParseContext{2, {}, {}, 0}), tol);
}

}  // namespace levilab
