#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <thread>

#include "levilab/cr_geometry.hpp"
#include "levilab/error.hpp"
#include "levilab/gallery.hpp"
#include "support/oracles.hpp"
#include "support/properties.hpp"

using namespace levilab;
using levilab::testing::P;

namespace {

const Hypersurface& quartic() {
    static const Hypersurface hs(2, P("abs2(z2)^2 - re(z1)"));
    return hs;
}

Complex eval_at(const Expr& e, const levilab::testing::FormalPoint& fp) { return eval_complex(e, fp.assignment()); }

// Checks a field coefficientwise against reference expressions at formal points.
void expect_field(const VectorField& v, const std::vector<Expr>& holo, const std::vector<Expr>& anti) {
    std::mt19937_64 rng(3);
    for (int s = 0; s < 6; ++s) {
        auto fp = levilab::testing::random_formal_point(v.dimension(), 0, rng);
        for (int j = 0; j < v.dimension(); ++j) {
            EXPECT_NEAR(std::abs(eval_at(v.holo(j), fp) - eval_at(holo[static_cast<std::size_t>(j)], fp)), 0.0, 1e-12);
            EXPECT_NEAR(std::abs(eval_at(v.anti(j), fp) - eval_at(anti[static_cast<std::size_t>(j)], fp)), 0.0, 1e-12);
        }
    }
}

Point ex45_point(double theta) { return {std::polar(1.0, theta), 0.0}; }

}  // namespace

TEST(Basis, QuarticModelPivotAndField) {
    const Point p{0.0625, 0.5};
    const TangentBasis& b = holomorphic_tangent_basis(quartic(), p);
    EXPECT_EQ(b.pivot, 0);
    ASSERT_EQ(b.fields.size(), 1u);
    EXPECT_TRUE(b.fields[0].is_type_10());
    expect_field(b.fields[0], {P("4*z2*zb2^2"), P("1")}, {P("0"), P("0")});
    expect_field(b.conj_fields[0], {P("0"), P("0")}, {P("4*zb2*z2^2"), P("1")});
}

TEST(Basis, SumOfQuarticsMatchesCoordinateFields) {
    const Hypersurface hs = levilab::testing::surface("ex4_3");
    const TangentBasis& b = hs.basis(0);
    ASSERT_EQ(b.fields.size(), 3u);
    for (int k = 1; k <= 3; ++k) {
        std::vector<Expr> holo(4, Expr(0));
        holo[0] = P("4*zb" + std::to_string(k + 1) + "*abs2(z" + std::to_string(k + 1) + ")", 4);
        holo[static_cast<std::size_t>(k)] = Expr(1);
        expect_field(b.fields[static_cast<std::size_t>(k - 1)], holo, std::vector<Expr>(4, Expr(0)));
    }
}

TEST(Basis, FrameIsIdenticallyTangent) {
    // <S_j, d rho> vanishes as a function, not only on the surface.
    for (const auto& id : {"ex4_2", "ex4_3", "ex4_5", "model_n3"}) {
        const Hypersurface hs = levilab::testing::surface(id);
        std::mt19937_64 rng(8);
        for (int pivot = 0; pivot < hs.n(); ++pivot) {
            if (hs.d_holo(pivot).is_zero()) continue;
            for (const VectorField& f : hs.basis(pivot).fields) {
                std::vector<Expr> terms;
                for (int j = 0; j < hs.n(); ++j) terms.push_back(f.holo(j) * hs.d_holo(j));
                Expr pairing = sum(terms);
                for (int s = 0; s < 5; ++s) {
                    auto fp = levilab::testing::random_formal_point(hs.n(), 0, rng);
                    fp.holo[0] += 1.5;  // keep log(z1 zb1) away from 0
                    fp.anti[0] += 1.5;
                    Complex v;
                    try {
                        v = eval_at(pairing, fp);
                    } catch (const DomainError&) {
                        continue;
                    }
                    EXPECT_LT(std::abs(v), 1e-12) << id;
                }
            }
        }
    }
}

TEST(Basis, NonunitPivotFieldIsProportionalToReferenceField) {
    const Scenario s = gallery_scenario("ex4_5");
    const Hypersurface hs = s.hypersurface();
    const VectorField L = ex4_5_field(s);
    for (const Point& p : levilab::testing::surface_points("ex4_5", 20, 4)) {
        Evaluator ev(Assignment::on_surface(p));
        const TangentBasis& b = holomorphic_tangent_basis(hs, p);
        const auto S = b.fields[0].evaluate(ev);
        const auto l = L.evaluate(ev);
        // 2x2 determinant of the holomorphic parts.
        const Complex det = S[0] * l[1] - S[1] * l[0];
        EXPECT_LT(std::abs(det), 1e-12 * (1 + std::abs(l[0]) + std::abs(l[1])));
        const Complex pairing = l[0] * ev(hs.d_holo(0)) + l[1] * ev(hs.d_holo(1));
        EXPECT_LT(std::abs(pairing), 1e-12 * (1 + std::abs(l[0]) + std::abs(l[1])));
    }
}

TEST(Basis, SingularPoint) {
    const Hypersurface hs(2, P("abs2(z1) + abs2(z2)"));
    EXPECT_THROW(holomorphic_tangent_basis(hs, Point{0.0, 0.0}), SingularPointError);
    EXPECT_THROW(bloom_graham_type(hs, Point{0.0, 0.0}), SingularPointError);
}

TEST(Hypersurface, RejectsComplexValuedOrParametrizedRho) {
    EXPECT_THROW(Hypersurface(2, P("z1 + abs2(z2)")), ValidationError);
    EXPECT_THROW(Hypersurface(2, P("re(z1) + t", 2, {"t"})), ValidationError);
    EXPECT_THROW(Hypersurface(1, P("re(z1)", 1)), ValidationError);
}

TEST(ApplyField, Examples) {
    const VectorField d2 = VectorField::coordinate(2, Var::holo(1));
    expect_field(VectorField({apply_field(d2, P("z2^2*zb2^2")), Expr(0)}, {Expr(0), Expr(0)}),
                 {P("2*z2*zb2^2"), Expr(0)}, {Expr(0), Expr(0)});
    const TangentBasis& b = quartic().basis(0);
    Expr applied = apply_field(b.fields[0], P("4*z2*zb2"));
    expect_field(VectorField({applied, Expr(0)}, {Expr(0), Expr(0)}), {P("4*zb2"), Expr(0)}, {Expr(0), Expr(0)});
    EXPECT_TRUE(apply_field(b.fields[0], P("3 + 2*i")).is_zero());
}

TEST(Commutator, Examples) {
    const VectorField dz = VectorField::coordinate(2, Var::holo(0));
    const VectorField dzb = VectorField::coordinate(2, Var::antiholo(0));
    EXPECT_TRUE(commutator(dz, dzb).is_structurally_zero());

    const TangentBasis& b = quartic().basis(0);
    const VectorField br = commutator(b.fields[0], b.conj_fields[0]);
    expect_field(br, {P("-8*z2*zb2"), Expr(0)}, {P("8*z2*zb2"), Expr(0)});
    EXPECT_TRUE(commutator(b.fields[0], b.fields[0]).is_structurally_zero());
    EXPECT_TRUE(commutator(br, br).is_structurally_zero());
}

TEST(Contraction, Examples) {
    const TangentBasis& b = quartic().basis(0);
    Expr c = contract_dbar_rho(commutator(b.fields[0], b.conj_fields[0]), quartic());
    expect_field(VectorField({c, Expr(0)}, {Expr(0), Expr(0)}), {P("-4*z2*zb2"), Expr(0)}, {Expr(0), Expr(0)});
    EXPECT_TRUE(contract_dbar_rho(b.fields[0], quartic()).is_zero());
}

TEST(Contraction, LeadingLogSquareBehaviour) {
    const Scenario s = gallery_scenario("ex4_5");
    const Hypersurface hs = s.hypersurface();
    const VectorField L = ex4_5_field(s);
    const Expr c = negate(contract_dbar_rho(commutator(L, L.conjugate()), hs));
    double last_gap = 1.0;
    for (double sv : {1e-2, 5e-3, 2.5e-3}) {
        const Complex v = eval_complex(c, Assignment::on_surface(std::vector<Complex>{std::exp(sv), 0.0}));
        const double ratio = v.real() / (12.0 * s.constant("C") * (2 * sv) * (2 * sv));
        EXPECT_LT(std::abs(v.imag()), 1e-9 * (1 + std::abs(v)));
        EXPECT_LT(std::abs(ratio - 1.0), last_gap);
        last_gap = std::abs(ratio - 1.0);
    }
    EXPECT_LT(last_gap, 5e-2);
}

TEST(Type, QuarticModel) {
    TypeReport at0 = bloom_graham_type(quartic(), Point{0.0, 0.0});
    ASSERT_TRUE(at0.type);
    EXPECT_EQ(*at0.type, 4);
    ASSERT_EQ(at0.level_witness.size(), 4u);
    for (int j = 0; j < 3; ++j) EXPECT_LE(at0.level_witness[static_cast<std::size_t>(j)], 1e-9 * at0.scale);
    EXPECT_GT(at0.level_witness[3], 1e-9 * at0.scale);

    TypeReport half = bloom_graham_type(quartic(), Point{1.0 / 16, 0.5});
    ASSERT_TRUE(half.type);
    EXPECT_EQ(*half.type, 2);
}

TEST(Type, TypeFourCircle) {
    const Hypersurface hs = gallery_scenario("ex4_5").hypersurface();
    for (double th : {0.0, 1.0, 2.0}) {
        TypeReport r = bloom_graham_type(hs, ex45_point(th));
        ASSERT_TRUE(r.type) << th;
        EXPECT_EQ(*r.type, 4) << th;
        EXPECT_EQ(r.pivot, 1);
    }
}

TEST(Type, ExceedsMaxOrderAndPreconditions) {
    const Hypersurface hs(2, P("abs2(z2)^5 - re(z1)"));
    TypeReport r = bloom_graham_type(hs, Point{0.0, 0.0}, 8);
    EXPECT_TRUE(r.exceeds_max_order());
    EXPECT_EQ(r.level_witness.size(), 8u);
    TypeReport r10 = bloom_graham_type(hs, Point{0.0, 0.0}, 10);
    ASSERT_TRUE(r10.type);
    EXPECT_EQ(*r10.type, 10);
    EXPECT_THROW(bloom_graham_type(quartic(), Point{1.0, 0.0}), OffSurfaceError);
    EXPECT_THROW(bloom_graham_type(quartic(), Point{0.0, 0.0}, 1), PreconditionError);
}

TEST(Type, StrictlyPseudoconvexBoundaryIsTypeTwo) {
    const Hypersurface hs(3, P("abs2(z1) + abs2(z2) + abs2(z3) - 1", 3));
    for (const Point& p : {Point{1.0, 0.0, 0.0}, Point{0.0, std::polar(1.0, 0.3), 0.0}}) {
        TypeReport r = bloom_graham_type(hs, p);
        ASSERT_TRUE(r.type);
        EXPECT_EQ(*r.type, 2);
    }
}

TEST(LeviCoefficient, QuarticModelAtOrigin) {
    const Point o{0.0, 0.0};
    EXPECT_NEAR(std::abs(levi_coefficient(quartic(), o, MultiIndex({2}), MultiIndex({2})) - 4.0), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(levi_coefficient(quartic(), o, MultiIndex({3}), MultiIndex({1}))), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(levi_coefficient(quartic(), o, MultiIndex({1}), MultiIndex({1}))), 0.0, 1e-12);
    EXPECT_THROW(levi_coefficient(quartic(), o, MultiIndex({0}), MultiIndex({2})), PreconditionError);
    EXPECT_THROW(levi_coefficient(quartic(), o, MultiIndex({2}), MultiIndex({0})), PreconditionError);
    EXPECT_THROW(levi_coefficient(quartic(), o, MultiIndex({2}), MultiIndex({2}), 0, 1), PreconditionError);
}

TEST(LeviCoefficient, OracleExpansionAwayFromOrigin) {
    // -S Sb <[S, Sb], dbar rho> = S Sb (4 z2 zb2) = 4 for every p.
    int used = 0;
    for (const Point& p : levilab::testing::surface_points("ex4_2", 60, 21)) {
        if (holomorphic_tangent_basis(quartic(), p).pivot != 0) continue;
        ++used;
        EXPECT_NEAR(std::abs(levi_coefficient(quartic(), p, MultiIndex({2}), MultiIndex({2})) - 4.0), 0.0, 1e-12);
        const Complex a11 = levi_coefficient(quartic(), p, MultiIndex({1}), MultiIndex({1}));
        EXPECT_NEAR(std::abs(a11 - 4.0 * std::norm(p[1])), 0.0, 1e-12);
    }
    EXPECT_GE(used, 10);
}

TEST(MultiIndexOps, StarOrderFactorial) {
    MultiIndex a({2, 0, 3});
    EXPECT_EQ(a.order(), 5);
    EXPECT_DOUBLE_EQ(a.factorial(), 12.0);
    EXPECT_EQ(a.star(0), MultiIndex({1, 0, 3}));
    EXPECT_EQ(a.star(1), MultiIndex({0, 0, 0}));
    EXPECT_EQ(*a.first_admissible(), 0);
    EXPECT_FALSE(MultiIndex({0, 0}).first_admissible());
    EXPECT_EQ(MultiIndex::of_order(3, 2).size(), 6u);
    EXPECT_EQ(MultiIndex::of_order(2, 3).front(), MultiIndex({3, 0}));
}

TEST(LeviForm, SumOfQuarticsAlongCurve) {
    const Hypersurface hs = levilab::testing::surface("ex4_3");
    const double th = std::numbers::pi / 4;
    const Point p{std::pow(std::sin(th), 4) + std::pow(std::cos(th), 4) + 1, 1.0, std::sin(th), std::cos(th)};
    const Point dgamma{4 * std::pow(std::sin(th), 3) * std::cos(th) - 4 * std::pow(std::cos(th), 3) * std::sin(th), 0.0,
                       std::cos(th), -std::sin(th)};
    Point xi;
    for (const auto& c : dgamma) xi.push_back(Complex(0, 1) * c);
    const LeviValue v = levi_form(hs, p, 1, identify_tangent(hs, p, xi));
    EXPECT_NEAR(v.value, 2.0, 1e-9);
    EXPECT_LT(v.imag_residual, 1e-9);
}

TEST(LeviForm, QuarticModelOrderThree) {
    const LeviValue v = levi_form(quartic(), Point{0.0, 0.0}, 3, std::vector<Complex>{1.0});
    EXPECT_NEAR(v.value, 1.0, 1e-12);
    EXPECT_EQ(v.k, 3);
    // Homogeneous of degree 4 in zeta.
    const Complex z{0.3, -1.1};
    EXPECT_NEAR(levi_form(quartic(), Point{0.0, 0.0}, 3, std::vector<Complex>{z}).value, std::pow(std::abs(z), 4), 1e-12);
    EXPECT_THROW(levi_form(quartic(), Point{0.0, 0.0}, 0, std::vector<Complex>{1.0}), PreconditionError);
}

TEST(LeviForm, TypeFourCircleValues) {
    const Scenario s = gallery_scenario("ex4_5");
    const Hypersurface hs = s.hypersurface();
    const double C = s.constant("C");
    for (double th : {0.0, 1.0, 2.0, -2.5}) {
        const Point p = ex45_point(th);
        const Point igamma{Complex(0, 1) * Complex(0, 1) * std::polar(1.0, th), 0.0};
        const auto zeta = identify_tangent(hs, p, igamma);
        const LeviValue along = levi_form(hs, p, 3, zeta);
        EXPECT_NEAR(along.value, 14.0 * C, 1e-6) << th;
        EXPECT_LT(along.imag_residual, 1e-9);

        Evaluator ev(Assignment::on_surface(p));
        const auto L = ex4_5_field(s).evaluate(ev);
        // L|_p in frame coordinates is L's z1 component over the frame's.
        const Complex l_coord = L[0];
        EXPECT_NEAR(std::abs(zeta[0] / l_coord + 1.0), 0.0, 1e-12) << "i gamma' should be -L";
        const LeviValue iL = levi_form(hs, p, 3, std::vector<Complex>{Complex(0, 1) * l_coord});
        EXPECT_NEAR(iL.value, -2.0 * C, 1e-6) << th;
    }
}

TEST(LeviForm, ScalesLinearlyInConstant) {
    Scenario s = gallery_scenario("ex4_5");
    const Hypersurface hs3(2, P("abs2(z2 + exp(i*log(z1*zb1))) + 3*log(z1*zb1)^4 - 1"));
    const Point p = ex45_point(0.4);
    const Point igamma{-std::polar(1.0, 0.4), 0.0};
    EXPECT_NEAR(levi_form(hs3, p, 3, identify_tangent(hs3, p, igamma)).value, 42.0, 1e-6);
}

TEST(IdentifyTangent, Examples) {
    const Hypersurface hs = levilab::testing::surface("ex4_3");
    const Point p = levilab::testing::surface_points("ex4_3", 1, 2).front();
    const TangentBasis& b = holomorphic_tangent_basis(hs, p);
    Evaluator ev(Assignment::on_surface(p));
    for (std::size_t j = 0; j < b.fields.size(); ++j) {
        auto v = b.fields[j].evaluate(ev);
        Point xi(v.begin(), v.begin() + hs.n());
        auto zeta = identify_tangent(hs, p, xi);
        for (std::size_t k = 0; k < zeta.size(); ++k)
            EXPECT_NEAR(std::abs(zeta[k] - (k == j ? 1.0 : 0.0)), 0.0, 1e-12);
    }
    auto zero = identify_tangent(hs, p, Point(4, 0.0));
    for (const auto& z : zero) EXPECT_EQ(z, Complex(0.0));
    Point normal;
    for (int j = 0; j < hs.n(); ++j) normal.push_back(std::conj(ev(hs.d_holo(j))));
    EXPECT_THROW(identify_tangent(hs, p, normal), NotInHError);
}

TEST(Properties, FrameAnnihilatesDrho) {
    for (const auto& id : levilab::testing::surface_ids()) {
        auto r = levilab::testing::check_frame_annihilates(id, 50);
        EXPECT_TRUE(r.ok) << id << ": " << r.detail;
    }
}

TEST(Properties, MuNuIndependence) {
    auto r = levilab::testing::check_mu_nu_independence();
    EXPECT_TRUE(r.ok) << r.detail;
    EXPECT_GT(r.samples, 0u);
}

TEST(Properties, HermitianSymmetry) {
    for (const auto& id : levilab::testing::surface_ids()) {
        auto r = levilab::testing::check_hermitian_symmetry(id, 10, 2);
        EXPECT_TRUE(r.ok) << id << ": " << r.detail;
    }
    for (const auto& id : gallery_ids()) {
        auto r = levilab::testing::check_hermitian_symmetry_on_gallery(id);
        EXPECT_TRUE(r.ok) << id << ": " << r.detail;
        EXPECT_GT(r.samples, 0u);
    }
}

TEST(Properties, HigherCoefficientsNeedNotBeSymmetricOffTheTypeLocus) {
    // a_(2)(2) picks up [S, Sb] applied to the first Levi coefficient.
    auto r = levilab::testing::check_hermitian_symmetry("ex4_5", 5, 4);
    EXPECT_FALSE(r.ok);
}

TEST(Properties, LeviValuesAreReal) {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> u(-1, 1);
    for (const auto& id : levilab::testing::surface_ids()) {
        const Hypersurface hs = levilab::testing::surface(id);
        for (const Point& p : levilab::testing::surface_points(id, 3, 42))
            for (int k = 1; k <= 3; ++k) {
                std::vector<Complex> zeta;
                for (int j = 0; j < hs.n() - 1; ++j) zeta.emplace_back(u(rng), u(rng));
                LeviValue v = levi_form(hs, p, k, zeta);
                EXPECT_LT(v.imag_residual, 1e-9 * (1 + std::abs(v.value))) << id << " k=" << k;
            }
    }
}

TEST(Properties, FirstLeviFormMatchesHessian) {
    for (const auto& id : levilab::testing::surface_ids()) {
        auto r = levilab::testing::check_hessian_oracle(id, 20);
        EXPECT_TRUE(r.ok) << id << ": " << r.detail;
    }
}

TEST(Properties, TypeLowerBound) {
    std::mt19937_64 rng(51);
    std::uniform_real_distribution<double> u(-1, 1);
    struct Case {
        const char* id;
        Point p;
    };
    std::vector<Case> cases{{"ex4_2", {0.0, 0.0}}, {"model_n3", {0.0, 0.0, 0.0}}, {"ex4_5", ex45_point(0.7)}};
    for (const auto& c : cases) {
        const Hypersurface hs = levilab::testing::surface(c.id);
        TypeReport r = bloom_graham_type(hs, c.p);
        ASSERT_TRUE(r.type);
        ASSERT_EQ(*r.type, 4) << c.id;
        for (int k = 1; k < *r.type - 1; ++k)
            for (int s = 0; s < 5; ++s) {
                std::vector<Complex> zeta;
                for (int j = 0; j < hs.n() - 1; ++j) zeta.emplace_back(u(rng), u(rng));
                EXPECT_LT(std::abs(levi_form(hs, c.p, k, zeta).value), 1e-9 * r.scale) << c.id << " k=" << k;
            }
    }
}

TEST(Properties, PseudoconvexSurfacesHaveNonnegativeLeviMatrix) {
    for (const auto& id : {"ex4_2", "ex4_3", "model_n3", "ball", "ex4_5"}) {
        const Hypersurface hs = levilab::testing::surface(id);
        for (const Point& p : levilab::testing::surface_points(id, 20, 61)) {
            auto a = levilab::testing::first_levi_matrix(hs, p);
            const auto dim = static_cast<Eigen::Index>(a.size());
            Eigen::MatrixXcd m(dim, dim);
            double scale = 1.0;
            for (Eigen::Index j = 0; j < dim; ++j)
                for (Eigen::Index k = 0; k < dim; ++k) {
                    m(j, k) = a[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)];
                    scale = std::max(scale, 1.0 + std::abs(m(j, k)));
                }
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
            EXPECT_GE(es.eigenvalues().minCoeff(), -1e-9 * scale) << id;
        }
    }
}

TEST(Concurrency, SharedHypersurfaceAcrossThreads) {
    const Hypersurface hs = levilab::testing::surface("ex4_3");
    const auto pts = levilab::testing::surface_points("ex4_3", 16, 71);
    std::vector<int> types(pts.size());
    {
        std::vector<std::jthread> workers;
        for (std::size_t i = 0; i < pts.size(); ++i)
            workers.emplace_back([&, i] { types[i] = bloom_graham_type(hs, pts[i]).type.value_or(-1); });
    }
    for (std::size_t i = 0; i < pts.size(); ++i) EXPECT_EQ(types[i], bloom_graham_type(hs, pts[i]).type.value_or(-1));
}

TEST(LeviForm, CoordinateFieldsAlongGalleryCurves) {
    // Offset curve: L^1(gamma; L_3) = 4 (2 + cos theta)^2. Closed curve: L^1(.; L_1) = 4 since |z2| = 1.
    // L_j are the pivot-z1 fields; the frame at p may use another pivot.
    const Hypersurface hs = levilab::testing::surface("ex4_4");
    auto along_field = [&](const Point& p, std::size_t j) {
        Evaluator ev(Assignment::on_surface(p));
        const auto v = hs.basis(0).fields[j].evaluate(ev);
        return levi_form(hs, p, 1, identify_tangent(hs, p, Point(v.begin(), v.begin() + 4))).value;
    };
    for (double th : {-2.0, 0.0, 0.7, 2.5}) {
        const Point offset{std::pow(2 + std::cos(th), 4) + std::pow(2 + std::sin(th), 4), 0.0, 2 + std::sin(th),
                           2 + std::cos(th)};
        EXPECT_NEAR(along_field(offset, 2), 4 * std::pow(2 + std::cos(th), 2), 1e-9) << th;
        EXPECT_NEAR(along_field(offset, 0), 0.0, 1e-9) << th;
        const Point closed{std::pow(std::sin(th), 4) + std::pow(std::cos(th), 4) + 1, 1.0, std::sin(th), std::cos(th)};
        EXPECT_NEAR(along_field(closed, 0), 4.0, 1e-9) << th;
    }
}
