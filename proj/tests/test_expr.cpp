#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "levilab/error.hpp"
#include "levilab/eval.hpp"
#include "levilab/parser.hpp"
#include "support/oracles.hpp"
#include "support/properties.hpp"

using namespace levilab;
using levilab::testing::P;

namespace {

Complex on_surface(const Expr& e, std::vector<Complex> p, std::vector<double> params = {}) {
    return eval_complex(e, Assignment::on_surface(p, params));
}

// Compares two expressions as functions at a few formal points.
void expect_same_function(const Expr& a, const Expr& b, int n = 2, int m = 0) {
    std::mt19937_64 rng(5);
    for (int s = 0; s < 8; ++s) {
        auto fp = levilab::testing::random_formal_point(n, m, rng);
        Complex va = eval_complex(a, fp.assignment());
        Complex vb = eval_complex(b, fp.assignment());
        EXPECT_NEAR(std::abs(va - vb), 0.0, 1e-12 * (1 + std::abs(va))) << to_string(a) << " vs " << to_string(b);
    }
}

}  // namespace

TEST(Parse, RealPartIsHalfSumWithConjugate) {
    Expr e = P("re(z1)");
    expect_same_function(e, (Expr(Var::holo(0)) + Expr(Var::antiholo(0))) * Expr(0.5));
    EXPECT_NEAR(on_surface(e, {{2.0, 3.0}, 0.0}).real(), 2.0, 1e-15);
}

TEST(Parse, QuarticModelVanishesOnCurvePoint) {
    Expr e = P("abs2(z2)^2 - re(z1)");
    Complex v = on_surface(e, {0.0625, 0.5});
    EXPECT_NEAR(std::abs(v), 0.0, 1e-15);
}

TEST(Parse, ParameterPower) {
    Expr e = P("t^4", 2, {"t"});
    ASSERT_EQ(e.op(), Op::Power);
    EXPECT_EQ(e.exponent(), 4);
    ASSERT_EQ(e.args()[0].op(), Op::Variable);
    EXPECT_EQ(e.args()[0].variable(), Var::param(0));
}

TEST(Parse, ConstantsPiAndComments) {
    Expr e = P("C*pi + i*i  # trailing comment", 2, {}, {{"C", 2.0}});
    ASSERT_TRUE(e.is_constant());
    EXPECT_NEAR(e.constant().real(), 2 * std::numbers::pi - 1, 1e-15);
}

TEST(Parse, UnknownIdentifierReportsColumn) {
    try {
        P("z1 + foo");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.column(), 6u);
        EXPECT_NE(std::string(e.what()).find("foo"), std::string::npos);
    }
}

TEST(Parse, VariableOutOfRange) {
    EXPECT_THROW(P("abs2(z9)", 2), ParseError);
    EXPECT_THROW(P("zb3", 2), ParseError);
    EXPECT_THROW(P("z0", 2), ParseError);
}

TEST(Parse, ArityAndSyntaxErrors) {
    EXPECT_THROW(P("sin(z1, z2)"), ParseError);
    EXPECT_THROW(P("sin()"), ParseError);
    EXPECT_THROW(P("sin"), ParseError);
    EXPECT_THROW(P("(z1 + z2"), ParseError);
    EXPECT_THROW(P("z1 +"), ParseError);
    EXPECT_THROW(P("z1 ^ 1.5"), ParseError);
    EXPECT_THROW(P("z1 ^ z2"), ParseError);
    EXPECT_THROW(P("z1 / 0"), ParseError);
    EXPECT_THROW(P("z1 $ z2"), ParseError);
}

TEST(Parse, NegativeAndParenthesizedExponents) {
    Expr e = P("z1^(-2) + z1^-1");
    Complex z{0.5, 0.25};
    Complex v = on_surface(e, {z, 0.0});
    EXPECT_NEAR(std::abs(v - (1.0 / (z * z) + 1.0 / z)), 0.0, 1e-12);
}

TEST(Parse, PrintedFormReparses) {
    levilab::testing::ExprGenerator gen(2, 1, 99);
    for (int s = 0; s < 50; ++s) {
        Expr e = gen.next(3);
        Expr back = P(to_string(e, VarNames{{"t"}}), 2, {"t"});
        std::mt19937_64 rng(s);
        auto fp = levilab::testing::random_formal_point(2, 1, rng);
        Complex a, b;
        try {
            a = eval_complex(e, fp.assignment());
        } catch (const DomainError&) {
            continue;
        }
        b = eval_complex(back, fp.assignment());
        EXPECT_NEAR(std::abs(a - b), 0.0, 1e-9 * (1 + std::abs(a))) << to_string(e, VarNames{{"t"}});
    }
}

TEST(Derive, MonomialRule) {
    Expr e = P("z2^2*zb2^2");
    expect_same_function(derive(e, Var::holo(1)), P("2*z2*zb2^2"));
    EXPECT_TRUE(derive(e, Var::holo(0)).is_zero());
}

TEST(Derive, LogOfAbsSquareMatchesFiniteDifference) {
    Expr e = P("log(z1*zb1)");
    Expr d = derive(e, Var::holo(0));
    const Complex z{1.0, 0.3};
    const double h = 1e-5;
    Assignment a = Assignment::on_surface(std::vector<Complex>{z, 0.0});
    Complex fd = (eval_complex(e, a.with(Var::holo(0), z + h)) - eval_complex(e, a.with(Var::holo(0), z - h))) / (2 * h);
    Complex exact = eval_complex(d, a);
    EXPECT_LT(std::abs(exact - 1.0 / z) / std::abs(1.0 / z), 1e-12);
    EXPECT_LT(std::abs(fd - exact) / std::abs(exact), 1e-6);
}

TEST(Derive, RealPartAgainstConjugate) {
    Expr d = derive(P("re(z1)"), Var::antiholo(0));
    ASSERT_TRUE(d.is_constant());
    EXPECT_NEAR(std::abs(d.constant() - 0.5), 0.0, 1e-15);
}

TEST(Derive, ParameterChainRule) {
    Expr e = P("sin(t)^4 + cos(t)^4", 2, {"t"});
    Expr d = derive(e, Var::param(0));
    for (double t : {0.0, 0.3, 1.2}) {
        Complex v = eval_complex(d, Assignment::parameters(std::vector<Complex>{t}));
        double expected = 4 * std::pow(std::sin(t), 3) * std::cos(t) - 4 * std::pow(std::cos(t), 3) * std::sin(t);
        EXPECT_NEAR(v.real(), expected, 1e-13);
    }
}

TEST(Conjugate, Examples) {
    EXPECT_TRUE(structurally_equal(conjugate(P("z1")), P("zb1")));
    Expr it = P("i*t", 2, {"t"});
    Complex v = eval_complex(conjugate(it), Assignment::parameters(std::vector<Complex>{0.7}));
    EXPECT_NEAR(std::abs(v - Complex(0, -0.7)), 0.0, 1e-15);
    Expr e = P("exp(z2)");
    EXPECT_TRUE(structurally_equal(normalize(conjugate(conjugate(e))), normalize(e)));
}

TEST(Conjugate, ConjOperatorPushesThrough) {
    expect_same_function(P("conj(z1*exp(i*z2))"), P("zb1*exp(-i*zb2)"));
}

TEST(Eval, LogOfUnitModulusVanishes) {
    Expr e = P("log(z1*zb1)");
    for (double th : {-2.0, 0.0, 0.5, 3.0}) {
        Complex v = on_surface(e, {std::polar(1.0, th), 0.0});
        EXPECT_NEAR(std::abs(v), 0.0, 1e-15);
    }
}

TEST(Eval, DomainErrorNamesSubtree) {
    Expr e = P("1 + log(z1*zb1)");
    try {
        on_surface(e, {0.0, 1.0});
        FAIL();
    } catch (const DomainError& err) {
        EXPECT_NE(err.subtree().find("log"), std::string::npos);
    }
    EXPECT_THROW(on_surface(P("1/z1"), {0.0, 1.0}), DomainError);
    EXPECT_THROW(on_surface(P("z1^(-2)"), {0.0, 1.0}), DomainError);
}

TEST(Eval, UnboundVariableIsDomainError) {
    EXPECT_THROW(eval_complex(P("t", 2, {"t"}), Assignment::on_surface(std::vector<Complex>{1.0, 1.0})), DomainError);
}

TEST(Eval, ConstantFoldingIsExact) {
    Expr e = P("2^10 - 3*(4 - 1)");
    ASSERT_TRUE(e.is_constant());
    EXPECT_EQ(e.constant(), Complex(1015.0));
}

TEST(Simplify, IdentitiesAndFlattening) {
    EXPECT_TRUE(P("0*z1 + 0").is_zero());
    EXPECT_TRUE(structurally_equal(P("1*z1 + 0"), P("z1")));
    Expr e = P("(z1^2)^3");
    ASSERT_EQ(e.op(), Op::Power);
    EXPECT_EQ(e.exponent(), 6);
    EXPECT_TRUE(P("z1^0").is_one());
}

TEST(Properties, FiniteDifferenceDerivatives) {
    auto r = levilab::testing::check_fd_derivatives(100);
    EXPECT_TRUE(r.ok) << r.detail;
    EXPECT_GE(r.samples, 500u);
}

TEST(Properties, ConjugationIsAnInvolution) {
    levilab::testing::ExprGenerator gen(3, 1, 2024);
    for (int s = 0; s < 200; ++s) {
        Expr e = gen.next(4);
        EXPECT_TRUE(structurally_equal(normalize(conjugate(conjugate(e))), normalize(e))) << to_string(e);
    }
}

TEST(Properties, DerivativeCommutesWithConjugation) {
    levilab::testing::ExprGenerator gen(2, 0, 77);
    std::mt19937_64 rng(78);
    int checked = 0;
    while (checked < 100) {
        Expr e = gen.next(3);
        std::vector<Complex> p{{std::uniform_real_distribution<double>(-1, 1)(rng), 0.4},
                               {0.3, std::uniform_real_distribution<double>(-1, 1)(rng)}};
        Assignment a = Assignment::on_surface(p);
        if (levilab::testing::min_singular_distance(e, a) < 0.1) continue;
        for (int j = 0; j < 2; ++j) {
            Complex lhs, rhs;
            try {
                lhs = eval_complex(derive(conjugate(e), Var::antiholo(j)), a);
                rhs = std::conj(eval_complex(derive(e, Var::holo(j)), a));
            } catch (const DomainError&) {
                continue;
            }
            EXPECT_LE(std::abs(lhs - rhs), 1e-12 * (1 + std::abs(rhs))) << to_string(e);
        }
        ++checked;
    }
}

TEST(Properties, RealValuedExpressionsEvaluateReal) {
    levilab::testing::ExprGenerator gen(2, 0, 31);
    std::mt19937_64 rng(32);
    int checked = 0;
    while (checked < 100) {
        Expr base = gen.next(3);
        Expr e = base + conjugate(base);
        ASSERT_TRUE(structurally_equal(normalize(conjugate(e)), normalize(e)));
        std::vector<Complex> p{{std::uniform_real_distribution<double>(-1, 1)(rng), -0.2},
                               {0.6, std::uniform_real_distribution<double>(-1, 1)(rng)}};
        Complex v;
        try {
            v = eval_complex(e, Assignment::on_surface(p));
        } catch (const DomainError&) {
            continue;
        }
        if (!std::isfinite(std::abs(v))) continue;
        EXPECT_LT(std::abs(v.imag()), 1e-12 * (1 + std::abs(v))) << to_string(e);
        ++checked;
    }
}
