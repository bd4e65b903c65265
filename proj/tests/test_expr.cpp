#include <doctest.h>

#include <string>
#include <vector>

#include "pg4/curve.hpp"
#include "pg4/expr.hpp"

using namespace pg4;

TEST_CASE("curve text parsing") {
    const CurveDef c = parse_curve("x=s; y=cosh(s); z=sinh(s); w=0 on [0,1]");
    CHECK(c.param == "s");
    CHECK(c.domain_min == 0.0);
    CHECK(c.domain_max == 1.0);
    CHECK(eval_value(*c.y, 0.0) == doctest::Approx(1.0));

    const CurveDef c2 = parse_curve("x=s; y=s^2/2; z=s; w=s*sin(s) on [0,2]");
    CHECK(eval_value(*c2.y, 2.0) == doctest::Approx(2.0));

    const CurveDef c3 = parse_curve("x=2*t; y=t; z=0; w=0 on [-1,1]");
    CHECK(c3.param == "t");
}

TEST_CASE("parse errors carry location and kind") {
    CHECK_THROWS_AS(parse_curve("x=s; y=foo(s); z=s; w=0 on [0,1]"), UnknownIdentifier);
    try {
        parse_curve("x=s; y=foo(s); z=s; w=0 on [0,1]");
    } catch (const UnknownIdentifier& e) {
        CHECK(e.name == "foo");
        CHECK(e.col == 8);
    }
    CHECK_THROWS_AS(parse_curve("x=s; y=sin; z=s; w=0 on [0,1]"), ArityError);
    CHECK_THROWS_AS(parse_curve("x=s; y=t; z=s; w=0 on [0,1]"), UnknownIdentifier);  // two parameters
    CHECK_THROWS_AS(parse_curve("x=s; y=q; z=s; w=0 on [0,1]"), UnknownIdentifier);
    CHECK_THROWS_AS(parse_curve("x=s; y=1+; z=s; w=0 on [0,1]"), ParseError);
    CHECK_THROWS_AS(parse_curve("x=s; y=s z=s; w=0 on [0,1]"), ParseError);
    CHECK_THROWS_AS(parse_curve("x=s; y=s; z=s; w=0 on [1,1]"), ParseError);   // degenerate domain
    CHECK_THROWS_AS(parse_curve("x=s; y=s; z=s; w=0"), ParseError);            // missing domain
    CHECK_THROWS_AS(parse_curve("x=s; x=s; z=s; w=0 on [0,1]"), ParseError);   // duplicate coordinate
    CHECK_THROWS_AS(parse_curve("x=s; y=(s; z=s; w=0 on [0,1]"), ParseError);  // unbalanced paren
    CHECK_THROWS_AS(parse_curve("x=s; y=s^s; z=s; w=0 on [0,1]"), ParseError);  // non-literal exponent
}

TEST_CASE("number lexing edge cases") {
    CHECK(eval_value(*parse_expression("2e3", "s"), 0) == doctest::Approx(2000.0));
    CHECK(eval_value(*parse_expression("2e-3", "s"), 0) == doctest::Approx(0.002));
    CHECK(eval_value(*parse_expression("2*e", "s"), 0) == doctest::Approx(2 * 2.718281828459045));
    // "2e" is the number 2 followed by the constant e: juxtaposition is
    // not multiplication, so it does not parse
    CHECK_THROWS_AS(parse_expression("2e", "s"), ParseError);
    CHECK_THROWS_AS(parse_expression("2e+", "s"), ParseError);
}

TEST_CASE("expression jets") {
    const ExprPtr cube = parse_expression("s^3", "s");
    Jet j = eval_jet(*cube, 1.0, 4);
    CHECK(j[0] == doctest::Approx(1));
    CHECK(j[1] == doctest::Approx(3));
    CHECK(j[2] == doctest::Approx(6));
    CHECK(j[3] == doctest::Approx(6));
    CHECK(j[4] == doctest::Approx(0));

    const ExprPtr ch = parse_expression("cosh(s)", "s");
    j = eval_jet(*ch, 0.0, 5);
    const double want[6] = {1, 0, 1, 0, 1, 0};
    for (int k = 0; k <= 5; ++k) CHECK(j[k] == doctest::Approx(want[k]));

    const ExprPtr sinc = parse_expression("sin(s)/s", "s");
    CHECK_THROWS_AS(eval_jet(*sinc, 0.0, 4), JetDomainError);

    const ExprPtr consts = parse_expression("pi+e", "s");
    CHECK(eval_value(*consts, 0.0) == doctest::Approx(3.14159265358979 + 2.71828182845905));
}

TEST_CASE("operator precedence golden shapes") {
    const ExprPtr a = parse_expression("1+2*s^2", "s");
    REQUIRE(a->kind == Expr::Kind::Add);
    REQUIRE(a->rhs->kind == Expr::Kind::Mul);
    CHECK(a->rhs->rhs->kind == Expr::Kind::Pow);

    const ExprPtr b = parse_expression("-s^2", "s");
    REQUIRE(b->kind == Expr::Kind::Neg);
    CHECK(b->lhs->kind == Expr::Kind::Pow);

    // unary minus binds at factor level: -s*2 is (-s)*2
    const ExprPtr c = parse_expression("-s*2", "s");
    CHECK(c->kind == Expr::Kind::Mul);

    const ExprPtr d = parse_expression("1-2-3", "s");
    REQUIRE(d->kind == Expr::Kind::Sub);
    CHECK(eval_value(*d, 0.0) == doctest::Approx(-4.0));

    const ExprPtr f = parse_expression("8/4/2", "s");
    CHECK(eval_value(*f, 0.0) == doctest::Approx(1.0));
}

TEST_CASE("print -> parse round trip is structural identity") {
    const std::vector<std::string> fixtures = {
        "s",
        "1+2*s^2",
        "-s^2",
        "-(s+1)",
        "s*-s",
        "1-2-3",
        "1-(2-3)",
        "8/4/2",
        "8/(4/2)",
        "(s+1)^2",
        "sin(cos(s))",
        "cosh(s)*sinh(s)",
        "s^3/6+s",
        "2*cosh(s)+s^2/2",
        "exp(-s)",
        "sqrt(s+2)",
        "ln(s+1)",
        "pi*s",
        "e^2",
        "s/(1+s^2)",
        "-s",
        "0.5*s^4",
        "1e-3*s",
        "s^0.5",
        "sin(s)+cos(s)+sinh(s)+cosh(s)",
        "(1+s)*(1-s)",
        "s-(-s)",
        "2-s*3",
        "s*(2+s)^3",
        "sqrt(exp(s))",
    };
    for (const auto& text : fixtures) {
        CAPTURE(text);
        const ExprPtr parsed = parse_expression(text, "s");
        const std::string printed = print_expr(*parsed, "s");
        const ExprPtr reparsed = parse_expression(printed, "s");
        CHECK(expr_equal(*parsed, *reparsed));
    }
}

TEST_CASE("curve print round trip") {
    const char* text = "x=s; y=2*cosh(s)+s^2/2; z=sinh(s)-s; w=sin(s)*s on [0.5,1.5]";
    const CurveDef c = parse_curve(text);
    const CurveDef again = parse_curve(print_curve(c));
    CHECK(expr_equal(*c.x, *again.x));
    CHECK(expr_equal(*c.y, *again.y));
    CHECK(expr_equal(*c.z, *again.z));
    CHECK(expr_equal(*c.w, *again.w));
    CHECK(c.domain_min == again.domain_min);
    CHECK(c.domain_max == again.domain_max);
}

TEST_CASE("curve JSON round trip") {
    const CurveDef c = parse_curve("x=s; y=cosh(s); z=sinh(s); w=0 on [0,1]");
    CurveDef named = c;
    named.label = "hyperbolic";
    const std::string json = curve_to_json_text(named);
    const CurveDef back = curve_from_json_text(json);
    CHECK(back.label == "hyperbolic");
    CHECK(expr_equal(*back.y, *c.y));
    CHECK(back.domain_max == 1.0);

    CHECK_THROWS_AS(curve_from_json_text("{"), ParseError);
    CHECK_THROWS_AS(curve_from_json_text(R"({"x":"s"})"), ParseError);
    CHECK_THROWS_AS(curve_from_json_text(
                        R"({"label":"bad","param":"u","x":"u","y":"0","z":"0","w":"0","domain":[0,1]})"),
                    ParseError);
}

TEST_CASE("expression jets agree with finite differences at random interior points") {
    struct Rng {
        uint64_t state = 11;
        double uniform(double lo, double hi) {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            return lo + (hi - lo) * (static_cast<double>(state >> 11) / 9007199254740992.0);
        }
    } rng;

    for (const CurveDef& def : builtin_corpus()) {
        const ExprPtr comps[4] = {def.x, def.y, def.z, def.w};
        for (int n = 0; n < 25; ++n) {
            const double margin = 0.06;
            const double at = rng.uniform(def.domain_min + margin, def.domain_max - margin);
            for (const ExprPtr& comp : comps) {
                const Jet j = eval_jet(*comp, at, 4);
                const auto fd = fd_derivatives([&](double u) { return eval_value(*comp, u); }, at, 4, 1e-2);
                for (int k = 0; k <= 4; ++k) {
                    const double scale = std::max({1.0, std::abs(j[k]), std::abs(fd.value[k])});
                    CHECK(std::abs(j[k] - fd.value[k]) / scale <= 1e-5);
                }
            }
        }
    }
}
