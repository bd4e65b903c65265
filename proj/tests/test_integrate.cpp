#include <doctest.h>

#include <cmath>

#include "pg4/integrate.hpp"

using namespace pg4;

namespace {

SignTriple signs_of(int e1, int e2, int e3) {
    SignTriple s;
    s.eps1 = e1;
    s.eps2 = e2;
    s.eps3 = e3;
    return s;
}

}  // namespace

TEST_CASE("canonical initial frames") {
    const Frame a = canonical_initial_frame(signs_of(-1, 1, 1));
    CHECK(a.N.y == 1.0);
    CHECK(a.B1.z == 1.0);
    CHECK(a.B2.w == 1.0);
    CHECK(det4(a.T, a.N, a.B1, a.B2) == doctest::Approx(1.0));
    CHECK(gram_residual(a, signs_of(-1, 1, 1)) == 0.0);

    const Frame b = canonical_initial_frame(signs_of(1, 1, -1));
    CHECK(b.B2.y == 1.0);
    CHECK(b.N.z == 1.0);
    CHECK(b.B1.w == 1.0);
    CHECK(det4(b.T, b.N, b.B1, b.B2) == doctest::Approx(1.0));
    CHECK(gram_residual(b, signs_of(1, 1, -1)) == 0.0);

    const Frame c = canonical_initial_frame(signs_of(1, -1, 1));
    CHECK(c.B1.y == 1.0);
    CHECK(det4(c.T, c.N, c.B1, c.B2) == doctest::Approx(1.0));

    CHECK_THROWS_AS(canonical_initial_frame(signs_of(1, 1, 1)), InconsistentSignature);
    CHECK_THROWS_AS(canonical_initial_frame(signs_of(-1, -1, 1)), InconsistentSignature);
}

TEST_CASE("constant-coefficient closed form: (kappa,tau,sigma) = (1,1,0)") {
    // With N'' = B1' = N the frame solves in sinh/cosh; starting from
    // T = (1,0,1,0), position (0,1,0,0) the curve is (s, cosh s, sinh s, 0).
    const SignTriple signs = signs_of(-1, 1, 1);
    Frame f0 = canonical_initial_frame(signs);
    f0.T = {1, 0, 1, 0};
    CHECK(gram_residual(f0, signs) == 0.0);

    const CurvatureSpec spec = constant_curvature_spec(1, 1, 0, signs, 0.0, 1.0, 1e-3);
    const FramePath path = integrate_frenet(spec, f0, Point4{0, 1, 0, 0});

    REQUIRE(path.s.size() == 1001);
    const size_t last = path.s.size() - 1;
    CHECK(path.position[last].x == doctest::Approx(1.0));
    CHECK(std::abs(path.position[last].y - std::cosh(1.0)) <= 1e-8);
    CHECK(std::abs(path.position[last].z - std::sinh(1.0)) <= 1e-8);
    CHECK(std::abs(path.position[last].w) <= 1e-10);
    CHECK(std::abs(path.frame[last].T.y - std::sinh(1.0)) <= 1e-9);
    CHECK(std::abs(path.frame[last].T.z - std::cosh(1.0)) <= 1e-9);
    CHECK(path.max_gram_residual <= 1e-10);

    // spline values reproduce cosh off the nodes too
    const TabulatedCurve curve = sample_to_curvedef(path);
    for (double s : {0.1234, 0.5, 0.8005}) {
        const auto j = curve.coordinate_jets(s, 5);
        CHECK(std::abs(j[1].value() - std::cosh(s)) <= 1e-8);
        CHECK(std::abs(j[2].value() - std::sinh(s)) <= 1e-8);
    }
}

TEST_CASE("round trip: analysis recovers the prescribed curvatures") {
    const SignTriple signs = signs_of(-1, 1, 1);
    const CurvatureSpec spec = constant_curvature_spec(1, 2, 3, signs, 0.0, 1.0, 1e-3);
    const FramePath path = integrate_frenet(spec, canonical_initial_frame(signs), Point4{});
    const TabulatedCurve curve = sample_to_curvedef(path);
    const ArclengthSampler sampler(curve, 6);
    CHECK(sampler.already_arclength());
    for (double s : {0.0, 0.25, 0.5, 0.75, 1.0}) {
        const FrenetApparatus a = frenet_apparatus(sampler.sample(s));
        CHECK(std::abs(a.kappa - 1.0) <= 1e-6);
        CHECK(std::abs(a.tau - 2.0) <= 1e-6);
        CHECK(std::abs(a.sigma - 3.0) <= 1e-6);
        CHECK(a.signs.eps1 == -1);
        CHECK(a.signs.eps2 == 1);
        CHECK(a.signs.eps3 == 1);
    }
}

TEST_CASE("frame path structure and Gram drift") {
    const SignTriple signs = signs_of(-1, 1, 1);
    const CurvatureSpec coarse = constant_curvature_spec(1, 1, 2, signs, 0.0, 1.0, 0.01);
    const CurvatureSpec fine = constant_curvature_spec(1, 1, 2, signs, 0.0, 1.0, 0.005);
    const FramePath pc = integrate_frenet(coarse, canonical_initial_frame(signs), Point4{});
    const FramePath pf = integrate_frenet(fine, canonical_initial_frame(signs), Point4{});

    // first components are structural, not merely small
    for (size_t i = 0; i < pc.s.size(); i += 7) {
        CHECK(pc.frame[i].T.x == 1.0);
        CHECK(pc.frame[i].N.x == 0.0);
        CHECK(pc.frame[i].B1.x == 0.0);
        CHECK(pc.frame[i].B2.x == 0.0);
        CHECK(pc.position[i].x == pc.s[i]);
    }

    // RK4 drift scales like h^4: halving the step cuts it ~16x
    CHECK(pc.max_gram_residual > 0.0);
    CHECK(pc.max_gram_residual / pf.max_gram_residual > 6.0);

    // optional per-step renormalization pins the Gram matrix
    const FramePath pr = integrate_frenet(coarse, canonical_initial_frame(signs), Point4{}, true);
    CHECK(pr.max_gram_residual <= pc.max_gram_residual);
}

TEST_CASE("zero curvatures leave the frame constant and the position affine") {
    const SignTriple signs = signs_of(-1, 1, 1);
    Frame f0 = canonical_initial_frame(signs);
    f0.T = {1, 0.5, 2, 0.25};
    const CurvatureSpec spec = constant_curvature_spec(0, 0, 0, signs, 0.0, 1.0, 0.05);
    const FramePath path = integrate_frenet(spec, f0, Point4{0, 1, 2, 3});
    const size_t last = path.s.size() - 1;
    CHECK(path.frame[last].T.y == 0.5);
    CHECK(path.frame[last].N.y == 1.0);
    CHECK(path.max_gram_residual == 0.0);
    CHECK(path.position[last].y == doctest::Approx(1.0 + 0.5).epsilon(1e-13));
    CHECK(path.position[last].z == doctest::Approx(2.0 + 2.0).epsilon(1e-13));
}

TEST_CASE("integrator input validation") {
    const SignTriple signs = signs_of(-1, 1, 1);
    const Frame f0 = canonical_initial_frame(signs);

    CurvatureSpec bad_step = constant_curvature_spec(1, 1, 0, signs, 0.0, 1.0, 0.5);
    CHECK_THROWS_AS(integrate_frenet(bad_step, f0, Point4{}), SpecificationError);

    Frame skew = f0;
    skew.N = {0, 1, 0.5, 0};  // breaks the Gram conditions
    const CurvatureSpec spec = constant_curvature_spec(1, 1, 0, signs, 0.0, 1.0, 1e-2);
    CHECK_THROWS_AS(integrate_frenet(spec, skew, Point4{}), SpecificationError);

    CurvatureSpec negative = spec;
    negative.kappa = parse_expression("0-1", "s");
    CHECK_THROWS_AS(integrate_frenet(negative, f0, Point4{}), SpecificationError);
}

TEST_CASE("tabulated curve needs enough samples") {
    const SignTriple signs = signs_of(-1, 1, 1);
    const CurvatureSpec spec = constant_curvature_spec(1, 1, 0, signs, 0.0, 1.0, 1e-2);
    FramePath path = integrate_frenet(spec, canonical_initial_frame(signs), Point4{});
    path.s.resize(3);
    path.position.resize(3);
    path.frame.resize(3);
    path.gram_residual.resize(3);
    CHECK_THROWS_AS(TabulatedCurve{path}, InsufficientSamples);
}

TEST_CASE("over-coarse steps on a fast frame rotation are rejected") {
    // sigma >> tau makes the isotropic block rotate at ~sigma; at
    // theta = sigma*h = 3 the RK4 stability factor is far from 1.
    const SignTriple signs = signs_of(-1, 1, 1);
    const CurvatureSpec spec = constant_curvature_spec(1, 1, 60, signs, 0.0, 1.0, 0.05);
    CHECK_THROWS_AS(integrate_frenet(spec, canonical_initial_frame(signs), Point4{}), StepTooLarge);
}
