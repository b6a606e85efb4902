#include <cmath>

#include "doctest.h"
#include "plates/limit_functional.hpp"

using namespace plates;

namespace {

Polynomial2 poly(std::initializer_list<double> cs) {
    std::vector<double> v(cs);
    return Polynomial2::from_coeffs(v);
}

const Polynomial2 kOnePlusX1Sq = poly({1, 0, 0, 1});
const Polynomial2 kZero = Polynomial2::constant(0.0);

}  // namespace

TEST_CASE("reduced diagonal evaluator reproduces hand-integrated values") {
    // lambda = 1, v = x1^2, w = 0 on the unit square:
    // bending = (1/24) Q2(diag(2,0)) = (1/24)(32/3) = 4/9
    // stretching = (1/2) int Q2(diag(2 x1^2, 0)) = (16/3) int x1^4 = 16/15
    ElasticModel m;
    Grid2 grid{129, 129, 1.0, 1.0};
    I4Breakdown b = evaluate_i4_diag(Polynomial2::constant(1.0), m, grid, poly({0, 0, 0, 1}),
                                     kZero, kZero);
    CHECK(b.bending_term == doctest::Approx(4.0 / 9.0).epsilon(1e-10));
    CHECK(b.stretching_term == doctest::Approx(16.0 / 15.0).epsilon(1e-3));
    CHECK(b.curvature_term == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
    CHECK(b.total == doctest::Approx(b.stretching_term + b.bending_term).epsilon(1e-14));
}

TEST_CASE("residual curvature energy of the open-book metric") {
    // lambda = 1 + x1^2: (1/5760) int Q2(M_lambda)
    //   = (32/3)(1/4 + pi/8)/5760 by the 1D closed-form quadrature
    ElasticModel m;
    Grid2 grid{257, 257, 1.0, 1.0};
    const double ref = (32.0 / 3.0) * (0.25 + M_PI / 8.0) / 5760.0;
    I4Breakdown b = evaluate_i4_diag(kOnePlusX1Sq, m, grid, kZero, kZero, kZero);
    CHECK(b.curvature_term == doctest::Approx(ref).epsilon(5e-5));
    // with (v, w) = 0 and lambda nonconstant, only stretching adds the
    // built-in strain offset
    CHECK(b.bending_term == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
    CHECK(b.stretching_term > 0.0);
}

TEST_CASE("polynomial and nodal-field evaluations agree on stencil-exact inputs") {
    ElasticModel m;
    m.mu = 1.3;
    m.lambdaL = 0.7;
    Grid2 grid{33, 33, 1.0, 1.0};
    Polynomial2 v = poly({0, 0.2, -0.1, 0.5, 1.0, 0.25});
    Polynomial2 w1 = poly({0, 1, 0, -0.3, 0.2, 0.1});
    Polynomial2 w2 = poly({0, 0, 1, 0.15, -0.4, 0.05});
    I4Breakdown a = evaluate_i4_diag(kOnePlusX1Sq, m, grid, v, w1, w2);

    Field vf = grid.sample([&](double x1, double x2) { return v(x1, x2); });
    Field w1f = grid.sample([&](double x1, double x2) { return w1(x1, x2); });
    Field w2f = grid.sample([&](double x1, double x2) { return w2(x1, x2); });
    I4Breakdown b = evaluate_i4_diag_fields(kOnePlusX1Sq, m, grid, vf, w1f, w2f);

    CHECK(b.stretching_term == doctest::Approx(a.stretching_term).epsilon(1e-11));
    CHECK(b.bending_term == doctest::Approx(a.bending_term).epsilon(1e-11));
    CHECK(b.total == doctest::Approx(a.total).epsilon(1e-11));
}

TEST_CASE("general and reduced evaluators agree on the diagonal family") {
    ElasticModel m;
    Grid2 grid{33, 33, 1.0, 1.0};
    MetricField g = MetricField::diag_lambda(kOnePlusX1Sq);
    ImmersionBundle bundle = catalog_immersion(g);

    Polynomial2 v = poly({0, 0, 0, 0, 1});  // x1 x2
    Polynomial2 w1 = poly({0, 0, 0, 1});    // x1^2
    Polynomial2 w2 = poly({0, 0, 1});       // x2
    I4Breakdown reduced = evaluate_i4_diag(kOnePlusX1Sq, m, grid, v, w1, w2);

    AdmissiblePair pair;
    pair.V = VectorField2to3::from_polys(kZero, kZero, v);
    pair.S = [&](const Vec2& x) {
        Mat2 gw;
        Vec2 g1 = w1.gradient(x[0], x[1]);
        Vec2 g2 = w2.gradient(x[0], x[1]);
        gw(0, 0) = g1[0], gw(0, 1) = g1[1];
        gw(1, 0) = g2[0], gw(1, 1) = g2[1];
        return sym(gw);
    };
    I4Breakdown general = evaluate_i4(bundle, g, m, pair, grid);

    CHECK(general.stretching_term == doctest::Approx(reduced.stretching_term).epsilon(1e-9));
    CHECK(general.bending_term == doctest::Approx(reduced.bending_term).epsilon(1e-9));
    CHECK(general.curvature_term == doctest::Approx(reduced.curvature_term).epsilon(1e-9));
    CHECK(general.total == doctest::Approx(reduced.total).epsilon(1e-9));
}

TEST_CASE("general and reduced evaluators agree on the conformal family") {
    ElasticModel m;
    Grid2 grid{33, 33, 1.0, 1.0};
    Polynomial2 f = poly({0.0, 0.2});  // affine, harmonic
    MetricField g = MetricField::conformal_lambda(f);
    ImmersionBundle bundle = catalog_immersion(g);

    // normal displacement V = (0, 0, e^f): admissible because the midplate
    // image lies in the plane; exercises the second-order term
    VectorField2to3 V;
    V.value = [](const Vec2& x) { return Vec3{0.0, 0.0, std::exp(0.2 * x[0])}; };
    V.d = [](int k, const Vec2& x) {
        return k == 0 ? Vec3{0.0, 0.0, 0.2 * std::exp(0.2 * x[0])} : Vec3{0.0, 0.0, 0.0};
    };
    V.dd = [](int k, int l, const Vec2& x) {
        return (k == 0 && l == 0) ? Vec3{0.0, 0.0, 0.04 * std::exp(0.2 * x[0])}
                                  : Vec3{0.0, 0.0, 0.0};
    };
    auto S = [](const Vec2& x) {
        Mat2 s;
        s(0, 0) = x[1];
        s(0, 1) = 0.1;
        s(1, 0) = 0.1;
        s(1, 1) = x[0];
        return s;
    };

    I4Breakdown reduced = evaluate_i4_conformal(f, m, grid, V, S);
    AdmissiblePair pair;
    pair.V = V;
    pair.S = S;
    I4Breakdown general = evaluate_i4(bundle, g, m, pair, grid);

    CHECK(general.stretching_term == doctest::Approx(reduced.stretching_term).epsilon(1e-9));
    CHECK(general.bending_term == doctest::Approx(reduced.bending_term).epsilon(1e-9));
    CHECK(general.curvature_term == doctest::Approx(reduced.curvature_term).epsilon(1e-9));
    CHECK(general.total == doctest::Approx(reduced.total).epsilon(1e-9));
    CHECK(reduced.bending_term > 1e-8);  // the normal displacement really bends
}

TEST_CASE("conformal evaluator insists on a harmonic exponent") {
    ElasticModel m;
    Grid2 grid{17, 17, 1.0, 1.0};
    CHECK_THROWS_AS(evaluate_i4_conformal(poly({0, 0, 0, 1}), m, grid, VectorField2to3::zero(),
                                          [](const Vec2&) { return Mat2::zero(); }),
                    std::invalid_argument);
}

TEST_CASE("inadmissible displacements are rejected") {
    ElasticModel m;
    Grid2 grid{17, 17, 1.0, 1.0};
    MetricField g = MetricField::diag_lambda(kOnePlusX1Sq);
    ImmersionBundle bundle = catalog_immersion(g);
    AdmissiblePair pair;
    pair.V = VectorField2to3::from_polys(poly({0, 1}), kZero, kZero);  // V1 = x1 stretches
    pair.S = [](const Vec2&) { return Mat2::zero(); };
    CHECK_THROWS_AS(evaluate_i4(bundle, g, m, pair, grid), std::invalid_argument);
}

TEST_CASE("minimization drives an exactly realizable metric to zero energy") {
    // lambda = (1 + 0.2 x1)^2: flat, constant built-in strain offset, so a
    // linear in-plane correction cancels the stretching term exactly
    ElasticModel m;
    Grid2 grid{17, 17, 1.0, 1.0};
    Polynomial2 lam = poly({1, 0.4, 0, 0.04});
    MinimizeResult r = minimize_i4_diag(lam, m, grid);
    CHECK(r.breakdown.curvature_term == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));
    CHECK(r.breakdown.total < 1e-10);
    CHECK(r.status == LbfgsStatus::Converged);
    CHECK(r.iterations < 500);
}

TEST_CASE("objective history is monotone under the line search") {
    ElasticModel m;
    Grid2 grid{17, 17, 1.0, 1.0};
    MinimizeResult r = minimize_i4_diag(kOnePlusX1Sq, m, grid);
    REQUIRE(r.objective_history.size() > 1);
    for (std::size_t k = 1; k < r.objective_history.size(); ++k)
        CHECK(r.objective_history[k] <= r.objective_history[k - 1] + 1e-14);
}

TEST_CASE("minimum of the open-book metric is its residual curvature energy") {
    ElasticModel m;
    Grid2 grid{33, 33, 1.0, 1.0};
    MinimizeResult r = minimize_i4_diag(kOnePlusX1Sq, m, grid);
    CHECK(r.breakdown.total >= r.breakdown.curvature_term - 1e-15);
    CHECK(r.breakdown.total <= r.breakdown.curvature_term * 1.01);
    CHECK(r.breakdown.bending_term < 1e-8);
}

TEST_CASE("soft-constraint path reproduces the eliminated-constraint result") {
    ElasticModel m;
    Grid2 grid{13, 13, 1.0, 1.0};
    MinimizeResult hard = minimize_i4_diag(kOnePlusX1Sq, m, grid);
    PenaltyMinimizeResult soft = minimize_i4_diag_penalty(kOnePlusX1Sq, m, grid, 10.0);
    CHECK(soft.penalty_residual < 1e-20);
    CHECK(soft.breakdown.total == doctest::Approx(hard.breakdown.total).epsilon(1e-8));
    double tangential = 0.0;
    for (double v : soft.V1) tangential = std::max(tangential, std::abs(v));
    for (double v : soft.V2) tangential = std::max(tangential, std::abs(v));
    CHECK(tangential < 1e-12);
}
