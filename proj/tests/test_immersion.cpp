#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

#include "doctest.h"
#include "plates/immersion.hpp"

using namespace plates;

namespace {

Polynomial2 poly(std::initializer_list<double> cs) {
    std::vector<double> v(cs);
    return Polynomial2::from_coeffs(v);
}

const Polynomial2 kOnePlusX1Sq = poly({1, 0, 0, 1});

double rand_in(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

double sup_field(const Field& f) {
    double s = 0.0;
    for (double v : f) s = std::max(s, v);
    return s;
}

double mean_field(const Field& f) {
    double s = 0.0;
    for (double v : f) s += v;
    return s / static_cast<double>(f.size());
}

}  // namespace

TEST_CASE("identity metric has the trivial flat bundle") {
    ImmersionBundle b = catalog_immersion(MetricField::identity());
    Vec2 x{0.3, 0.6};
    CHECK(norm(b.y0(x) - Vec3{0.3, 0.6, 0.0}) < 1e-15);
    CHECK(norm(b.b0(x) - Vec3{0.0, 0.0, 1.0}) < 1e-15);
    CHECK(norm(b.d0(x)) < 1e-15);
    Mat3 Q = b.Q0(x);
    CHECK(frob_norm(Q - Mat3::identity()) < 1e-15);
}

TEST_CASE("diagonal-family bundle: frame, director, and isometry conditions") {
    MetricField g = MetricField::diag_lambda(kOnePlusX1Sq);
    ImmersionBundle b = catalog_immersion(g);
    Grid2 grid{33, 33, 1.0, 1.0};

    IsometryReport rep = check_isometry_conditions(b, g, grid);
    CHECK(rep.metric_residual < 1e-12);
    CHECK(rep.bending_residual < 1e-12);

    std::mt19937_64 rng(5);
    for (int t = 0; t < 10; ++t) {
        Vec2 x{rand_in(rng, 0, 1), rand_in(rng, 0, 1)};
        const double lam = 1.0 + x[0] * x[0];
        CHECK(norm(b.b0(x) - Vec3{0.0, 0.0, std::sqrt(lam)}) < 1e-13);
        // d0 = -(1/2)(grad lambda, 0)
        CHECK(norm(b.d0(x) - Vec3{-x[0], 0.0, 0.0}) < 1e-13);
        // frame Gram matrix reproduces the metric
        Mat3 Q = b.Q0(x);
        CHECK(frob_norm(transpose(Q) * Q - g.sample(x)) < 1e-12);
        CHECK(det(Q) > 0.0);
    }
}

TEST_CASE("conformal-family bundle satisfies the isometry conditions") {
    MetricField g = MetricField::conformal_lambda(poly({0.1, 0.4, 0.0}));
    ImmersionBundle b = catalog_immersion(g);
    Grid2 grid{33, 33, 1.0, 1.0};
    IsometryReport rep = check_isometry_conditions(b, g, grid);
    CHECK(rep.metric_residual < 1e-11);
    CHECK(rep.bending_residual < 1e-11);
    std::mt19937_64 rng(6);
    for (int t = 0; t < 10; ++t) {
        Vec2 x{rand_in(rng, 0, 1), rand_in(rng, 0, 1)};
        const double ef = std::exp(0.1 + 0.4 * x[0]);
        CHECK(norm(b.b0(x) - Vec3{0.0, 0.0, ef}) < 1e-12 * ef);
        Mat3 Q = b.Q0(x);
        CHECK(frob_norm(transpose(Q) * Q - g.sample(x)) < 1e-11);
    }
}

TEST_CASE("catalog rejects metrics without a closed-form immersion") {
    // non-affine conformal exponent
    CHECK_THROWS_AS(catalog_immersion(MetricField::conformal_lambda(poly({0, 0, 0, 1}))),
                    std::invalid_argument);
    // sampled metric
    Grid2 grid{5, 5, 1.0, 1.0};
    std::vector<Mat3> vals(25, Mat3::identity());
    MetricField gs = MetricField::sampled(grid, std::move(vals));
    CHECK_THROWS_AS(catalog_immersion(gs), std::invalid_argument);
}

TEST_CASE("curvature identity holds analytically for both catalog families") {
    Grid2 grid{33, 33, 1.0, 1.0};
    {
        MetricField g = MetricField::diag_lambda(kOnePlusX1Sq);
        Field res = curvature_identity_residual(catalog_immersion(g), g, grid);
        CHECK(sup_field(res) < 1e-8);
    }
    {
        MetricField g = MetricField::conformal_lambda(poly({0.0, 0.3}));
        Field res = curvature_identity_residual(catalog_immersion(g), g, grid);
        CHECK(sup_field(res) < 1e-8);
    }
}

TEST_CASE("curvature identity residual decays at second order under refinement") {
    // the one-sided boundary stencils leave a first-order band that owns the
    // sup-norm, so the decay order is read off the mean residual
    MetricField g = MetricField::diag_lambda(kOnePlusX1Sq);
    ImmersionBundle analytic = catalog_immersion(g);
    Grid2 coarse{33, 33, 1.0, 1.0};
    Grid2 fine{65, 65, 1.0, 1.0};
    ImmersionBundle bc = resample_bundle(analytic, coarse, g);
    ImmersionBundle bf = resample_bundle(analytic, fine, g);
    const double mc = mean_field(curvature_identity_residual(bc, g, coarse, 1e-3));
    const double mf = mean_field(curvature_identity_residual(bf, g, fine, 1e-3));
    CHECK(mc > 1e-12);  // the square-root fields are not polynomial: real error
    const double ratio = mc / mf;
    CHECK(ratio > 3.5);
    CHECK(ratio < 4.5);
}

TEST_CASE("frame expansions close with the metric connection coefficients") {
    Grid2 grid{17, 17, 1.0, 1.0};
    {
        MetricField g = MetricField::diag_lambda(kOnePlusX1Sq);
        ExpansionReport rep = christoffel_expansion_check(catalog_immersion(g), g, grid);
        CHECK(rep.ddy0_residual < 1e-9);
        CHECK(rep.db0_residual < 1e-9);
        CHECK(rep.d0_residual < 1e-9);
    }
    {
        MetricField g = MetricField::conformal_lambda(poly({0.2, -0.25, 0.1}));
        ExpansionReport rep = christoffel_expansion_check(catalog_immersion(g), g, grid);
        CHECK(rep.ddy0_residual < 1e-9);
        CHECK(rep.db0_residual < 1e-9);
        CHECK(rep.d0_residual < 1e-9);
    }
}

TEST_CASE("out-of-plane compensator: closed form, orthogonality, linearity") {
    MetricField g = MetricField::diag_lambda(kOnePlusX1Sq);
    ImmersionBundle b = catalog_immersion(g);
    VectorField2to3 V = VectorField2to3::from_polys(Polynomial2::constant(0.0),
                                                    Polynomial2::constant(0.0),
                                                    poly({0, 0, 0, 0, 1}));  // v = x1 x2
    std::mt19937_64 rng(8);
    for (int t = 0; t < 10; ++t) {
        Vec2 x{rand_in(rng, 0, 1), rand_in(rng, 0, 1)};
        const double sq = std::sqrt(1.0 + x[0] * x[0]);
        Vec3 p = p_from_V(b, V, x);
        CHECK(norm(p - Vec3{-sq * x[1], -sq * x[0], 0.0}) < 1e-12);
        // defining relations: (grad y0)^T p = -(grad V)^T b0 and <b0, p> = 0
        for (int i = 0; i < 2; ++i)
            CHECK(dot(b.dy0(i, x), p) == doctest::Approx(-dot(V.d(i, x), b.b0(x))).scale(1.0).epsilon(1e-12));
        CHECK(std::abs(dot(b.b0(x), p)) < 1e-12);
    }

    // linearity over two displacement fields
    VectorField2to3 W = VectorField2to3::from_polys(Polynomial2::constant(0.0),
                                                    Polynomial2::constant(0.0),
                                                    poly({0, 0, 0, 1}));  // x1^2
    Vec2 x{0.4, 0.8};
    VectorField2to3 VW;
    VW.value = [&](const Vec2& y) { return V.value(y) * 2.0 + W.value(y) * (-3.0); };
    VW.d = [&](int k, const Vec2& y) { return V.d(k, y) * 2.0 + W.d(k, y) * (-3.0); };
    VW.dd = [&](int k, int l, const Vec2& y) { return V.dd(k, l, y) * 2.0 + W.dd(k, l, y) * (-3.0); };
    Vec3 lhs = p_from_V(b, VW, x);
    Vec3 rhs = p_from_V(b, V, x) * 2.0 + p_from_V(b, W, x) * (-3.0);
    CHECK(norm(lhs - rhs) < 1e-12);
}

TEST_CASE("compensator derivative matches central differences") {
    MetricField g = MetricField::conformal_lambda(poly({0.0, 0.3, -0.2}));
    ImmersionBundle b = catalog_immersion(g);
    VectorField2to3 V = VectorField2to3::from_polys(Polynomial2::constant(0.0),
                                                    Polynomial2::constant(0.0),
                                                    poly({0, 1, 0, 0.5, 1, 0}));
    const double t = 1e-5;
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 6; ++trial) {
        Vec2 x{rand_in(rng, 0.1, 0.9), rand_in(rng, 0.1, 0.9)};
        for (int k = 0; k < 2; ++k) {
            Vec2 xp = x, xm = x;
            (k == 0 ? xp[0] : xp[1]) += t;
            (k == 0 ? xm[0] : xm[1]) -= t;
            Vec3 fd = (p_from_V(b, V, xp) - p_from_V(b, V, xm)) * (1.0 / (2.0 * t));
            Vec3 an = dp_from_V(b, V, k, x);
            CHECK(norm(an - fd) < 1e-7 * (1.0 + norm(an)));
        }
    }
}

TEST_CASE("a bundle rebuilt from exported midplate samples stays admissible") {
    MetricField g = MetricField::diag_lambda(kOnePlusX1Sq);
    ImmersionBundle analytic = catalog_immersion(g);
    Grid2 grid{33, 33, 1.0, 1.0};

    const char* path = "test_immersion_samples.csv";
    {
        std::ofstream out(path);
        out << "x1,x2,y1,y2,y3\n";
        char buf[160];
        for (int i = 0; i < grid.n1; ++i)
            for (int j = 0; j < grid.n2; ++j) {
                Vec2 x = grid.node(i, j);
                Vec3 y = analytic.y0(x);
                std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%.17g\n", x[0], x[1],
                              y[0], y[1], y[2]);
                out << buf;
            }
    }
    ImmersionBundle fd = bundle_from_csv(path, g);
    std::remove(path);

    IsometryReport rep = check_isometry_conditions(fd, g, grid);
    // the midplate map is polynomial (stencil-exact); the director fields are not
    CHECK(rep.metric_residual < 1e-12);
    CHECK(rep.bending_residual < 1e-3);
    Field res = curvature_identity_residual(fd, g, grid, 1e-3);
    CHECK(sup_field(res) < 5e-2);
    CHECK(sup_field(res) > 1e-12);
}
