#include <cmath>
#include <cstdio>
#include <random>

#include "doctest.h"
#include "plates/geometry.hpp"
#include "plates/grid.hpp"

using namespace plates;

namespace {

Polynomial2 poly(std::initializer_list<double> cs) {
    std::vector<double> v(cs);
    return Polynomial2::from_coeffs(v);
}

// graded-lex order: 1, x1, x2, x1^2, x1x2, x2^2, ...
const Polynomial2 kOnePlusX1Sq = poly({1, 0, 0, 1});

double rand_in(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

// positive polynomial 1 + small quadratic part, safe on the unit square
Polynomial2 random_positive_scalar(std::mt19937_64& rng) {
    std::vector<double> c(6, 0.0);
    c[0] = 1.0;
    for (int k = 1; k < 6; ++k) c[k] = rand_in(rng, -0.15, 0.15);
    return Polynomial2::from_coeffs(c);
}

}  // namespace

TEST_CASE("Christoffel symbols of the diagonal family match hand values") {
    MetricField g = MetricField::diag_lambda(kOnePlusX1Sq);
    // at (1,0): lambda = 2, d1 lambda = 2
    ChristoffelSymbols cs = christoffel(g, Vec2{1.0, 0.0});
    CHECK(cs(2, 0, 2) == doctest::Approx(0.5).epsilon(1e-12));   // d1l/(2l)
    CHECK(cs(2, 2, 0) == doctest::Approx(0.5).epsilon(1e-12));   // symmetry in lower indices
    CHECK(cs(0, 2, 2) == doctest::Approx(-1.0).epsilon(1e-12));  // -d1l/2
    CHECK(cs(0, 0, 0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(cs(1, 0, 1) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("curvature of diag(1,1,lambda) reproduces the obstruction-tensor block") {
    MetricField g = MetricField::diag_lambda(kOnePlusX1Sq);
    RiemannComponents r = riemann_covariant(g, Vec2{0.0, 0.0});
    // M_lambda(0,0) = Hess lambda = diag(2,0); normal block is -1/2 of it
    CHECK(r.r1313 == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(std::abs(r.r1323) < 1e-12);
    CHECK(std::abs(r.r2323) < 1e-12);
    // tangential block vanishes for this family
    CHECK(std::abs(r.r1212) < 1e-12);
    CHECK(std::abs(r.r1213) < 1e-12);
    CHECK(std::abs(r.r1223) < 1e-12);

    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 25; ++trial) {
        Polynomial2 lam = random_positive_scalar(rng);
        MetricField gf = MetricField::diag_lambda(lam);
        Vec2 x{rand_in(rng, 0, 1), rand_in(rng, 0, 1)};
        Mat2 m = m_lambda(lam, x);
        RiemannComponents rr = riemann_covariant(gf, x);
        CHECK(rr.r1313 == doctest::Approx(-0.5 * m(0, 0)).epsilon(1e-9).scale(1.0));
        CHECK(rr.r1323 == doctest::Approx(-0.5 * m(0, 1)).epsilon(1e-9).scale(1.0));
        CHECK(rr.r2323 == doctest::Approx(-0.5 * m(1, 1)).epsilon(1e-9).scale(1.0));
    }
}

TEST_CASE("Riemann tensor symmetries hold at random points") {
    std::mt19937_64 rng(20260815);
    for (int trial = 0; trial < 10; ++trial) {
        MetricField g = (trial % 2 == 0)
                            ? MetricField::diag_lambda(random_positive_scalar(rng))
                            : MetricField::conformal_lambda(random_positive_scalar(rng));
        for (int rep = 0; rep < 4; ++rep) {
            Vec2 x{rand_in(rng, 0, 1), rand_in(rng, 0, 1)};
            for (int n = 0; n < 12; ++n) {
                int i = static_cast<int>(rng() % 3), k = static_cast<int>(rng() % 3);
                int l = static_cast<int>(rng() % 3), m = static_cast<int>(rng() % 3);
                double r = riemann_component(g, x, i, k, l, m);
                CHECK(riemann_component(g, x, k, i, l, m) == doctest::Approx(-r).scale(1.0).epsilon(1e-9));
                CHECK(riemann_component(g, x, i, k, m, l) == doctest::Approx(-r).scale(1.0).epsilon(1e-9));
                CHECK(riemann_component(g, x, l, m, i, k) == doctest::Approx(r).scale(1.0).epsilon(1e-9));
                // first Bianchi identity
                double cyc = riemann_component(g, x, i, k, l, m) +
                             riemann_component(g, x, i, l, m, k) +
                             riemann_component(g, x, i, m, k, l);
                CHECK(std::abs(cyc) < 1e-9);
            }
        }
    }
}

TEST_CASE("conformal Ricci closed form at hand-checked points") {
    // f = x1: Ric restricted to the plane is diag(0,-1), Ric_33 = -1
    Polynomial2 f = poly({0, 1});
    Mat3 ric = ricci_conformal(f, Vec2{0.3, 0.7});
    CHECK(ric(0, 0) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
    CHECK(ric(1, 1) == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(ric(2, 2) == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(std::abs(ric(0, 1)) < 1e-12);

    // harmonic f = x1^2 - x2^2 at the origin: plane block diag(-2, 2)
    Polynomial2 fh = poly({0, 0, 0, 1, 0, -1});
    Mat3 rich = ricci_conformal(fh, Vec2{0.0, 0.0});
    CHECK(rich(0, 0) == doctest::Approx(-2.0).epsilon(1e-12));
    CHECK(rich(1, 1) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("Ricci contraction of the Riemann tensor matches the closed form") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 8; ++trial) {
        Polynomial2 f = random_positive_scalar(rng);  // need not be harmonic
        MetricField g = MetricField::conformal_lambda(f);
        Vec2 x{rand_in(rng, 0, 1), rand_in(rng, 0, 1)};
        Mat3 ric = ricci_conformal(f, x);
        const double e2f = std::exp(2.0 * f(x[0], x[1]));
        for (int i = 0; i < 3; ++i)
            for (int m = i; m < 3; ++m) {
                double sum = 0.0;
                for (int k = 0; k < 3; ++k) sum += riemann_component(g, x, k, i, k, m) / e2f;
                CHECK(sum == doctest::Approx(ric(i, m)).scale(1.0).epsilon(1e-8));
            }
    }
}

TEST_CASE("normal curvature block of a harmonic conformal metric") {
    // for harmonic f the block [[R1313,R1323],[R1323,R2323]] equals e^{2f} Ric_2x2
    Polynomial2 f = poly({0, 1});  // f = x1
    MetricField g = MetricField::conformal_lambda(f);
    Vec2 x{0.4, 0.2};
    RiemannComponents r = riemann_covariant(g, x);
    const double e2f = std::exp(2.0 * x[0]);
    Mat3 ric = ricci_conformal(f, x);
    CHECK(r.r1313 == doctest::Approx(e2f * ric(0, 0)).scale(1.0).epsilon(1e-10));
    CHECK(r.r1323 == doctest::Approx(e2f * ric(0, 1)).scale(1.0).epsilon(1e-10));
    CHECK(r.r2323 == doctest::Approx(e2f * ric(1, 1)).scale(1.0).epsilon(1e-10));
    CHECK(r.r2323 == doctest::Approx(-e2f).epsilon(1e-10));
}

TEST_CASE("regime classification of the catalog metrics") {
    CHECK(classify_regime(MetricField::identity(), 17, 17, 1e-8).regime == Regime::Flat);
    CHECK(classify_regime(MetricField::diag_lambda(kOnePlusX1Sq), 17, 17, 1e-8).regime ==
          Regime::OrderH4);
    // (1 + 0.3 x1)^2 is exactly realizable: flat
    Polynomial2 flat = poly({1, 0.6, 0, 0.09});
    CHECK(classify_regime(MetricField::diag_lambda(flat), 17, 17, 1e-8).regime == Regime::Flat);
    // conformal f = x1 bends at fourth order
    CHECK(classify_regime(MetricField::conformal_lambda(poly({0, 1})), 17, 17, 1e-8).regime ==
          Regime::OrderH4);
}

TEST_CASE("a non-flat tangential metric classifies as the quadratic regime") {
    // G = diag(1, 1+x1^2, 1) is not in the catalog: build it from samples
    Grid2 grid{33, 33, 1.0, 1.0};
    std::vector<Mat3> vals;
    vals.reserve(static_cast<size_t>(grid.size()));
    for (int i = 0; i < grid.n1; ++i)
        for (int j = 0; j < grid.n2; ++j) {
            Vec2 x = grid.node(i, j);
            vals.push_back(Mat3::diag(1.0, 1.0 + x[0] * x[0], 1.0));
        }
    MetricField g = MetricField::sampled(grid, std::move(vals));
    CurvatureReport rep = classify_regime(g, grid.n1, grid.n2, default_classify_tol(g));
    CHECK(rep.regime == Regime::OrderH2);
    // R1212 = -1 at the origin for this metric
    RiemannComponents r = riemann_covariant(g, Vec2{0.0, 0.0});
    CHECK(r.r1212 == doctest::Approx(-1.0).epsilon(1e-6));
}

TEST_CASE("sampled metric survives a disk round trip and classifies identically") {
    MetricField g = MetricField::diag_lambda(kOnePlusX1Sq);
    Grid2 grid{33, 33, 1.0, 1.0};
    MetricField gs = MetricField::sampled_from(g, grid);
    const char* path = "test_metric_roundtrip.csv";
    gs.write_csv(path, grid);
    MetricField back = MetricField::read_csv(path);
    std::remove(path);
    for (int i = 0; i < grid.n1; i += 8)
        for (int j = 0; j < grid.n2; j += 8) {
            Vec2 x = grid.node(i, j);
            Mat3 a = gs.sample(x), b = back.sample(x);
            for (int r = 0; r < 3; ++r)
                for (int c = 0; c < 3; ++c)
                    CHECK(a(r, c) == doctest::Approx(b(r, c)).scale(1.0).epsilon(1e-14));
        }
    CurvatureReport rep = classify_regime(back, 33, 33, default_classify_tol(back));
    CHECK(rep.regime == Regime::OrderH4);
}

TEST_CASE("metric derivative tables agree with central differences of samples") {
    MetricField g = MetricField::conformal_lambda(poly({0, 0.3, 0, 0, 0, 0.1}));
    const double t = 1e-5;
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 5; ++trial) {
        Vec2 x{rand_in(rng, 0.1, 0.9), rand_in(rng, 0.1, 0.9)};
        for (int k = 0; k < 2; ++k) {
            Vec2 xp = x, xm = x;
            (k == 0 ? xp[0] : xp[1]) += t;
            (k == 0 ? xm[0] : xm[1]) -= t;
            Mat3 fd = (1.0 / (2.0 * t)) * (g.sample(xp) - g.sample(xm));
            Mat3 an = g.d_sample(k, x);
            for (int r = 0; r < 3; ++r)
                for (int c = 0; c < 3; ++c)
                    CHECK(an(r, c) == doctest::Approx(fd(r, c)).scale(1.0).epsilon(1e-7));
        }
        // thickness direction is a structural zero
        CHECK(frob2(g.d_sample(2, x)) == 0.0);
    }
}

TEST_CASE("metric validation rejects bad inputs") {
    // nonpositive scalar on the domain
    MetricField g = MetricField::diag_lambda(poly({0.1, -1.0}));
    CHECK_THROWS_AS((void)g.sample(Vec2{0.5, 0.0}), std::domain_error);
    // malformed header
    {
        std::FILE* fp = std::fopen("test_bad_metric.csv", "w");
        std::fputs("x1,x2,G11\n0,0,1\n", fp);
        std::fclose(fp);
    }
    CHECK_THROWS_AS(MetricField::read_csv("test_bad_metric.csv"), std::runtime_error);
    std::remove("test_bad_metric.csv");
    // non-SPD sample table
    Grid2 grid{4, 4, 1.0, 1.0};
    std::vector<Mat3> vals(16, Mat3::diag(1.0, -1.0, 1.0));
    CHECK_THROWS_AS(MetricField::sampled(grid, std::move(vals)), std::domain_error);
}
