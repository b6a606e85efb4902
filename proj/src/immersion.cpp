#include "plates/immersion.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace plates {

VectorField2to3 VectorField2to3::zero() {
    VectorField2to3 f;
    f.value = [](const Vec2&) { return Vec3{}; };
    f.d = [](int, const Vec2&) { return Vec3{}; };
    f.dd = [](int, int, const Vec2&) { return Vec3{}; };
    return f;
}

VectorField2to3 VectorField2to3::from_polys(Polynomial2 v1, Polynomial2 v2, Polynomial2 v3) {
    VectorField2to3 f;
    f.value = [v1, v2, v3](const Vec2& x) { return Vec3{v1(x), v2(x), v3(x)}; };
    f.d = [v1, v2, v3](int k, const Vec2& x) {
        return Vec3{v1.derivative(k)(x), v2.derivative(k)(x), v3.derivative(k)(x)};
    };
    f.dd = [v1, v2, v3](int k, int l, const Vec2& x) {
        return Vec3{v1.derivative(k).derivative(l)(x), v2.derivative(k).derivative(l)(x),
                    v3.derivative(k).derivative(l)(x)};
    };
    return f;
}

namespace {

ImmersionBundle flat_scaled_bundle(double K) {
    // y0 = K (x1, x2, 0), b0 = K e3: the constant-conformal-factor plane
    ImmersionBundle b;
    b.y0 = [K](const Vec2& x) { return Vec3{K * x[0], K * x[1], 0.0}; };
    b.dy0 = [K](int k, const Vec2&) { return k == 0 ? Vec3{K, 0, 0} : Vec3{0, K, 0}; };
    b.ddy0 = [](int, int, const Vec2&) { return Vec3{}; };
    b.b0 = [K](const Vec2&) { return Vec3{0, 0, K}; };
    b.db0 = [](int, const Vec2&) { return Vec3{}; };
    b.d0 = [](const Vec2&) { return Vec3{}; };
    b.dd0 = [](int, const Vec2&) { return Vec3{}; };
    return b;
}

ImmersionBundle diag_bundle(const Polynomial2& lambda) {
    // y0 = (x', 0), b0 = sqrt(lambda) e3, d0 = -(grad lambda)/2
    auto lam_at = [lambda](const Vec2& x) {
        double v = lambda(x);
        if (v <= 0.0)
            throw std::domain_error("metric scalar is not positive at the evaluation point");
        return v;
    };
    ImmersionBundle b;
    b.y0 = [](const Vec2& x) { return Vec3{x[0], x[1], 0.0}; };
    b.dy0 = [](int k, const Vec2&) { return k == 0 ? Vec3{1, 0, 0} : Vec3{0, 1, 0}; };
    b.ddy0 = [](int, int, const Vec2&) { return Vec3{}; };
    b.b0 = [lam_at](const Vec2& x) { return Vec3{0, 0, std::sqrt(lam_at(x))}; };
    b.db0 = [lambda, lam_at](int k, const Vec2& x) {
        return Vec3{0, 0, lambda.derivative(k)(x) / (2.0 * std::sqrt(lam_at(x)))};
    };
    b.d0 = [lambda](const Vec2& x) {
        return Vec3{-0.5 * lambda.dx1()(x), -0.5 * lambda.dx2()(x), 0.0};
    };
    b.dd0 = [lambda](int k, const Vec2& x) {
        return Vec3{-0.5 * lambda.dx1().derivative(k)(x), -0.5 * lambda.dx2().derivative(k)(x),
                    0.0};
    };
    return b;
}

ImmersionBundle conformal_affine_bundle(double c0, const Vec2& a) {
    double c = norm(a);
    double K = std::exp(c0);
    if (c == 0.0) return flat_scaled_bundle(K);
    // rotated coordinates s1 = t.x, s2 = tp.x with t = a/|a|; the image is the
    // planar logarithmic-spiral-free exponential strip (K/c) e^{c s1} (cos c s2, sin c s2)
    Vec2 t{a[0] / c, a[1] / c};
    Vec2 tp{-t[1], t[0]};
    auto base = [t, tp, c, K](const Vec2& x, Vec3& b1, Vec3& b2, double& E) {
        double s1 = dot(t, x), s2 = dot(tp, x);
        E = K * std::exp(c * s1);
        b1 = Vec3{std::cos(c * s2), std::sin(c * s2), 0.0};
        b2 = Vec3{-std::sin(c * s2), std::cos(c * s2), 0.0};
    };
    ImmersionBundle b;
    b.y0 = [base, c](const Vec2& x) {
        Vec3 b1, b2;
        double E;
        base(x, b1, b2, E);
        return (E / c) * b1;
    };
    b.dy0 = [base, t, tp](int k, const Vec2& x) {
        Vec3 b1, b2;
        double E;
        base(x, b1, b2, E);
        return (t[k] * E) * b1 + (tp[k] * E) * b2;
    };
    b.ddy0 = [base, t, tp, c](int k, int l, const Vec2& x) {
        Vec3 b1, b2;
        double E;
        base(x, b1, b2, E);
        double w1 = t[k] * t[l] - tp[k] * tp[l];
        double w2 = t[k] * tp[l] + t[l] * tp[k];
        return (c * E) * (w1 * b1 + w2 * b2);
    };
    b.b0 = [base](const Vec2& x) {
        Vec3 b1, b2;
        double E;
        base(x, b1, b2, E);
        return Vec3{0, 0, E};
    };
    b.db0 = [base, a](int k, const Vec2& x) {
        Vec3 b1, b2;
        double E;
        base(x, b1, b2, E);
        return Vec3{0, 0, a[k] * E};
    };
    b.d0 = [base, c](const Vec2& x) {
        Vec3 b1, b2;
        double E;
        base(x, b1, b2, E);
        return (-c * E) * b1;
    };
    b.dd0 = [base, c, t, tp](int k, const Vec2& x) {
        Vec3 b1, b2;
        double E;
        base(x, b1, b2, E);
        return (-c * c * E) * (t[k] * b1 + tp[k] * b2);
    };
    return b;
}

bool poly_is_affine(const Polynomial2& p) {
    for (int k = 3; k < Polynomial2::kNumCoeffs; ++k)
        if (p.coeff(k) != 0.0) return false;
    return true;
}

}  // namespace

ImmersionBundle catalog_immersion(const MetricField& metric) {
    switch (metric.kind()) {
        case MetricKind::identity: {
            ImmersionBundle b = flat_scaled_bundle(1.0);
            b.provenance = "catalog:identity";
            return b;
        }
        case MetricKind::diag_lambda: {
            ImmersionBundle b = diag_bundle(metric.lambda_poly());
            b.provenance = "catalog:diag_lambda";
            return b;
        }
        case MetricKind::conformal_lambda: {
            const Polynomial2& f = metric.f_poly();
            if (!poly_is_affine(f))
                throw std::invalid_argument(
                    "no catalog midplate immersion for a conformal factor with non-affine "
                    "exponent: building y0 would require solving the isometric-immersion "
                    "equations, which is out of scope; supply y0 samples instead");
            ImmersionBundle b =
                conformal_affine_bundle(f.coeff(0), Vec2{f.coeff(1), f.coeff(2)});
            b.provenance = "catalog:conformal_lambda";
            return b;
        }
        case MetricKind::sampled:
            throw std::invalid_argument(
                "no catalog midplate immersion for a sampled metric: building y0 would require "
                "solving the isometric-immersion equations, which is out of scope; supply y0 "
                "samples instead");
    }
    throw std::logic_error("unreachable metric kind");
}

Vec3 cosserat_b0(const Vec3& t1, const Vec3& t2, const Mat3& G) {
    Vec3 N = cross(t1, t2);
    double n = norm(N);
    if (n < 1e-14) throw std::domain_error("degenerate tangent plane: d1y0 x d2y0 vanishes");
    N = (1.0 / n) * N;
    Mat3 Ginv = inverse(G);
    double g33 = Ginv(2, 2);
    if (g33 <= 0.0) throw std::domain_error("inverse metric (3,3) entry must be positive");
    return (-1.0 / g33) * (Ginv(0, 2) * t1 + Ginv(1, 2) * t2) + (1.0 / std::sqrt(g33)) * N;
}

Vec3 director_d0(const Mat3& Q0, const Vec3& db0_1, const Vec3& db0_2, const Vec3& b0) {
    Vec3 rhs{-dot(db0_1, b0), -dot(db0_2, b0), 0.0};
    return inverse(transpose(Q0)) * rhs;
}

namespace {
Mat2 tangent_gram(const ImmersionBundle& b, const Vec2& x) {
    Vec3 t1 = b.dy0(0, x), t2 = b.dy0(1, x);
    return {dot(t1, t1), dot(t1, t2), dot(t2, t1), dot(t2, t2)};
}
}  // namespace

IsometryReport check_isometry_conditions(const ImmersionBundle& bundle, const MetricField& metric,
                                         const Grid2& grid) {
    IsometryReport rep;
    for (int i = 0; i < grid.n1; ++i)
        for (int j = 0; j < grid.n2; ++j) {
            Vec2 x = grid.node(i, j);
            Mat3 G = metric.sample(x);
            Mat2 g2{G(0, 0), G(0, 1), G(1, 0), G(1, 1)};
            Mat2 tt = tangent_gram(bundle, x);
            rep.metric_residual = std::max(rep.metric_residual, frob_norm(tt - g2));
            Vec3 t1 = bundle.dy0(0, x), t2 = bundle.dy0(1, x);
            Vec3 n1 = bundle.db0(0, x), n2 = bundle.db0(1, x);
            Mat2 tb{dot(t1, n1), dot(t1, n2), dot(t2, n1), dot(t2, n2)};
            rep.bending_residual = std::max(rep.bending_residual, frob_norm(sym(tb)));
        }
    return rep;
}

Field curvature_identity_residual(const ImmersionBundle& bundle, const MetricField& metric,
                                  const Grid2& grid, double admit_tol) {
    IsometryReport rep = check_isometry_conditions(bundle, metric, grid);
    if (rep.metric_residual > admit_tol || rep.bending_residual > admit_tol)
        throw std::invalid_argument(
            "bundle does not satisfy the isometry conditions for this metric (residuals " +
            std::to_string(rep.metric_residual) + ", " + std::to_string(rep.bending_residual) +
            " exceed " + std::to_string(admit_tol) + ")");
    Field out = grid.make_field();
    for (int i = 0; i < grid.n1; ++i)
        for (int j = 0; j < grid.n2; ++j) {
            Vec2 x = grid.node(i, j);
            Vec3 t1 = bundle.dy0(0, x), t2 = bundle.dy0(1, x);
            Vec3 dd1 = bundle.dd0(0, x), dd2 = bundle.dd0(1, x);
            Mat2 td{dot(t1, dd1), dot(t1, dd2), dot(t2, dd1), dot(t2, dd2)};
            Vec3 n1 = bundle.db0(0, x), n2 = bundle.db0(1, x);
            Mat2 bb{dot(n1, n1), dot(n1, n2), dot(n2, n1), dot(n2, n2)};
            Mat2 lhs = sym(td) + bb;
            RiemannComponents r = riemann_covariant(metric, x);
            Mat2 rhs{r.r1313, r.r1323, r.r1323, r.r2323};
            out[grid.index(i, j)] = frob_norm(lhs - rhs);
        }
    return out;
}

ExpansionReport christoffel_expansion_check(const ImmersionBundle& bundle,
                                            const MetricField& metric, const Grid2& grid) {
    ExpansionReport rep;
    for (int gi = 0; gi < grid.n1; ++gi)
        for (int gj = 0; gj < grid.n2; ++gj) {
            Vec2 x = grid.node(gi, gj);
            ChristoffelSymbols gam = christoffel(metric, x);
            Vec3 f1 = bundle.dy0(0, x), f2 = bundle.dy0(1, x), f3 = bundle.b0(x);
            auto frame_combo = [&](int k, int l) {
                return gam(0, k, l) * f1 + gam(1, k, l) * f2 + gam(2, k, l) * f3;
            };
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j)
                    rep.ddy0_residual = std::max(
                        rep.ddy0_residual, norm(bundle.ddy0(i, j, x) - frame_combo(i, j)));
            for (int i = 0; i < 2; ++i)
                rep.db0_residual =
                    std::max(rep.db0_residual, norm(bundle.db0(i, x) - frame_combo(i, 2)));
            rep.d0_residual = std::max(rep.d0_residual, norm(bundle.d0(x) - frame_combo(2, 2)));
        }
    return rep;
}

Vec3 p_from_V(const ImmersionBundle& bundle, const VectorField2to3& V, const Vec2& x) {
    Vec3 frame[3] = {bundle.dy0(0, x), bundle.dy0(1, x), bundle.b0(x)};
    Mat3 G;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) G(i, j) = dot(frame[i], frame[j]);
    Mat3 Ginv = inverse(G);
    double r[2] = {dot(V.d(0, x), frame[2]), dot(V.d(1, x), frame[2])};
    Vec3 p{};
    for (int j = 0; j < 3; ++j)
        for (int i = 0; i < 2; ++i) p -= (Ginv(j, i) * r[i]) * frame[j];
    return p;
}

Vec3 dp_from_V(const ImmersionBundle& bundle, const VectorField2to3& V, int k, const Vec2& x) {
    Vec3 frame[3] = {bundle.dy0(0, x), bundle.dy0(1, x), bundle.b0(x)};
    Vec3 dframe[3] = {bundle.ddy0(k, 0, x), bundle.ddy0(k, 1, x), bundle.db0(k, x)};
    Mat3 G, dG;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            G(i, j) = dot(frame[i], frame[j]);
            dG(i, j) = dot(dframe[i], frame[j]) + dot(frame[i], dframe[j]);
        }
    Mat3 Ginv = inverse(G);
    Mat3 dGinv = -1.0 * (Ginv * dG * Ginv);
    double r[2], dr[2];
    for (int i = 0; i < 2; ++i) {
        r[i] = dot(V.d(i, x), frame[2]);
        dr[i] = dot(V.dd(i, k, x), frame[2]) + dot(V.d(i, x), dframe[2]);
    }
    Vec3 dp{};
    for (int j = 0; j < 3; ++j)
        for (int i = 0; i < 2; ++i) {
            dp -= (dGinv(j, i) * r[i]) * frame[j];
            dp -= (Ginv(j, i) * dr[i]) * frame[j];
            dp -= (Ginv(j, i) * r[i]) * dframe[j];
        }
    return dp;
}

namespace {

struct BundleGridData {
    Grid2 grid;
    std::array<Field, 3> y0, b0, d0;
    std::array<std::array<Field, 3>, 2> dy0, db0, dd0;  // [k][component]
    std::array<std::array<Field, 3>, 3> ddy0;           // slots 11, 12, 22
};

int nearest(const Grid2& g, const Vec2& x) {
    int i = static_cast<int>(std::lround(x[0] / g.h1()));
    int j = static_cast<int>(std::lround(x[1] / g.h2()));
    i = std::clamp(i, 0, g.n1 - 1);
    j = std::clamp(j, 0, g.n2 - 1);
    return g.index(i, j);
}

Vec3 at(const std::array<Field, 3>& comp, int idx) {
    return {comp[0][idx], comp[1][idx], comp[2][idx]};
}

}  // namespace

ImmersionBundle bundle_from_samples(const Grid2& grid, const std::vector<Vec3>& y0_samples,
                                    const MetricField& metric) {
    if (static_cast<int>(y0_samples.size()) != grid.size())
        throw std::invalid_argument("immersion sample count does not match grid size");
    auto data = std::make_shared<BundleGridData>();
    data->grid = grid;
    for (int c = 0; c < 3; ++c) {
        data->y0[c] = grid.make_field();
        for (int k = 0; k < grid.size(); ++k) data->y0[c][k] = y0_samples[static_cast<size_t>(k)][c];
    }
    for (int c = 0; c < 3; ++c) {
        data->dy0[0][c] = d1(grid, data->y0[c]);
        data->dy0[1][c] = d2(grid, data->y0[c]);
        data->ddy0[0][c] = d11(grid, data->y0[c]);
        data->ddy0[1][c] = d12(grid, data->y0[c]);
        data->ddy0[2][c] = d22(grid, data->y0[c]);
    }
    // derive b0 from the frame completion, then d0 from the derived frame
    for (int c = 0; c < 3; ++c) data->b0[c] = grid.make_field();
    for (int i = 0; i < grid.n1; ++i)
        for (int j = 0; j < grid.n2; ++j) {
            int k = grid.index(i, j);
            Vec3 t1 = at(data->dy0[0], k), t2 = at(data->dy0[1], k);
            Vec3 b = cosserat_b0(t1, t2, metric.sample(grid.node(i, j)));
            for (int c = 0; c < 3; ++c) data->b0[c][k] = b[c];
        }
    for (int c = 0; c < 3; ++c) {
        data->db0[0][c] = d1(grid, data->b0[c]);
        data->db0[1][c] = d2(grid, data->b0[c]);
    }
    for (int c = 0; c < 3; ++c) data->d0[c] = grid.make_field();
    for (int k = 0; k < grid.size(); ++k) {
        Vec3 t1 = at(data->dy0[0], k), t2 = at(data->dy0[1], k), b = at(data->b0, k);
        Mat3 Q0 = Mat3::from_columns(t1, t2, b);
        Vec3 d = director_d0(Q0, at(data->db0[0], k), at(data->db0[1], k), b);
        for (int c = 0; c < 3; ++c) data->d0[c][k] = d[c];
    }
    for (int c = 0; c < 3; ++c) {
        data->dd0[0][c] = d1(grid, data->d0[c]);
        data->dd0[1][c] = d2(grid, data->d0[c]);
    }

    ImmersionBundle b;
    b.provenance = "samples";
    b.y0 = [data](const Vec2& x) { return at(data->y0, nearest(data->grid, x)); };
    b.b0 = [data](const Vec2& x) { return at(data->b0, nearest(data->grid, x)); };
    b.d0 = [data](const Vec2& x) { return at(data->d0, nearest(data->grid, x)); };
    b.dy0 = [data](int k, const Vec2& x) { return at(data->dy0[k], nearest(data->grid, x)); };
    b.db0 = [data](int k, const Vec2& x) { return at(data->db0[k], nearest(data->grid, x)); };
    b.dd0 = [data](int k, const Vec2& x) { return at(data->dd0[k], nearest(data->grid, x)); };
    b.ddy0 = [data](int k, int l, const Vec2& x) {
        int slot = (k == l) ? (k == 0 ? 0 : 2) : 1;
        return at(data->ddy0[slot], nearest(data->grid, x));
    };
    return b;
}

ImmersionBundle bundle_from_csv(const std::string& path, const MetricField& metric) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open immersion table '" + path + "'");
    std::string header;
    std::getline(in, header);
    if (!header.empty() && header.back() == '\r') header.pop_back();
    if (header != "x1,x2,y1,y2,y3")
        throw std::runtime_error("immersion table '" + path +
                                 "' must start with header x1,x2,y1,y2,y3");
    std::vector<std::array<double, 5>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::array<double, 5> row{};
        std::string item;
        int c = 0;
        while (std::getline(ss, item, ',')) {
            if (c >= 5) throw std::runtime_error("too many columns in immersion table row: " + line);
            row[c++] = std::stod(item);
        }
        if (c != 5) throw std::runtime_error("expected 5 columns in immersion table row: " + line);
        rows.push_back(row);
    }
    if (rows.size() < 16) throw std::runtime_error("immersion table has too few rows");
    int n2 = 1;
    while (n2 < static_cast<int>(rows.size()) && rows[n2][0] == rows[0][0]) ++n2;
    if (static_cast<int>(rows.size()) % n2 != 0)
        throw std::runtime_error("immersion table is not a complete x1-major grid");
    int n1 = static_cast<int>(rows.size()) / n2;
    Grid2 grid(n1, n2, rows.back()[0], rows[static_cast<size_t>(n2) - 1][1]);
    std::vector<Vec3> samples(static_cast<size_t>(grid.size()));
    double tol1 = 1e-10 * std::max(1.0, grid.L1), tol2 = 1e-10 * std::max(1.0, grid.L2);
    for (int i = 0; i < n1; ++i)
        for (int j = 0; j < n2; ++j) {
            const auto& row = rows[static_cast<size_t>(i) * n2 + j];
            if (std::abs(row[0] - grid.x1(i)) > tol1 || std::abs(row[1] - grid.x2(j)) > tol2)
                throw std::runtime_error("immersion table grid is not uniform at row " +
                                         std::to_string(i * n2 + j + 2));
            samples[static_cast<size_t>(grid.index(i, j))] = Vec3{row[2], row[3], row[4]};
        }
    return bundle_from_samples(grid, samples, metric);
}

ImmersionBundle resample_bundle(const ImmersionBundle& src, const Grid2& grid,
                                const MetricField& metric) {
    std::vector<Vec3> samples;
    samples.reserve(static_cast<size_t>(grid.size()));
    for (int i = 0; i < grid.n1; ++i)
        for (int j = 0; j < grid.n2; ++j) samples.push_back(src.y0(grid.node(i, j)));
    return bundle_from_samples(grid, samples, metric);
}

}  // namespace plates
