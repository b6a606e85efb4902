#include "plates/energy3d.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <stdexcept>

#include "json.hpp"
#include "plates/limit_functional.hpp"

namespace plates {

double energy_Eh(const MetricField& metric, const ElasticModel& model, const Deformation3D& u,
                 double h, int n1, int n2, int n3) {
    if (h <= 0.0) throw std::invalid_argument("thickness h must be positive");
    if (n3 < 2) throw std::invalid_argument("thickness quadrature needs at least 2 nodes");
    model.validate();
    Grid2 grid(n1, n2, metric.domain().L1, metric.domain().L2);
    Field wq = trapezoid_weights(grid);
    Quadrature1D q3rule = gauss_legendre(n3);
    double total = 0.0;
    for (int i = 0; i < grid.n1; ++i)
        for (int j = 0; j < grid.n2; ++j) {
            Vec2 x = grid.node(i, j);
            Mat3 Ainv = inverse(metric_sqrt(metric.sample(x)));
            // (1/h) integral over (-h/2, h/2) = (1/2) integral over t in (-1,1)
            double column = 0.0;
            for (int m = 0; m < n3; ++m) {
                double x3 = 0.5 * h * q3rule.nodes[static_cast<size_t>(m)];
                Mat3 F = u.gradient(x, x3) * Ainv;
                column += q3rule.weights[static_cast<size_t>(m)] * density_eval(model, F);
            }
            total += wq[grid.index(i, j)] * 0.5 * column;
        }
    return total;
}

Deformation3D ansatz_kirchhoff(const ImmersionBundle& bundle) {
    Deformation3D u;
    u.provenance = "kirchhoff_ansatz";
    u.evaluate = [bundle](const Vec2& x, double x3) {
        return bundle.y0(x) + x3 * bundle.b0(x) + (0.5 * x3 * x3) * bundle.d0(x);
    };
    u.gradient = [bundle](const Vec2& x, double x3) {
        Vec3 c1 = bundle.dy0(0, x) + x3 * bundle.db0(0, x) + (0.5 * x3 * x3) * bundle.dd0(0, x);
        Vec3 c2 = bundle.dy0(1, x) + x3 * bundle.db0(1, x) + (0.5 * x3 * x3) * bundle.dd0(1, x);
        Vec3 c3 = bundle.b0(x) + x3 * bundle.d0(x);
        return Mat3::from_columns(c1, c2, c3);
    };
    return u;
}

Deformation3D exact_flat_immersion(const Vec2& a) {
    double c = norm(a);
    Deformation3D u;
    u.provenance = "exact_flat";
    if (c == 0.0) {
        u.evaluate = [](const Vec2& x, double x3) { return Vec3{x[0], x[1], x3}; };
        u.gradient = [](const Vec2&, double) { return Mat3::identity(); };
        return u;
    }
    Vec2 t{a[0] / c, a[1] / c};
    Vec2 tp{-t[1], t[0]};
    // roll around a cylinder of radius rho = t.x' + 1/|a|, so that the column
    // lengths are exactly (1, 1, 1 + a.x') pointwise
    u.evaluate = [t, tp, c](const Vec2& x, double x3) {
        double rho = dot(t, x) + 1.0 / c;
        double s2 = dot(tp, x);
        return Vec3{rho * std::cos(c * x3), -rho * std::sin(c * x3), s2};
    };
    u.gradient = [t, tp, c](const Vec2& x, double x3) {
        double rho = dot(t, x) + 1.0 / c;
        Vec3 ds1{std::cos(c * x3), -std::sin(c * x3), 0.0};
        Vec3 ds2{0.0, 0.0, 1.0};
        Vec3 d3{-rho * c * std::sin(c * x3), -rho * c * std::cos(c * x3), 0.0};
        Vec3 c1 = t[0] * ds1 + tp[0] * ds2;
        Vec3 c2 = t[1] * ds1 + tp[1] * ds2;
        return Mat3::from_columns(c1, c2, d3);
    };
    return u;
}

Deformation3D exact_flat_from_lambda(const Polynomial2& lambda) {
    // match lambda = (1 + a1 x1 + a2 x2)^2 coefficient by coefficient
    double a1 = 0.5 * lambda.coeff(1);
    double a2 = 0.5 * lambda.coeff(2);
    std::array<double, Polynomial2::kNumCoeffs> want{};
    want[0] = 1.0;
    want[1] = 2.0 * a1;
    want[2] = 2.0 * a2;
    want[3] = a1 * a1;
    want[4] = 2.0 * a1 * a2;
    want[5] = a2 * a2;
    for (int k = 0; k < Polynomial2::kNumCoeffs; ++k)
        if (std::abs(lambda.coeff(k) - want[k]) > 1e-12)
            throw std::invalid_argument(
                "no exact realization in the catalog: the scalar must be of the form "
                "(1 + a.x')^2, got " + lambda.to_string());
    return exact_flat_immersion(Vec2{a1, a2});
}

namespace {

struct RecoveryData {
    Grid2 grid;
    // per-component nodal tables of the derived correction fields
    std::array<Field, 3> p, q, k0, r;
    std::array<std::array<Field, 3>, 2> dp, dq, dk0, dr;  // [axis][component]
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

void derive(const Grid2& g, const std::array<Field, 3>& f,
            std::array<std::array<Field, 3>, 2>& df) {
    for (int c = 0; c < 3; ++c) {
        df[0][c] = d1(g, f[c]);
        df[1][c] = d2(g, f[c]);
    }
}

}  // namespace

Deformation3D recovery_deformation(const ImmersionBundle& bundle, const MetricField& metric,
                                   const ElasticModel& model, const VectorField2to3& V,
                                   const VectorField2to3& w, double h, const Grid2& grid) {
    model.validate();
    const double vres = constraint_residual_V(bundle, V, grid);
    if (vres > 1e-6)
        throw std::invalid_argument(
            "displacement is not admissible: sym((grad y0)^T grad V) has sup-norm " +
            std::to_string(vres));
    auto data = std::make_shared<RecoveryData>();
    data->grid = grid;
    for (auto* f : {&data->p, &data->q, &data->k0, &data->r})
        for (int c = 0; c < 3; ++c) (*f)[c] = grid.make_field();

    for (int i = 0; i < grid.n1; ++i)
        for (int j = 0; j < grid.n2; ++j) {
            int idx = grid.index(i, j);
            Vec2 x = grid.node(i, j);
            Mat3 A = metric_sqrt(metric.sample(x));
            Mat3 Q0 = bundle.Q0(x);
            Mat3 Q0invT = inverse(transpose(Q0));
            Vec3 b0 = bundle.b0(x), d0 = bundle.d0(x);
            Vec3 dy[2] = {bundle.dy0(0, x), bundle.dy0(1, x)};
            Vec3 db[2] = {bundle.db0(0, x), bundle.db0(1, x)};
            Vec3 dd[2] = {bundle.dd0(0, x), bundle.dd0(1, x)};
            Vec3 dV[2] = {V.d(0, x), V.d(1, x)};
            Vec3 dw[2] = {w.d(0, x), w.d(1, x)};

            Vec3 p = p_from_V(bundle, V, x);

            // q: Q0^T q = (1/2) c(2 (grad y0)^T grad w + (grad V)^T grad V)
            //            - [(grad w)^T b0; 0] - [(grad V)^T p; |p|^2 / 2]
            Mat2 m_q;
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b)
                    m_q(a, b) = 2.0 * dot(dy[a], dw[b]) + dot(dV[a], dV[b]);
            Vec3 c_q = minimizer_map_c(model, A, m_q);
            Vec3 rhs_q = 0.5 * c_q -
                         Vec3{dot(dw[0], b0), dot(dw[1], b0), 0.0} -
                         Vec3{dot(dV[0], p), dot(dV[1], p), 0.5 * dot(p, p)};
            Vec3 q = Q0invT * rhs_q;

            // k0: Q0^T k0 = c((grad y0)^T grad d0 + (grad b0)^T grad b0)
            //              - [(grad b0)^T d0; |d0|^2]
            Mat2 m_k;
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b)
                    m_k(a, b) = dot(dy[a], dd[b]) + dot(db[a], db[b]);
            Vec3 c_k = minimizer_map_c(model, A, m_k);
            Vec3 rhs_k = c_k - Vec3{dot(db[0], d0), dot(db[1], d0), dot(d0, d0)};
            Vec3 k0 = Q0invT * rhs_k;

            // r: Q0^T r = c((grad y0)^T grad p + (grad V)^T grad b0)
            //            - [(grad V)^T d0; <p, d0>]
            Vec3 dp[2] = {dp_from_V(bundle, V, 0, x), dp_from_V(bundle, V, 1, x)};
            Mat2 m_r;
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) m_r(a, b) = dot(dy[a], dp[b]) + dot(dV[a], db[b]);
            Vec3 c_r = minimizer_map_c(model, A, m_r);
            Vec3 rhs_r = c_r - Vec3{dot(dV[0], d0), dot(dV[1], d0), dot(p, d0)};
            Vec3 r = Q0invT * rhs_r;

            for (int c = 0; c < 3; ++c) {
                data->p[c][idx] = p[c];
                data->q[c][idx] = q[c];
                data->k0[c][idx] = k0[c];
                data->r[c][idx] = r[c];
            }
        }
    derive(grid, data->p, data->dp);
    derive(grid, data->q, data->dq);
    derive(grid, data->k0, data->dk0);
    derive(grid, data->r, data->dr);

    Deformation3D u;
    u.provenance = "recovery";
    u.evaluate = [bundle, V, w, h, data](const Vec2& x, double x3) {
        int idx = nearest(data->grid, x);
        Vec3 base = bundle.y0(x) + h * V.value(x) + (h * h) * w.value(x);
        Vec3 lin = bundle.b0(x) + h * at(data->p, idx) + (h * h) * at(data->q, idx);
        Vec3 quad = bundle.d0(x) + h * at(data->r, idx);
        return base + x3 * lin + (0.5 * x3 * x3) * quad + (x3 * x3 * x3 / 6.0) * at(data->k0, idx);
    };
    u.gradient = [bundle, V, w, h, data](const Vec2& x, double x3) {
        int idx = nearest(data->grid, x);
        Vec3 cols[3];
        for (int i = 0; i < 2; ++i) {
            Vec3 base = bundle.dy0(i, x) + h * V.d(i, x) + (h * h) * w.d(i, x);
            Vec3 lin = bundle.db0(i, x) + h * at(data->dp[i], idx) + (h * h) * at(data->dq[i], idx);
            Vec3 quad = bundle.dd0(i, x) + h * at(data->dr[i], idx);
            cols[i] = base + x3 * lin + (0.5 * x3 * x3) * quad +
                      (x3 * x3 * x3 / 6.0) * at(data->dk0[i], idx);
        }
        Vec3 lin3 = bundle.b0(x) + h * at(data->p, idx) + (h * h) * at(data->q, idx);
        Vec3 quad3 = bundle.d0(x) + h * at(data->r, idx);
        cols[2] = lin3 + x3 * quad3 + (0.5 * x3 * x3) * at(data->k0, idx);
        return Mat3::from_columns(cols[0], cols[1], cols[2]);
    };
    return u;
}

ScalingTable scaling_study(const MetricField& metric, const ElasticModel& model,
                           const std::function<Deformation3D(double)>& family,
                           const std::vector<double>& h_list, int n1, int n2, int n3) {
    if (h_list.size() < 2) throw std::invalid_argument("scaling study needs at least 2 thicknesses");
    std::vector<double> hs = h_list;
    std::sort(hs.begin(), hs.end(), std::greater<double>());
    ScalingTable table;
    for (double h : hs) {
        Deformation3D u = family(h);
        double e = energy_Eh(metric, model, u, h, n1, n2, n3);
        table.rows.push_back({h, e, e / (h * h * h * h)});
    }
    // least-squares slope of log E vs log h over the positive-energy rows
    int lo = -1, hi = -1;
    for (int i = 0; i < static_cast<int>(table.rows.size()); ++i) {
        if (table.rows[static_cast<size_t>(i)].Eh > 1e-18) {
            if (lo < 0) lo = i;
            hi = i + 1;
        }
    }
    if (lo >= 0 && hi - lo >= 2) {
        table.fit_begin = lo;
        table.fit_end = hi;
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int n = 0;
        for (int i = lo; i < hi; ++i) {
            const auto& row = table.rows[static_cast<size_t>(i)];
            if (row.Eh <= 1e-18) continue;
            double lx = std::log(row.h), ly = std::log(row.Eh);
            sx += lx;
            sy += ly;
            sxx += lx * lx;
            sxy += lx * ly;
            ++n;
        }
        table.fitted_slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    }
    CurvatureReport rep = classify_regime(metric, 33, 33, default_classify_tol(metric));
    table.regime = to_string(rep.regime);
    return table;
}

std::string ScalingTable::to_csv() const {
    std::string out = "h,Eh,Eh_over_h4\n";
    char buf[128];
    for (const auto& row : rows) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", row.h, row.Eh, row.Eh_over_h4);
        out += buf;
    }
    nlohmann::json j;
    if (std::isfinite(fitted_slope))
        j["fitted_slope"] = fitted_slope;
    else
        j["fitted_slope"] = nullptr;
    j["fit_range"] = {fit_begin, fit_end};
    j["regime"] = regime;
    out += j.dump();
    out += "\n";
    return out;
}

void ScalingTable::write_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write scaling table '" + path + "'");
    out << to_csv();
}

}  // namespace plates
