#include "plates/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace plates {

std::string to_string(MetricKind k) {
    switch (k) {
        case MetricKind::identity: return "identity";
        case MetricKind::diag_lambda: return "diag_lambda";
        case MetricKind::conformal_lambda: return "conformal_lambda";
        case MetricKind::sampled: return "sampled";
    }
    return "?";
}

std::string to_string(Regime r) {
    switch (r) {
        case Regime::Flat: return "Flat";
        case Regime::OrderH4: return "OrderH4";
        case Regime::OrderH2: return "OrderH2";
    }
    return "?";
}

MetricField MetricField::identity(Domain dom) {
    MetricField m;
    m.kind_ = MetricKind::identity;
    m.domain_ = dom;
    return m;
}

MetricField MetricField::diag_lambda(Polynomial2 lambda, Domain dom) {
    MetricField m;
    m.kind_ = MetricKind::diag_lambda;
    m.domain_ = dom;
    m.lambda_ = lambda;
    return m;
}

MetricField MetricField::conformal_lambda(Polynomial2 f, Domain dom) {
    MetricField m;
    m.kind_ = MetricKind::conformal_lambda;
    m.domain_ = dom;
    m.f_ = f;
    return m;
}

namespace {
constexpr int kEntryRow[6] = {0, 0, 0, 1, 1, 2};
constexpr int kEntryCol[6] = {0, 1, 2, 1, 2, 2};

Mat3 assemble_sym(const std::array<double, 6>& e) {
    Mat3 g;
    for (int n = 0; n < 6; ++n) {
        g(kEntryRow[n], kEntryCol[n]) = e[n];
        g(kEntryCol[n], kEntryRow[n]) = e[n];
    }
    return g;
}
}  // namespace

MetricField MetricField::sampled(const Grid2& grid, std::vector<Mat3> values) {
    if (static_cast<int>(values.size()) != grid.size())
        throw std::invalid_argument("metric sample count does not match grid size");
    MetricField m;
    m.kind_ = MetricKind::sampled;
    m.domain_ = Domain{grid.L1, grid.L2};
    m.grid_ = grid;
    m.has_grid_ = true;
    m.fd_step_ = std::min(grid.h1(), grid.h2());
    for (int n = 0; n < 6; ++n) m.entries_[n] = grid.make_field();
    for (int k = 0; k < grid.size(); ++k) {
        const Mat3& g = values[k];
        if (frob_norm(g - transpose(g)) > 1e-10 * (1.0 + frob_norm(g)))
            throw std::domain_error("sampled metric is not symmetric at node " + std::to_string(k));
        SymEigen3 e = sym_eigen(g);
        if (e.values[0] <= 0.0)
            throw std::domain_error("sampled metric is not positive definite at node " +
                                    std::to_string(k) + ": smallest eigenvalue " +
                                    std::to_string(e.values[0]));
        for (int n = 0; n < 6; ++n) m.entries_[n][k] = g(kEntryRow[n], kEntryCol[n]);
    }
    for (int n = 0; n < 6; ++n) {
        m.d_entries_[n][0] = d1(grid, m.entries_[n]);
        m.d_entries_[n][1] = d2(grid, m.entries_[n]);
        m.dd_entries_[n][0] = d11(grid, m.entries_[n]);
        m.dd_entries_[n][1] = d12(grid, m.entries_[n]);
        m.dd_entries_[n][2] = d22(grid, m.entries_[n]);
    }
    return m;
}

MetricField MetricField::sampled_from(const MetricField& src, const Grid2& grid) {
    std::vector<Mat3> values;
    values.reserve(static_cast<size_t>(grid.size()));
    for (int i = 0; i < grid.n1; ++i)
        for (int j = 0; j < grid.n2; ++j) values.push_back(src.sample(grid.node(i, j)));
    return sampled(grid, std::move(values));
}

const Grid2& MetricField::sample_grid() const {
    if (!has_grid_) throw std::logic_error("metric has no sample grid (analytic kind)");
    return grid_;
}

void MetricField::check_in_domain(const Vec2& x) const {
    if (!domain_.contains(x))
        throw std::out_of_range("point (" + std::to_string(x[0]) + ", " + std::to_string(x[1]) +
                                ") is outside the metric domain [0," + std::to_string(domain_.L1) +
                                "]x[0," + std::to_string(domain_.L2) + "]");
}

int MetricField::nearest_node(const Vec2& x) const {
    int i = static_cast<int>(std::lround(x[0] / grid_.h1()));
    int j = static_cast<int>(std::lround(x[1] / grid_.h2()));
    i = std::clamp(i, 0, grid_.n1 - 1);
    j = std::clamp(j, 0, grid_.n2 - 1);
    return grid_.index(i, j);
}

Mat3 MetricField::sample(const Vec2& x) const {
    check_in_domain(x);
    switch (kind_) {
        case MetricKind::identity:
            return Mat3::identity();
        case MetricKind::diag_lambda: {
            double lam = lambda_(x);
            if (lam <= 0.0)
                throw std::domain_error("metric scalar is not positive at (" +
                                        std::to_string(x[0]) + ", " + std::to_string(x[1]) +
                                        "): " + std::to_string(lam));
            return Mat3::diag(1.0, 1.0, lam);
        }
        case MetricKind::conformal_lambda: {
            double s = std::exp(2.0 * f_(x));
            return Mat3::diag(s, s, s);
        }
        case MetricKind::sampled: {
            int k = nearest_node(x);
            std::array<double, 6> e;
            for (int n = 0; n < 6; ++n) e[n] = entries_[n][k];
            return assemble_sym(e);
        }
    }
    return Mat3::identity();
}

Mat3 MetricField::d_sample(int k, const Vec2& x) const {
    if (k == 2) return Mat3::zero();  // no thickness dependence, structurally
    check_in_domain(x);
    switch (kind_) {
        case MetricKind::identity:
            return Mat3::zero();
        case MetricKind::diag_lambda:
            return Mat3::diag(0.0, 0.0, lambda_.derivative(k)(x));
        case MetricKind::conformal_lambda: {
            double s = 2.0 * f_.derivative(k)(x) * std::exp(2.0 * f_(x));
            return Mat3::diag(s, s, s);
        }
        case MetricKind::sampled: {
            int node = nearest_node(x);
            std::array<double, 6> e;
            for (int n = 0; n < 6; ++n) e[n] = d_entries_[n][k][node];
            return assemble_sym(e);
        }
    }
    return Mat3::zero();
}

Mat3 MetricField::dd_sample(int k, int l, const Vec2& x) const {
    if (k == 2 || l == 2) return Mat3::zero();
    check_in_domain(x);
    switch (kind_) {
        case MetricKind::identity:
            return Mat3::zero();
        case MetricKind::diag_lambda:
            return Mat3::diag(0.0, 0.0, lambda_.derivative(k).derivative(l)(x));
        case MetricKind::conformal_lambda: {
            double fk = f_.derivative(k)(x);
            double fl = f_.derivative(l)(x);
            double fkl = f_.derivative(k).derivative(l)(x);
            double s = (4.0 * fk * fl + 2.0 * fkl) * std::exp(2.0 * f_(x));
            return Mat3::diag(s, s, s);
        }
        case MetricKind::sampled: {
            int node = nearest_node(x);
            int slot = (k == l) ? (k == 0 ? 0 : 2) : 1;
            std::array<double, 6> e;
            for (int n = 0; n < 6; ++n) e[n] = dd_entries_[n][slot][node];
            return assemble_sym(e);
        }
    }
    return Mat3::zero();
}

double MetricField::derivative_scale(const Grid2& grid) const {
    double s = 0.0;
    auto absorb = [&s](const Mat3& m) {
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) s = std::max(s, std::abs(m(i, j)));
    };
    for (int i = 0; i < grid.n1; ++i)
        for (int j = 0; j < grid.n2; ++j) {
            Vec2 x = grid.node(i, j);
            for (int k = 0; k < 2; ++k) absorb(d_sample(k, x));
            for (int k = 0; k < 2; ++k)
                for (int l = k; l < 2; ++l) absorb(dd_sample(k, l, x));
        }
    return s;
}

MetricField MetricField::read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open metric table '" + path + "'");
    std::string header;
    std::getline(in, header);
    if (!header.empty() && header.back() == '\r') header.pop_back();
    if (header != "x1,x2,G11,G12,G13,G22,G23,G33")
        throw std::runtime_error("metric table '" + path +
                                 "' must start with header x1,x2,G11,G12,G13,G22,G23,G33");
    std::vector<std::array<double, 8>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::array<double, 8> row{};
        std::string item;
        int c = 0;
        while (std::getline(ss, item, ',')) {
            if (c >= 8) throw std::runtime_error("too many columns in metric table row: " + line);
            row[c++] = std::stod(item);
        }
        if (c != 8) throw std::runtime_error("expected 8 columns in metric table row: " + line);
        rows.push_back(row);
    }
    if (rows.size() < 16) throw std::runtime_error("metric table has too few rows");

    // infer the grid: rows are x1-major, so the x2 coordinate cycles fastest
    int n2 = 1;
    while (n2 < static_cast<int>(rows.size()) && rows[n2][0] == rows[0][0]) ++n2;
    if (static_cast<int>(rows.size()) % n2 != 0)
        throw std::runtime_error("metric table is not a complete x1-major grid");
    int n1 = static_cast<int>(rows.size()) / n2;
    if (n1 < 4 || n2 < 4) throw std::runtime_error("metric table grid must be at least 4x4");
    double L1 = rows.back()[0];
    double L2 = rows[n2 - 1][1];
    if (std::abs(rows[0][0]) > 1e-12 || std::abs(rows[0][1]) > 1e-12)
        throw std::runtime_error("metric table grid must start at the origin");
    Grid2 grid(n1, n2, L1, L2);
    double tol1 = 1e-10 * std::max(1.0, L1);
    double tol2 = 1e-10 * std::max(1.0, L2);
    std::vector<Mat3> values(static_cast<size_t>(grid.size()));
    for (int i = 0; i < n1; ++i)
        for (int j = 0; j < n2; ++j) {
            const auto& row = rows[static_cast<size_t>(i) * n2 + j];
            if (std::abs(row[0] - grid.x1(i)) > tol1 || std::abs(row[1] - grid.x2(j)) > tol2)
                throw std::runtime_error("metric table grid is not uniform at row " +
                                         std::to_string(i * n2 + j + 2));
            values[static_cast<size_t>(grid.index(i, j))] =
                assemble_sym({row[2], row[3], row[4], row[5], row[6], row[7]});
        }
    return sampled(grid, std::move(values));
}

void MetricField::write_csv(const std::string& path, const Grid2& grid) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write metric table '" + path + "'");
    out << "x1,x2,G11,G12,G13,G22,G23,G33\n";
    char buf[64];
    auto fmt = [&buf](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    for (int i = 0; i < grid.n1; ++i)
        for (int j = 0; j < grid.n2; ++j) {
            Vec2 x = grid.node(i, j);
            Mat3 g = sample(x);
            out << fmt(x[0]) << ',' << fmt(x[1]);
            for (int n = 0; n < 6; ++n) out << ',' << fmt(g(kEntryRow[n], kEntryCol[n]));
            out << '\n';
        }
}

ChristoffelSymbols christoffel(const MetricField& metric, const Vec2& x) {
    Mat3 g = metric.sample(x);
    Mat3 ginv = inverse(g);
    Mat3 dg[3] = {metric.d_sample(0, x), metric.d_sample(1, x), Mat3::zero()};
    ChristoffelSymbols out;
    for (int n = 0; n < 3; ++n)
        for (int k = 0; k < 3; ++k)
            for (int l = 0; l < 3; ++l) {
                double s = 0.0;
                for (int a = 0; a < 3; ++a)
                    s += ginv(n, a) * (dg[k](a, l) + dg[l](a, k) - dg[a](k, l));
                out.g[n][k][l] = 0.5 * s;
            }
    return out;
}

double riemann_component(const MetricField& metric, const Vec2& x, int i, int k, int l, int m) {
    auto dd = [&](int a, int b, int r, int c) {
        return metric.dd_sample(a, b, x)(r, c);
    };
    double second = 0.5 * (dd(k, l, i, m) + dd(i, m, k, l) - dd(k, m, i, l) - dd(i, l, k, m));
    Mat3 g = metric.sample(x);
    ChristoffelSymbols gam = christoffel(metric, x);
    double quad = 0.0;
    for (int n = 0; n < 3; ++n)
        for (int p = 0; p < 3; ++p)
            quad += g(n, p) * (gam(n, k, l) * gam(p, i, m) - gam(n, k, m) * gam(p, i, l));
    return second + quad;
}

RiemannComponents riemann_covariant(const MetricField& metric, const Vec2& x) {
    // shared Christoffel/metric evaluation for all six components
    Mat3 g = metric.sample(x);
    ChristoffelSymbols gam = christoffel(metric, x);
    auto dd = [&](int a, int b, int r, int c) { return metric.dd_sample(a, b, x)(r, c); };
    auto component = [&](int i, int k, int l, int m) {
        double second = 0.5 * (dd(k, l, i, m) + dd(i, m, k, l) - dd(k, m, i, l) - dd(i, l, k, m));
        double quad = 0.0;
        for (int n = 0; n < 3; ++n)
            for (int p = 0; p < 3; ++p)
                quad += g(n, p) * (gam(n, k, l) * gam(p, i, m) - gam(n, k, m) * gam(p, i, l));
        return second + quad;
    };
    RiemannComponents r;
    r.r1212 = component(0, 1, 0, 1);
    r.r1213 = component(0, 1, 0, 2);
    r.r1223 = component(0, 1, 1, 2);
    r.r1313 = component(0, 2, 0, 2);
    r.r1323 = component(0, 2, 1, 2);
    r.r2323 = component(1, 2, 1, 2);
    return r;
}

double default_classify_tol(const MetricField& metric) {
    return metric.analytic() ? 1e-8 : 1e-4;
}

CurvatureReport classify_regime(const MetricField& metric, int n1, int n2, double tol) {
    if (tol <= 0.0) throw std::invalid_argument("classification tolerance must be positive");
    // sampled metrics are surveyed on their own nodes; analytic ones on the
    // requested resolution
    Grid2 grid = metric.analytic() ? Grid2(n1, n2, metric.domain().L1, metric.domain().L2)
                                   : metric.sample_grid();
    if (grid.n1 < 5 || grid.n2 < 5)
        throw std::invalid_argument("classification grid must be at least 5x5");
    CurvatureReport rep;
    rep.grid = grid;
    rep.tol = tol;
    for (auto& f : rep.components) f = grid.make_field();
    for (int i = 0; i < grid.n1; ++i)
        for (int j = 0; j < grid.n2; ++j) {
            RiemannComponents r = riemann_covariant(metric, grid.node(i, j));
            auto arr = r.as_array();
            for (int n = 0; n < 6; ++n) rep.components[n][grid.index(i, j)] = arr[n];
        }
    for (int n = 0; n < 6; ++n) {
        double s = 0.0;
        for (double v : rep.components[n]) s = std::max(s, std::abs(v));
        rep.sup_norms[n] = s;
    }
    rep.scale = std::max(1.0, metric.derivative_scale(grid));
    double thr = tol * rep.scale;
    bool tangential_vanish =
        rep.sup_norms[0] <= thr && rep.sup_norms[1] <= thr && rep.sup_norms[2] <= thr;
    bool normal_vanish =
        rep.sup_norms[3] <= thr && rep.sup_norms[4] <= thr && rep.sup_norms[5] <= thr;
    if (tangential_vanish && normal_vanish)
        rep.regime = Regime::Flat;
    else if (tangential_vanish)
        rep.regime = Regime::OrderH4;
    else
        rep.regime = Regime::OrderH2;
    return rep;
}

Mat3 ricci_conformal(const Polynomial2& f, const Vec2& x) {
    Vec2 grad = f.gradient(x[0], x[1]);
    Mat2 hess = f.hessian(x[0], x[1]);
    double lap = hess(0, 0) + hess(1, 1);
    double g2 = dot(grad, grad);
    Mat2 block = -1.0 * (hess - outer(grad, grad)) - (lap + g2) * Mat2::identity();
    Mat3 ric;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) ric(i, j) = block(i, j);
    ric(2, 2) = -(lap + g2);
    return ric;
}

Mat2 m_lambda(const Polynomial2& lambda, const Vec2& x) {
    double lam = lambda(x);
    if (lam <= 0.0)
        throw std::domain_error("obstruction tensor needs a positive scalar; got " +
                                std::to_string(lam));
    Vec2 grad = lambda.gradient(x[0], x[1]);
    return lambda.hessian(x[0], x[1]) - (0.5 / lam) * outer(grad, grad);
}

}  // namespace plates
