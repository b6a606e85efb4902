#pragma once

// Uniform tensor-product grid on [0,L1] x [0,L2] with x1-major storage
// (index = i*n2 + j for node (x1_i, x2_j)), second-order finite differences
// with one-sided boundary closures, their adjoints, and quadrature rules.

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "plates/linalg.hpp"

namespace plates {

using Field = std::vector<double>;

struct Grid2 {
    int n1 = 0;
    int n2 = 0;
    double L1 = 1.0;
    double L2 = 1.0;

    Grid2() = default;
    Grid2(int n1_, int n2_, double L1_ = 1.0, double L2_ = 1.0)
        : n1(n1_), n2(n2_), L1(L1_), L2(L2_) {
        if (n1 < 4 || n2 < 4)
            throw std::invalid_argument("grid needs at least 4 nodes per direction");
        if (L1 <= 0.0 || L2 <= 0.0) throw std::invalid_argument("grid extents must be positive");
    }

    int size() const { return n1 * n2; }
    double h1() const { return L1 / (n1 - 1); }
    double h2() const { return L2 / (n2 - 1); }
    int index(int i, int j) const { return i * n2 + j; }
    double x1(int i) const { return i * h1(); }
    double x2(int j) const { return j * h2(); }
    Vec2 node(int i, int j) const { return {x1(i), x2(j)}; }

    Field make_field(double fill = 0.0) const { return Field(static_cast<size_t>(size()), fill); }

    Field sample(const std::function<double(double, double)>& f) const {
        Field out = make_field();
        for (int i = 0; i < n1; ++i)
            for (int j = 0; j < n2; ++j) out[index(i, j)] = f(x1(i), x2(j));
        return out;
    }
};

namespace detail {

// Enumerate one row of the 1D first-derivative stencil (3-point one-sided
// at the ends, centered inside); calls emit(column, coefficient).
template <class Emit>
void d1_row(int r, int n, double h, Emit&& emit) {
    double s = 1.0 / (2.0 * h);
    if (r == 0) {
        emit(0, -3.0 * s);
        emit(1, 4.0 * s);
        emit(2, -1.0 * s);
    } else if (r == n - 1) {
        emit(n - 1, 3.0 * s);
        emit(n - 2, -4.0 * s);
        emit(n - 3, 1.0 * s);
    } else {
        emit(r - 1, -s);
        emit(r + 1, s);
    }
}

// One row of the 1D second-derivative stencil (4-point one-sided at the ends).
template <class Emit>
void d2_row(int r, int n, double h, Emit&& emit) {
    double s = 1.0 / (h * h);
    if (r == 0) {
        emit(0, 2.0 * s);
        emit(1, -5.0 * s);
        emit(2, 4.0 * s);
        emit(3, -1.0 * s);
    } else if (r == n - 1) {
        emit(n - 1, 2.0 * s);
        emit(n - 2, -5.0 * s);
        emit(n - 3, 4.0 * s);
        emit(n - 4, -1.0 * s);
    } else {
        emit(r - 1, s);
        emit(r, -2.0 * s);
        emit(r + 1, s);
    }
}

enum class Op { d1, d2 };

template <bool Adjoint>
Field apply_axis(const Grid2& g, const Field& f, int axis, Op op) {
    if (static_cast<int>(f.size()) != g.size())
        throw std::invalid_argument("field size does not match grid");
    Field out = g.make_field();
    int n = (axis == 0) ? g.n1 : g.n2;
    double h = (axis == 0) ? g.h1() : g.h2();
    int nlines = (axis == 0) ? g.n2 : g.n1;
    auto at = [&](int along, int line) {
        return (axis == 0) ? g.index(along, line) : g.index(line, along);
    };
    for (int line = 0; line < nlines; ++line) {
        for (int r = 0; r < n; ++r) {
            auto emit = [&](int c, double w) {
                if constexpr (Adjoint)
                    out[at(c, line)] += w * f[at(r, line)];
                else
                    out[at(r, line)] += w * f[at(c, line)];
            };
            if (op == Op::d1)
                d1_row(r, n, h, emit);
            else
                d2_row(r, n, h, emit);
        }
    }
    return out;
}

}  // namespace detail

// First and second finite-difference derivatives along each axis.
inline Field d1(const Grid2& g, const Field& f) {
    return detail::apply_axis<false>(g, f, 0, detail::Op::d1);
}
inline Field d2(const Grid2& g, const Field& f) {
    return detail::apply_axis<false>(g, f, 1, detail::Op::d1);
}
inline Field d11(const Grid2& g, const Field& f) {
    return detail::apply_axis<false>(g, f, 0, detail::Op::d2);
}
inline Field d22(const Grid2& g, const Field& f) {
    return detail::apply_axis<false>(g, f, 1, detail::Op::d2);
}
// Mixed derivative, evaluated as d2(d1 f); its adjoint is d1_adj(d2_adj f).
inline Field d12(const Grid2& g, const Field& f) { return d2(g, d1(g, f)); }

// Adjoints (transposes) of the operators above, used for gradient assembly.
inline Field d1_adj(const Grid2& g, const Field& f) {
    return detail::apply_axis<true>(g, f, 0, detail::Op::d1);
}
inline Field d2_adj(const Grid2& g, const Field& f) {
    return detail::apply_axis<true>(g, f, 1, detail::Op::d1);
}
inline Field d11_adj(const Grid2& g, const Field& f) {
    return detail::apply_axis<true>(g, f, 0, detail::Op::d2);
}
inline Field d22_adj(const Grid2& g, const Field& f) {
    return detail::apply_axis<true>(g, f, 1, detail::Op::d2);
}
inline Field d12_adj(const Grid2& g, const Field& f) { return d1_adj(g, d2_adj(g, f)); }

// Trapezoid-rule quadrature weights: h1*h2 times 1 inside, 1/2 on edges,
// 1/4 at corners.
inline Field trapezoid_weights(const Grid2& g) {
    Field w = g.make_field();
    double base = g.h1() * g.h2();
    for (int i = 0; i < g.n1; ++i) {
        double wi = (i == 0 || i == g.n1 - 1) ? 0.5 : 1.0;
        for (int j = 0; j < g.n2; ++j) {
            double wj = (j == 0 || j == g.n2 - 1) ? 0.5 : 1.0;
            w[g.index(i, j)] = base * wi * wj;
        }
    }
    return w;
}

inline double integrate(const Grid2& g, const Field& f) {
    Field w = trapezoid_weights(g);
    double s = 0.0;
    for (int k = 0; k < g.size(); ++k) s += w[k] * f[k];
    return s;
}

// Gauss-Legendre nodes and weights on [-1, 1]; nodes are the roots of the
// n-th Legendre polynomial found by Newton iteration.
struct Quadrature1D {
    std::vector<double> nodes;
    std::vector<double> weights;
};

inline Quadrature1D gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("quadrature order must be >= 1");
    Quadrature1D q;
    q.nodes.resize(n);
    q.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            // evaluate P_n and P_n' by the three-term recurrence
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            double pn = (n == 1) ? x : p1;
            double pn1 = (n == 1) ? 1.0 : p0;
            dp = n * (x * pn - pn1) / (x * x - 1.0);
            double dx = pn / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        q.nodes[n - 1 - i] = x;  // ascending order
        q.weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return q;
}

}  // namespace plates
