#pragma once

// Small fixed-size linear algebra for 2x2 / 3x3 problems.
// Everything is value-semantic and allocation-free; sizes never exceed 3,
// so all solves are direct (adjugate inverses, cyclic Jacobi eigensolver).

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace plates {

struct Vec2 {
    double v[2]{0.0, 0.0};

    Vec2() = default;
    Vec2(double a, double b) : v{a, b} {}

    double& operator[](int i) { return v[i]; }
    double operator[](int i) const { return v[i]; }

    Vec2 operator+(const Vec2& o) const { return {v[0] + o.v[0], v[1] + o.v[1]}; }
    Vec2 operator-(const Vec2& o) const { return {v[0] - o.v[0], v[1] - o.v[1]}; }
    Vec2 operator*(double s) const { return {v[0] * s, v[1] * s}; }
    Vec2& operator+=(const Vec2& o) { v[0] += o.v[0]; v[1] += o.v[1]; return *this; }
};

inline Vec2 operator*(double s, const Vec2& a) { return a * s; }
inline double dot(const Vec2& a, const Vec2& b) { return a[0] * b[0] + a[1] * b[1]; }
inline double norm(const Vec2& a) { return std::sqrt(dot(a, a)); }

struct Vec3 {
    double v[3]{0.0, 0.0, 0.0};

    Vec3() = default;
    Vec3(double a, double b, double c) : v{a, b, c} {}

    double& operator[](int i) { return v[i]; }
    double operator[](int i) const { return v[i]; }

    Vec3 operator+(const Vec3& o) const { return {v[0] + o.v[0], v[1] + o.v[1], v[2] + o.v[2]}; }
    Vec3 operator-(const Vec3& o) const { return {v[0] - o.v[0], v[1] - o.v[1], v[2] - o.v[2]}; }
    Vec3 operator*(double s) const { return {v[0] * s, v[1] * s, v[2] * s}; }
    Vec3& operator+=(const Vec3& o) { v[0] += o.v[0]; v[1] += o.v[1]; v[2] += o.v[2]; return *this; }
    Vec3& operator-=(const Vec3& o) { v[0] -= o.v[0]; v[1] -= o.v[1]; v[2] -= o.v[2]; return *this; }
};

inline Vec3 operator*(double s, const Vec3& a) { return a * s; }
inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

struct Mat2 {
    double m[2][2]{{0.0, 0.0}, {0.0, 0.0}};

    Mat2() = default;
    Mat2(double a11, double a12, double a21, double a22) : m{{a11, a12}, {a21, a22}} {}

    static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
    static Mat2 zero() { return {}; }

    double& operator()(int i, int j) { return m[i][j]; }
    double operator()(int i, int j) const { return m[i][j]; }

    Mat2 operator+(const Mat2& o) const {
        Mat2 r;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) r.m[i][j] = m[i][j] + o.m[i][j];
        return r;
    }
    Mat2 operator-(const Mat2& o) const {
        Mat2 r;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) r.m[i][j] = m[i][j] - o.m[i][j];
        return r;
    }
    Mat2 operator*(double s) const {
        Mat2 r;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) r.m[i][j] = m[i][j] * s;
        return r;
    }
    Mat2& operator+=(const Mat2& o) {
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) m[i][j] += o.m[i][j];
        return *this;
    }
};

inline Mat2 operator*(double s, const Mat2& a) { return a * s; }
inline double trace(const Mat2& a) { return a(0, 0) + a(1, 1); }
inline Mat2 transpose(const Mat2& a) { return {a(0, 0), a(1, 0), a(0, 1), a(1, 1)}; }
inline Mat2 sym(const Mat2& a) { return 0.5 * (a + transpose(a)); }
inline Mat2 outer(const Vec2& a, const Vec2& b) {
    return {a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]};
}
inline double frob2(const Mat2& a) {
    double s = 0.0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) s += a(i, j) * a(i, j);
    return s;
}
inline double frob_norm(const Mat2& a) { return std::sqrt(frob2(a)); }
inline double inner(const Mat2& a, const Mat2& b) {
    double s = 0.0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) s += a(i, j) * b(i, j);
    return s;
}

struct Mat3 {
    double m[3][3]{{0, 0, 0}, {0, 0, 0}, {0, 0, 0}};

    Mat3() = default;

    static Mat3 identity() {
        Mat3 r;
        r.m[0][0] = r.m[1][1] = r.m[2][2] = 1.0;
        return r;
    }
    static Mat3 zero() { return {}; }
    static Mat3 diag(double a, double b, double c) {
        Mat3 r;
        r.m[0][0] = a;
        r.m[1][1] = b;
        r.m[2][2] = c;
        return r;
    }
    // Matrix with the given columns.
    static Mat3 from_columns(const Vec3& c1, const Vec3& c2, const Vec3& c3) {
        Mat3 r;
        for (int i = 0; i < 3; ++i) {
            r.m[i][0] = c1[i];
            r.m[i][1] = c2[i];
            r.m[i][2] = c3[i];
        }
        return r;
    }

    double& operator()(int i, int j) { return m[i][j]; }
    double operator()(int i, int j) const { return m[i][j]; }

    Vec3 col(int j) const { return {m[0][j], m[1][j], m[2][j]}; }

    Mat3 operator+(const Mat3& o) const {
        Mat3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) r.m[i][j] = m[i][j] + o.m[i][j];
        return r;
    }
    Mat3 operator-(const Mat3& o) const {
        Mat3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) r.m[i][j] = m[i][j] - o.m[i][j];
        return r;
    }
    Mat3 operator*(double s) const {
        Mat3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) r.m[i][j] = m[i][j] * s;
        return r;
    }
    Mat3 operator*(const Mat3& o) const {
        Mat3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                double s = 0.0;
                for (int k = 0; k < 3; ++k) s += m[i][k] * o.m[k][j];
                r.m[i][j] = s;
            }
        return r;
    }
    Mat3& operator+=(const Mat3& o) {
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) m[i][j] += o.m[i][j];
        return *this;
    }
};

inline Mat3 operator*(double s, const Mat3& a) { return a * s; }
inline Vec3 operator*(const Mat3& a, const Vec3& x) {
    Vec3 r;
    for (int i = 0; i < 3; ++i) r[i] = a(i, 0) * x[0] + a(i, 1) * x[1] + a(i, 2) * x[2];
    return r;
}
inline double trace(const Mat3& a) { return a(0, 0) + a(1, 1) + a(2, 2); }
inline Mat3 transpose(const Mat3& a) {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r(i, j) = a(j, i);
    return r;
}
inline Mat3 sym(const Mat3& a) { return 0.5 * (a + transpose(a)); }
inline double frob2(const Mat3& a) {
    double s = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) s += a(i, j) * a(i, j);
    return s;
}
inline double frob_norm(const Mat3& a) { return std::sqrt(frob2(a)); }
inline Mat3 outer(const Vec3& a, const Vec3& b) {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r(i, j) = a[i] * b[j];
    return r;
}

inline double det(const Mat2& a) { return a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0); }

inline double det(const Mat3& a) {
    return a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) -
           a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0)) +
           a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
}

inline Mat2 inverse(const Mat2& a) {
    double d = det(a);
    if (d == 0.0) throw std::domain_error("singular 2x2 matrix");
    return {a(1, 1) / d, -a(0, 1) / d, -a(1, 0) / d, a(0, 0) / d};
}

inline Mat3 inverse(const Mat3& a) {
    double d = det(a);
    if (std::abs(d) < 1e-300) throw std::domain_error("singular 3x3 matrix");
    Mat3 r;
    r(0, 0) = (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) / d;
    r(0, 1) = (a(0, 2) * a(2, 1) - a(0, 1) * a(2, 2)) / d;
    r(0, 2) = (a(0, 1) * a(1, 2) - a(0, 2) * a(1, 1)) / d;
    r(1, 0) = (a(1, 2) * a(2, 0) - a(1, 0) * a(2, 2)) / d;
    r(1, 1) = (a(0, 0) * a(2, 2) - a(0, 2) * a(2, 0)) / d;
    r(1, 2) = (a(0, 2) * a(1, 0) - a(0, 0) * a(1, 2)) / d;
    r(2, 0) = (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0)) / d;
    r(2, 1) = (a(0, 1) * a(2, 0) - a(0, 0) * a(2, 1)) / d;
    r(2, 2) = (a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0)) / d;
    return r;
}

// Eigendecomposition of a symmetric 3x3 matrix by cyclic Jacobi rotations.
// Returns eigenvalues (ascending) and the corresponding orthonormal eigenvectors
// as the columns of the second member.
struct SymEigen3 {
    std::array<double, 3> values;
    Mat3 vectors;
};

inline SymEigen3 sym_eigen(const Mat3& a_in) {
    Mat3 a = sym(a_in);  // discard any asymmetry from roundoff
    Mat3 v = Mat3::identity();
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = a(0, 1) * a(0, 1) + a(0, 2) * a(0, 2) + a(1, 2) * a(1, 2);
        if (off < 1e-30 * (1.0 + frob2(a))) break;
        for (int p = 0; p < 2; ++p) {
            for (int q = p + 1; q < 3; ++q) {
                if (a(p, q) == 0.0) continue;
                double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
                double t = (theta >= 0.0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double s = t * c;
                Mat3 r = Mat3::identity();
                r(p, p) = c;
                r(q, q) = c;
                r(p, q) = s;
                r(q, p) = -s;
                a = transpose(r) * a * r;
                v = v * r;
            }
        }
    }
    SymEigen3 out;
    int order[3] = {0, 1, 2};
    // sort ascending by eigenvalue
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
            if (a(order[j], order[j]) < a(order[i], order[i])) std::swap(order[i], order[j]);
    for (int k = 0; k < 3; ++k) {
        out.values[k] = a(order[k], order[k]);
        for (int i = 0; i < 3; ++i) out.vectors(i, k) = v(i, order[k]);
    }
    return out;
}

// Unique symmetric positive definite square root of an SPD matrix.
// Throws std::domain_error naming the offending eigenvalue if the input is not SPD.
inline Mat3 sqrt_spd(const Mat3& g) {
    if (frob_norm(g - transpose(g)) > 1e-10 * (1.0 + frob_norm(g)))
        throw std::domain_error("matrix square root requires a symmetric input");
    SymEigen3 e = sym_eigen(g);
    if (e.values[0] <= 0.0)
        throw std::domain_error("matrix is not positive definite: smallest eigenvalue " +
                                std::to_string(e.values[0]));
    Mat3 r = Mat3::zero();
    for (int k = 0; k < 3; ++k) {
        double s = std::sqrt(e.values[k]);
        Vec3 u = e.vectors.col(k);
        r += s * outer(u, u);
    }
    return sym(r);
}

// Solve A x = b for symmetric positive definite 3x3 A (used by the exact
// quadratic-form relaxation); direct inverse is adequate at this size.
inline Vec3 solve_spd3(const Mat3& a, const Vec3& b) { return inverse(a) * b; }

}  // namespace plates
