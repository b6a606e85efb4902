#pragma once

// Bivariate polynomials of degree <= 4 with coefficients listed in graded
// lexicographic order:
//   1, x1, x2, x1^2, x1*x2, x2^2, x1^3, x1^2*x2, x1*x2^2, x2^3,
//   x1^4, x1^3*x2, x1^2*x2^2, x1*x2^3, x2^4
// A list shorter than 15 entries leaves the remaining coefficients at zero,
// so "1,0,0,1,0,0" is 1 + x1^2.

#include <array>
#include <cstddef>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "plates/linalg.hpp"

namespace plates {

class Polynomial2 {
public:
    static constexpr int kMaxDegree = 4;
    static constexpr int kNumCoeffs = 15;

    Polynomial2() = default;

    static Polynomial2 constant(double c) {
        Polynomial2 p;
        p.c_[0] = c;
        return p;
    }

    static Polynomial2 from_coeffs(const std::vector<double>& coeffs) {
        if (coeffs.size() > kNumCoeffs)
            throw std::invalid_argument("polynomial coefficient list has " +
                                        std::to_string(coeffs.size()) +
                                        " entries; at most 15 are allowed (degree <= 4)");
        Polynomial2 p;
        for (std::size_t k = 0; k < coeffs.size(); ++k) p.c_[k] = coeffs[k];
        return p;
    }

    // Parse a comma-separated coefficient list, e.g. "1,0,0,1,0,0".
    static Polynomial2 parse(const std::string& text) {
        std::vector<double> coeffs;
        std::stringstream ss(text);
        std::string item;
        while (std::getline(ss, item, ',')) {
            if (item.empty() || item.find_first_not_of(" \t") == std::string::npos)
                throw std::invalid_argument("empty entry in coefficient list '" + text + "'");
            std::size_t pos = 0;
            double v = std::stod(item, &pos);
            if (item.find_first_not_of(" \t", pos) != std::string::npos)
                throw std::invalid_argument("bad coefficient '" + item + "'");
            coeffs.push_back(v);
        }
        if (coeffs.empty())
            throw std::invalid_argument("coefficient list '" + text + "' is empty");
        return from_coeffs(coeffs);
    }

    double coeff(int k) const { return c_[k]; }

    // Exponents (i, j) of the k-th graded-lex monomial x1^i x2^j.
    static std::pair<int, int> exponents(int k) {
        static constexpr std::pair<int, int> table[kNumCoeffs] = {
            {0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}, {3, 0}, {2, 1},
            {1, 2}, {0, 3}, {4, 0}, {3, 1}, {2, 2}, {1, 3}, {0, 4}};
        return table[k];
    }

    static int index_of(int i, int j) {
        for (int k = 0; k < kNumCoeffs; ++k) {
            auto [a, b] = exponents(k);
            if (a == i && b == j) return k;
        }
        throw std::out_of_range("monomial degree exceeds 4");
    }

    double operator()(double x1, double x2) const {
        double p1[kMaxDegree + 1], p2[kMaxDegree + 1];
        p1[0] = p2[0] = 1.0;
        for (int d = 1; d <= kMaxDegree; ++d) {
            p1[d] = p1[d - 1] * x1;
            p2[d] = p2[d - 1] * x2;
        }
        double s = 0.0;
        for (int k = 0; k < kNumCoeffs; ++k) {
            if (c_[k] == 0.0) continue;
            auto [i, j] = exponents(k);
            s += c_[k] * p1[i] * p2[j];
        }
        return s;
    }

    double operator()(const Vec2& x) const { return (*this)(x[0], x[1]); }

    Polynomial2 dx1() const {
        Polynomial2 r;
        for (int k = 0; k < kNumCoeffs; ++k) {
            if (c_[k] == 0.0) continue;
            auto [i, j] = exponents(k);
            if (i > 0) r.c_[index_of(i - 1, j)] += c_[k] * i;
        }
        return r;
    }

    Polynomial2 dx2() const {
        Polynomial2 r;
        for (int k = 0; k < kNumCoeffs; ++k) {
            if (c_[k] == 0.0) continue;
            auto [i, j] = exponents(k);
            if (j > 0) r.c_[index_of(i, j - 1)] += c_[k] * j;
        }
        return r;
    }

    Polynomial2 derivative(int axis) const { return axis == 0 ? dx1() : dx2(); }

    Vec2 gradient(double x1, double x2) const { return {dx1()(x1, x2), dx2()(x1, x2)}; }

    Mat2 hessian(double x1, double x2) const {
        Polynomial2 px = dx1(), py = dx2();
        double h11 = px.dx1()(x1, x2);
        double h12 = px.dx2()(x1, x2);
        double h22 = py.dx2()(x1, x2);
        return {h11, h12, h12, h22};
    }

    bool is_zero() const {
        for (double c : c_)
            if (c != 0.0) return false;
        return true;
    }

    std::string to_string() const {
        std::ostringstream os;
        bool first = true;
        for (int k = 0; k < kNumCoeffs; ++k) {
            if (c_[k] == 0.0) continue;
            if (!first) os << " + ";
            auto [i, j] = exponents(k);
            os << c_[k];
            if (i > 0) os << "*x1^" << i;
            if (j > 0) os << "*x2^" << j;
            first = false;
        }
        if (first) os << "0";
        return os.str();
    }

private:
    std::array<double, kNumCoeffs> c_{};  // zero-initialised
};

}  // namespace plates
