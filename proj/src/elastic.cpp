#include "plates/elastic.hpp"

#include <stdexcept>
#include <string>

namespace plates {

void ElasticModel::validate() const {
    if (!(mu > 0.0)) throw std::invalid_argument("shear modulus mu must be > 0");
    if (!(lambdaL >= 0.0)) throw std::invalid_argument("Lame parameter lambdaL must be >= 0");
}

double density_eval(const ElasticModel& model, const Mat3& F) {
    Mat3 E = 0.5 * (transpose(F) * F - Mat3::identity());
    double t = trace(E);
    return model.mu * frob2(E) + 0.5 * model.lambdaL * t * t;
}

double q3(const ElasticModel& model, const Mat3& F) {
    double t = trace(F);
    return 2.0 * model.mu * frob2(sym(F)) + model.lambdaL * t * t;
}

double q3_bilinear(const ElasticModel& model, const Mat3& X, const Mat3& Y) {
    double s = 0.0;
    Mat3 sx = sym(X), sy = sym(Y);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) s += sx(i, j) * sy(i, j);
    return 2.0 * model.mu * s + model.lambdaL * trace(X) * trace(Y);
}

Mat3 embed2(const Mat2& F2) {
    Mat3 F;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) F(i, j) = F2(i, j);
    return F;
}

Q2AResult q2a(const ElasticModel& model, const Mat3& A, const Mat2& F2) {
    Mat3 Ainv = inverse(A);
    Mat3 M0 = Ainv * embed2(F2) * Ainv;
    // basis directions of the out-of-plane column after the two-sided A^{-1}
    Mat3 L[3];
    for (int i = 0; i < 3; ++i) {
        Mat3 S;
        S(i, 2) = 0.5;
        S(2, i) += 0.5;
        L[i] = Ainv * S * Ainv;
    }
    Mat3 K;
    Vec3 g;
    for (int i = 0; i < 3; ++i) {
        g[i] = q3_bilinear(model, M0, L[i]);
        for (int j = 0; j < 3; ++j) K(i, j) = q3_bilinear(model, L[i], L[j]);
    }
    Q2AResult out;
    out.c = solve_spd3(K, -1.0 * g);
    // value = Q3(M0) + 2 g.c + c.Kc = Q3(M0) + g.c at the stationary point
    out.value = q3(model, M0) + dot(g, out.c);
    if (out.value < 0.0 && out.value > -1e-12) out.value = 0.0;  // roundoff clamp
    return out;
}

Vec3 minimizer_map_c(const ElasticModel& model, const Mat3& A, const Mat2& F2) {
    return q2a(model, A, F2).c;
}

double q2_reduced(const ElasticModel& model, const Mat2& F2) {
    double t = trace(F2);
    return 2.0 * model.mu * frob2(sym(F2)) + model.kappa() * t * t;
}

Mat2 q2_reduced_gradient(const ElasticModel& model, const Mat2& F2) {
    return 4.0 * model.mu * sym(F2) + (2.0 * model.kappa() * trace(F2)) * Mat2::identity();
}

}  // namespace plates
