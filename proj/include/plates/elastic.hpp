#pragma once

// Constitutive layer: the energy density W, its Hessian quadratic form Q3 at
// the identity, the relaxed planar form Q2A obtained by exact minimization
// over the out-of-plane column, and the reduced form Q2 for identity-like
// prestrain factors.

#include "plates/linalg.hpp"

namespace plates {

struct ElasticModel {
    double mu = 1.0;       // shear modulus (> 0)
    double lambdaL = 1.0;  // first Lame parameter (>= 0); "L" to avoid clashing
                           // with the metric scalar lambda

    void validate() const;
    // coefficient of the trace term in the reduced planar form
    double kappa() const { return 2.0 * mu * lambdaL / (2.0 * mu + lambdaL); }
};

// W(F) = mu |E|^2 + (lambdaL/2) (tr E)^2 with E = (F^T F - Id)/2.
// Zero exactly on rotations, frame-invariant by construction.
double density_eval(const ElasticModel& model, const Mat3& F);

// Q3(F) = 2 mu |sym F|^2 + lambdaL (tr F)^2, the second derivative of W at Id.
double q3(const ElasticModel& model, const Mat3& F);

// Its polarization B3(X,Y) = 2 mu <sym X, sym Y> + lambdaL tr X tr Y.
double q3_bilinear(const ElasticModel& model, const Mat3& X, const Mat3& Y);

struct Q2AResult {
    double value = 0.0;
    Vec3 c{};  // minimizing out-of-plane column
};

// Q2A(A, F2) = min over c of Q3(A^{-1} (F2* + sym(c ⊗ e3)) A^{-1}) with F2*
// the 3x3 embedding of the 2x2 argument. Solved exactly through the 3x3 SPD
// stationarity system; never iterative.
Q2AResult q2a(const ElasticModel& model, const Mat3& A, const Mat2& F2);

// Just the minimizer; linear in sym F2.
Vec3 minimizer_map_c(const ElasticModel& model, const Mat3& A, const Mat2& F2);

// Closed form of Q2A at A = Id: 2 mu |sym F2|^2 + kappa (tr F2)^2.
double q2_reduced(const ElasticModel& model, const Mat2& F2);

// Gradient of q2_reduced: 4 mu sym F2 + 2 kappa (tr F2) Id2. Used by the
// limit-functional minimizer's chain rule.
Mat2 q2_reduced_gradient(const ElasticModel& model, const Mat2& F2);

// 3x3 embedding of a 2x2 matrix (zero third row/column).
Mat3 embed2(const Mat2& F2);

}  // namespace plates
