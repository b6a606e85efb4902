#pragma once

// Leading-order midplate geometry: the immersion y0, Cosserat director b0,
// second-order director d0, the frames Q0 = [d1y0 | d2y0 | b0] and
// B0 = [d1b0 | d2b0 | d0], plus the structural identities tying them to the
// metric's curvature.

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "plates/geometry.hpp"
#include "plates/grid.hpp"
#include "plates/linalg.hpp"

namespace plates {

// A vector field on the midplate with two derivatives, evaluable anywhere in
// the domain (analytic closures or grid samples with nearest-node lookup).
struct VectorField2to3 {
    std::function<Vec3(const Vec2&)> value;
    std::function<Vec3(int, const Vec2&)> d;        // first partial, k in {0,1}
    std::function<Vec3(int, int, const Vec2&)> dd;  // second partial

    static VectorField2to3 zero();
    static VectorField2to3 from_polys(Polynomial2 v1, Polynomial2 v2, Polynomial2 v3);
};

struct ImmersionBundle {
    std::function<Vec3(const Vec2&)> y0;
    std::function<Vec3(const Vec2&)> b0;
    std::function<Vec3(const Vec2&)> d0;
    std::function<Vec3(int, const Vec2&)> dy0;       // k in {0,1}
    std::function<Vec3(int, const Vec2&)> db0;
    std::function<Vec3(int, const Vec2&)> dd0;
    std::function<Vec3(int, int, const Vec2&)> ddy0;
    std::string provenance;

    Mat3 Q0(const Vec2& x) const { return Mat3::from_columns(dy0(0, x), dy0(1, x), b0(x)); }
    Mat3 B0(const Vec2& x) const { return Mat3::from_columns(db0(0, x), db0(1, x), d0(x)); }
    // in-plane Jacobians as 3x2 column pairs are consumed directly via dy0/db0
};

// Closed-form bundle for the supported metric kinds: identity, diag(1,1,λ),
// and conformal e^{2f}Id3 with affine f. Other metrics have no closed form
// here (building y0 would mean solving the isometric-immersion system) and
// raise std::invalid_argument.
ImmersionBundle catalog_immersion(const MetricField& metric);

// Completion of the frame: given the tangent columns t1, t2 of y0 and the
// metric value G, returns b0 = -(G^{13} t1 + G^{23} t2)/G^{33} + N/sqrt(G^{33})
// with G^{ij} the inverse-metric entries and N the unit normal of span(t1,t2).
Vec3 cosserat_b0(const Vec3& t1, const Vec3& t2, const Mat3& G);

// Second-order director from the frame: solves Q0^T d0 = (-<d1b0,b0>, -<d2b0,b0>, 0).
Vec3 director_d0(const Mat3& Q0, const Vec3& db0_1, const Vec3& db0_2, const Vec3& b0);

struct IsometryReport {
    double metric_residual = 0.0;   // sup | (grad y0)^T grad y0 - G_2x2 |
    double bending_residual = 0.0;  // sup | sym((grad y0)^T grad b0) |
};

IsometryReport check_isometry_conditions(const ImmersionBundle& bundle, const MetricField& metric,
                                         const Grid2& grid);

// Pointwise Frobenius residual of the curvature identity
//   sym((grad y0)^T grad d0) + (grad b0)^T grad b0 = [[R1313, R1323], [R1323, R2323]].
// Requires the bundle to satisfy the isometry conditions to admit_tol first.
Field curvature_identity_residual(const ImmersionBundle& bundle, const MetricField& metric,
                                  const Grid2& grid, double admit_tol = 1e-6);

struct ExpansionReport {
    double ddy0_residual = 0.0;  // second derivatives of y0 in the moving frame
    double db0_residual = 0.0;   // first derivatives of b0 in the moving frame
    double d0_residual = 0.0;    // d0 itself in the moving frame
};

// Residuals of expanding d_{ij}y0, d_i b0, and d0 in the frame
// {d1y0, d2y0, b0} with Christoffel coefficients of the metric.
ExpansionReport christoffel_expansion_check(const ImmersionBundle& bundle,
                                            const MetricField& metric, const Grid2& grid);

// The out-of-plane compensator p uniquely associated with a displacement V:
// solves (grad y0)^T p = -(grad V)^T b0 and <b0, p> = 0, via the closed form
// p = -sum_j G^{ji} <d_i V, b0> frame_j (frame = d1y0, d2y0, b0; i = 1,2).
Vec3 p_from_V(const ImmersionBundle& bundle, const VectorField2to3& V, const Vec2& x);

// Analytic partial derivative d_k p, obtained by differentiating the closed
// form through the frame Gram matrix; avoids a second finite-difference layer.
Vec3 dp_from_V(const ImmersionBundle& bundle, const VectorField2to3& V, int k, const Vec2& x);

// Grid-backed bundle from raw samples of y0 alone; b0 and d0 are derived
// (never trusted from input), derivatives by the grid stencils.
ImmersionBundle bundle_from_samples(const Grid2& grid, const std::vector<Vec3>& y0_samples,
                                    const MetricField& metric);

// Text table `x1,x2,y1,y2,y3` on a uniform grid.
ImmersionBundle bundle_from_csv(const std::string& path, const MetricField& metric);

// Resample an analytic bundle's y0 onto a grid and rebuild everything through
// the finite-difference path (used for refinement-ratio studies).
ImmersionBundle resample_bundle(const ImmersionBundle& src, const Grid2& grid,
                                const MetricField& metric);

}  // namespace plates
