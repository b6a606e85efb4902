#pragma once

// Direct thickness-resolved elastic energy: deformations of the thin body
// Omega x (-h/2, h/2), the quadratic low-energy ansatz, the exact isometric
// realization of the flat diagonal family, the fourth-order recovery family,
// and log-log scaling studies of the energy in h.

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "plates/elastic.hpp"
#include "plates/geometry.hpp"
#include "plates/grid.hpp"
#include "plates/immersion.hpp"

namespace plates {

struct Deformation3D {
    std::function<Vec3(const Vec2&, double)> evaluate;   // u(x', x3)
    std::function<Mat3(const Vec2&, double)> gradient;   // columns d1u, d2u, d3u
    std::string provenance;  // kirchhoff_ansatz | recovery | exact_flat | user
};

// Thickness-averaged energy (1/h) integral of W(grad u * A^{-1}) over
// Omega x (-h/2, h/2): Gauss-Legendre with n3 nodes through the thickness,
// trapezoid rule on an n1 x n2 grid in-plane.
double energy_Eh(const MetricField& metric, const ElasticModel& model, const Deformation3D& u,
                 double h, int n1, int n2, int n3 = 6);

// u = y0 + x3 b0 + (x3^2/2) d0; gradient Q0 + x3 B0 + (x3^2/2) [d1d0 | d2d0 | 0].
Deformation3D ansatz_kirchhoff(const ImmersionBundle& bundle);

// Exact isometric realization of G = diag(1,1,(1+a.x')^2): rolls the plate
// around a cylinder axis so the integrand vanishes identically for every h.
Deformation3D exact_flat_immersion(const Vec2& a);

// Recognize lambda = (1 + a.x')^2 and build the exact realization; throws if
// the polynomial is not of that form.
Deformation3D exact_flat_from_lambda(const Polynomial2& lambda);

// Fourth-order recovery family: y0 + hV + h^2 w + x3(b0 + h p + h^2 q)
// + (x3^2/2)(d0 + h r) + (x3^3/6) k0, with p, q, k0, r assembled from the
// minimizer map of the relaxed quadratic form. Derived fields are sampled on
// the given grid; their in-plane derivatives use the grid stencils.
Deformation3D recovery_deformation(const ImmersionBundle& bundle, const MetricField& metric,
                                   const ElasticModel& model, const VectorField2to3& V,
                                   const VectorField2to3& w, double h, const Grid2& grid);

struct ScalingRow {
    double h = 0.0;
    double Eh = 0.0;
    double Eh_over_h4 = 0.0;
};

struct ScalingTable {
    std::vector<ScalingRow> rows;  // sorted by decreasing h
    double fitted_slope = std::numeric_limits<double>::quiet_NaN();
    int fit_begin = 0;  // [fit_begin, fit_end) rows used in the fit
    int fit_end = 0;
    std::string regime;  // curvature classification of the metric

    // CSV `h,Eh,Eh_over_h4` plus one trailing JSON record line
    void write_csv(const std::string& path) const;
    std::string to_csv() const;
};

// Evaluate the family over the h list and fit the log-log slope by least
// squares, excluding rows with energy <= 1e-18 (exactly realizable metrics).
ScalingTable scaling_study(const MetricField& metric, const ElasticModel& model,
                           const std::function<Deformation3D(double)>& family,
                           const std::vector<double>& h_list, int n1, int n2, int n3 = 6);

}  // namespace plates
