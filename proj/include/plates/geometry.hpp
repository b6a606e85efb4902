#pragma once

// Differential geometry of the midplate metric G(x'): catalog and sampled
// metric fields, Christoffel symbols, covariant curvature components, the
// conformal Ricci tensor, the diagonal-family obstruction tensor, and the
// energy-scaling classifier.

#include <array>
#include <string>
#include <vector>

#include "plates/grid.hpp"
#include "plates/linalg.hpp"
#include "plates/polynomial.hpp"

namespace plates {

enum class MetricKind { identity, diag_lambda, conformal_lambda, sampled };

std::string to_string(MetricKind k);

struct Domain {
    double L1 = 1.0;
    double L2 = 1.0;
    bool contains(const Vec2& x, double slack = 1e-9) const {
        return x[0] >= -slack && x[0] <= L1 + slack && x[1] >= -slack && x[1] <= L2 + slack;
    }
};

// The midplate metric G(x'): a symmetric positive definite 3x3 field over a
// rectangle, independent of the thickness variable. Catalog kinds carry
// closed-form first and second derivatives; sampled kinds differentiate their
// node tables with second-order stencils and snap query points to the nearest
// node.
class MetricField {
public:
    static MetricField identity(Domain dom = {});
    // G = diag(1, 1, lambda(x')) with polynomial lambda.
    static MetricField diag_lambda(Polynomial2 lambda, Domain dom = {});
    // G = e^{2 f(x')} Id3 with polynomial f.
    static MetricField conformal_lambda(Polynomial2 f, Domain dom = {});
    // Grid-sampled metric; values in x1-major node order.
    static MetricField sampled(const Grid2& grid, std::vector<Mat3> values);
    // Resample an analytic metric onto a grid (drops the closed-form
    // derivatives; used to exercise the finite-difference path).
    static MetricField sampled_from(const MetricField& src, const Grid2& grid);
    // Text table with header x1,x2,G11,G12,G13,G22,G23,G33.
    static MetricField read_csv(const std::string& path);
    void write_csv(const std::string& path, const Grid2& grid) const;

    MetricKind kind() const { return kind_; }
    const Domain& domain() const { return domain_; }
    double fd_step() const { return fd_step_; }
    bool analytic() const { return kind_ != MetricKind::sampled; }
    const Grid2& sample_grid() const;  // sampled kind only
    const Polynomial2& lambda_poly() const { return lambda_; }
    const Polynomial2& f_poly() const { return f_; }

    // G(x'); throws std::domain_error if the catalog scalar makes G non-SPD.
    Mat3 sample(const Vec2& x) const;
    // dG/dx_k; k = 2 (the thickness direction) is a structural zero.
    Mat3 d_sample(int k, const Vec2& x) const;
    // d^2 G / dx_k dx_l.
    Mat3 dd_sample(int k, int l, const Vec2& x) const;

    // Largest absolute entry of any first/second derivative over the grid;
    // the curvature classifier scales its tolerance by max(1, this).
    double derivative_scale(const Grid2& grid) const;

private:
    MetricField() = default;
    void check_in_domain(const Vec2& x) const;
    int nearest_node(const Vec2& x) const;

    MetricKind kind_ = MetricKind::identity;
    Domain domain_{};
    double fd_step_ = 0.0;
    Polynomial2 lambda_;  // diag kind
    Polynomial2 f_;       // conformal kind

    // sampled kind: entry tables (order G11,G12,G13,G22,G23,G33) and their
    // finite-difference derivatives, precomputed at construction
    Grid2 grid_{};
    bool has_grid_ = false;
    std::array<Field, 6> entries_{};
    std::array<std::array<Field, 2>, 6> d_entries_{};       // [entry][k]
    std::array<std::array<Field, 3>, 6> dd_entries_{};      // [entry][kk,kl,ll]
};

// Unique SPD square root A of the metric value G.
inline Mat3 metric_sqrt(const Mat3& g) { return sqrt_spd(g); }

// Christoffel symbols of the second kind, gamma(n,k,l) = Γ^n_{kl}; all
// derivatives in the thickness direction vanish structurally.
struct ChristoffelSymbols {
    double g[3][3][3]{};
    double operator()(int n, int k, int l) const { return g[n][k][l]; }
};

ChristoffelSymbols christoffel(const MetricField& metric, const Vec2& x);

// The six independent covariant curvature components of an x3-independent
// metric, ordered (1212, 1213, 1223, 1313, 1323, 2323).
struct RiemannComponents {
    double r1212 = 0, r1213 = 0, r1223 = 0, r1313 = 0, r1323 = 0, r2323 = 0;
    std::array<double, 6> as_array() const { return {r1212, r1213, r1223, r1313, r1323, r2323}; }
};

RiemannComponents riemann_covariant(const MetricField& metric, const Vec2& x);

// Fully general component R_{iklm} (0-based indices), used to probe the
// tensor symmetries by explicit index permutation.
double riemann_component(const MetricField& metric, const Vec2& x, int i, int k, int l, int m);

enum class Regime { Flat, OrderH4, OrderH2 };

std::string to_string(Regime r);

// Curvature survey over a grid. The regime encodes which energy scaling the
// metric induces: Flat (zero minimum), OrderH4 (the three tangential
// components vanish, some normal one does not), OrderH2 (otherwise).
struct CurvatureReport {
    Grid2 grid;
    std::array<Field, 6> components{};  // same order as RiemannComponents
    std::array<double, 6> sup_norms{};
    double scale = 1.0;  // tolerance multiplier: max(1, derivative sup-norms)
    double tol = 0.0;    // relative tolerance used
    Regime regime = Regime::Flat;

    static constexpr std::array<const char*, 6> component_names = {
        "R1212", "R1213", "R1223", "R1313", "R1323", "R2323"};
};

// Default classification tolerance: tight for closed-form derivatives, loose
// for finite-difference sampled metrics.
double default_classify_tol(const MetricField& metric);

CurvatureReport classify_regime(const MetricField& metric, int n1, int n2, double tol);

// Ricci tensor of the conformal metric e^{2f} Id3 from the closed form
// -(Hess f - grad f ⊗ grad f)* - (Δf + |grad f|^2) Id3, with (.)* the 3x3
// embedding of the 2x2 block.
Mat3 ricci_conformal(const Polynomial2& f, const Vec2& x);

// Obstruction tensor of the diagonal family: Hess λ - (1/2λ) grad λ ⊗ grad λ.
// Its vanishing characterizes flatness of diag(1,1,λ).
Mat2 m_lambda(const Polynomial2& lambda, const Vec2& x);

}  // namespace plates
