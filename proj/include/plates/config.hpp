#pragma once

// Experiment configuration: one flat key = value text block covering every
// knob of the toolkit. Every field has a default and emit/parse round-trips
// exactly, so runs are reproducible from the emitted file alone.

#include <string>
#include <vector>

#include "plates/elastic.hpp"
#include "plates/geometry.hpp"

namespace plates {

struct ExperimentConfig {
    // metric selection
    std::string metric = "identity";  // identity | diag_lambda | conformal_lambda | sampled
    std::string lambda_poly = "1";    // graded-lex coefficients of lambda(x'), degree <= 4
    std::string f_poly = "0";         // graded-lex coefficients of f(x')
    std::string metric_file;          // sampled metric table path

    // constitutive parameters
    double mu = 1.0;
    double lambdaL = 1.0;

    // discretization
    int n1 = 65;
    int n2 = 65;
    int n3 = 6;  // thickness quadrature nodes
    double L1 = 1.0;
    double L2 = 1.0;

    // tolerances (0 = pick the kind-dependent default)
    double tol = 0.0;
    double admit_tol = 1e-8;

    // thickness selections
    double h = 0.015625;
    std::string h_list = "0.125,0.0625,0.03125,0.015625,0.0078125";

    // optimizer options
    double gtol = 1e-9;
    int max_iters = 5000;
    int memory = 10;
    double penalty = 0.0;  // > 0 switches minimize to the soft-constraint path

    // deformation family for the 3D energy commands
    std::string family = "kirchhoff";  // kirchhoff | exact_flat | recovery

    // field selections (polynomial coefficient lists)
    std::string v_poly = "0";
    std::string w1_poly = "0";
    std::string w2_poly = "0";
    std::string w3_poly = "0";
    std::string V1_poly = "0";
    std::string V2_poly = "0";
    std::string V3_poly = "0";
    std::string S11_poly = "0";
    std::string S12_poly = "0";
    std::string S22_poly = "0";

    // pointwise probe inputs for the quadratic-form command
    std::string F2 = "1,0,0,1";  // row-major 2x2 argument
    std::string at = "0,0";      // probe point x'

    std::string out;  // machine-readable output path ("" = none)

    bool operator==(const ExperimentConfig&) const = default;

    std::string emit() const;
    static ExperimentConfig parse_text(const std::string& text);
    static ExperimentConfig parse_file(const std::string& path);

    std::vector<double> h_values() const;
    double classify_tol(const MetricField& metric_field) const;
};

MetricField make_metric(const ExperimentConfig& cfg);
ElasticModel make_model(const ExperimentConfig& cfg);

}  // namespace plates
