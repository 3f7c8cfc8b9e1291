#pragma once

#include "backflow/grid.hpp"
#include "backflow/operators.hpp"

#include <functional>
#include <vector>

namespace backflow {

using ApplyFn = std::function<StateVector(const StateVector&)>;

struct PowerResult {
    std::vector<double> estimates;  // lambda estimate per iteration (shifted back by -1)
    std::vector<double> residuals;  // ||A v - a v|| / ||v||
    StateVector final_vector;       // normalized
    std::size_t iterations;

    double lambda() const { return estimates.back(); }
};

// Power iteration v_{n+1} = A v_n / ||v_n|| on the shifted operator
// A = Pi B Pi + id; the per-step estimate is the Rayleigh quotient
// <A v, v>/||v||^2 and is reported shifted back by -1.
PowerResult power_iterate(const ApplyFn& apply_shifted, const StateVector& v0,
                          std::size_t n_iter);

struct HPoint {
    int h;
    double lambda_h;
};

struct HProtocolOptions {
    std::size_t n0 = 10000;
    double q0 = 50.0;
    std::size_t n_iter = 1000;
    Route route = Route::projection_sandwich;
    unsigned workers = 1;
    // Called once per completed h, in ascending h order (checkpoint hook).
    std::function<void(const HPoint&)> on_point;
};

// Grid refinement protocol: for each h run the power method on the grid
// (n0*h, q0*sqrt(h)) with a constant starting vector. h values already in
// `completed` are skipped so interrupted runs can resume.
std::vector<HPoint> run_h_protocol(const std::vector<int>& h_list, const HProtocolOptions& opts,
                                   std::vector<HPoint> completed = {});

struct SqrtFit {
    double lambda_inf;
    double b;
    double rms;
};

struct CubicFit {
    double c0, c1, c2, c3;  // in s = 1/sqrt(h)
    double rms;

    double lambda_inf() const { return c0; }
};

// Least squares of lambda_h against the model lambda_inf + b/sqrt(h).
SqrtFit fit_sqrt(const std::vector<HPoint>& points);

// Ordinary least squares of lambda_h against {1, s, s^2, s^3}, s = 1/sqrt(h).
// The reported backflow constant is the intercept c0 (value at h -> infinity).
CubicFit fit_cubic(const std::vector<HPoint>& points);

// Gaussian momentum probe ~ exp(-(k-k0)^2/(4 width^2)), normalized on the grid.
StateVector gaussian_state(std::shared_ptr<const MomentumGrid> grid, double k0, double width);

struct DollardSample {
    double width;
    double T;
    double expectation;  // <phi, Pi B_T Pi phi>
    bool probe_leaks;    // mass within the last few samples below the cutoff > 1e-6
};

// Spot check of the large-T limit <phi, Pi B_T Pi phi> -> -1 for
// positive-momentum probes.
std::vector<DollardSample> dollard_probe(std::shared_ptr<const MomentumGrid> grid,
                                         const std::vector<double>& widths,
                                         const std::vector<double>& T_list, double k0 = 5.0);

}  // namespace backflow
