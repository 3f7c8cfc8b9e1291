#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <vector>

namespace backflow {

using Complex = std::complex<double>;
using ComplexVec = std::vector<Complex>;

// Uniform midpoint discretization of the momentum half-line [0, q_max]
// together with its symmetric full-line embedding [-q_max, q_max).
//
// Half-line samples:  k_j = (j + 1/2) dk,            j = 0 .. n_half-1
// Full-line samples:  k_m = (m + 1/2 - n_half) dk,   m = 0 .. n_full-1
// The positive-k half of the full grid coincides with the half grid
// (m = n_half + j), and there is no k = 0 sample.
struct MomentumGrid {
    std::size_t n_half;
    double q_max;
    double dk;
    std::vector<double> k_values;  // half-line samples, strictly increasing
    std::size_t n_full;            // = 2 * n_half

    double k_full(std::size_t m) const {
        return (static_cast<double>(m) + 0.5 - static_cast<double>(n_half)) * dk;
    }

    // Conjugate position grid, midpoint-offset like the momentum grid:
    // dx = 2*pi / (n_full * dk), x_n = (n + 1/2 - n_half) dx. There is no
    // x = 0 sample and no unpaired edge sample: x_n < 0 exactly for
    // n < n_half, and the mirror of sample n is sample 2*n_half - 1 - n.
    double dx() const;
    double x_value(std::size_t n) const {
        return (static_cast<double>(n) + 0.5 - static_cast<double>(n_half)) * dx();
    }

    bool operator==(const MomentumGrid& other) const {
        return n_half == other.n_half && q_max == other.q_max;
    }
};

MomentumGrid make_grid(std::size_t n_half, double q_max);

// Momentum-space wave function sampled on the half grid.
// Norms and inner products carry the grid measure dk, so continuum
// formulas transcribe literally.
struct StateVector {
    std::shared_ptr<const MomentumGrid> grid;
    ComplexVec amplitudes;  // length n_half

    double norm() const;
    void normalize();  // throws if numerically zero
};

StateVector make_state(std::shared_ptr<const MomentumGrid> grid);
StateVector constant_state(std::shared_ptr<const MomentumGrid> grid, double value = 1.0);

Complex inner(const StateVector& a, const StateVector& b);

// Full-line helpers (measure dk as well).
double full_norm(const ComplexVec& f, const MomentumGrid& g);
Complex full_inner(const ComplexVec& a, const ComplexVec& b, const MomentumGrid& g);

// Place half-line samples on the positive half of the symmetric full grid,
// zeros on k < 0. Adjoint of restrict_half.
ComplexVec embed_full_line(const StateVector& s);

// Extract the positive-k samples; negative-k content is discarded.
StateVector restrict_half(const ComplexVec& full, std::shared_ptr<const MomentumGrid> grid);

}  // namespace backflow
