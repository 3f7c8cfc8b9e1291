#pragma once

#include "backflow/grid.hpp"

#include <memory>
#include <random>

namespace backflow::testing {

// Shared-ownership grid, the form the operator classes consume.
inline std::shared_ptr<const MomentumGrid> grid_ptr(std::size_t n_half, double q_max) {
    return std::make_shared<const MomentumGrid>(make_grid(n_half, q_max));
}

// Normalized complex state with uniform random real/imag parts.
inline StateVector random_state(std::shared_ptr<const MomentumGrid> grid, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    StateVector s = make_state(std::move(grid));
    for (auto& a : s.amplitudes) a = Complex{dist(rng), dist(rng)};
    s.normalize();
    return s;
}

// Normalized state with real amplitudes only.
inline StateVector random_real_state(std::shared_ptr<const MomentumGrid> grid,
                                     std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(0.1, 1.0);
    StateVector s = make_state(std::move(grid));
    for (auto& a : s.amplitudes) a = dist(rng);
    s.normalize();
    return s;
}

// Random full-line vector (not normalized).
inline ComplexVec random_full(const MomentumGrid& g, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    ComplexVec v(g.n_full);
    for (auto& a : v) a = Complex{dist(rng), dist(rng)};
    return v;
}

inline double max_abs_diff(const ComplexVec& a, const ComplexVec& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace backflow::testing
