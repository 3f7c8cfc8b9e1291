#include "backflow/grid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace backflow {

double MomentumGrid::dx() const {
    return 2.0 * std::numbers::pi / (static_cast<double>(n_full) * dk);
}

MomentumGrid make_grid(std::size_t n_half, double q_max) {
    if (n_half < 2) throw std::invalid_argument("make_grid: n_half must be >= 2");
    if (!(q_max > 0.0)) throw std::invalid_argument("make_grid: q_max must be > 0");
    MomentumGrid g;
    g.n_half = n_half;
    g.q_max = q_max;
    g.dk = q_max / static_cast<double>(n_half);
    g.n_full = 2 * n_half;
    g.k_values.resize(n_half);
    for (std::size_t j = 0; j < n_half; ++j)
        g.k_values[j] = (static_cast<double>(j) + 0.5) * g.dk;
    return g;
}

double StateVector::norm() const {
    double s = 0.0;
    for (const auto& a : amplitudes) s += std::norm(a);
    return std::sqrt(s * grid->dk);
}

void StateVector::normalize() {
    const double n = norm();
    if (!(n > 1e-300)) throw std::runtime_error("StateVector::normalize: zero vector");
    for (auto& a : amplitudes) a /= n;
}

StateVector make_state(std::shared_ptr<const MomentumGrid> grid) {
    StateVector s;
    s.amplitudes.assign(grid->n_half, Complex{0.0, 0.0});
    s.grid = std::move(grid);
    return s;
}

StateVector constant_state(std::shared_ptr<const MomentumGrid> grid, double value) {
    StateVector s = make_state(std::move(grid));
    for (auto& a : s.amplitudes) a = value;
    return s;
}

Complex inner(const StateVector& a, const StateVector& b) {
    if (a.amplitudes.size() != b.amplitudes.size())
        throw std::invalid_argument("inner: size mismatch");
    Complex s{0.0, 0.0};
    for (std::size_t j = 0; j < a.amplitudes.size(); ++j)
        s += std::conj(a.amplitudes[j]) * b.amplitudes[j];
    return s * a.grid->dk;
}

double full_norm(const ComplexVec& f, const MomentumGrid& g) {
    double s = 0.0;
    for (const auto& a : f) s += std::norm(a);
    return std::sqrt(s * g.dk);
}

Complex full_inner(const ComplexVec& a, const ComplexVec& b, const MomentumGrid& g) {
    Complex s{0.0, 0.0};
    for (std::size_t m = 0; m < a.size(); ++m) s += std::conj(a[m]) * b[m];
    return s * g.dk;
}

ComplexVec embed_full_line(const StateVector& s) {
    const auto& g = *s.grid;
    ComplexVec full(g.n_full, Complex{0.0, 0.0});
    for (std::size_t j = 0; j < g.n_half; ++j) full[g.n_half + j] = s.amplitudes[j];
    return full;
}

StateVector restrict_half(const ComplexVec& full, std::shared_ptr<const MomentumGrid> grid) {
    if (full.size() != grid->n_full)
        throw std::invalid_argument("restrict_half: length must be n_full");
    StateVector s;
    s.amplitudes.assign(full.begin() + static_cast<std::ptrdiff_t>(grid->n_half), full.end());
    s.grid = std::move(grid);
    return s;
}

}  // namespace backflow
