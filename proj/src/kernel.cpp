#include "backflow/kernel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace backflow {

double kernel_entry(double k, double q) {
    const double inv_pi = 1.0 / std::numbers::pi;
    if (k == q) return -inv_pi * 2.0 * k;
    return -inv_pi * std::sin(k * k - q * q) / (k - q);
}

DenseKernel build_dense(std::shared_ptr<const MomentumGrid> grid, std::size_t n_half_cap) {
    const std::size_t n = grid->n_half;
    if (n > n_half_cap)
        throw std::invalid_argument("build_dense: n_half exceeds the dense-kernel cap");
    DenseKernel dk;
    dk.grid = grid;
    dk.matrix.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    const auto& k = grid->k_values;
    const double w = grid->dk;
    for (std::size_t i = 0; i < n; ++i) {
        dk.matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) =
            kernel_entry(k[i], k[i]) * w;
        for (std::size_t j = i + 1; j < n; ++j) {
            const double v = kernel_entry(k[i], k[j]) * w;
            dk.matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
            dk.matrix(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = v;
        }
    }
    return dk;
}

StateVector apply_dense(const DenseKernel& kernel, const StateVector& state) {
    const std::size_t n = kernel.grid->n_half;
    if (state.amplitudes.size() != n) throw std::invalid_argument("apply_dense: size mismatch");
    Eigen::VectorXcd v(static_cast<Eigen::Index>(n));
    for (std::size_t j = 0; j < n; ++j) v(static_cast<Eigen::Index>(j)) = state.amplitudes[j];
    Eigen::VectorXcd w = kernel.matrix * v;
    StateVector out = make_state(kernel.grid);
    for (std::size_t j = 0; j < n; ++j) out.amplitudes[j] = w(static_cast<Eigen::Index>(j));
    return out;
}

StateVector apply_dense_shifted(const DenseKernel& kernel, const StateVector& state) {
    StateVector out = apply_dense(kernel, state);
    for (std::size_t j = 0; j < out.amplitudes.size(); ++j)
        out.amplitudes[j] += state.amplitudes[j];
    return out;
}

}  // namespace backflow
