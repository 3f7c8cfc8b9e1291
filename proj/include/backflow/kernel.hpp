#pragma once

#include "backflow/grid.hpp"

#include <Eigen/Dense>
#include <memory>

namespace backflow {

// Momentum-representation kernel of the projected backflow operator,
// -(1/pi) sin(k^2 - q^2)/(k - q); the diagonal uses the analytic limit
// -(2k)/pi.
double kernel_entry(double k, double q);

// Dense midpoint-rule discretization of the integral operator K on the
// half grid, K_ij = kernel_entry(k_i, k_j) * dk. Independent oracle for
// the matrix-free routes.
struct DenseKernel {
    std::shared_ptr<const MomentumGrid> grid;
    Eigen::MatrixXd matrix;  // n_half x n_half, symmetric
};

DenseKernel build_dense(std::shared_ptr<const MomentumGrid> grid,
                        std::size_t n_half_cap = 20000);

StateVector apply_dense(const DenseKernel& kernel, const StateVector& state);

// Dense version of the power-method operator K + id.
StateVector apply_dense_shifted(const DenseKernel& kernel, const StateVector& state);

}  // namespace backflow
