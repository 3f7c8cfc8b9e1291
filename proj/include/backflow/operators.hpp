#pragma once

#include "backflow/fourier.hpp"
#include "backflow/grid.hpp"

#include <memory>

namespace backflow {

enum class Route { projection_sandwich, hilbert_route };

// Multiply by exp(-i k^2 t) on the full symmetric grid (free evolution
// in the rescaled time variable). Norm preserving.
void apply_free_evolution(ComplexVec& full, const MomentumGrid& grid, double t);

// Matrix-free application of the projected backflow operator Pi B_T Pi
// and its nonnegative shift Pi B_T Pi + id on the momentum half-line.
//
// Sign conventions are fixed once, here:
//  - position sign function sgn(x) = +1 for x > 0, -1 for x < 0
//    (never evaluated at 0: the midpoint grid has no x = 0 sample);
//  - half-space projection multiplier (1 + sgn(x))/2; the midpoint
//    position grid has no x = 0 sample, so the multiplier is exactly
//    {0, 1}, sgn is exactly odd on the grid, and the operator maps real
//    momentum data to real momentum data.
// The evolve-project-evolve sandwich runs on a zero-padded position box
// (pad factor >= 2). On the bare box the dynamics is circular: packets
// near the box edge wrap around under U_T, which the projected difference
// scores as spurious backflow with eigenvalues near +1 that swamp the
// power method. Padding restores linear transport: the maximal travel is
// 2*q_max*T, which must stay below the padded margin (pad-1)*L/2 with
// L = 2*pi/dk; the constructor raises pad_factor automatically when the
// requested minimum would not cover that distance. Pad and crop are adjoint
// isometries, so the padded operator stays self-adjoint with the same +-1
// bounds.
class BackflowOperator {
  public:
    BackflowOperator(std::shared_ptr<const MomentumGrid> grid, double T = 1.0,
                     Route route = Route::projection_sandwich, std::size_t pad_factor = 2);

    // F Pi F^*: to position, zero x < 0, back to momentum.
    ComplexVec apply_position_projection(const ComplexVec& full) const;

    // H = i F sgn(x) F^*; unitary, skew-adjoint, H^2 = -id.
    ComplexVec apply_hilbert(const ComplexVec& full) const;

    // Pi B_T Pi acting on a half-line state.
    StateVector apply_backflow(const StateVector& state) const;

    // Pi B_T Pi + id (nonnegative); this is the power-method operator.
    StateVector apply_shifted(const StateVector& state) const;

    const MomentumGrid& grid() const { return *grid_; }
    std::shared_ptr<const MomentumGrid> grid_ptr() const { return grid_; }
    const FourierPlan& plan() const { return *plan_; }
    double time_parameter() const { return T_; }
    Route route() const { return route_; }

    const MomentumGrid& padded_grid() const { return *padded_grid_; }

  private:
    ComplexVec pad_to_box(const ComplexVec& full) const;    // N momentum -> pN momentum
    ComplexVec crop_from_box(const ComplexVec& padded) const;
    ComplexVec apply_backflow_padded(const ComplexVec& padded) const;

    std::shared_ptr<const MomentumGrid> grid_;
    double T_;
    Route route_;
    std::size_t pad_factor_;
    std::shared_ptr<const MomentumGrid> padded_grid_;
    std::shared_ptr<const FourierPlan> plan_;
    std::shared_ptr<const FourierPlan> padded_plan_;
};

// Unitary dilation (V_mu phi)(k) = sqrt(mu) phi(mu k). The result lives on
// the grid (n_half, q_max/mu), whose sample points mu*k'_j coincide with
// the source samples k_j, so the resampling is exact for every mu > 0.
StateVector apply_dilation(const StateVector& state, double mu);

}  // namespace backflow
