#pragma once

#include "backflow/grid.hpp"

namespace backflow {

// Discrete realization of the unitary Fourier pair
//
//   psi(x) = (2*pi)^{-1/2} Integral e^{+ikx} phi(k) dk   (to_position)
//   phi(k) = (2*pi)^{-1/2} Integral e^{-ikx} psi(x) dx   (to_momentum)
//
// on the midpoint momentum grid k_m = (m + 1/2 - n_half) dk and the
// equally midpoint-offset position grid x_n = (n + 1/2 - n_half) dx,
// dx = 2*pi/(n_full*dk). The index <-> physical mapping is fixed here
// once: both offsets turn into the twiddle exp(2*pi*i*c*m/N) with
// c = 1/2 - n_half applied before and after a plain length-N DFT, plus
// one constant phase. The position grid deliberately has no x = 0 and no
// unpaired edge sample: every x_n mirrors onto -x_n within the grid, so
// position-side multipliers built from sgn(x) are exactly odd.
//
// The pair is exactly unitary with the grid measures dk, dx, and
// to_momentum is the exact inverse of to_position.
//
// Plans are immutable after construction; execution writes only to the
// caller's buffers, so concurrent transforms on distinct buffers are safe.
class FourierPlan {
  public:
    explicit FourierPlan(const MomentumGrid& grid);
    ~FourierPlan();
    FourierPlan(const FourierPlan&) = delete;
    FourierPlan& operator=(const FourierPlan&) = delete;

    ComplexVec to_position(const ComplexVec& momentum) const;
    ComplexVec to_momentum(const ComplexVec& position) const;

    const MomentumGrid& grid() const { return grid_; }

  private:
    MomentumGrid grid_;
    void* plan_backward_;  // fftw_plan, e^{+2 pi i mn/N}
    void* plan_forward_;   // fftw_plan, e^{-2 pi i mn/N}
    ComplexVec twiddle_;   // e^{2 pi i c m / N}, applied on both sides
    Complex scale_to_x_;
    Complex scale_to_k_;
};

}  // namespace backflow
