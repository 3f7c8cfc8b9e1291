#pragma once

#include "backflow/fourier.hpp"
#include "backflow/grid.hpp"

#include <memory>
#include <utility>
#include <vector>

namespace backflow {

// Free time evolution of a half-line momentum state, evaluated in the
// position representation: psi_t = F^*(e^{-i k^2 t} phi).
//
// Internally the state is embedded into a grid with twice the momentum
// range (same dk, half the position spacing). The density rho = |psi|^2
// is band-limited to twice the state's bandwidth, so on the oversampled
// position grid its midpoint sums are spectrally accurate integrals;
// this makes dP/dt = j(t,0) hold to the finite-difference error instead
// of O(dx^2). All position-side outputs live on grid().
class Evolution {
  public:
    explicit Evolution(StateVector state);

    // Oversampled grid carrying psi, rho, j and their x samples.
    const MomentumGrid& grid() const { return *view_grid_; }

    // Full-line position samples of psi_t.
    ComplexVec psi(double t) const;
    // Spectral spatial derivative: F^*(i k e^{-i k^2 t} phi).
    ComplexVec dpsi_dx(double t) const;

    std::vector<double> density(double t) const;  // rho = |psi_t|^2
    // j = 2 Im(conj(psi) d_x psi); real by construction, fixed by the
    // continuity equation d_t rho + d_x j = 0 for the rescaled time.
    std::vector<double> current(double t) const;
    double current_at(double t, std::size_t x_index) const;
    // j(t, 0) by direct summation; x = 0 lies between two grid samples.
    double current_at_zero(double t) const;

    // P(phi_t) = Integral_{x>0} rho dx: midpoint sum over the samples
    // with x_n > 0 plus the Euler-Maclaurin boundary correction
    // -(dx^2/24) rho'(0), leaving an O(dx^4) quadrature error.
    double half_space_probability(double t) const;

    double total_mass(double t) const;  // full-line quadrature of rho

  private:
    std::pair<Complex, Complex> psi_and_derivative_at_zero(double t) const;

    ComplexVec full_momentum_;  // phi embedded into the oversampled grid
    std::shared_ptr<const MomentumGrid> state_grid_;
    std::shared_ptr<const MomentumGrid> view_grid_;
    std::shared_ptr<const FourierPlan> plan_;
};

// Density and current sampled on a rectangular (t, x) window.
struct SpacetimeField {
    std::vector<double> t_values;
    std::vector<double> x_values;
    std::vector<std::vector<double>> rho;  // [t][x]
    std::vector<std::vector<double>> j;
    std::vector<double> window_mass;  // captured mass per t slice

    double interpolate(const std::vector<std::vector<double>>& table, double t, double x) const;
};

SpacetimeField build_field(const Evolution& ev, const std::vector<double>& t_values,
                           double x_min, double x_max);

struct BackflowFunctionalResult {
    double lambda_phi;
    double s;  // argmax earlier time
    double t;  // argmax later time
    std::vector<double> t_values;
    std::vector<double> p_values;
};

// sup { P(phi_s) - P(phi_t) : s < t } over the given time grid.
BackflowFunctionalResult backflow_functional(const Evolution& ev, double t_min = -3.0,
                                             double t_max = 3.0, double t_step = 1e-2);

struct FlowLine {
    std::vector<double> t;
    std::vector<double> x;
    double seed_quantile;     // cumulative probability at the seed
    bool terminated_early;    // stopped before t_end (density floor or window exit)
};

struct FlowLineOptions {
    double dt = 1e-3;
    double probability_spacing = 2.4e-3;  // mass between adjacent seeds
    std::size_t n_lines = 0;              // overrides spacing when > 0
    double eps_rho = 1e-12;               // density floor for j/rho
};

// Integral curves of (1, j/rho) seeded at equal-probability quantiles of
// rho(t_start, .) over the field window. Lines are advanced by holding
// their cumulative-probability level fixed (corrected for mass crossing
// the left window boundary), which is the exact first integral of
// dx/dt = j/rho and stays well-posed at density near-zeros where direct
// integration of the stiff velocity field loses the transport property;
// dt sets the time-marching resolution of the emitted curves.
std::vector<FlowLine> flow_lines(const SpacetimeField& field, const FlowLineOptions& opts = {});

// Running contribution of [0, k_j] to the norm-square of the state.
std::vector<double> cumulative_norm(const StateVector& state);

// Same for the reference profile f(k) = N sin(k^2)/k with N^2 fixed by
// high-accuracy quadrature so that f is normalized on [0, inf).
std::vector<double> reference_cumulative(const std::vector<double>& k_values, double dk);

}  // namespace backflow
