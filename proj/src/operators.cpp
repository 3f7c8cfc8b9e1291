#include "backflow/operators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace backflow {

void apply_free_evolution(ComplexVec& full, const MomentumGrid& grid, double t) {
    if (full.size() != grid.n_full)
        throw std::invalid_argument("apply_free_evolution: length must be n_full");
    for (std::size_t m = 0; m < full.size(); ++m) {
        const double k = grid.k_full(m);
        const double phase = -k * k * t;
        full[m] *= Complex{std::cos(phase), std::sin(phase)};
    }
}

BackflowOperator::BackflowOperator(std::shared_ptr<const MomentumGrid> grid, double T, Route route,
                                   std::size_t pad_factor)
    : grid_(std::move(grid)), T_(T), route_(route), pad_factor_(pad_factor) {
    if (!(T_ > 0.0)) throw std::invalid_argument("BackflowOperator: T must be > 0");
    if (pad_factor_ < 2) throw std::invalid_argument("BackflowOperator: pad_factor must be >= 2");
    // The padded margin (pad-1)*L/2 with L/2 = pi*n_half/q must exceed the
    // maximal transport distance 2*q*T (plus dispersion slack), otherwise
    // wrap modes reappear at large q*T.
    const double q = grid_->q_max;
    const double needed = (2.5 * q * q * T_ + 8.0 * q) / (std::numbers::pi * static_cast<double>(grid_->n_half));
    pad_factor_ = std::max(pad_factor_, static_cast<std::size_t>(std::ceil(needed)) + 1);
    // Same momentum range, pad times the position box: spacing dk/pad, same dx.
    padded_grid_ = std::make_shared<const MomentumGrid>(
        make_grid(pad_factor_ * grid_->n_half, grid_->q_max));
    plan_ = std::make_shared<FourierPlan>(*grid_);
    padded_plan_ = std::make_shared<FourierPlan>(*padded_grid_);
}

ComplexVec BackflowOperator::pad_to_box(const ComplexVec& full) const {
    ComplexVec psi = plan_->to_position(full);
    ComplexVec padded(padded_grid_->n_full, Complex{0.0, 0.0});
    const std::size_t offset = padded_grid_->n_half - grid_->n_half;
    for (std::size_t n = 0; n < psi.size(); ++n) padded[offset + n] = psi[n];
    return padded_plan_->to_momentum(padded);
}

ComplexVec BackflowOperator::crop_from_box(const ComplexVec& padded) const {
    ComplexVec psi = padded_plan_->to_position(padded);
    const std::size_t offset = padded_grid_->n_half - grid_->n_half;
    ComplexVec cropped(psi.begin() + static_cast<std::ptrdiff_t>(offset),
                       psi.begin() + static_cast<std::ptrdiff_t>(offset + grid_->n_full));
    return plan_->to_momentum(cropped);
}

ComplexVec BackflowOperator::apply_position_projection(const ComplexVec& full) const {
    ComplexVec psi = plan_->to_position(full);
    // x_n > 0 exactly for n >= n_half (midpoint-offset position grid).
    for (std::size_t n = 0; n < grid_->n_half; ++n) psi[n] = Complex{0.0, 0.0};
    return plan_->to_momentum(psi);
}

ComplexVec BackflowOperator::apply_hilbert(const ComplexVec& full) const {
    ComplexVec psi = plan_->to_position(full);
    for (std::size_t n = 0; n < psi.size(); ++n) {
        psi[n] = (n >= grid_->n_half) ? psi[n] : -psi[n];
    }
    ComplexVec out = plan_->to_momentum(psi);
    for (auto& v : out) v *= Complex{0.0, 1.0};
    return out;
}

ComplexVec BackflowOperator::apply_backflow_padded(const ComplexVec& padded) const {
    const MomentumGrid& pg = *padded_grid_;
    auto project = [&](ComplexVec v) {
        ComplexVec psi = padded_plan_->to_position(std::move(v));
        for (std::size_t n = 0; n < pg.n_half; ++n) psi[n] = Complex{0.0, 0.0};
        return padded_plan_->to_momentum(psi);
    };
    auto hilbert = [&](ComplexVec v) {
        ComplexVec psi = padded_plan_->to_position(std::move(v));
        for (std::size_t n = 0; n < pg.n_half; ++n) psi[n] = -psi[n];
        ComplexVec out = padded_plan_->to_momentum(psi);
        for (auto& c : out) c *= Complex{0.0, 1.0};
        return out;
    };

    // B_T = PiTilde_{-T} - PiTilde_{T} with PiTilde_t = U_t^* (F Pi F^*) U_t,
    // equivalently (1/2i)(U H U^* - U^* H U) with U = U_T.
    ComplexVec a = padded;
    ComplexVec b = padded;
    if (route_ == Route::projection_sandwich) {
        apply_free_evolution(a, pg, -T_);
        a = project(std::move(a));
        apply_free_evolution(a, pg, T_);

        apply_free_evolution(b, pg, T_);
        b = project(std::move(b));
        apply_free_evolution(b, pg, -T_);

        for (std::size_t m = 0; m < a.size(); ++m) a[m] -= b[m];
        return a;
    }
    apply_free_evolution(a, pg, -T_);
    a = hilbert(std::move(a));
    apply_free_evolution(a, pg, T_);

    apply_free_evolution(b, pg, T_);
    b = hilbert(std::move(b));
    apply_free_evolution(b, pg, -T_);

    const Complex half_over_i{0.0, -0.5};  // 1/(2i)
    for (std::size_t m = 0; m < a.size(); ++m) a[m] = half_over_i * (a[m] - b[m]);
    return a;
}

StateVector BackflowOperator::apply_backflow(const StateVector& state) const {
    if (state.grid->n_half != grid_->n_half)
        throw std::invalid_argument("apply_backflow: grid mismatch");
    ComplexVec padded = pad_to_box(embed_full_line(state));
    padded = apply_backflow_padded(padded);
    return restrict_half(crop_from_box(padded), grid_);
}

StateVector BackflowOperator::apply_shifted(const StateVector& state) const {
    StateVector out = apply_backflow(state);
    for (std::size_t j = 0; j < out.amplitudes.size(); ++j)
        out.amplitudes[j] += state.amplitudes[j];
    return out;
}

StateVector apply_dilation(const StateVector& state, double mu) {
    if (!(mu > 0.0)) throw std::invalid_argument("apply_dilation: mu must be > 0");
    const auto& g = *state.grid;
    auto target = std::make_shared<MomentumGrid>(make_grid(g.n_half, g.q_max / mu));
    StateVector out = make_state(target);
    const double root_mu = std::sqrt(mu);
    // mu * k'_j = mu (j+1/2) dk/mu = k_j: sample-exact, no interpolation.
    for (std::size_t j = 0; j < g.n_half; ++j) out.amplitudes[j] = root_mu * state.amplitudes[j];
    return out;
}

}  // namespace backflow
