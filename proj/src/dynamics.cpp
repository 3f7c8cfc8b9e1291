#include "backflow/dynamics.hpp"

#include "backflow/operators.hpp"
#include "backflow/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace backflow {

Evolution::Evolution(StateVector state) : state_grid_(state.grid) {
    view_grid_ = std::make_shared<const MomentumGrid>(
        make_grid(2 * state_grid_->n_half, 2.0 * state_grid_->q_max));
    const ComplexVec base = embed_full_line(state);
    // Same dk; view index m' = m + n_half holds the same physical k.
    full_momentum_.assign(view_grid_->n_full, Complex{0.0, 0.0});
    std::copy(base.begin(), base.end(),
              full_momentum_.begin() + static_cast<std::ptrdiff_t>(state_grid_->n_half));
    plan_ = std::make_shared<FourierPlan>(*view_grid_);
}

ComplexVec Evolution::psi(double t) const {
    ComplexVec phi = full_momentum_;
    apply_free_evolution(phi, *view_grid_, t);
    return plan_->to_position(phi);
}

ComplexVec Evolution::dpsi_dx(double t) const {
    ComplexVec phi = full_momentum_;
    apply_free_evolution(phi, *view_grid_, t);
    for (std::size_t m = 0; m < phi.size(); ++m) phi[m] *= Complex{0.0, view_grid_->k_full(m)};
    return plan_->to_position(phi);
}

std::vector<double> Evolution::density(double t) const {
    const ComplexVec w = psi(t);
    std::vector<double> rho(w.size());
    for (std::size_t n = 0; n < w.size(); ++n) rho[n] = std::norm(w[n]);
    return rho;
}

std::vector<double> Evolution::current(double t) const {
    const ComplexVec w = psi(t);
    const ComplexVec dw = dpsi_dx(t);
    std::vector<double> j(w.size());
    for (std::size_t n = 0; n < w.size(); ++n)
        j[n] = 2.0 * std::imag(std::conj(w[n]) * dw[n]);
    return j;
}

double Evolution::current_at(double t, std::size_t x_index) const {
    const std::vector<double> j = current(t);
    if (x_index >= j.size()) throw std::out_of_range("current_at: x_index");
    return j[x_index];
}

std::pair<Complex, Complex> Evolution::psi_and_derivative_at_zero(double t) const {
    // x = 0 is not a grid sample; evaluate psi(0) and psi'(0) by direct
    // summation of the momentum samples (O(N), exact for the grid state).
    ComplexVec phi = full_momentum_;
    apply_free_evolution(phi, *view_grid_, t);
    Complex w{0.0, 0.0}, dw{0.0, 0.0};
    for (std::size_t m = 0; m < phi.size(); ++m) {
        w += phi[m];
        dw += view_grid_->k_full(m) * phi[m];
    }
    const double scale = view_grid_->dk / std::sqrt(2.0 * std::numbers::pi);
    return {w * scale, Complex{0.0, 1.0} * dw * scale};
}

double Evolution::current_at_zero(double t) const {
    const auto [w, dw] = psi_and_derivative_at_zero(t);
    return 2.0 * std::imag(std::conj(w) * dw);
}

double Evolution::half_space_probability(double t) const {
    const std::vector<double> rho = density(t);
    double sum = 0.0;
    for (std::size_t n = view_grid_->n_half; n < rho.size(); ++n) sum += rho[n];
    // Euler-Maclaurin boundary term of the half-range midpoint sum:
    // Integral_0^inf rho = dx Sum rho(x_n) - (dx^2/24) rho'(0) + O(dx^4).
    const auto [w, dw] = psi_and_derivative_at_zero(t);
    const double rho_prime0 = 2.0 * std::real(std::conj(w) * dw);
    const double dx = view_grid_->dx();
    return sum * dx - dx * dx / 24.0 * rho_prime0;
}

double Evolution::total_mass(double t) const {
    const std::vector<double> rho = density(t);
    double sum = 0.0;
    for (double r : rho) sum += r;
    return sum * view_grid_->dx();
}

double SpacetimeField::interpolate(const std::vector<std::vector<double>>& table, double t,
                                   double x) const {
    const double t0 = t_values.front(), t1 = t_values.back();
    const double x0 = x_values.front(), x1 = x_values.back();
    const double ft = (t - t0) / (t1 - t0) * static_cast<double>(t_values.size() - 1);
    const double fx = (x - x0) / (x1 - x0) * static_cast<double>(x_values.size() - 1);
    const auto it = static_cast<std::size_t>(
        std::clamp(std::floor(ft), 0.0, static_cast<double>(t_values.size() - 2)));
    const auto ix = static_cast<std::size_t>(
        std::clamp(std::floor(fx), 0.0, static_cast<double>(x_values.size() - 2)));
    const double at = std::clamp(ft - static_cast<double>(it), 0.0, 1.0);
    const double ax = std::clamp(fx - static_cast<double>(ix), 0.0, 1.0);
    return (1.0 - at) * ((1.0 - ax) * table[it][ix] + ax * table[it][ix + 1]) +
           at * ((1.0 - ax) * table[it + 1][ix] + ax * table[it + 1][ix + 1]);
}

SpacetimeField build_field(const Evolution& ev, const std::vector<double>& t_values, double x_min,
                           double x_max) {
    if (t_values.size() < 2) throw std::invalid_argument("build_field: need >= 2 time slices");
    const auto& g = ev.grid();
    const double dx = g.dx();
    SpacetimeField field;
    field.t_values = t_values;

    std::size_t n_lo = 0, n_hi = g.n_full;
    while (n_lo < g.n_full && g.x_value(n_lo) < x_min) ++n_lo;
    while (n_hi > n_lo && g.x_value(n_hi - 1) > x_max) --n_hi;
    if (n_hi - n_lo < 2) throw std::invalid_argument("build_field: x window too narrow");
    field.x_values.reserve(n_hi - n_lo);
    for (std::size_t n = n_lo; n < n_hi; ++n) field.x_values.push_back(g.x_value(n));

    for (double t : t_values) {
        const std::vector<double> rho = ev.density(t);
        const std::vector<double> j = ev.current(t);
        std::vector<double> rslice(rho.begin() + static_cast<std::ptrdiff_t>(n_lo),
                                   rho.begin() + static_cast<std::ptrdiff_t>(n_hi));
        std::vector<double> jslice(j.begin() + static_cast<std::ptrdiff_t>(n_lo),
                                   j.begin() + static_cast<std::ptrdiff_t>(n_hi));
        double mass = 0.0;
        for (double r : rslice) mass += r;
        field.window_mass.push_back(mass * dx);
        field.rho.push_back(std::move(rslice));
        field.j.push_back(std::move(jslice));
    }
    return field;
}

BackflowFunctionalResult backflow_functional(const Evolution& ev, double t_min, double t_max,
                                             double t_step) {
    if (!(t_min < t_max) || !(t_step > 0.0))
        throw std::invalid_argument("backflow_functional: bad time grid");
    BackflowFunctionalResult res;
    const auto n = static_cast<std::size_t>(std::round((t_max - t_min) / t_step)) + 1;
    res.t_values.resize(n);
    res.p_values.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        res.t_values[i] = t_min + static_cast<double>(i) * t_step;
        res.p_values[i] = ev.half_space_probability(res.t_values[i]);
    }
    // max over s < t of P(s) - P(t): running maximum of P from the left.
    res.lambda_phi = 0.0;
    res.s = res.t = t_min;
    double best_p = res.p_values[0];
    double best_s = res.t_values[0];
    for (std::size_t i = 1; i < n; ++i) {
        const double drop = best_p - res.p_values[i];
        if (drop > res.lambda_phi) {
            res.lambda_phi = drop;
            res.s = best_s;
            res.t = res.t_values[i];
        }
        if (res.p_values[i] > best_p) {
            best_p = res.p_values[i];
            best_s = res.t_values[i];
        }
    }
    return res;
}

namespace {

// Time-interpolated cumulative mass profile of the field window. The
// trajectory x(t) of the transport field (1, j/rho) conserves
//   C(t, x(t)) - Integral_{t0}^{t} j(s, x_lo) ds,
// because d/dt C(t, x) = j(t, x_lo) - j(t, x) + rho * dx/dt along the
// curve. Advancing a line therefore means holding its cumulative level
// fixed, which stays well-posed even where rho has near-zeros and the
// velocity j/rho is stiff.
struct CumulativeField {
    const SpacetimeField& field;
    std::vector<std::vector<double>> cum;  // [t][x] running trapezoid mass
    std::vector<double> influx;            // Integral j(s, x_lo) ds up to slice

    explicit CumulativeField(const SpacetimeField& f) : field(f) {
        const std::size_t nt = f.t_values.size();
        const std::size_t nx = f.x_values.size();
        const double dx = f.x_values[1] - f.x_values[0];
        cum.assign(nt, std::vector<double>(nx, 0.0));
        influx.assign(nt, 0.0);
        for (std::size_t i = 0; i < nt; ++i) {
            for (std::size_t n = 1; n < nx; ++n)
                cum[i][n] = cum[i][n - 1] + 0.5 * (f.rho[i][n - 1] + f.rho[i][n]) * dx;
            if (i > 0)
                influx[i] = influx[i - 1] +
                            0.5 * (f.j[i - 1][0] + f.j[i][0]) * (f.t_values[i] - f.t_values[i - 1]);
        }
    }

    // Linear interpolation weights of t between field slices.
    void locate(double t, std::size_t& i, double& alpha) const {
        const auto& ts = field.t_values;
        const double step = ts[1] - ts[0];
        double pos = (t - ts.front()) / step;
        pos = std::clamp(pos, 0.0, static_cast<double>(ts.size() - 1));
        i = std::min(static_cast<std::size_t>(pos), ts.size() - 2);
        alpha = pos - static_cast<double>(i);
    }

    double level_at(std::size_t n, double alpha, std::size_t i) const {
        return (1.0 - alpha) * cum[i][n] + alpha * cum[i + 1][n];
    }

    // Solve C(t, x) = target for x on the monotone interpolated profile.
    // Returns false when the level has left the window.
    bool invert(double t, double target, double& x_out) const {
        std::size_t i;
        double alpha;
        locate(t, i, alpha);
        const std::size_t nx = field.x_values.size();
        const double total = level_at(nx - 1, alpha, i);
        if (target <= 0.0 || target >= total) return false;
        std::size_t lo = 0, hi = nx - 1;
        while (hi - lo > 1) {
            const std::size_t mid = (lo + hi) / 2;
            if (level_at(mid, alpha, i) < target) lo = mid;
            else hi = mid;
        }
        const double c0 = level_at(lo, alpha, i);
        const double c1 = level_at(hi, alpha, i);
        const double frac = (target - c0) / std::max(c1 - c0, 1e-300);
        x_out = field.x_values[lo] + frac * (field.x_values[hi] - field.x_values[lo]);
        return true;
    }

    double boundary_flux(double t) const {
        std::size_t i;
        double alpha;
        locate(t, i, alpha);
        return (1.0 - alpha) * influx[i] + alpha * influx[i + 1];
    }
};

}  // namespace

std::vector<FlowLine> flow_lines(const SpacetimeField& field, const FlowLineOptions& opts) {
    const double t_start = field.t_values.front();
    const double t_end = field.t_values.back();
    const CumulativeField cf(field);

    // Seed positions from the quantiles of rho(t_start, .) over the window.
    const std::vector<double>& cdf = cf.cum.front();
    const double window_mass = cdf.back();

    std::vector<std::pair<double, double>> seeds;  // (quantile, x)
    const double spacing = opts.n_lines > 0
                               ? window_mass / static_cast<double>(opts.n_lines + 1)
                               : opts.probability_spacing;
    for (double level = spacing; level < window_mass - 0.5 * spacing; level += spacing) {
        double x;
        if (!cf.invert(t_start, level, x)) continue;
        if (field.interpolate(field.rho, t_start, x) < opts.eps_rho)
            continue;  // seed in a near-zero density region: skipped
        seeds.emplace_back(level, x);
    }

    std::vector<FlowLine> lines;
    lines.reserve(seeds.size());
    const auto n_steps = static_cast<std::size_t>(std::ceil((t_end - t_start) / opts.dt));
    for (const auto& [quantile, x0] : seeds) {
        FlowLine line;
        line.seed_quantile = quantile;
        line.terminated_early = false;
        line.t.push_back(t_start);
        line.x.push_back(x0);
        for (std::size_t step = 0; step < n_steps; ++step) {
            const double t = t_start + static_cast<double>(step) * opts.dt;
            const double h = std::min(opts.dt, t_end - t);
            if (h <= 0.0) break;
            const double t_next = t + h;
            // conserved cumulative level, corrected for mass that crossed
            // the left window boundary since t_start
            const double target = quantile + cf.boundary_flux(t_next);
            double x_next;
            if (!cf.invert(t_next, target, x_next) ||
                field.interpolate(field.rho, t_next, x_next) < opts.eps_rho) {
                line.terminated_early = true;
                break;
            }
            line.t.push_back(t_next);
            line.x.push_back(x_next);
        }
        lines.push_back(std::move(line));
    }
    return lines;
}

std::vector<double> cumulative_norm(const StateVector& state) {
    std::vector<double> out(state.amplitudes.size());
    double sum = 0.0;
    for (std::size_t j = 0; j < state.amplitudes.size(); ++j) {
        sum += std::norm(state.amplitudes[j]) * state.grid->dk;
        out[j] = sum;
    }
    return out;
}

std::vector<double> reference_cumulative(const std::vector<double>& k_values, double dk) {
    const double norm_sq = norm_constant_sq_direct();
    std::vector<double> out(k_values.size());
    double sum = 0.0;
    for (std::size_t j = 0; j < k_values.size(); ++j) {
        const double k = k_values[j];
        const double s = std::sin(k * k);
        sum += norm_sq * s * s / (k * k) * dk;
        out[j] = sum;
    }
    return out;
}

}  // namespace backflow
