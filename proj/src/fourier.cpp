#include "backflow/fourier.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace backflow {

namespace {
// The FFTW planner mutates global state; executions are thread-safe.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

fftw_complex* as_fftw(Complex* p) { return reinterpret_cast<fftw_complex*>(p); }
}  // namespace

FourierPlan::FourierPlan(const MomentumGrid& grid) : grid_(grid) {
    const std::size_t n = grid_.n_full;
    const double pi = std::numbers::pi;

    // Both grids are midpoint-offset: k_m = (m + c) dk, x_n = (n + c) dx
    // with c = 1/2 - n_half, so e^{i k_m x_n} factors into the twiddle
    // e^{2 pi i c m / N} on each side of a plain DFT plus the constant
    // phase e^{2 pi i c^2 / N}. Angles are reduced with exact integer
    // arithmetic (2c = 1 - N is an integer) to keep full precision on
    // large grids.
    const long long nn = static_cast<long long>(n);
    twiddle_.resize(n);
    for (std::size_t m = 0; m < n; ++m) {
        // theta = 2 pi c m / N = pi m (1 - N) / N, reduced mod 2 pi.
        const long long r = (static_cast<long long>(m) * (1 - nn)) % (2 * nn);
        const double ang = pi * static_cast<double>(r) / static_cast<double>(nn);
        twiddle_[m] = Complex{std::cos(ang), std::sin(ang)};
    }
    // theta_c = 2 pi c^2 / N = pi (1 - N)^2 / (2 N), reduced mod 2 pi.
    const long long rc = ((1 - nn) * (1 - nn)) % (4 * nn);
    const double ang_c = pi * static_cast<double>(rc) / static_cast<double>(2 * nn);
    const Complex phase_c{std::cos(ang_c), std::sin(ang_c)};
    scale_to_x_ = grid_.dk / std::sqrt(2.0 * pi) * phase_c;
    scale_to_k_ = grid_.dx() / std::sqrt(2.0 * pi) * std::conj(phase_c);

    ComplexVec dummy(n);
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan_backward_ = fftw_plan_dft_1d(static_cast<int>(n), as_fftw(dummy.data()),
                                      as_fftw(dummy.data()), FFTW_BACKWARD,
                                      FFTW_ESTIMATE | FFTW_UNALIGNED);
    plan_forward_ = fftw_plan_dft_1d(static_cast<int>(n), as_fftw(dummy.data()),
                                     as_fftw(dummy.data()), FFTW_FORWARD,
                                     FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!plan_backward_ || !plan_forward_)
        throw std::runtime_error("FourierPlan: FFTW plan creation failed");
}

FourierPlan::~FourierPlan() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(plan_backward_));
    fftw_destroy_plan(static_cast<fftw_plan>(plan_forward_));
}

ComplexVec FourierPlan::to_position(const ComplexVec& momentum) const {
    const std::size_t n = grid_.n_full;
    if (momentum.size() != n) throw std::invalid_argument("to_position: length must be n_full");
    ComplexVec buf(n);
    for (std::size_t m = 0; m < n; ++m) buf[m] = momentum[m] * twiddle_[m];
    fftw_execute_dft(static_cast<fftw_plan>(plan_backward_), as_fftw(buf.data()),
                     as_fftw(buf.data()));
    for (std::size_t m = 0; m < n; ++m) buf[m] *= scale_to_x_ * twiddle_[m];
    return buf;
}

ComplexVec FourierPlan::to_momentum(const ComplexVec& position) const {
    const std::size_t n = grid_.n_full;
    if (position.size() != n) throw std::invalid_argument("to_momentum: length must be n_full");
    ComplexVec buf(n);
    for (std::size_t m = 0; m < n; ++m) buf[m] = position[m] * std::conj(twiddle_[m]);
    fftw_execute_dft(static_cast<fftw_plan>(plan_forward_), as_fftw(buf.data()),
                     as_fftw(buf.data()));
    for (std::size_t m = 0; m < n; ++m) buf[m] *= scale_to_k_ * std::conj(twiddle_[m]);
    return buf;
}

}  // namespace backflow
