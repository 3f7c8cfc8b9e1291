#include "backflow/spectral.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>

namespace backflow {

PowerResult power_iterate(const ApplyFn& apply_shifted, const StateVector& v0,
                          std::size_t n_iter) {
    if (n_iter < 1) throw std::invalid_argument("power_iterate: n_iter must be >= 1");
    if (!(v0.norm() > 1e-300)) throw std::invalid_argument("power_iterate: v0 is numerically zero");

    PowerResult result;
    result.estimates.reserve(n_iter);
    result.residuals.reserve(n_iter);

    StateVector v = v0;
    for (std::size_t i = 0; i < n_iter; ++i) {
        v.normalize();
        StateVector w = apply_shifted(v);
        const double est = std::real(inner(w, v));
        double res_sq = 0.0;
        for (std::size_t j = 0; j < w.amplitudes.size(); ++j)
            res_sq += std::norm(w.amplitudes[j] - est * v.amplitudes[j]);
        const double res = std::sqrt(res_sq * v.grid->dk);
        if (!std::isfinite(est) || !std::isfinite(res))
            throw std::runtime_error("power_iterate: non-finite iterate at iteration " +
                                     std::to_string(i));
        result.estimates.push_back(est - 1.0);
        result.residuals.push_back(res);
        v = std::move(w);
    }
    v.normalize();
    result.final_vector = std::move(v);
    result.iterations = n_iter;
    return result;
}

namespace {

double run_single_h(int h, const HProtocolOptions& opts) {
    const auto n_half = opts.n0 * static_cast<std::size_t>(h);
    const double q = opts.q0 * std::sqrt(static_cast<double>(h));
    auto grid = std::make_shared<const MomentumGrid>(make_grid(n_half, q));
    BackflowOperator op(grid, 1.0, opts.route);
    const StateVector v0 = constant_state(grid);
    try {
        PowerResult r = power_iterate([&op](const StateVector& s) { return op.apply_shifted(s); },
                                      v0, opts.n_iter);
        return r.lambda();
    } catch (const std::exception& e) {
        throw std::runtime_error("h=" + std::to_string(h) + ": " + e.what());
    }
}

}  // namespace

std::vector<HPoint> run_h_protocol(const std::vector<int>& h_list, const HProtocolOptions& opts,
                                   std::vector<HPoint> completed) {
    std::vector<int> todo;
    for (int h : h_list) {
        if (h < 1) throw std::invalid_argument("run_h_protocol: h must be >= 1");
        const bool done = std::any_of(completed.begin(), completed.end(),
                                      [h](const HPoint& p) { return p.h == h; });
        if (!done) todo.push_back(h);
    }

    std::vector<HPoint> results = std::move(completed);
    std::mutex merge_mutex;
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;

    auto worker = [&]() {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= todo.size()) return;
            try {
                HPoint p{todo[i], run_single_h(todo[i], opts)};
                std::lock_guard<std::mutex> lock(merge_mutex);
                results.push_back(p);
                if (opts.on_point) opts.on_point(p);
            } catch (...) {
                std::lock_guard<std::mutex> lock(merge_mutex);
                if (!failure) failure = std::current_exception();
                return;
            }
        }
    };

    const unsigned n_workers = std::max(1u, opts.workers);
    if (n_workers == 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        for (unsigned w = 0; w < n_workers; ++w) threads.emplace_back(worker);
        for (auto& t : threads) t.join();
    }
    if (failure) std::rethrow_exception(failure);

    std::sort(results.begin(), results.end(),
              [](const HPoint& a, const HPoint& b) { return a.h < b.h; });
    return results;
}

namespace {

// OLS of lambda_h against powers of s = 1/sqrt(h).
Eigen::VectorXd polynomial_lsq(const std::vector<HPoint>& points, int degree, double& rms) {
    const auto n = static_cast<Eigen::Index>(points.size());
    Eigen::MatrixXd design(n, degree + 1);
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double s = 1.0 / std::sqrt(static_cast<double>(points[static_cast<std::size_t>(i)].h));
        double p = 1.0;
        for (int d = 0; d <= degree; ++d) {
            design(i, d) = p;
            p *= s;
        }
        y(i) = points[static_cast<std::size_t>(i)].lambda_h;
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    if (qr.rank() < degree + 1)
        throw std::invalid_argument("fit: rank-deficient design (need distinct h values)");
    Eigen::VectorXd coeff = qr.solve(y);
    rms = std::sqrt((design * coeff - y).squaredNorm() / static_cast<double>(n));
    return coeff;
}

}  // namespace

SqrtFit fit_sqrt(const std::vector<HPoint>& points) {
    if (points.size() < 3) throw std::invalid_argument("fit_sqrt: need at least 3 points");
    double rms = 0.0;
    const Eigen::VectorXd c = polynomial_lsq(points, 1, rms);
    return SqrtFit{c(0), c(1), rms};
}

CubicFit fit_cubic(const std::vector<HPoint>& points) {
    if (points.size() < 5) throw std::invalid_argument("fit_cubic: need at least 5 points");
    double rms = 0.0;
    const Eigen::VectorXd c = polynomial_lsq(points, 3, rms);
    return CubicFit{c(0), c(1), c(2), c(3), rms};
}

StateVector gaussian_state(std::shared_ptr<const MomentumGrid> grid, double k0, double width) {
    StateVector s = make_state(std::move(grid));
    const auto& k = s.grid->k_values;
    for (std::size_t j = 0; j < k.size(); ++j) {
        const double d = k[j] - k0;
        s.amplitudes[j] = std::exp(-d * d / (4.0 * width * width));
    }
    s.normalize();
    return s;
}

std::vector<DollardSample> dollard_probe(std::shared_ptr<const MomentumGrid> grid,
                                         const std::vector<double>& widths,
                                         const std::vector<double>& T_list, double k0) {
    std::vector<DollardSample> table;
    for (double w : widths) {
        const StateVector phi = gaussian_state(grid, k0, w);
        // Untruncated-Gaussian mass outside [0, q]: |phi|^2 has std w around k0.
        const double inv = 1.0 / (std::sqrt(2.0) * w);
        const double leak =
            0.5 * std::erfc((grid->q_max - k0) * inv) + 0.5 * std::erfc(k0 * inv);
        for (double T : T_list) {
            BackflowOperator op(grid, T);
            const double val = std::real(inner(phi, op.apply_backflow(phi)));
            table.push_back(DollardSample{w, T, val, leak > 1e-6});
        }
    }
    return table;
}

}  // namespace backflow
