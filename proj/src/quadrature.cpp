#include "backflow/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace backflow {

GaussLegendreRule gauss_legendre(int order) {
    if (order < 1) throw std::invalid_argument("gauss_legendre: order must be >= 1");
    GaussLegendreRule rule;
    rule.nodes.resize(static_cast<std::size_t>(order));
    rule.weights.resize(static_cast<std::size_t>(order));
    const int m = (order + 1) / 2;
    for (int i = 0; i < m; ++i) {
        // Chebyshev-based initial guess, then Newton on P_order.
        double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int n = 2; n <= order; ++n) {
                const double p2 = ((2.0 * n - 1.0) * x * p1 - (n - 1.0) * p0) / n;
                p0 = p1;
                p1 = p2;
            }
            pp = order * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * pp * pp);
        rule.nodes[static_cast<std::size_t>(i)] = -x;
        rule.nodes[static_cast<std::size_t>(order - 1 - i)] = x;
        rule.weights[static_cast<std::size_t>(i)] = w;
        rule.weights[static_cast<std::size_t>(order - 1 - i)] = w;
    }
    return rule;
}

double integrate(const std::function<double(double)>& f, double a, double b, int panels,
                 int order) {
    const GaussLegendreRule rule = gauss_legendre(order);
    const double h = (b - a) / panels;
    double sum = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double lo = a + p * h;
        const double mid = lo + 0.5 * h;
        double panel_sum = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i)
            panel_sum += rule.weights[i] * f(mid + 0.5 * h * rule.nodes[i]);
        sum += 0.5 * h * panel_sum;
    }
    return sum;
}

double norm_constant_sq_direct() {
    // Integral_0^K sin^2(k^2)/k^2 dk plus the asymptotic tail of
    // Integral_K^inf (1 - cos 2k^2)/(2k^2) dk.
    const double K = 100.0;
    auto f = [](double k) {
        if (k < 1e-12) return 0.0;
        const double s = std::sin(k * k);
        return s * s / (k * k);
    };
    // Oscillation period at k is pi/(2k) >= 0.0157 on [0, K]; panel width
    // 0.005 with 20-node panels resolves it to machine accuracy.
    const double body = integrate(f, 0.0, K, 20000, 20);
    const double K3 = K * K * K;
    const double K5 = K3 * K * K;
    const double tail = 1.0 / (2.0 * K) + std::sin(2.0 * K * K) / (8.0 * K3) -
                        (3.0 / 32.0) * std::cos(2.0 * K * K) / K5;
    return 1.0 / (body + tail);
}

double norm_constant_sq_substituted() {
    // u = k^2: Integral = (1/4) Integral_0^inf (1 - cos 2u) u^{-3/2} du.
    // [0,1] is smoothed with u = v^2; [1,U] is composite Gauss-Legendre;
    // the tail uses 2/sqrt(U) minus the integrated-by-parts cosine series.
    auto head_f = [](double v) {
        if (v < 1e-12) return 0.0;
        return (1.0 - std::cos(2.0 * v * v)) / (v * v);
    };
    const double head = 2.0 * integrate(head_f, 0.0, 1.0, 200, 20);

    const double U = 1e4;
    auto body_f = [](double u) { return (1.0 - std::cos(2.0 * u)) / (u * std::sqrt(u)); };
    const double body = integrate(body_f, 1.0, U, 20000, 20);

    const double U32 = U * std::sqrt(U);
    const double U52 = U32 * U;
    const double cosine_tail = -std::sin(2.0 * U) / (2.0 * U32) + (3.0 / 8.0) * std::cos(2.0 * U) / U52;
    const double tail = 2.0 / std::sqrt(U) - cosine_tail;

    return 4.0 / (head + body + tail);
}

}  // namespace backflow
