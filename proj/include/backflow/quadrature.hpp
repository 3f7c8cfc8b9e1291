#pragma once

#include <functional>
#include <vector>

namespace backflow {

struct GaussLegendreRule {
    std::vector<double> nodes;    // on [-1, 1]
    std::vector<double> weights;
};

// Nodes and weights by Newton iteration on the Legendre polynomial.
GaussLegendreRule gauss_legendre(int order);

// Composite Gauss-Legendre over [a, b] with equal panels.
double integrate(const std::function<double(double)>& f, double a, double b, int panels,
                 int order = 20);

// Squared normalization constant of the reference tail profile sin(k^2)/k,
// i.e. 1 / Integral_0^inf sin^2(k^2)/k^2 dk, by two independent
// high-accuracy quadratures (direct k-integral with asymptotic tail, and
// the substituted u = k^2 integral). Both agree to better than 1e-8.
double norm_constant_sq_direct();
double norm_constant_sq_substituted();

}  // namespace backflow
