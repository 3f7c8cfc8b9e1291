#include "backflow/quadrature.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace backflow;

TEST_CASE("Gauss-Legendre rule integrates polynomials to full degree") {
    auto rule = gauss_legendre(8);
    REQUIRE(rule.nodes.size() == 8);
    double wsum = 0.0;
    for (double w : rule.weights) wsum += w;
    CHECK(wsum == doctest::Approx(2.0).epsilon(1e-14));
    // exact through degree 2*8 - 1 = 15: check x^14 over [-1, 1]
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
        acc += rule.weights[i] * std::pow(rule.nodes[i], 14);
    CHECK(acc == doctest::Approx(2.0 / 15.0).epsilon(1e-13));
    // nodes are symmetric and ordered
    for (std::size_t i = 1; i < rule.nodes.size(); ++i) CHECK(rule.nodes[i] > rule.nodes[i - 1]);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
        CHECK(rule.nodes[i] == doctest::Approx(-rule.nodes[rule.nodes.size() - 1 - i]).epsilon(1e-14));
}

TEST_CASE("composite integration reproduces classical integrals") {
    CHECK(integrate([](double x) { return std::sin(x); }, 0.0, std::numbers::pi, 16) ==
          doctest::Approx(2.0).epsilon(1e-13));
    CHECK(integrate([](double x) { return std::exp(-x * x); }, -8.0, 8.0, 64) ==
          doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-13));
    CHECK(integrate([](double) { return 1.0; }, 2.0, 5.0, 3) ==
          doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("normalization constant from two independent quadratures") {
    const double direct = norm_constant_sq_direct();
    const double subst = norm_constant_sq_substituted();
    CHECK(std::abs(direct - subst) < 1e-8);
    // closed form: Integral_0^inf sin^2(k^2)/k^2 dk = sqrt(pi)/2, so N^2 = 2/sqrt(pi)
    CHECK(direct == doctest::Approx(2.0 / std::sqrt(std::numbers::pi)).epsilon(1e-10));
    CHECK(subst == doctest::Approx(1.1283791670955126).epsilon(1e-10));
}
