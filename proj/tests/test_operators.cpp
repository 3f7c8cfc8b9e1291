#include "backflow/kernel.hpp"
#include "backflow/operators.hpp"
#include "backflow/quadrature.hpp"
#include "backflow/spectral.hpp"
#include "helpers.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace backflow;
using namespace backflow::testing;

TEST_CASE("free evolution is a unitary group") {
    auto g = grid_ptr(128, 10.0);
    ComplexVec f = random_full(*g, 41);
    ComplexVec f0 = f;

    SUBCASE("t = 0 is the identity") {
        apply_free_evolution(f, *g, 0.0);
        CHECK(max_abs_diff(f, f0) == 0.0);
    }
    SUBCASE("norm preserved and inverse exact") {
        apply_free_evolution(f, *g, 0.7);
        CHECK(full_norm(f, *g) == doctest::Approx(full_norm(f0, *g)).epsilon(1e-14));
        apply_free_evolution(f, *g, -0.7);
        CHECK(max_abs_diff(f, f0) < 1e-15);
    }
    SUBCASE("group property U_s U_t = U_{s+t}") {
        ComplexVec a = f0;
        apply_free_evolution(a, *g, 0.3);
        apply_free_evolution(a, *g, 0.5);
        ComplexVec b = f0;
        apply_free_evolution(b, *g, 0.8);
        CHECK(max_abs_diff(a, b) < 1e-14);
    }
}

TEST_CASE("position projection is an orthogonal projection") {
    auto g = grid_ptr(256, 15.0);
    BackflowOperator op(g);
    ComplexVec f = random_full(*g, 51);

    ComplexVec pf = op.apply_position_projection(f);
    ComplexVec ppf = op.apply_position_projection(pf);
    CHECK(max_abs_diff(ppf, pf) < 1e-12);  // idempotent

    ComplexVec h = random_full(*g, 52);
    ComplexVec ph = op.apply_position_projection(h);
    const Complex lhs = full_inner(pf, h, *g);
    const Complex rhs = full_inner(f, ph, *g);
    CHECK(std::abs(lhs - rhs) < 1e-12);  // self-adjoint

    // contraction: 0 <= <f, P f> <= ||f||^2
    const Complex q = full_inner(f, pf, *g);
    const double n2 = full_norm(f, *g) * full_norm(f, *g);
    CHECK(std::abs(q.imag()) < 1e-12);
    CHECK(q.real() > -1e-12);
    CHECK(q.real() < n2 + 1e-12);
}

TEST_CASE("projection expectation of a real probe is exactly one half") {
    // A real momentum profile has even position density, so the
    // positive-half-line probability must be 1/2.
    auto g = grid_ptr(512, 20.0);
    BackflowOperator op(g);
    StateVector s = gaussian_state(g, 5.0, 1.0);
    ComplexVec f = embed_full_line(s);
    const Complex q = full_inner(f, op.apply_position_projection(f), *g);
    CHECK(q.real() == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(std::abs(q.imag()) < 1e-13);
}

TEST_CASE("sign-function transform squares to minus the identity") {
    auto g = grid_ptr(256, 15.0);
    BackflowOperator op(g);
    ComplexVec f = random_full(*g, 61);

    ComplexVec hf = op.apply_hilbert(f);
    CHECK(full_norm(hf, *g) == doctest::Approx(full_norm(f, *g)).epsilon(1e-13));

    ComplexVec hhf = op.apply_hilbert(hf);
    double err = 0.0;
    for (std::size_t m = 0; m < g->n_full; ++m) err = std::max(err, std::abs(hhf[m] + f[m]));
    CHECK(err < 1e-12);

    // skew-adjoint: <Hf, g> = -<f, Hg>
    ComplexVec f2 = random_full(*g, 62);
    const Complex lhs = full_inner(hf, f2, *g);
    const Complex rhs = full_inner(f, op.apply_hilbert(f2), *g);
    CHECK(std::abs(lhs + rhs) < 1e-12);

    // (id - iH)/2 equals the projection
    ComplexVec proj = op.apply_position_projection(f);
    for (std::size_t m = 0; m < g->n_full; ++m) {
        const Complex alt = 0.5 * (f[m] - Complex{0.0, 1.0} * hf[m]);
        CHECK(std::abs(alt - proj[m]) < 1e-12);
    }
}

TEST_CASE("backflow operator is self-adjoint, real, and bounded by one") {
    auto g = grid_ptr(512, 20.0);
    BackflowOperator op(g);

    for (std::uint64_t seed = 70; seed < 80; ++seed) {
        auto a = random_state(g, seed);
        auto b = random_state(g, seed + 1000);
        const Complex lhs = inner(op.apply_backflow(a), b);
        const Complex rhs = inner(a, op.apply_backflow(b));
        CHECK(std::abs(lhs - rhs) < 1e-11);

        // Rayleigh quotient within [-1, 1]
        const Complex q = inner(a, op.apply_backflow(a));
        CHECK(std::abs(q.imag()) < 1e-11);
        CHECK(q.real() >= -1.0 - 1e-10);
        CHECK(q.real() <= 1.0 + 1e-10);

        // shifted operator is nonnegative
        const Complex qs = inner(a, op.apply_shifted(a));
        CHECK(qs.real() >= -1e-10);
    }

    // real input stays real
    auto r = random_real_state(g, 90);
    auto br = op.apply_backflow(r);
    double im = 0.0;
    for (const auto& a : br.amplitudes) im = std::max(im, std::abs(a.imag()));
    CHECK(im < 1e-12);

    // zero maps to zero
    auto z = make_state(g);
    CHECK(op.apply_backflow(z).norm() == 0.0);
}

TEST_CASE("both application routes agree to near machine precision") {
    auto g = grid_ptr(512, 20.0);
    BackflowOperator sandwich(g, 1.0, Route::projection_sandwich);
    BackflowOperator hilbert(g, 1.0, Route::hilbert_route);

    double worst = 0.0;
    for (std::uint64_t seed = 100; seed < 120; ++seed) {
        auto s = random_state(g, seed);
        auto a = sandwich.apply_backflow(s);
        auto b = hilbert.apply_backflow(s);
        double d = 0.0;
        for (std::size_t j = 0; j < g->n_half; ++j)
            d = std::max(d, std::abs(a.amplitudes[j] - b.amplitudes[j]));
        worst = std::max(worst, d);
    }
    CHECK(worst < 1e-10);
}

TEST_CASE("dilation is exact, unitary, and gives the T-covariance") {
    auto g = grid_ptr(256, 16.0);
    auto s = random_state(g, 130);

    SUBCASE("mu = 1 is the identity") {
        auto d = apply_dilation(s, 1.0);
        for (std::size_t j = 0; j < g->n_half; ++j) CHECK(d.amplitudes[j] == s.amplitudes[j]);
        CHECK(d.grid->q_max == g->q_max);
    }
    SUBCASE("norm preserved on the rescaled grid") {
        auto d = apply_dilation(s, 2.0);
        CHECK(d.grid->q_max == doctest::Approx(8.0).epsilon(1e-15));
        CHECK(d.norm() == doctest::Approx(1.0).epsilon(1e-13));
    }
    SUBCASE("Rayleigh quotients of B_T and B_{mu^2 T} match through dilation") {
        // <phi, B_T phi> on (n, q)  ==  <V_mu phi, B_{mu^2 T} V_mu phi> on (n, q/mu)
        BackflowOperator op1(g, 1.0);
        const Complex q1 = inner(s, op1.apply_backflow(s));

        const double mu = 2.0;
        auto d = apply_dilation(s, mu);
        BackflowOperator op4(d.grid, mu * mu);
        const Complex q4 = inner(d, op4.apply_backflow(d));
        CHECK(std::abs(q1 - q4) < 1e-8);
    }
}

TEST_CASE("kernel entries match the closed form") {
    CHECK(kernel_entry(1.0, 2.0) == doctest::Approx(-std::sin(3.0) / std::numbers::pi).epsilon(1e-15));
    CHECK(kernel_entry(2.0, 1.0) == doctest::Approx(kernel_entry(1.0, 2.0)).epsilon(1e-15));
    CHECK(kernel_entry(3.0, 3.0) == doctest::Approx(-6.0 / std::numbers::pi).epsilon(1e-15));
    // continuity across the diagonal
    CHECK(kernel_entry(3.0, 3.0 + 1e-9) == doctest::Approx(kernel_entry(3.0, 3.0)).epsilon(1e-7));
}

TEST_CASE("dense discretization is symmetric and caps its size") {
    auto g = grid_ptr(64, 8.0);
    auto k = build_dense(g);
    CHECK(k.matrix.rows() == 64);
    for (int i = 0; i < 64; ++i)
        for (int j = 0; j <= i; ++j) CHECK(k.matrix(i, j) == k.matrix(j, i));
    CHECK_THROWS_AS(build_dense(grid_ptr(64, 8.0), 32), std::invalid_argument);
}

TEST_CASE("dense matvec agrees with adaptive quadrature of the integral operator") {
    // Independent oracle: (K phi)(k) = Integral_0^qmax kernel(k, q) phi(q) dq
    // evaluated by high-order composite Gauss-Legendre for a smooth probe.
    auto g = grid_ptr(4096, 20.0);
    const double k0 = 5.0, w = 1.0;
    StateVector s = gaussian_state(g, k0, w);
    // unnormalized continuum profile matching gaussian_state's shape
    const auto probe = [&](double q) { return std::exp(-(q - k0) * (q - k0) / (4.0 * w * w)); };
    // rescale the discrete state to the continuum profile (sample at the peak)
    const auto peak = static_cast<std::size_t>(k0 / g->dk);
    const double rescale = probe(g->k_values[peak]) / s.amplitudes[peak].real();

    auto dense = build_dense(g);
    auto ks = apply_dense(dense, s);

    for (double k : {1.0, 3.0, 5.0, 9.0, 14.0}) {
        const auto j = static_cast<std::size_t>(k / g->dk);  // nearest sample below
        const double kj = g->k_values[j];
        const double oracle =
            integrate([&](double q) { return kernel_entry(kj, q) * probe(q); }, 0.0, g->q_max,
                      400, 20);
        const double got = ks.amplitudes[j].real() * rescale;
        CHECK(got == doctest::Approx(oracle).epsilon(1e-6));
    }
}

TEST_CASE("matrix-free and dense eigenvalues agree on a moderate grid") {
    auto g = grid_ptr(1024, 25.0);
    BackflowOperator op(g);
    auto dense = build_dense(g);

    auto v0 = constant_state(g);
    auto mf = power_iterate([&](const StateVector& s) { return op.apply_shifted(s); }, v0, 400);
    auto dn = power_iterate([&](const StateVector& s) { return apply_dense_shifted(dense, s); },
                            v0, 400);
    CHECK(std::abs(mf.lambda() - dn.lambda()) < 2e-3);
}

TEST_CASE("large-T narrow forward probe approaches total backflow") {
    auto g = grid_ptr(4096, 20.0);
    StateVector s = gaussian_state(g, 5.0, 1.0);
    BackflowOperator op(g, 64.0);
    const Complex q = inner(s, op.apply_backflow(s));
    CHECK(q.real() < -0.95);
    CHECK(q.real() > -1.0 - 1e-10);
}
