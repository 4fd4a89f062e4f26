#include <doctest.h>

#include "oracles.hpp"
#include "wkw/expansion.hpp"
#include "wkw/orderfit.hpp"

using namespace wkw;

TEST_CASE("flat potential: the series collapses")
{
    auto level = hbar_of_P(make_potential("zero"), 1.3);
    auto s = ExpansionSeries::build(level, 4, 256);
    CHECK(s.hbar_coeff(0) == doctest::Approx(0.845).epsilon(1e-12));
    for (int j = 1; j <= 4; ++j) CHECK(std::abs(s.hbar_coeff(j)) <= 1e-13);
    // v_1 = (1/2) ln P constant, v_j = 0 for j >= 2
    for (std::size_t i = 0; i < 256; ++i) {
        CHECK(s.v_on_grid(1)[i] == doctest::Approx(0.5 * std::log(1.3)).epsilon(1e-13));
        CHECK(std::abs(s.v_on_grid(2)[i]) <= 1e-12);
        CHECK(std::abs(s.v_on_grid(0)[i]) <= 1e-12);
    }
    for (double h : {0.3, 0.1, 0.02}) CHECK(s.residual(h) <= 1e-12);
}

TEST_CASE("pendulum series: first-order constant vanishes, golden second order")
{
    auto level = hbar_of_P(make_potential("pendulum"), 1.6);
    auto s = ExpansionSeries::build(level, 3, 1024);

    CHECK(std::abs(s.hbar_coeff(1)) <= 1e-11);
    // golden from the independent quadrature oracle
    CHECK(s.hbar_coeff(2) == doctest::Approx(-0.627725075131363).epsilon(1e-9));

    // v_1(0) = (1/2) ln p_plus(0), p_plus(0) = sqrt(2 Hbar)
    CHECK(s.v(1, 0.0) ==
          doctest::Approx(0.5 * std::log(std::sqrt(2.0 * level.hbar()))).epsilon(1e-11));

    // the third-order constant is expected to vanish by the h -> -h symmetry
    // of the two equations (reported, no theory threshold)
    CHECK(std::abs(s.hbar_coeff(3)) <= 1e-9);

    // two routes to v_1': the order-1 recursion vs the closed form
    // (1/2) p_plus'/p_plus
    PeriodicGrid grid(1024);
    for (std::size_t j = 0; j < 1024; j += 31) {
        const double x = grid.node(j);
        const double closed = 0.5 * level.p_plus_derivative(x) / level.p_plus(x);
        CHECK(s.v_prime_on_grid(1)[j] == doctest::Approx(closed).epsilon(1e-11));
    }
}

TEST_CASE("order-k relation holds pointwise after construction")
{
    auto level = hbar_of_P(make_potential("pendulum"), 1.6);
    const std::size_t M = 512;
    auto s = ExpansionSeries::build(level, 4, M);
    PeriodicGrid grid(M);
    // re-substitution: p+ v_k' + (1/2) sum_{i+j=k} v_i' v_j' - v_{k-1}''/2 = Hbar_k
    for (int k = 1; k <= 4; ++k) {
        double worst = 0.0;
        for (std::size_t j = 0; j < M; ++j) {
            const double pp = level.p_plus(grid.node(j));
            double quad = 0.0;
            for (int i = 1; i < k; ++i)
                quad += s.v_prime_on_grid(i)[j] * s.v_prime_on_grid(k - i)[j];
            const double lhs = pp * s.v_prime_on_grid(k)[j] + 0.5 * quad -
                               0.5 * s.v_second_on_grid(k - 1)[j];
            worst = std::max(worst, std::abs(lhs - s.hbar_coeff(k)));
        }
        CHECK(worst <= 1e-9);
    }
}

TEST_CASE("compatibility: each v_k' has zero mean")
{
    auto level = hbar_of_P(make_potential("pendulum"), 1.6);
    auto s = ExpansionSeries::build(level, 4, 512);
    for (int k = 1; k <= 4; ++k) {
        const double mean = quad_periodic(std::span<const double>(s.v_prime_on_grid(k)));
        CHECK(std::abs(mean) <= 1e-9);
    }
}

TEST_CASE("assembled series and residual orders")
{
    auto level = hbar_of_P(make_potential("pendulum"), 1.6);
    const std::size_t M = 512;
    auto s = ExpansionSeries::build(level, 2, M);

    // h = 0: vhat = v_0 and the classical residual is at solver precision
    auto v0 = s.assemble(0.0);
    for (std::size_t j = 0; j < M; ++j)
        CHECK(v0[j] == doctest::Approx(s.v_on_grid(0)[j]).epsilon(1e-14));
    {
        auto s0 = ExpansionSeries::build(level, 0, M);
        CHECK(s0.residual(0.0) <= 1e-9);
    }

    // N = 1: vhat = v0 + (h/2) ln p_plus
    {
        auto s1 = ExpansionSeries::build(level, 1, M);
        const double h = 0.1;
        auto v = s1.assemble(h);
        PeriodicGrid grid(M);
        for (std::size_t j = 0; j < M; j += 37) {
            const double expect = s1.v_on_grid(0)[j] +
                                  0.5 * h * std::log(level.p_plus(grid.node(j)));
            CHECK(v[j] == doctest::Approx(expect).epsilon(1e-12));
        }
    }

    // Hhat^2_h - Hbar_0 = h^2 Hbar_2 up to the (tiny) odd coefficient
    const double h0 = 0.07;
    CHECK(s.hbar_sum(h0) - s.hbar_coeff(0) ==
          doctest::Approx(h0 * h0 * s.hbar_coeff(2)).epsilon(1e-10));

    // dyadic order fit of the N=2 residual: O(h^3)
    std::vector<double> hs = {0.1, 0.05, 0.025};
    std::vector<double> res;
    for (double h : hs) res.push_back(s.residual(h));
    for (std::size_t i = 0; i + 1 < hs.size(); ++i) {
        const double ratio = std::log2(res[i] / res[i + 1]);
        CHECK(ratio >= 2.6);
        CHECK(ratio <= 3.4);
    }
}

TEST_CASE("starred series: sign rule and matching residual order")
{
    auto level = hbar_of_P(make_potential("pendulum"), 1.6);
    auto s = ExpansionSeries::build(level, 2, 512);

    // v*_0 = v_0, v*_1 = -v_1 on the assembled series
    const double h = 0.08;
    auto plain = s.assemble(h);
    auto starred = s.assemble(h, true);
    for (std::size_t j = 0; j < 512; j += 41) {
        const double expect = s.v_on_grid(0)[j] - h * s.v_on_grid(1)[j] +
                              h * h * s.v_on_grid(2)[j];
        CHECK(starred[j] == doctest::Approx(expect).epsilon(1e-12));
        CHECK(plain[j] + starred[j] ==
              doctest::Approx(2.0 * (s.v_on_grid(0)[j] + h * h * s.v_on_grid(2)[j]))
                  .epsilon(1e-12));
    }

    // the starred residual scales with the same constants
    for (double hh : {0.1, 0.05, 0.025}) {
        const double a = s.residual(hh, false), b = s.residual(hh, true);
        CHECK(b <= 3.0 * a);
        CHECK(a <= 3.0 * b);
    }
}

TEST_CASE("order cap and argument validation")
{
    auto level = hbar_of_P(make_potential("pendulum"), 1.6);
    CHECK_THROWS_AS(ExpansionSeries::build(level, -1, 256), std::invalid_argument);
    CHECK_THROWS_AS(ExpansionSeries::build(level, 7, 256), std::invalid_argument);
    auto s = ExpansionSeries::build(level, 6, 256);  // the cap itself works
    CHECK(s.order() == 6);
    // the coefficients grow factorially (asymptotic series), so only the
    // order of the residual is meaningful at the cap
    const double ratio = std::log2(s.residual(0.025) / s.residual(0.0125));
    CHECK(ratio >= 6.5);
    CHECK(ratio <= 7.5);
}
