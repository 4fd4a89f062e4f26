#include <doctest.h>

#include "oracles.hpp"
#include "wkw/potential.hpp"

using namespace wkw;

TEST_CASE("pendulum validates and has the expected curvature")
{
    PendulumPotential V(1.0);
    auto rep = validate(V);
    CHECK(rep.pass);
    CHECK(rep.second_derivative_at_min == doctest::Approx(sqr(two_pi)).epsilon(1e-13));
    CHECK(V(0.5) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(rep.minima_count == 1);
    CHECK(rep.symmetry_residual <= 1e-12);
}

TEST_CASE("two-harmonic with large beta fails the unique-minimum hypothesis")
{
    TwoHarmonicPotential V(1.0, 0.6);
    auto rep = validate(V);
    CHECK_FALSE(rep.pass);
    CHECK(rep.minima_count >= 2);
    CHECK(rep.message.find("minimum") != std::string::npos);

    // below the kappa/4 threshold it passes
    TwoHarmonicPotential ok(1.0, 0.2);
    CHECK(validate(ok).pass);
}

TEST_CASE("zero potential flagged as degenerate")
{
    ZeroPotential V;
    auto rep = validate(V);
    CHECK_FALSE(rep.pass);
    CHECK(rep.message.find("degenerate") != std::string::npos);
}

TEST_CASE("built-in derivative chains agree with finite differences")
{
    // V' vs FD of V, V'' vs FD of V', V''' vs FD of V'' at O(d^2), d = 1e-5
    std::vector<PotentialPtr> pots = {make_potential("pendulum", 1.0),
                                      make_potential("pendulum", 2.5),
                                      make_potential("two_harmonic", 1.0, 0.2)};
    oracle::Lcg rng(123);
    const double d = 1e-5;
    for (const auto& Vp : pots) {
        const SymmetricPotential& V = *Vp;
        // 1e-6 is calibrated to unit curvature; scale with V''(0)
        const double tol = 1e-6 * std::max(1.0, V.d2(0.0) / sqr(two_pi));
        for (int i = 0; i < 25; ++i) {
            const double x = 0.5 * rng.sym();
            for (int ord = 0; ord <= 2; ++ord) {
                const double fd = oracle::central_diff(
                    [&](double t) { return V.derivative(ord, t); }, x, d);
                CHECK(std::abs(fd - V.derivative(ord + 1, x)) <= tol);
            }
        }
    }
}

TEST_CASE("potential factory")
{
    CHECK(make_potential("pendulum")->name() == "pendulum");
    CHECK(make_potential("zero")->v_max() == 0.0);
    CHECK_THROWS_AS(make_potential("unknown"), std::invalid_argument);
    CHECK_THROWS_AS(make_potential("pendulum", -1.0), std::invalid_argument);
}

TEST_CASE("jets carry exact higher derivatives")
{
    PendulumPotential V(1.3);
    Jet j = V.jet(0.17, 6);
    double fact = 1.0;
    for (std::size_t k = 0; k <= 6; ++k) {
        if (k >= 2) fact *= static_cast<double>(k);
        CHECK(j.c[k] * fact == doctest::Approx(V.derivative(static_cast<int>(k), 0.17))
                                   .epsilon(1e-12));
    }
}
