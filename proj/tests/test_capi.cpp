#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "wkw.h"

namespace {
// goldens from the oracle build (cross-validated against the eigen route)
constexpr double kHbar16 = 2.383116095365513;
constexpr double kCellHbar = 2.3816205286344312;
constexpr double kCellXh = -0.2995663246232424;
}

TEST_CASE("version and error reporting")
{
    CHECK(std::string(wkw_version()) == "0.1.0");
    double out = 0.0;
    CHECK(wkw_p_crit(nullptr, &out) == WKW_ERR_INVALID_ARGUMENT);
    CHECK(std::string(wkw_last_error()).size() > 0);
}

TEST_CASE("potential lifecycle and validation")
{
    wkw_potential* p = nullptr;
    REQUIRE(wkw_potential_pendulum(1.0, &p) == WKW_OK);
    double v = 0.0;
    CHECK(wkw_potential_eval(p, 0, 0.5, &v) == WKW_OK);
    CHECK(v == doctest::Approx(2.0));
    CHECK(wkw_potential_eval(p, -1, 0.0, &v) == WKW_ERR_INVALID_ARGUMENT);

    wkw_potential_report rep;
    CHECK(wkw_potential_validate(p, 0, &rep) == WKW_OK);
    CHECK(rep.pass == 1);

    double pc = 0.0;
    CHECK(wkw_p_crit(p, &pc) == WKW_OK);
    CHECK(pc == doctest::Approx(4.0 / 3.14159265358979323846).epsilon(1e-8));
    wkw_potential_free(p);

    wkw_potential* bad = nullptr;
    CHECK(wkw_potential_pendulum(-1.0, &bad) == WKW_ERR_INVALID_ARGUMENT);
    CHECK(bad == nullptr);

    wkw_potential* th = nullptr;
    REQUIRE(wkw_potential_two_harmonic(1.0, 0.6, &th) == WKW_OK);
    CHECK(wkw_potential_validate(th, 0, &rep) == WKW_OK);
    CHECK(rep.pass == 0);
    CHECK(rep.minima_count >= 2);
    wkw_potential_free(th);
}

TEST_CASE("level creation, getters, domain errors")
{
    wkw_potential* p = nullptr;
    REQUIRE(wkw_potential_pendulum(1.0, &p) == WKW_OK);

    wkw_level* lvl = nullptr;
    CHECK(wkw_level_create(p, 1.2, 0, &lvl) == WKW_ERR_DOMAIN);  // below P_crit
    REQUIRE(wkw_level_create(p, 1.6, 0, &lvl) == WKW_OK);

    double hb = 0, q = 0, pp = 0, phi = 0, b = 0, x1 = 0, x2 = 0;
    CHECK(wkw_level_hbar(lvl, &hb) == WKW_OK);
    CHECK(hb == doctest::Approx(kHbar16).epsilon(1e-10));
    CHECK(wkw_level_rotation_number(lvl, &q) == WKW_OK);
    CHECK(q == doctest::Approx(1.454902913648644).epsilon(1e-10));
    CHECK(wkw_level_p_plus(lvl, 0.0, &pp) == WKW_OK);
    CHECK(pp == doctest::Approx(std::sqrt(2.0 * kHbar16)).epsilon(1e-10));
    CHECK(wkw_level_phi(lvl, -0.5, &phi) == WKW_OK);
    CHECK(std::abs(phi) <= 1e-11);
    CHECK(wkw_level_density(lvl, 0.3, &b) == WKW_OK);
    CHECK(b > 0.0);
    CHECK(wkw_level_branches(lvl, 1.5, &x1, &x2) == WKW_OK);
    CHECK(x1 == doctest::Approx(-x2).epsilon(1e-10));
    CHECK(wkw_level_branches(lvl, 5.0, &x1, &x2) == WKW_ERR_DOMAIN);

    wkw_level_free(lvl);
    wkw_potential_free(p);
}

TEST_CASE("cell solve golden regression and profile access")
{
    wkw_potential* p = nullptr;
    REQUIRE(wkw_potential_pendulum(1.0, &p) == WKW_OK);

    wkw_cell* cell = nullptr;
    REQUIRE(wkw_cell_solve(p, 1.6, 0.05, 0, 0, &cell) == WKW_OK);

    double hb = 0, xh = 0, r1 = 0, r2 = 0, tol = 0, norm = 0;
    size_t M = 0;
    CHECK(wkw_cell_hbar(cell, &hb) == WKW_OK);
    CHECK(std::abs(hb - kCellHbar) <= 1e-9);
    CHECK(wkw_cell_x_h(cell, &xh) == WKW_OK);
    CHECK(std::abs(xh - kCellXh) <= 1e-9);
    CHECK(wkw_cell_residuals(cell, &r1, &r2) == WKW_OK);
    CHECK(wkw_cell_tol_used(cell, &tol) == WKW_OK);
    CHECK(r1 <= tol);
    CHECK(r2 <= tol);
    CHECK(wkw_cell_normalization(cell, &norm) == WKW_OK);
    CHECK(norm == doctest::Approx(1.0).epsilon(1e-12));
    REQUIRE(wkw_cell_grid_size(cell, &M) == WKW_OK);
    CHECK(M == 256);

    std::vector<double> x(M), v(M), vs(M), a2(M);
    REQUIRE(wkw_cell_profiles(cell, x.data(), v.data(), vs.data(), a2.data(), M) == WKW_OK);
    CHECK(x.front() == -0.5);
    double mass = 0.0;
    for (double a : a2) mass += a;
    CHECK(mass / static_cast<double>(M) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(wkw_cell_profiles(cell, x.data(), nullptr, nullptr, nullptr, 10) ==
          WKW_ERR_INVALID_ARGUMENT);

    size_t nz = 0;
    CHECK(wkw_cell_zeros(cell, nullptr, &nz) == WKW_OK);
    CHECK(nz >= 2);

    double ch = 0.0;
    CHECK(wkw_cole_hopf_hbar(p, 1.6, 0.05, 512, hb, &ch) == WKW_OK);
    CHECK(std::abs(ch - hb) <= 1e-8);

    wkw_cell_free(cell);
    wkw_potential_free(p);
}

TEST_CASE("expansion handle")
{
    wkw_potential* p = nullptr;
    REQUIRE(wkw_potential_pendulum(1.0, &p) == WKW_OK);
    wkw_level* lvl = nullptr;
    REQUIRE(wkw_level_create(p, 1.6, 0, &lvl) == WKW_OK);
    wkw_expansion* e = nullptr;
    REQUIRE(wkw_expansion_create(lvl, 3, 512, &e) == WKW_OK);

    double h1 = 1.0, h2 = 0.0, res = 0.0;
    CHECK(wkw_expansion_hbar_coeff(e, 1, &h1) == WKW_OK);
    CHECK(std::abs(h1) <= 1e-11);
    CHECK(wkw_expansion_hbar_coeff(e, 2, &h2) == WKW_OK);
    CHECK(h2 == doctest::Approx(-0.627725075131363).epsilon(1e-8));
    CHECK(wkw_expansion_hbar_coeff(e, 9, &h2) == WKW_ERR_INVALID_ARGUMENT);
    CHECK(wkw_expansion_residual(e, 0.05, 0, &res) == WKW_OK);
    CHECK(res > 0.0);

    size_t M = 0;
    REQUIRE(wkw_expansion_grid_size(e, &M) == WKW_OK);
    std::vector<double> sigma(M);
    double ch = 0, Ch = 0, smin = 0, smax = 0;
    CHECK(wkw_expansion_sigma(e, 0.1, sigma.data(), M, &ch, &Ch, &smin, &smax) == WKW_OK);
    CHECK(smin > 0.0);
    double mass = 0.0;
    for (double s : sigma) mass += s;
    CHECK(mass / static_cast<double>(M) == doctest::Approx(1.0).epsilon(1e-10));

    wkw_expansion_free(e);
    wkw_level_free(lvl);
    wkw_potential_free(p);
}

TEST_CASE("wigner and symbols through the C surface")
{
    wkw_potential* p = nullptr;
    REQUIRE(wkw_potential_pendulum(1.0, &p) == WKW_OK);
    wkw_cell* cell = nullptr;
    REQUIRE(wkw_cell_solve(p, 1.6, 0.1, 512, 0, &cell) == WKW_OK);
    wkw_wigner* w = nullptr;
    REQUIRE(wkw_wigner_create(cell, 0, 0, 1, &w) == WKW_OK);

    size_t M = 0;
    int mlo = 0, mhi = 0;
    CHECK(wkw_wigner_dims(w, &M, &mlo, &mhi) == WKW_OK);
    CHECK(M == 512);
    CHECK(mlo < 0);
    CHECK(mhi > 0);
    double mass = 0, tail = 0, mi = 0;
    CHECK(wkw_wigner_mass(w, &mass, &tail) == WKW_OK);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-5));
    CHECK(tail <= 1e-6);
    CHECK(wkw_wigner_max_imag(w, &mi) == WKW_OK);
    CHECK(mi <= 1e-10);

    std::vector<double> marg(M);
    CHECK(wkw_wigner_x_marginal(w, marg.data(), M) == WKW_OK);
    CHECK(wkw_wigner_p_marginal(w, marg.data(), M) == WKW_OK);

    double re = 0, im = 0;
    CHECK(wkw_wigner_value(w, 0, 0, &re, &im) == WKW_OK);
    CHECK(wkw_wigner_value(w, 0, 100000, &re, &im) == WKW_ERR_INVALID_ARGUMENT);

    wkw_symbol* f = nullptr;
    REQUIRE(wkw_symbol_bump(1, 0, 0, 1.2, 1.9, &f) == WKW_OK);
    double If = 0.0;
    CHECK(wkw_wigner_integrate(w, f, &If) == WKW_OK);
    CHECK(If > 0.0);

    double fv = 0.0;
    CHECK(wkw_symbol_eval(f, 0.0, 1.55, &fv) == WKW_OK);
    CHECK(fv > 0.9);

    wkw_symbol_free(f);
    wkw_wigner_free(w);
    wkw_cell_free(cell);
    wkw_potential_free(p);
}

TEST_CASE("phase family through the C surface")
{
    wkw_potential* p = nullptr;
    REQUIRE(wkw_potential_pendulum(1.0, &p) == WKW_OK);
    wkw_level* lvl = nullptr;
    REQUIRE(wkw_level_create(p, 1.6, 0, &lvl) == WKW_OK);

    double pp02 = 0.0;
    REQUIRE(wkw_level_p_plus(lvl, 0.2, &pp02) == WKW_OK);
    wkw_phase* ph = nullptr;
    REQUIRE(wkw_phase_create(lvl, pp02 / (2.0 * 3.14159265358979323846), &ph) == WKW_OK);

    double s = 1.0;
    CHECK(wkw_phase_s(ph, 0.2, 0.0, &s) == WKW_OK);
    CHECK(std::abs(s) <= 1e-12);

    double xy[8];
    size_t count = 4;
    CHECK(wkw_phase_critical_points(ph, xy, &count) == WKW_OK);
    CHECK(count == 4);

    wkw_symbol* f = nullptr;
    REQUIRE(wkw_symbol_plateau(1, 0, 0, 1.0, 1.2, 2.0, 2.1, &f) == WKW_OK);
    double j1 = 0, j2r = 0, j2i = 0, tr = 0, ti = 0;
    CHECK(wkw_phase_stationary_estimate(ph, f, 0.05, 0.45, &j1, &j2r, &j2i, &tr, &ti) == WKW_OK);
    CHECK(j1 > 0.0);
    double re = 0, im = 0, ee = 0;
    CHECK(wkw_phase_direct_integral(ph, f, 0.05, 0.45, 0, &re, &im, &ee) == WKW_OK);
    CHECK(std::abs(re) > 0.0);

    wkw_symbol_free(f);
    wkw_phase_free(ph);
    wkw_level_free(lvl);
    wkw_potential_free(p);
}

TEST_CASE("fit order helper")
{
    const double h[4] = {0.16, 0.08, 0.04, 0.02};
    const double e2[4] = {2.56e-2, 6.4e-3, 1.6e-3, 4.0e-4};  // exact order 2
    double order = 0, resid = 0;
    CHECK(wkw_fit_order(h, e2, 4, &order, &resid) == WKW_OK);
    CHECK(order == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(resid <= 1e-10);
}
