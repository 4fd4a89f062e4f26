// Acceptance suite: runs every criterion at its stated tolerance and prints
// one pass/fail line each.  Exit code 0 iff all pass.
#include <chrono>
#include <cstdarg>
#include <cstdio>
#include <vector>

#include "wkw/oscillatory.hpp"
#include "wkw/wigner.hpp"

using namespace wkw;

namespace {

int g_failures = 0;

void line(int id, bool pass, const std::string& what)
{
    std::printf("%s  criterion %2d: %s\n", pass ? "PASS" : "FAIL", id, what.c_str());
    if (!pass) ++g_failures;
}

std::string fmt(const char* f, ...)
{
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// 1. closed-form anchor: P_crit = 4/pi
void criterion_1()
{
    auto t0 = std::chrono::steady_clock::now();
    const double pc = p_crit(PendulumPotential(1.0));
    const double dt = seconds_since(t0);
    const double err = std::abs(pc - 4.0 / pi);
    line(1, err <= 1e-8 && dt < 1.0,
         fmt("P_crit = %.12f, |err| = %.2e (tol 1e-8), %.2f s (< 1 s)", pc, err, dt));
}

// 2. degenerate oracle: flat potential, everything exact
void criterion_2()
{
    auto t0 = std::chrono::steady_clock::now();
    auto Z = make_potential("zero");
    bool ok = true;
    double worst_h = 0.0;
    for (double h : {0.2, 0.1, 0.05}) {
        CellSolution sol = solve_cell(Z, 1.3, h);
        worst_h = std::max(worst_h, std::abs(sol.hbar() - 0.845));
        ok = ok && worst_h <= 1e-11;
        for (double v : sol.v()) ok = ok && std::abs(v) <= 1e-11;
        for (double v : sol.vstar()) ok = ok && std::abs(v) <= 1e-11;
    }
    CellSolution sol = solve_cell(Z, 1.3, 0.1);
    WignerOptions wopt;
    wopt.window_half_width = 1.0;
    WignerTable tab = wigner_transform(WaveState(sol), wopt);
    double werr = 0.0;
    for (std::size_t j = 0; j < tab.grid().size(); ++j)
        for (int m = tab.lattice().m_lo; m <= tab.lattice().m_hi; ++m)
            werr = std::max(werr, std::abs(tab.value(j, m) - ((m == 0) ? 1.0 : 0.0)));
    ok = ok && werr <= 1e-11;

    TestSymbol f = TestSymbol::bump_x_bump_p(-0.3, 0.2, 1.0, 1.7);
    const double If = integrate_symbol(tab, f);
    double ref = 0.0;
    for (std::size_t j = 0; j < tab.grid().size(); ++j) ref += f(tab.grid().node(j), 1.3);
    ref /= static_cast<double>(tab.grid().size());
    const double ierr = std::abs(If - ref);
    ok = ok && ierr <= 1e-11;
    const double dt = seconds_since(t0);
    line(2, ok && dt < 5.0,
         fmt("flat oracle: |Hbar err| = %.1e, |W - delta| = %.1e, |I_f err| = %.1e, %.2f s",
             worst_h, werr, ierr, dt));
}

// 3. two-path agreement: Newton vs the linearized eigenvalue route
void criterion_3()
{
    auto V = make_potential("pendulum");
    CellOptions opt;
    opt.grid = 512;
    double worst = 0.0;
    for (double h : {0.2, 0.1, 0.05}) {
        CellSolution sol = solve_cell(V, 1.6, h, opt);
        const double ch = cole_hopf_hbar(*V, 1.6, h, 512, sol.hbar() + 1e-4);
        worst = std::max(worst, std::abs(sol.hbar() - ch));
    }
    line(3, worst <= 1e-8, fmt("max |Hbar_newton - Hbar_eigen| = %.2e (tol 1e-8)", worst));
}

// 4. expansion orders on the dyadic sweep
void criterion_4()
{
    auto V = make_potential("pendulum");
    const std::vector<double> hs = {0.16, 0.08, 0.04, 0.02};
    std::vector<double> e_hb, e_c0;
    double hbar1 = 0.0, hbar3 = 0.0;
    for (double h : hs) {
        CellSolution sol = solve_cell(V, 1.6, h);
        auto level = hbar_of_P(V, 1.6, {1e-10, sol.grid().size(), 1e-3});
        auto series = ExpansionSeries::build(level, 3, sol.grid().size());
        hbar1 = series.hbar_coeff(1);
        hbar3 = series.hbar_coeff(3);
        // order-2 truncation for the criterion's metrics
        const double hhat2 = series.hbar_coeff(0) + h * series.hbar_coeff(1) +
                             h * h * series.hbar_coeff(2);
        e_hb.push_back(std::abs(sol.hbar() - hhat2));
        auto s2 = ExpansionSeries::build(level, 2, sol.grid().size());
        e_c0.push_back(expansion_error(sol, s2).c0_seminorm);
    }
    const double o_hb = fit_order(hs, e_hb).order;
    const double o_c0 = fit_order(hs, e_c0).order;
    const bool ok = o_hb >= 2.6 && o_c0 >= 1.1 && std::abs(hbar1) <= 1e-11;
    line(4, ok,
         fmt("order(|Hbar_h - Hhat^2|) = %.2f (>= 2.6), order(C0 seminorm) = %.2f (>= 1.1), "
             "Hbar_1 = %.1e (<= 1e-11), Hbar_3 = %.1e (reported)",
             o_hb, o_c0, hbar1, hbar3));
}

// 5. Wigner identities at M = 1024
void criterion_5()
{
    auto t0 = std::chrono::steady_clock::now();
    auto V = make_potential("pendulum");
    CellOptions copt;
    copt.grid = 1024;
    CellSolution sol = solve_cell(V, 1.6, 0.05, copt);
    WaveState st(sol);
    WignerTable tab = wigner_transform(st, {});
    const double mass_err = std::abs(tab.mass_full() - 1.0);

    double xerr = 0.0;
    for (std::size_t j = 0; j < 1024; ++j)
        xerr = std::max(xerr, std::abs(tab.x_marginal()[j] - sqr(st.amplitude()[j])));

    auto [amp2, w2] = st.refined(2);
    PeriodicGrid g2(2048);
    double perr = 0.0;
    for (int m = tab.lattice().m_lo; m <= tab.lattice().m_hi; ++m) {
        complex acc(0.0, 0.0);
        for (std::size_t j = 0; j < 2048; ++j) {
            const double ph = w2[j] / 0.05 - two_pi * m * g2.node(j);
            acc += amp2[j] * complex(std::cos(ph), std::sin(ph));
        }
        acc /= 2048.0;
        perr = std::max(perr,
                        std::abs(tab.p_marginal()[static_cast<std::size_t>(m + 512)] -
                                 std::norm(acc)));
    }
    const double dt = seconds_since(t0);
    const bool ok = mass_err <= 1e-6 && xerr <= 1e-8 && perr <= 1e-8 &&
                    tab.max_imag() <= 1e-10 && dt < 30.0;
    line(5, ok,
         fmt("mass err = %.1e (1e-6, tail %.1e), x-marg = %.1e (1e-8), p-marg = %.1e (1e-8), "
             "imag = %.1e (1e-10), %.1f s (< 30)",
             mass_err, tab.tail_mass(), xerr, perr, tab.max_imag(), dt));
}

// 6. semiclassical limit on the level: decreasing error, sqrt-h-type order
void criterion_6()
{
    auto V = make_potential("pendulum");
    auto level = hbar_of_P(V, 1.6);
    const double pmax = level.p_max(), span = pmax - level.p_min();
    // bump on the upper part of the level: the error is dominated by the
    // square-root turning-point layer near p_max
    TestSymbol f = TestSymbol::bump_p(pmax - 0.32 * span, pmax - 0.02 * span);
    const std::vector<double> hs = {0.16, 0.08, 0.04, 0.02};
    ConvergenceReport rep = convergence_sweep(V, 1.6, f, hs, {});
    bool dec = true;
    for (std::size_t i = 1; i < rep.rows.size(); ++i)
        dec = dec && (rep.rows[i].abs_error < rep.rows[i - 1].abs_error);
    const bool ok = dec && rep.fit.order >= 0.3 && rep.fit.order <= 0.9;
    line(6, ok,
         fmt("limit = %.6f, errors %.3e %.3e %.3e %.3e %s, order = %.3f (in [0.3, 0.9])",
             rep.limit, rep.rows[0].abs_error, rep.rows[1].abs_error, rep.rows[2].abs_error,
             rep.rows[3].abs_error, dec ? "decreasing" : "NOT decreasing", rep.fit.order));
}

// 7. off-level decay through the full pipeline
void criterion_7()
{
    auto V = make_potential("pendulum");
    auto level = hbar_of_P(V, 1.6);
    TestSymbol f = TestSymbol::bump_p(level.p_max() + 0.3, level.p_max() + 1.1);
    const std::vector<double> hs = {0.16, 0.08, 0.04, 0.02};
    ConvergenceReport rep = convergence_sweep(V, 1.6, f, hs, {});
    std::vector<double> mags;
    for (const auto& r : rep.rows) mags.push_back(std::abs(r.value));
    const double order = fit_order(hs, mags).order;
    line(7, rep.limit == 0.0 && order >= 0.8,
         fmt("limit = %g, |I_f| decay order = %.2f (>= 0.8)", rep.limit, order));
}

// 8. stationary-phase cross-validation and the degeneracy law
void criterion_8()
{
    auto V = make_potential("pendulum");
    auto level = hbar_of_P(V, 1.6);
    const double pmin = level.p_min(), pmax = level.p_max(), span = pmax - pmin;
    const double h = 0.02;

    PhaseFamily fam(level, level.p_plus(0.3) / two_pi);
    TestSymbol f = TestSymbol::bump_x_plateau_p(-0.45, -0.15, pmin + 0.02 * span,
                                                pmin + 0.07 * span, pmax - 0.07 * span,
                                                pmax - 0.02 * span);
    StationaryPhaseEstimate est = stationary_phase_estimate(fam, f, h, 0.3);
    OscillatoryResult dir = direct_oscillatory_integral(fam, f, h, 0.3);
    const double rel = std::abs(dir.value - est.total) / std::abs(dir.value);
    const bool sp_ok = rel <= 1.5 * std::sqrt(h);

    std::vector<double> ratios;
    for (double gapf : {0.1, 0.05, 0.025}) {
        const double gap = gapf * span;
        auto [x1, x2] = level.branches(pmax - gap);
        ratios.push_back(std::abs(level.p_plus_derivative(2.0 * x1)) / std::sqrt(gap));
    }
    bool law_ok = true;
    for (std::size_t i = 1; i < ratios.size(); ++i)
        law_ok = law_ok && std::abs(ratios[i] - ratios[i - 1]) <= 0.10 * ratios[i - 1];
    line(8, sp_ok && law_ok,
         fmt("rel error = %.3f (<= %.3f), degeneracy ratios %.3f %.3f %.3f (10%% window)", rel,
             1.5 * std::sqrt(h), ratios[0], ratios[1], ratios[2]));
}

// 9. normalization-point identity (derived): p_plus(x_h) -> dHdP, a^2 -> b
void criterion_9()
{
    auto V = make_potential("pendulum");
    auto level = hbar_of_P(V, 1.6);
    const double Q = level.dHdP();
    double gap008 = 0, gap002 = 0;
    double sup_prev = 1e300;
    bool sup_dec = true;
    for (double h : {0.08, 0.04, 0.02}) {
        CellSolution sol = solve_cell(V, 1.6, h);
        const double gap = std::abs(level.p_plus(sol.x_h()) - Q);
        if (h == 0.08) gap008 = gap;
        if (h == 0.02) gap002 = gap;
        WaveState st(sol);
        double sup = 0.0;
        for (std::size_t j = 0; j < st.grid().size(); ++j)
            sup = std::max(sup, std::abs(sqr(st.amplitude()[j]) -
                                         level.mather_density(st.grid().node(j))));
        sup_dec = sup_dec && (sup < sup_prev);
        sup_prev = sup;
    }
    const bool ok = gap002 < gap008 && sup_dec;
    line(9, ok,
         fmt("|p_plus(x_h) - dHdP|: %.2e (h=0.08) -> %.2e (h=0.02); sup|a^2 - b| %s, last %.2e",
             gap008, gap002, sup_dec ? "decreasing" : "NOT decreasing", sup_prev));
}

// 10. invariant density: positive, unit mass, approaches dHdP / p_plus
void criterion_10()
{
    auto V = make_potential("pendulum");
    bool pos = true, mass_ok = true, dec = true;
    double prev = 1e300, last_mass_err = 0.0;
    for (double h : {0.2, 0.1, 0.05}) {
        const std::size_t M = 1024;
        auto level = hbar_of_P(V, 1.6, {1e-10, M, 1e-3});
        auto series = ExpansionSeries::build(level, 2, M);
        SigmaDensity sd = sigma_invariant(series, h);
        pos = pos && sd.min > 0.0;
        double mass = 0.0, sup = 0.0;
        for (std::size_t j = 0; j < M; ++j) {
            mass += sd.values[j];
            sup = std::max(sup, std::abs(sd.values[j] -
                                         level.mather_density(series.grid().node(j))));
        }
        mass /= static_cast<double>(M);
        last_mass_err = std::abs(mass - 1.0);
        mass_ok = mass_ok && last_mass_err <= 1e-10;
        dec = dec && (sup < prev);
        prev = sup;
    }
    line(10, pos && mass_ok && dec,
         fmt("sigma > 0: %s, |mass - 1| = %.1e (<= 1e-10), sup|sigma - b| decreasing: %s "
             "(last %.2e)",
             pos ? "yes" : "no", last_mass_err, dec ? "yes" : "no", prev));
}

}  // namespace

int main()
{
    auto t0 = std::chrono::steady_clock::now();
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    std::printf("%d/10 criteria passed in %.1f s\n", 10 - g_failures, seconds_since(t0));
    return g_failures == 0 ? 0 : 1;
}
