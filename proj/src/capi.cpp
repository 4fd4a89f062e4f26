#include "wkw.h"

#include <cstring>
#include <optional>

#include "wkw/cell.hpp"
#include "wkw/oscillatory.hpp"
#include "wkw/wigner.hpp"

namespace {

thread_local std::string g_last_error;

void set_error(const char* what) { g_last_error = what ? what : ""; }

template <typename F>
wkw_status guarded(F&& fn) noexcept
{
    try {
        fn();
        g_last_error.clear();
        return WKW_OK;
    } catch (const std::invalid_argument& e) {
        set_error(e.what());
        return WKW_ERR_INVALID_ARGUMENT;
    } catch (const std::domain_error& e) {
        set_error(e.what());
        return WKW_ERR_DOMAIN;
    } catch (const wkw::SolverError& e) {
        set_error(e.what());
        return WKW_ERR_SOLVER;
    } catch (const std::exception& e) {
        set_error(e.what());
        return WKW_ERR_INTERNAL;
    } catch (...) {
        set_error("unknown error");
        return WKW_ERR_INTERNAL;
    }
}

wkw_status bad_arg(const char* what) noexcept
{
    set_error(what);
    return WKW_ERR_INVALID_ARGUMENT;
}

}  // namespace

struct wkw_potential {
    wkw::PotentialPtr p;
};
struct wkw_level {
    wkw::ClassicalLevel level;
};
struct wkw_symbol {
    wkw::TestSymbol symbol;
};
struct wkw_expansion {
    wkw::ExpansionSeries series;
};
struct wkw_cell {
    wkw::CellSolution sol;
};
struct wkw_wigner {
    wkw::WignerTable table;
};
struct wkw_phase {
    wkw::PhaseFamily family;
};

extern "C" {

const char* wkw_version(void) { return "0.1.0"; }
const char* wkw_last_error(void) { return g_last_error.c_str(); }

/* ---------------- potentials ---------------- */

wkw_status wkw_potential_pendulum(double kappa, wkw_potential** out)
{
    if (!out) return bad_arg("null out");
    return guarded([&] { *out = new wkw_potential{std::make_shared<wkw::PendulumPotential>(kappa)}; });
}

wkw_status wkw_potential_two_harmonic(double kappa, double beta, wkw_potential** out)
{
    if (!out) return bad_arg("null out");
    return guarded([&] {
        *out = new wkw_potential{std::make_shared<wkw::TwoHarmonicPotential>(kappa, beta)};
    });
}

wkw_status wkw_potential_zero(wkw_potential** out)
{
    if (!out) return bad_arg("null out");
    return guarded([&] { *out = new wkw_potential{std::make_shared<wkw::ZeroPotential>()}; });
}

void wkw_potential_free(wkw_potential* p) { delete p; }

wkw_status wkw_potential_eval(const wkw_potential* p, int order, double x, double* out)
{
    if (!p || !out) return bad_arg("null argument");
    if (order < 0) return bad_arg("negative derivative order");
    return guarded([&] { *out = p->p->derivative(order, x); });
}

wkw_status wkw_potential_validate(const wkw_potential* p, size_t samples,
                                  wkw_potential_report* out)
{
    if (!p || !out) return bad_arg("null argument");
    return guarded([&] {
        wkw::PotentialReport rep = wkw::validate(*p->p, samples ? samples : 2048);
        out->pass = rep.pass ? 1 : 0;
        out->symmetry_residual = rep.symmetry_residual;
        out->second_derivative_at_min = rep.second_derivative_at_min;
        out->minima_count = rep.minima_count;
        out->min_location = rep.min_location;
        std::snprintf(out->message, sizeof(out->message), "%s", rep.message.c_str());
    });
}

wkw_status wkw_p_crit(const wkw_potential* p, double* out)
{
    if (!p || !out) return bad_arg("null argument");
    return guarded([&] { *out = wkw::p_crit(*p->p); });
}

/* ---------------- classical level ---------------- */

wkw_status wkw_level_create(const wkw_potential* p, double P, double tol, wkw_level** out)
{
    if (!p || !out) return bad_arg("null argument");
    return guarded([&] {
        wkw::LevelOptions opt;
        if (tol > 0.0) opt.tol = tol;
        *out = new wkw_level{wkw::ClassicalLevel::solve(p->p, P, opt)};
    });
}

void wkw_level_free(wkw_level* l) { delete l; }

#define WKW_LEVEL_GETTER(name, expr)                                    \
    wkw_status name(const wkw_level* l, double* out)                    \
    {                                                                   \
        if (!l || !out) return bad_arg("null argument");                \
        return guarded([&] { *out = (expr); });                         \
    }

WKW_LEVEL_GETTER(wkw_level_hbar, l->level.hbar())
WKW_LEVEL_GETTER(wkw_level_p_min, l->level.p_min())
WKW_LEVEL_GETTER(wkw_level_p_max, l->level.p_max())
WKW_LEVEL_GETTER(wkw_level_rotation_number, l->level.dHdP())

#undef WKW_LEVEL_GETTER

wkw_status wkw_level_p_plus(const wkw_level* l, double x, double* out)
{
    if (!l || !out) return bad_arg("null argument");
    return guarded([&] { *out = l->level.p_plus(x); });
}

wkw_status wkw_level_phi(const wkw_level* l, double x, double* out)
{
    if (!l || !out) return bad_arg("null argument");
    return guarded([&] { *out = l->level.phi(x); });
}

wkw_status wkw_level_phi_prime(const wkw_level* l, double x, double* out)
{
    if (!l || !out) return bad_arg("null argument");
    return guarded([&] { *out = l->level.phi_prime(x); });
}

wkw_status wkw_level_density(const wkw_level* l, double x, double* out)
{
    if (!l || !out) return bad_arg("null argument");
    return guarded([&] { *out = l->level.mather_density(x); });
}

wkw_status wkw_level_branches(const wkw_level* l, double p, double* x1, double* x2)
{
    if (!l || !x1 || !x2) return bad_arg("null argument");
    return guarded([&] {
        auto [a, b] = l->level.branches(p);
        *x1 = a;
        *x2 = b;
    });
}

/* ---------------- symbols ---------------- */

wkw_status wkw_symbol_bump(int x_const, double xlo, double xhi, double plo, double phi,
                           wkw_symbol** out)
{
    if (!out) return bad_arg("null out");
    return guarded([&] {
        if (x_const)
            *out = new wkw_symbol{wkw::TestSymbol::bump_p(plo, phi)};
        else
            *out = new wkw_symbol{wkw::TestSymbol::bump_x_bump_p(xlo, xhi, plo, phi)};
    });
}

wkw_status wkw_symbol_plateau(int x_const, double xlo, double xhi, double plo, double pilo,
                              double pihi, double phi, wkw_symbol** out)
{
    if (!out) return bad_arg("null out");
    return guarded([&] {
        if (x_const)
            *out = new wkw_symbol{wkw::TestSymbol::plateau_p(plo, pilo, pihi, phi)};
        else
            *out = new wkw_symbol{wkw::TestSymbol::bump_x_plateau_p(xlo, xhi, plo, pilo, pihi, phi)};
    });
}

void wkw_symbol_free(wkw_symbol* s) { delete s; }

wkw_status wkw_symbol_eval(const wkw_symbol* s, double x, double p, double* out)
{
    if (!s || !out) return bad_arg("null argument");
    return guarded([&] { *out = s->symbol(x, p); });
}

wkw_status wkw_mather_functional(const wkw_level* l, const wkw_symbol* f, double* out)
{
    if (!l || !f || !out) return bad_arg("null argument");
    return guarded([&] { *out = wkw::mather_limit_functional(l->level, f->symbol); });
}

wkw_status wkw_mather_functional_xspace(const wkw_level* l, const wkw_symbol* f, double* out)
{
    if (!l || !f || !out) return bad_arg("null argument");
    return guarded([&] { *out = wkw::mather_limit_functional_xspace(l->level, f->symbol); });
}

/* ---------------- expansion ---------------- */

wkw_status wkw_expansion_create(const wkw_level* l, int order, size_t grid, wkw_expansion** out)
{
    if (!l || !out) return bad_arg("null argument");
    return guarded([&] {
        *out = new wkw_expansion{
            wkw::ExpansionSeries::build(l->level, order, grid ? grid : 1024)};
    });
}

void wkw_expansion_free(wkw_expansion* e) { delete e; }

wkw_status wkw_expansion_hbar_coeff(const wkw_expansion* e, int j, double* out)
{
    if (!e || !out) return bad_arg("null argument");
    if (j < 0 || j > e->series.order()) return bad_arg("coefficient index out of range");
    return guarded([&] { *out = e->series.hbar_coeff(j); });
}

wkw_status wkw_expansion_hbar_sum(const wkw_expansion* e, double h, double* out)
{
    if (!e || !out) return bad_arg("null argument");
    return guarded([&] { *out = e->series.hbar_sum(h); });
}

wkw_status wkw_expansion_v(const wkw_expansion* e, int j, double x, double* out)
{
    if (!e || !out) return bad_arg("null argument");
    if (j < 0 || j > e->series.order()) return bad_arg("series index out of range");
    return guarded([&] { *out = e->series.v(j, x); });
}

wkw_status wkw_expansion_residual(const wkw_expansion* e, double h, int starred, double* out)
{
    if (!e || !out) return bad_arg("null argument");
    return guarded([&] { *out = e->series.residual(h, starred != 0); });
}

wkw_status wkw_expansion_grid_size(const wkw_expansion* e, size_t* out)
{
    if (!e || !out) return bad_arg("null argument");
    *out = e->series.grid().size();
    return WKW_OK;
}

wkw_status wkw_expansion_sigma(const wkw_expansion* e, double h, double* values, size_t len,
                               double* c_h, double* C_h, double* sigma_min, double* sigma_max)
{
    if (!e) return bad_arg("null argument");
    return guarded([&] {
        wkw::SigmaDensity sd = wkw::sigma_invariant(e->series, h);
        if (values) {
            if (len < sd.values.size())
                throw std::invalid_argument("wkw_expansion_sigma: buffer too small");
            std::memcpy(values, sd.values.data(), sd.values.size() * sizeof(double));
        }
        if (c_h) *c_h = sd.c_h;
        if (C_h) *C_h = sd.C_h;
        if (sigma_min) *sigma_min = sd.min;
        if (sigma_max) *sigma_max = sd.max;
    });
}

/* ---------------- cell problems ---------------- */

wkw_status wkw_cell_solve(const wkw_potential* p, double P, double h, size_t grid, double tol,
                          wkw_cell** out)
{
    if (!p || !out) return bad_arg("null argument");
    return guarded([&] {
        wkw::CellOptions opt;
        opt.grid = grid;
        if (tol > 0.0) opt.tol = tol;
        *out = new wkw_cell{wkw::solve_cell(p->p, P, h, opt)};
    });
}

void wkw_cell_free(wkw_cell* c) { delete c; }

wkw_status wkw_cell_hbar(const wkw_cell* c, double* out)
{
    if (!c || !out) return bad_arg("null argument");
    *out = c->sol.hbar();
    return WKW_OK;
}

wkw_status wkw_cell_hbar_pair(const wkw_cell* c, double* b1, double* b2)
{
    if (!c || !b1 || !b2) return bad_arg("null argument");
    *b1 = c->sol.hbar_b1();
    *b2 = c->sol.hbar_b2();
    return WKW_OK;
}

wkw_status wkw_cell_residuals(const wkw_cell* c, double* b1, double* b2)
{
    if (!c || !b1 || !b2) return bad_arg("null argument");
    *b1 = c->sol.residual_b1();
    *b2 = c->sol.residual_b2();
    return WKW_OK;
}

wkw_status wkw_cell_tol_used(const wkw_cell* c, double* out)
{
    if (!c || !out) return bad_arg("null argument");
    *out = c->sol.tol_used();
    return WKW_OK;
}

wkw_status wkw_cell_x_h(const wkw_cell* c, double* out)
{
    if (!c || !out) return bad_arg("null argument");
    *out = c->sol.x_h();
    return WKW_OK;
}

wkw_status wkw_cell_grid_size(const wkw_cell* c, size_t* out)
{
    if (!c || !out) return bad_arg("null argument");
    *out = c->sol.grid().size();
    return WKW_OK;
}

wkw_status wkw_cell_normalization(const wkw_cell* c, double* out)
{
    if (!c || !out) return bad_arg("null argument");
    return guarded([&] { *out = c->sol.normalization_integral(); });
}

wkw_status wkw_cell_zeros(const wkw_cell* c, double* zeros, size_t* count)
{
    if (!c || !count) return bad_arg("null argument");
    const auto& z = c->sol.diff_zeros();
    if (zeros) {
        const size_t n = std::min(*count, z.size());
        std::memcpy(zeros, z.data(), n * sizeof(double));
    }
    *count = z.size();
    return WKW_OK;
}

wkw_status wkw_cell_profiles(const wkw_cell* c, double* x, double* v, double* vstar,
                             double* amplitude_sq, size_t len)
{
    if (!c) return bad_arg("null argument");
    const size_t M = c->sol.grid().size();
    if (len < M) return bad_arg("buffer too small");
    return guarded([&] {
        for (size_t j = 0; j < M; ++j) {
            if (x) x[j] = c->sol.grid().node(j);
            if (v) v[j] = c->sol.v()[j];
            if (vstar) vstar[j] = c->sol.vstar()[j];
            if (amplitude_sq)
                amplitude_sq[j] =
                    std::exp((c->sol.vstar()[j] - c->sol.v()[j]) / c->sol.h());
        }
    });
}

wkw_status wkw_cell_residual_refined(const wkw_cell* c, double* b1, double* b2)
{
    if (!c || !b1 || !b2) return bad_arg("null argument");
    return guarded([&] {
        auto [r1, r2] = c->sol.residual_refined(2);
        *b1 = r1;
        *b2 = r2;
    });
}

wkw_status wkw_cell_residual_profiles(const wkw_cell* c, double* r1, double* r2, size_t len)
{
    if (!c) return bad_arg("null argument");
    if (len < c->sol.grid().size()) return bad_arg("buffer too small");
    return guarded([&] {
        auto [a, b] = c->sol.residual_profiles();
        if (r1) std::memcpy(r1, a.data(), a.size() * sizeof(double));
        if (r2) std::memcpy(r2, b.data(), b.size() * sizeof(double));
    });
}

wkw_status wkw_cell_expansion_error(const wkw_cell* c, const wkw_expansion* e,
                                    double* c0_seminorm, double* l2_derivative,
                                    double* hbar_error)
{
    if (!c || !e) return bad_arg("null argument");
    return guarded([&] {
        wkw::ExpansionError err = wkw::expansion_error(c->sol, e->series);
        if (c0_seminorm) *c0_seminorm = err.c0_seminorm;
        if (l2_derivative) *l2_derivative = err.l2_derivative;
        if (hbar_error) *hbar_error = err.hbar_error;
    });
}

wkw_status wkw_cole_hopf_hbar(const wkw_potential* p, double P, double h, size_t grid,
                              double guess, double* out)
{
    if (!p || !out) return bad_arg("null argument");
    return guarded([&] {
        *out = wkw::cole_hopf_hbar(*p->p, P, h, grid ? grid : 512, guess);
    });
}

/* ---------------- Wigner ---------------- */

wkw_status wkw_wigner_create(const wkw_cell* c, double tail_tol, double window_half_width,
                             int jobs, wkw_wigner** out)
{
    if (!c || !out) return bad_arg("null argument");
    return guarded([&] {
        wkw::WignerOptions opt;
        if (tail_tol > 0.0) opt.tail_tol = tail_tol;
        opt.jobs = jobs;
        if (window_half_width > 0.0) {
            opt.window_half_width = window_half_width;
        } else {
            wkw::ClassicalLevel level = wkw::ClassicalLevel::solve(
                c->sol.potential_ptr(), c->sol.P());
            opt.window_half_width = 3.0 * (level.p_max() - level.p_min());
        }
        wkw::WaveState state(c->sol);
        *out = new wkw_wigner{wkw::wigner_transform(state, opt)};
    });
}

void wkw_wigner_free(wkw_wigner* w) { delete w; }

wkw_status wkw_wigner_dims(const wkw_wigner* w, size_t* grid, int* m_lo, int* m_hi)
{
    if (!w) return bad_arg("null argument");
    if (grid) *grid = w->table.grid().size();
    if (m_lo) *m_lo = w->table.lattice().m_lo;
    if (m_hi) *m_hi = w->table.lattice().m_hi;
    return WKW_OK;
}

wkw_status wkw_wigner_momentum(const wkw_wigner* w, int m, double* p_m)
{
    if (!w || !p_m) return bad_arg("null argument");
    *p_m = w->table.lattice().momentum(m);
    return WKW_OK;
}

wkw_status wkw_wigner_mass(const wkw_wigner* w, double* window_mass, double* tail_mass)
{
    if (!w) return bad_arg("null argument");
    if (window_mass) *window_mass = w->table.mass();
    if (tail_mass) *tail_mass = w->table.tail_mass();
    return WKW_OK;
}

wkw_status wkw_wigner_max_imag(const wkw_wigner* w, double* out)
{
    if (!w || !out) return bad_arg("null argument");
    *out = w->table.max_imag();
    return WKW_OK;
}

wkw_status wkw_wigner_value(const wkw_wigner* w, size_t j, int m, double* re, double* im)
{
    if (!w) return bad_arg("null argument");
    const size_t M = w->table.grid().size();
    if (j >= M || m < -static_cast<int>(M / 2) || m >= static_cast<int>(M / 2))
        return bad_arg("index out of range");
    const wkw::complex v = w->table.value(j, m);
    if (re) *re = v.real();
    if (im) *im = v.imag();
    return WKW_OK;
}

wkw_status wkw_wigner_x_marginal(const wkw_wigner* w, double* out, size_t len)
{
    if (!w || !out) return bad_arg("null argument");
    const auto& m = w->table.x_marginal();
    if (len < m.size()) return bad_arg("buffer too small");
    std::memcpy(out, m.data(), m.size() * sizeof(double));
    return WKW_OK;
}

wkw_status wkw_wigner_p_marginal(const wkw_wigner* w, double* out, size_t len)
{
    if (!w || !out) return bad_arg("null argument");
    const auto& m = w->table.p_marginal();
    if (len < m.size()) return bad_arg("buffer too small");
    std::memcpy(out, m.data(), m.size() * sizeof(double));
    return WKW_OK;
}

wkw_status wkw_wigner_integrate(const wkw_wigner* w, const wkw_symbol* f, double* out)
{
    if (!w || !f || !out) return bad_arg("null argument");
    return guarded([&] { *out = wkw::integrate_symbol(w->table, f->symbol); });
}

wkw_status wkw_sweep(const wkw_potential* p, double P, const wkw_symbol* f,
                     const double* h_list, size_t n, int expansion_order, double* values,
                     double* limit, double* fitted_order, double* fit_residual)
{
    if (!p || !f || !h_list) return bad_arg("null argument");
    return guarded([&] {
        wkw::SweepOptions opt;
        if (expansion_order > 0) opt.expansion_order = expansion_order;
        wkw::ConvergenceReport rep = wkw::convergence_sweep(
            p->p, P, f->symbol, std::span<const double>(h_list, n), opt);
        for (size_t i = 0; i < rep.rows.size(); ++i)
            if (values) values[i] = rep.rows[i].value;
        if (limit) *limit = rep.limit;
        if (fitted_order) *fitted_order = rep.fit.order;
        if (fit_residual) *fit_residual = rep.fit.residual;
    });
}

wkw_status wkw_fit_order(const double* h, const double* err, size_t n, double* order,
                         double* residual)
{
    if (!h || !err) return bad_arg("null argument");
    return guarded([&] {
        wkw::OrderFit fit = wkw::fit_order(std::span<const double>(h, n),
                                           std::span<const double>(err, n));
        if (order) *order = fit.order;
        if (residual) *residual = fit.residual;
    });
}

/* ---------------- stationary phase ---------------- */

wkw_status wkw_phase_create(const wkw_level* l, double p_hat, wkw_phase** out)
{
    if (!l || !out) return bad_arg("null argument");
    return guarded([&] { *out = new wkw_phase{wkw::PhaseFamily(l->level, p_hat)}; });
}

void wkw_phase_free(wkw_phase* ph) { delete ph; }

wkw_status wkw_phase_s(const wkw_phase* ph, double x, double y, double* out)
{
    if (!ph || !out) return bad_arg("null argument");
    return guarded([&] { *out = ph->family.S(x, y); });
}

wkw_status wkw_phase_gradient(const wkw_phase* ph, double x, double y, double* sx, double* sy)
{
    if (!ph || !sx || !sy) return bad_arg("null argument");
    return guarded([&] {
        auto [gx, gy] = ph->family.gradient(x, y);
        *sx = gx;
        *sy = gy;
    });
}

wkw_status wkw_phase_critical_points(const wkw_phase* ph, double* xy, size_t* count)
{
    if (!ph || !count) return bad_arg("null argument");
    return guarded([&] {
        std::vector<wkw::CriticalPoint> pts = wkw::critical_points(ph->family);
        const size_t cap = *count;
        *count = pts.size();
        if (xy) {
            for (size_t i = 0; i < std::min(cap, pts.size()); ++i) {
                xy[2 * i] = pts[i].x;
                xy[2 * i + 1] = pts[i].y;
            }
        }
    });
}

wkw_status wkw_phase_stationary_estimate(const wkw_phase* ph, const wkw_symbol* f, double h,
                                         double eps, double* j1, double* j2_re, double* j2_im,
                                         double* total_re, double* total_im)
{
    if (!ph || !f) return bad_arg("null argument");
    return guarded([&] {
        wkw::StationaryPhaseEstimate est =
            wkw::stationary_phase_estimate(ph->family, f->symbol, h, eps);
        if (est.degenerate)
            throw std::domain_error("stationary phase: degenerate lattice momentum");
        if (j1) *j1 = est.j1;
        if (j2_re) *j2_re = est.j2.real();
        if (j2_im) *j2_im = est.j2.imag();
        if (total_re) *total_re = est.total.real();
        if (total_im) *total_im = est.total.imag();
    });
}

wkw_status wkw_phase_direct_integral(const wkw_phase* ph, const wkw_symbol* f, double h,
                                     double eps, size_t grid, double* re, double* im,
                                     double* error_estimate)
{
    if (!ph || !f) return bad_arg("null argument");
    return guarded([&] {
        wkw::OscillatoryResult res =
            wkw::direct_oscillatory_integral(ph->family, f->symbol, h, eps, grid);
        if (re) *re = res.value.real();
        if (im) *im = res.value.imag();
        if (error_estimate) *error_estimate = res.error_estimate;
    });
}

wkw_status wkw_nonstationary_decay(const wkw_level* l, const wkw_symbol* f,
                                   const double* h_list, size_t n, double* magnitudes,
                                   double* fitted_order)
{
    if (!l || !f || !h_list) return bad_arg("null argument");
    return guarded([&] {
        wkw::DecayCheck chk = wkw::nonstationary_decay_check(
            l->level, f->symbol, std::span<const double>(h_list, n));
        for (size_t i = 0; i < chk.magnitude.size(); ++i)
            if (magnitudes) magnitudes[i] = chk.magnitude[i];
        if (fitted_order) *fitted_order = chk.fit.order;
    });
}

}  // extern "C"
