/*
 * wkw - weak-KAM / Wigner toolkit for 1D torus Hamiltonians
 *
 * C interface to the shared library.  All objects are opaque handles created
 * and destroyed through these functions; every call returns a wkw_status and
 * writes results through out-parameters.  On failure, wkw_last_error() gives
 * a human-readable message for the calling thread.
 *
 * Handles are independent once created (internally reference-counted where
 * they share state); distinct handles may be used concurrently from
 * different threads.
 */
#ifndef WKW_H
#define WKW_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#ifndef WKW_API
#if defined(_WIN32)
#define WKW_API
#else
#define WKW_API __attribute__((visibility("default")))
#endif
#endif

typedef enum wkw_status {
    WKW_OK = 0,
    WKW_ERR_INVALID_ARGUMENT = 1, /* bad handle, size, or parameter */
    WKW_ERR_DOMAIN = 2,           /* precondition violated (P <= P_crit, ...) */
    WKW_ERR_SOLVER = 3,           /* iteration failed to converge */
    WKW_ERR_INTERNAL = 4
} wkw_status;

WKW_API const char* wkw_version(void);
/* last error message for the calling thread; empty string if none */
WKW_API const char* wkw_last_error(void);

/* ------------------------------------------------------------------ */
/* potentials                                                          */

typedef struct wkw_potential wkw_potential;

WKW_API wkw_status wkw_potential_pendulum(double kappa, wkw_potential** out);
WKW_API wkw_status wkw_potential_two_harmonic(double kappa, double beta, wkw_potential** out);
WKW_API wkw_status wkw_potential_zero(wkw_potential** out);
WKW_API void wkw_potential_free(wkw_potential* p);

/* n-th derivative of V at x (order 0 = V itself) */
WKW_API wkw_status wkw_potential_eval(const wkw_potential* p, int order, double x, double* out);

typedef struct wkw_potential_report {
    int pass;
    double symmetry_residual;
    double second_derivative_at_min;
    int minima_count;
    double min_location;
    char message[192];
} wkw_potential_report;

/* hypothesis check: symmetry, unique non-degenerate interior minimum at 0 */
WKW_API wkw_status wkw_potential_validate(const wkw_potential* p, size_t samples,
                                          wkw_potential_report* out);

/* separatrix threshold P_crit = int sqrt(2 (Vmax - V)) dx */
WKW_API wkw_status wkw_p_crit(const wkw_potential* p, double* out);

/* ------------------------------------------------------------------ */
/* classical level                                                     */

typedef struct wkw_level wkw_level;

/* solve Hbar(P) from int p_plus = P; requires P above the P_crit margin */
WKW_API wkw_status wkw_level_create(const wkw_potential* p, double P, double tol,
                                    wkw_level** out);
WKW_API void wkw_level_free(wkw_level* l);

WKW_API wkw_status wkw_level_hbar(const wkw_level* l, double* out);
WKW_API wkw_status wkw_level_p_min(const wkw_level* l, double* out);
WKW_API wkw_status wkw_level_p_max(const wkw_level* l, double* out);
/* rotation number Q = dHbar/dP = 1 / int dx / p_plus */
WKW_API wkw_status wkw_level_rotation_number(const wkw_level* l, double* out);
WKW_API wkw_status wkw_level_p_plus(const wkw_level* l, double x, double* out);
/* viscosity solution phi (phi(-1/2) = 0) and its derivative p_plus - P */
WKW_API wkw_status wkw_level_phi(const wkw_level* l, double x, double* out);
WKW_API wkw_status wkw_level_phi_prime(const wkw_level* l, double x, double* out);
/* projected invariant density b = Q / p_plus */
WKW_API wkw_status wkw_level_density(const wkw_level* l, double x, double* out);
/* the two preimages of p under p_plus, p strictly inside (p_min, p_max) */
WKW_API wkw_status wkw_level_branches(const wkw_level* l, double p, double* x1, double* x2);

/* ------------------------------------------------------------------ */
/* phase-space test symbols                                            */

typedef struct wkw_symbol wkw_symbol;

/* product of C-infinity bumps on [xlo,xhi] x [plo,phi]; x interval ignored
 * when x_const != 0 (factor identically 1 in x) */
WKW_API wkw_status wkw_symbol_bump(int x_const, double xlo, double xhi,
                                   double plo, double phi, wkw_symbol** out);
/* plateau in p: 1 on [pilo, pihi], 0 outside [plo, phi]; bump or constant in x */
WKW_API wkw_status wkw_symbol_plateau(int x_const, double xlo, double xhi,
                                      double plo, double pilo, double pihi, double phi,
                                      wkw_symbol** out);
WKW_API void wkw_symbol_free(wkw_symbol* s);
WKW_API wkw_status wkw_symbol_eval(const wkw_symbol* s, double x, double p, double* out);

/* classical limit of the phase-space averages (the invariant measure of the
 * level integrated against f), plus the independent x-space route */
WKW_API wkw_status wkw_mather_functional(const wkw_level* l, const wkw_symbol* f, double* out);
WKW_API wkw_status wkw_mather_functional_xspace(const wkw_level* l, const wkw_symbol* f,
                                                double* out);

/* ------------------------------------------------------------------ */
/* asymptotic expansion                                                */

typedef struct wkw_expansion wkw_expansion;

WKW_API wkw_status wkw_expansion_create(const wkw_level* l, int order, size_t grid,
                                        wkw_expansion** out);
WKW_API void wkw_expansion_free(wkw_expansion* e);

WKW_API wkw_status wkw_expansion_hbar_coeff(const wkw_expansion* e, int j, double* out);
WKW_API wkw_status wkw_expansion_hbar_sum(const wkw_expansion* e, double h, double* out);
WKW_API wkw_status wkw_expansion_v(const wkw_expansion* e, int j, double x, double* out);
/* sup-norm residual of the assembled series in the (starred) cell equation */
WKW_API wkw_status wkw_expansion_residual(const wkw_expansion* e, double h, int starred,
                                          double* out);
WKW_API wkw_status wkw_expansion_grid_size(const wkw_expansion* e, size_t* out);

/* invariant density sigma of (g sigma)' + h sigma'' = 0, g = P + (vhat^N_h)';
 * values has length wkw_expansion_grid_size; c_h, C_h are the constants of
 * the integrating-factor representation; extrema reported */
WKW_API wkw_status wkw_expansion_sigma(const wkw_expansion* e, double h, double* values,
                                       size_t len, double* c_h, double* C_h,
                                       double* sigma_min, double* sigma_max);

/* ------------------------------------------------------------------ */
/* viscous cell problems                                               */

typedef struct wkw_cell wkw_cell;

/* solve both cell equations at (P, h); grid 0 = automatic (>= 8/h, power of
 * two); tol 0 = default 1e-11 (roundoff-floored) */
WKW_API wkw_status wkw_cell_solve(const wkw_potential* p, double P, double h, size_t grid,
                                  double tol, wkw_cell** out);
WKW_API void wkw_cell_free(wkw_cell* c);

WKW_API wkw_status wkw_cell_hbar(const wkw_cell* c, double* out);
/* the constants found independently by the two equations (agree to ~tol) */
WKW_API wkw_status wkw_cell_hbar_pair(const wkw_cell* c, double* b1, double* b2);
WKW_API wkw_status wkw_cell_residuals(const wkw_cell* c, double* b1, double* b2);
WKW_API wkw_status wkw_cell_tol_used(const wkw_cell* c, double* out);
WKW_API wkw_status wkw_cell_x_h(const wkw_cell* c, double* out);
WKW_API wkw_status wkw_cell_grid_size(const wkw_cell* c, size_t* out);
/* normalization integral int exp((v*-v)/h) dx (should be 1 after solve) */
WKW_API wkw_status wkw_cell_normalization(const wkw_cell* c, double* out);
/* all zeros of v* - v (x_h is the one in [-1/2,0] closest to -1/2);
 * pass count = capacity, receives the number written */
WKW_API wkw_status wkw_cell_zeros(const wkw_cell* c, double* zeros, size_t* count);
/* profiles on the grid: any pointer may be NULL; arrays of length grid_size */
WKW_API wkw_status wkw_cell_profiles(const wkw_cell* c, double* x, double* v, double* vstar,
                                     double* amplitude_sq, size_t len);
/* residuals re-evaluated on a 2x finer grid by trigonometric interpolation */
WKW_API wkw_status wkw_cell_residual_refined(const wkw_cell* c, double* b1, double* b2);
/* pointwise residuals of both equations; arrays of length grid_size */
WKW_API wkw_status wkw_cell_residual_profiles(const wkw_cell* c, double* r1, double* r2,
                                              size_t len);
/* gauge-invariant distances to the expansion (grids must match) */
WKW_API wkw_status wkw_cell_expansion_error(const wkw_cell* c, const wkw_expansion* e,
                                            double* c0_seminorm, double* l2_derivative,
                                            double* hbar_error);

/* independent route to Hbar_h through the linear principal-eigenvalue
 * problem (Cole-Hopf transform); moderate h only */
WKW_API wkw_status wkw_cole_hopf_hbar(const wkw_potential* p, double P, double h,
                                      size_t grid, double guess, double* out);

/* ------------------------------------------------------------------ */
/* Wigner tables                                                       */

typedef struct wkw_wigner wkw_wigner;

/* transform the critical wave state of a cell solution; tail_tol 0 = 1e-6;
 * window_half_width (phase-space units) 0 = 3 (p_max - p_min); jobs <= 1
 * serial */
WKW_API wkw_status wkw_wigner_create(const wkw_cell* c, double tail_tol,
                                     double window_half_width, int jobs, wkw_wigner** out);
WKW_API void wkw_wigner_free(wkw_wigner* w);

WKW_API wkw_status wkw_wigner_dims(const wkw_wigner* w, size_t* grid, int* m_lo, int* m_hi);
/* lattice momentum p_m = h m + P/(2 pi) */
WKW_API wkw_status wkw_wigner_momentum(const wkw_wigner* w, int m, double* p_m);
WKW_API wkw_status wkw_wigner_mass(const wkw_wigner* w, double* window_mass, double* tail_mass);
WKW_API wkw_status wkw_wigner_max_imag(const wkw_wigner* w, double* out);
/* value at grid row j and mode m (m in [-grid/2, grid/2)) */
WKW_API wkw_status wkw_wigner_value(const wkw_wigner* w, size_t j, int m,
                                    double* re, double* im);
/* marginals over the full mode range; arrays of length grid */
WKW_API wkw_status wkw_wigner_x_marginal(const wkw_wigner* w, double* out, size_t len);
WKW_API wkw_status wkw_wigner_p_marginal(const wkw_wigner* w, double* out, size_t len);
/* I_f = sum_m int f(x, 2 pi p_m) W dx over the window */
WKW_API wkw_status wkw_wigner_integrate(const wkw_wigner* w, const wkw_symbol* f, double* out);

/* full pipeline sweep over a decreasing h-list: writes I_f(h) per h, the
 * classical limit, and the fitted convergence order of |I_f(h) - limit| */
WKW_API wkw_status wkw_sweep(const wkw_potential* p, double P, const wkw_symbol* f,
                             const double* h_list, size_t n, int expansion_order,
                             double* values, double* limit, double* fitted_order,
                             double* fit_residual);

/* least-squares slope of log err vs log h (>= 3 valid points) */
WKW_API wkw_status wkw_fit_order(const double* h, const double* err, size_t n,
                                 double* order, double* residual);

/* ------------------------------------------------------------------ */
/* stationary-phase laboratory                                         */

typedef struct wkw_phase wkw_phase;

/* phase family S(x,y) at lattice momentum p_hat on a level */
WKW_API wkw_status wkw_phase_create(const wkw_level* l, double p_hat, wkw_phase** out);
WKW_API void wkw_phase_free(wkw_phase* ph);

WKW_API wkw_status wkw_phase_s(const wkw_phase* ph, double x, double y, double* out);
WKW_API wkw_status wkw_phase_gradient(const wkw_phase* ph, double x, double y,
                                      double* sx, double* sy);

/* critical points: up to 4 (x,y) pairs written as x0,y0,x1,y1,...;
 * count in/out = capacity in pairs / number written */
WKW_API wkw_status wkw_phase_critical_points(const wkw_phase* ph, double* xy, size_t* count);

/* leading-order stationary phase of the mollified integral at width eps;
 * j2/total are complex (re, im) */
WKW_API wkw_status wkw_phase_stationary_estimate(const wkw_phase* ph, const wkw_symbol* f,
                                                 double h, double eps, double* j1,
                                                 double* j2_re, double* j2_im,
                                                 double* total_re, double* total_im);

/* reference tensor-quadrature evaluation of int int f zeta e^{iS/h}
 * (mollified in y when eps > 0); grid 0 = automatic */
WKW_API wkw_status wkw_phase_direct_integral(const wkw_phase* ph, const wkw_symbol* f,
                                             double h, double eps, size_t grid,
                                             double* re, double* im, double* error_estimate);

/* decay of the aggregated off-level integrals along an h-list */
WKW_API wkw_status wkw_nonstationary_decay(const wkw_level* l, const wkw_symbol* f,
                                           const double* h_list, size_t n,
                                           double* magnitudes, double* fitted_order);

#ifdef __cplusplus
}
#endif

#endif /* WKW_H */
