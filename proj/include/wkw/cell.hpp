#ifndef WKW_CELL_HPP
#define WKW_CELL_HPP

#include "wkw/expansion.hpp"

namespace wkw {

struct CellOptions {
    std::size_t grid = 0;        // 0: auto, max(256, next pow2 of points_per_h / h)
    double tol = 1e-11;          // Newton sup-norm residual target (roundoff-floored)
    int max_newton = 50;
    int expansion_order = 2;     // order of the initial-guess series
    bool finite_difference = false;  // FD2 residual instead of spectral (robustness flag)
    double points_per_h = 8.0;
    double h_max = 0.5;
};

/// Solution of the two viscous cell equations at fixed (P, h):
///   -(h/2) v''  + (1/2)(P + v')^2  + V = Hbar_h(P)
///   +(h/2) v*'' + (1/2)(P + v*')^2 + V = Hbar_h(P)
/// with one shared constant, v gauge-fixed to zero mean and v* shifted so
/// that  int exp((v* - v)/h) dx = 1.  x_h is a zero of v* - v (canonical
/// representative: the zero in [-1/2, 0] closest to -1/2).
class CellSolution {
public:
    double h() const { return m_h; }
    double P() const { return m_P; }
    double hbar() const { return m_hbar; }
    double hbar_b1() const { return m_hbar_b1; }
    double hbar_b2() const { return m_hbar_b2; }
    double residual_b1() const { return m_res1; }
    double residual_b2() const { return m_res2; }
    double tol_used() const { return m_tol_used; }
    double x_h() const { return m_x_h; }
    const std::vector<double>& diff_zeros() const { return m_zeros; }

    const PeriodicGrid& grid() const { return m_grid; }
    const std::vector<double>& v() const { return m_v; }
    const std::vector<double>& vstar() const { return m_vstar; }
    const SymmetricPotential& potential() const { return *m_V; }
    PotentialPtr potential_ptr() const { return m_V; }

    /// normalization integral  int exp((v*-v)/h) dx  (log-sum-exp evaluated)
    double normalization_integral() const;

    /// copy with constants added to the raw v, v*, then renormalized; every
    /// exported quantity must be invariant under this (gauge freedom of the
    /// pair)
    CellSolution with_gauge_shifts(double dv, double dvstar) const;

    /// sup-norm residual of both equations re-evaluated on a refined grid by
    /// trigonometric interpolation; guards against grid-locked artifacts
    std::pair<double, double> residual_refined(std::size_t factor = 2) const;

    /// pointwise residuals of the two equations on the grid
    std::pair<std::vector<double>, std::vector<double>> residual_profiles() const;

private:
    friend CellSolution solve_cell(PotentialPtr, double, double, const CellOptions&);
    void finalize(bool finite_difference);  // pair normalization, residuals, zeros
    PotentialPtr m_V;
    double m_h = 0, m_P = 0, m_hbar = 0, m_hbar_b1 = 0, m_hbar_b2 = 0;
    double m_res1 = 0, m_res2 = 0, m_tol_used = 0, m_x_h = -0.5;
    PeriodicGrid m_grid{16};
    std::vector<double> m_v, m_vstar, m_vpot;
    std::vector<double> m_zeros;
};

CellSolution solve_cell(PotentialPtr V, double P, double h, const CellOptions& opt = {});

/// Critical wavefunction data: amplitude a = exp((v*-v)/(2h)) and the
/// periodic phase part w = (v+v*)/2; the full (non-periodic) phase is
/// u = P x + w.  int a^2 dx = 1 by the pair normalization.
class WaveState {
public:
    WaveState(const CellSolution& sol);

    double h() const { return m_h; }
    double P() const { return m_P; }
    const PeriodicGrid& grid() const { return m_grid; }
    const std::vector<double>& amplitude() const { return m_amp; }
    const std::vector<double>& phase_periodic() const { return m_w; }

    /// amplitude and periodic phase refined onto a grid `factor` times finer
    /// (trigonometric refinement of v, v*; exact half-point indexing relies
    /// on this)
    std::pair<std::vector<double>, std::vector<double>> refined(std::size_t factor) const;

private:
    double m_h, m_P;
    PeriodicGrid m_grid;
    std::vector<double> m_amp, m_w, m_v, m_vstar;
};

/// Invariant density sigma of  (g sigma)' + h sigma'' = 0  with
/// g = P + (vhat^N_h)', realized through the integrating factor
/// exp(G/h), G' = g, in shifted (overflow-free) form.  Positive, periodic,
/// unit mass; converges to dHdP / p_plus as h -> 0.
struct SigmaDensity {
    std::vector<double> values;  // on the expansion grid
    double c_h = 0, C_h = 0;     // constants of the integrating-factor form
    double min = 0, max = 0;
};

SigmaDensity sigma_invariant(const ExpansionSeries& series, double h);

struct ExpansionError {
    double c0_seminorm = 0;  // sup_{x,y} |(v_h - vhat)(x) - (v_h - vhat)(y)|
    double l2_derivative = 0;
    double hbar_error = 0;   // |Hbar_h - Hhat^N_h|
};

/// Gauge-invariant distances between the solved cell problem and the
/// assembled series (grids must match).
ExpansionError expansion_error(const CellSolution& sol, const ExpansionSeries& series);

/// Independent route to Hbar_h: the substitution u = exp(-v/h) turns the
/// first cell equation into the linear principal-eigenvalue problem
///   (h^2/2) u'' - h P u' + (V + P^2/2) u = Hbar_h u
/// with positive periodic u, solved by shifted inverse power iteration on
/// the dense spectral discretization.  Usable at moderate h only (the
/// transform under/overflows for small h); cross-check path, never primary.
double cole_hopf_hbar(const SymmetricPotential& V, double P, double h,
                      std::size_t grid_size, double guess, double tol = 1e-10);

}  // namespace wkw

#endif
