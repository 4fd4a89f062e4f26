#ifndef WKW_WIGNER_HPP
#define WKW_WIGNER_HPP

#include "wkw/cell.hpp"
#include "wkw/orderfit.hpp"

namespace wkw {

/// Momentum lattice h Z + P/(2 pi), forced by the quasi-periodicity of the
/// critical wavefunction.  Index m = 0 is the central mode; phase-space
/// momenta are 2 pi p_m.
struct MomentumLattice {
    double h = 0, P = 0;
    int m_lo = 0, m_hi = 0;  // reporting window (table rows cover the full FFT range)

    double momentum(int m) const { return h * m + P / two_pi; }
    double phase_momentum(int m) const { return two_pi * h * m + P; }
};

struct WignerOptions {
    double tail_tol = 1e-6;
    /// half width of the reporting window in phase-space momentum units;
    /// 0 = derive from the tail tolerance alone
    double window_half_width = 0.0;
    int jobs = 1;
};

/// Torus Wigner distribution of a wave state on grid x lattice.
///
/// W(x, p_m) is the m-th Fourier coefficient in y of
///   c_x(y) = a(x+y/2) a(x-y/2) exp(i (w(x+y/2) - w(x-y/2)) / h),
/// computed by one length-M FFT per x row with half-points taken from the 2M
/// refinement.  c_x has period 2 in y, not 1; integrating over one period of
/// the torus therefore needs the trapezoid seam average at y = +-1/2, which
/// is also exactly what keeps the table real (a raw periodic FFT would leave
/// O(1/M) imaginary parts).  Stored values are the full complex FFT output;
/// realness is asserted downstream, not enforced, so symmetry bugs surface.
class WignerTable {
public:
    const MomentumLattice& lattice() const { return m_lat; }
    const PeriodicGrid& grid() const { return m_grid; }
    std::size_t modes() const { return m_grid.size(); }

    /// centered access: m in [-M/2, M/2)
    complex value(std::size_t j, int m) const
    {
        return m_values[j * modes() + static_cast<std::size_t>(m + static_cast<int>(modes() / 2))];
    }
    const std::vector<complex>& raw() const { return m_values; }

    double mass() const { return m_mass; }            // over the reporting window
    double mass_full() const { return m_mass_full; }  // over the full mode range
    double tail_mass() const { return m_mass_full - m_mass; }
    double max_imag() const { return m_max_imag; }

    /// sum over the full mode range; equals a(x)^2 (Fourier inversion at y=0)
    const std::vector<double>& x_marginal() const { return m_x_marginal; }
    /// (1/M) sum_j W(x_j, p_m); equals |psihat(p_m)|^2 (full range, centered)
    const std::vector<double>& p_marginal() const { return m_p_marginal; }

private:
    friend WignerTable wigner_transform(const WaveState&, const WignerOptions&);
    MomentumLattice m_lat;
    PeriodicGrid m_grid{16};
    std::vector<complex> m_values;  // row j, centered column m + M/2
    std::vector<double> m_x_marginal, m_p_marginal;
    double m_mass = 0, m_mass_full = 0, m_max_imag = 0;
};

WignerTable wigner_transform(const WaveState& state, const WignerOptions& opt = {});

/// I_f = sum_{m in window} int f(x, 2 pi p_m) W(x, p_m) dx.  The imaginary
/// residue is discarded after checking it sits at noise level; errors if the
/// p-support of f exceeds the window span.
double integrate_symbol(const WignerTable& table, const TestSymbol& f,
                        double* imag_residue = nullptr);

struct ConvergenceRow {
    double h = 0;
    double value = 0;      // I_f(h)
    double reference = 0;  // classical limit
    double abs_error = 0;
};

struct ConvergenceReport {
    std::vector<ConvergenceRow> rows;  // sorted by descending h
    OrderFit fit;                      // of |I_f(h) - limit| against h
    double limit = 0;
};

struct SweepOptions {
    int expansion_order = 2;
    std::size_t grid = 0;  // 0 = per-h automatic
    WignerOptions wigner;
    CellOptions cell;
    MatherFunctionalOptions mather;
};

/// Full pipeline sweep: solve the cell problems along the h-list, transform,
/// integrate f, compare against the classical limit, and fit the rate.
ConvergenceReport convergence_sweep(PotentialPtr V, double P, const TestSymbol& f,
                                    std::span<const double> h_list,
                                    const SweepOptions& opt = {});

}  // namespace wkw

#endif
