#ifndef WKW_CLASSICAL_HPP
#define WKW_CLASSICAL_HPP

#include "wkw/fft.hpp"
#include "wkw/grid.hpp"
#include "wkw/potential.hpp"
#include "wkw/symbol.hpp"

namespace wkw {

/// Threshold momentum: below it the energy level no longer projects onto the
/// whole torus.  Computed as the separatrix area  int sqrt(2(Vmax - V)) dx;
/// the integrand has square-root kinks at the maxima of V (at +-1/2 for the
/// built-ins), removed by the substitution x = (1/2) sin(theta).
double p_crit(const SymmetricPotential& V);

struct LevelOptions {
    double tol = 1e-10;          // |int p_plus - P| at exit
    std::size_t grid = 1024;     // grid backing phi and quadratures
    double margin_factor = 1e-3; // require P > P_crit (1 + margin_factor)
};

/// Supercritical classical level: effective Hamiltonian value Hbar(P), the
/// momentum profile p_plus(x) = sqrt(2(Hbar - V)), the (backward = forward)
/// viscosity solution phi, branch inverses of p_plus, and the projected
/// invariant density b = Q / p_plus with Q = dHbar/dP = 1 / int dx/p_plus.
class ClassicalLevel {
public:
    static ClassicalLevel solve(PotentialPtr V, double P, const LevelOptions& opt = {});

    double P() const { return m_P; }
    double hbar() const { return m_hbar; }
    double p_min() const { return m_p_min; }
    double p_max() const { return m_p_max; }
    /// rotation number Q = dHbar/dP, computed by the exact identity 1/int(dx/p_plus)
    double dHdP() const { return m_dHdP; }

    double p_plus(double x) const
    {
        const double s = 2.0 * (m_hbar - (*m_V)(x));
        return std::sqrt(std::max(s, 0.0));
    }
    double p_plus_derivative(double x) const { return -m_V->d1(x) / p_plus(x); }
    Jet p_plus_jet(double x, std::size_t order) const;

    /// viscosity solution with phi(-1/2) = 0; phi' = p_plus - P
    double phi(double x) const { return m_phi_interp(x) + m_phi_offset; }
    double phi_prime(double x) const { return p_plus(x) - m_P; }

    /// projected invariant density b(x) = Q / p_plus(x); integrates to 1
    double mather_density(double x) const { return m_dHdP / p_plus(x); }

    /// the two preimages of p under p_plus: x1 in (-1/2, 0), x2 = -x1 in (0, 1/2);
    /// p must lie strictly inside (p_min, p_max) (the endpoints are degenerate)
    std::pair<double, double> branches(double p) const;

    const PeriodicGrid& grid() const { return m_grid; }
    const SymmetricPotential& potential() const { return *m_V; }
    PotentialPtr potential_ptr() const { return m_V; }

private:
    ClassicalLevel(PotentialPtr V, double P, double hbar, const LevelOptions& opt);

    PotentialPtr m_V;
    double m_P, m_hbar, m_p_min, m_p_max, m_dHdP;
    PeriodicGrid m_grid;
    TrigInterpolant m_phi_interp;  // mean-zero periodic part of phi
    double m_phi_offset;           // pins phi(-1/2) = 0
};

/// Convenience: root-find Hbar(P) and build the level.
inline ClassicalLevel hbar_of_P(PotentialPtr V, double P, const LevelOptions& opt = {})
{
    return ClassicalLevel::solve(std::move(V), P, opt);
}

struct MatherFunctionalOptions {
    /// forbidden margin around the lines p = p_min and p = p_max, as a
    /// fraction of (p_max - p_min); supports crossing the margin are refused
    double margin_fraction = 0.01;
    bool allow_crossing = false;  // measurement mode: no refusal, no claim
    std::size_t quad_points = 4096;
};

/// Limit of the phase-space averages against the invariant measure of the
/// level: 2 pi sum_i int f(x_i(p), 2 pi p) Q / (|p_plus'(x_i)| p_plus(x_i)) dp,
/// which equals int f(x, p_plus(x)) b(x) dx by the branch change of variables.
double mather_limit_functional(const ClassicalLevel& level, const TestSymbol& f,
                               const MatherFunctionalOptions& opt = {});

/// The x-space route of the same functional (independent code path, used for
/// cross-checking the change of variables).
double mather_limit_functional_xspace(const ClassicalLevel& level, const TestSymbol& f);

}  // namespace wkw

#endif
