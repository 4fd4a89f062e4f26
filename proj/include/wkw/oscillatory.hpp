#ifndef WKW_OSCILLATORY_HPP
#define WKW_OSCILLATORY_HPP

#include <array>

#include "wkw/classical.hpp"
#include "wkw/orderfit.hpp"

namespace wkw {

/// C-infinity mollifier in y: 1 for |y| < eps/2, 0 for |y| > eps.
struct Mollifier {
    double eps;
    explicit Mollifier(double e) : eps(e)
    {
        if (!(e > 0.0)) throw std::invalid_argument("Mollifier: eps must be positive");
    }
    double operator()(double y) const
    {
        return smooth::ramp((eps - std::abs(y)) / (0.5 * eps));
    }
};

/// Phase family S(x, y) = P y + v0(x + y/2) - v0(x - y/2) - rho y at
/// phase-space momentum rho = 2 pi p_hat, with v0 the viscosity solution of
/// the level (v0' = p_plus - P).  All derivatives are analytic via p_plus.
class PhaseFamily {
public:
    PhaseFamily(const ClassicalLevel& level, double p_hat)
        : m_level(level), m_p_hat(p_hat), m_rho(two_pi * p_hat),
          m_p_plus_xbar(level.dHdP())
    {
    }

    const ClassicalLevel& level() const { return m_level; }
    double p_hat() const { return m_p_hat; }
    double rho() const { return m_rho; }

    /// p_plus at the normalization point; defaults to dHbar/dP, may be
    /// overridden with a measured value for comparison runs
    double p_plus_xbar() const { return m_p_plus_xbar; }
    void set_p_plus_xbar(double v) { m_p_plus_xbar = v; }

    double S(double x, double y) const
    {
        return m_level.P() * y + m_level.phi(x + 0.5 * y) - m_level.phi(x - 0.5 * y) - m_rho * y;
    }
    std::pair<double, double> gradient(double x, double y) const
    {
        const double pp = m_level.p_plus(x + 0.5 * y);
        const double pm = m_level.p_plus(x - 0.5 * y);
        return {pp - pm, 0.5 * (pp + pm) - m_rho};
    }
    /// (S_xx, S_xy, S_yy)
    std::array<double, 3> hessian(double x, double y) const
    {
        const double dp = m_level.p_plus_derivative(x + 0.5 * y);
        const double dm = m_level.p_plus_derivative(x - 0.5 * y);
        return {dp - dm, 0.5 * (dp + dm), 0.25 * (dp - dm)};
    }

    /// zeta(x, y) = exp(-v1(x+y/2) - v1(x-y/2) + 2 v1(xbar)), v1 = (1/2) ln p_plus
    double zeta(double x, double y) const
    {
        return m_p_plus_xbar /
               std::sqrt(m_level.p_plus(x + 0.5 * y) * m_level.p_plus(x - 0.5 * y));
    }

private:
    ClassicalLevel m_level;
    double m_p_hat, m_rho, m_p_plus_xbar;
};

struct CriticalPoint {
    double x = 0, y = 0;
    std::array<double, 3> hess{};  // (S_xx, S_xy, S_yy)
    double sqrt_abs_det = 0;
    int signature = 0;             // +2/-2 definite, 0 saddle
    bool on_y_axis = false;        // the (0, 2 x_i) pair
    /// |v0''(2 x_i)| — the determinant convention that evaluates v0'' at the
    /// doubled argument; reported alongside the exact one
    double sqrt_abs_det_doubled_arg = 0;
};

/// The full critical set of S: four points (x_i, 0), (0, 2 x_i) when rho
/// lies strictly inside (p_min, p_max), none otherwise.  Momenta within
/// degeneracy_margin * (p_max - p_min) of an endpoint are refused (the
/// Hessian factor v0'' degenerates like sqrt(p_max - rho) there).
std::vector<CriticalPoint> critical_points(const PhaseFamily& family,
                                           double degeneracy_margin = 1e-9);

struct StationaryPhaseEstimate {
    double j1 = 0;        // the (x_i, 0) saddle contributions (real)
    complex j2{0, 0};     // the oscillating (0, 2 x_i) contributions
    complex total{0, 0};
    bool degenerate = false;
};

/// Leading-order stationary phase for
///   I^h_eps(p_hat) = int int eta^eps(y) f(x, 2 pi p_hat) zeta(x, y) e^{i S/h} dx dy:
///   J1 = sum_i (2 pi h / |v0''(x_i)|) f(x_i, rho) zeta(x_i, 0)
///   J2 = sum_i (2 pi h e^{i sgn pi/2} / |v0''(x_i)|) eta^eps(2 x_i) f(0, rho)
///            zeta(0, 2 x_i) e^{i S(0, 2 x_i)/h}
/// (sqrt|det| of the exact Hessian at (0, 2 x_i) equals |v0''(x_i)|; the
/// signature factor of the definite pair is e^{+- i pi/2}).
StationaryPhaseEstimate stationary_phase_estimate(const PhaseFamily& family,
                                                  const TestSymbol& f, double h, double eps);

struct OscillatoryResult {
    complex value{0, 0};
    double error_estimate = 0;  // Richardson: |I_{2M} - I_M|
    std::size_t grid_used = 0;
};

/// Reference evaluator: tensor trapezoid of  int int g e^{iS/h} dx dy  with
/// g = f zeta (times the mollifier when eps > 0).  Periodic in x; in y the
/// integrand has period 2, so one-period integration uses the seam average
/// at y = +-1/2.  Grid 0 selects a phase-resolving size automatically.
OscillatoryResult direct_oscillatory_integral(const PhaseFamily& family, const TestSymbol& f,
                                              double h, double eps = 0.0,
                                              std::size_t grid = 0,
                                              double tol = std::numeric_limits<double>::infinity());

struct DecayCheck {
    std::vector<double> h;
    std::vector<double> magnitude;  // |sum over lattice momenta in [c, d] of I_h(p_hat)|
    OrderFit fit;
};

/// Non-stationary decay: f supported on momenta [c, d] disjoint from
/// [p_min, p_max]; aggregates the direct integrals over the lattice momenta
/// inside the support for each h and fits the decay order (theory: >= 1).
DecayCheck nonstationary_decay_check(const ClassicalLevel& level, const TestSymbol& f,
                                     std::span<const double> h_list,
                                     std::size_t grid = 0);

}  // namespace wkw

#endif
