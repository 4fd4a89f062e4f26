#include "wkw/oscillatory.hpp"

#include <algorithm>
#include <array>

#include "wkw/fft.hpp"

namespace wkw {

std::vector<CriticalPoint> critical_points(const PhaseFamily& family, double degeneracy_margin)
{
    const ClassicalLevel& level = family.level();
    const double rho = family.rho();
    const double span = level.p_max() - level.p_min();

    if (std::min(std::abs(rho - level.p_min()), std::abs(rho - level.p_max())) <
        degeneracy_margin * span)
        throw std::domain_error("critical_points: momentum within the degenerate margin of "
                                "p_min/p_max (Hessian factor vanishes like a square root)");
    if (rho < level.p_min() || rho > level.p_max()) return {};

    auto [x1, x2] = level.branches(rho);
    std::vector<CriticalPoint> pts;
    for (double xi : {x1, x2}) {
        CriticalPoint a;
        a.x = xi;
        a.y = 0.0;
        a.hess = family.hessian(xi, 0.0);
        a.sqrt_abs_det = std::abs(a.hess[1]);  // [[0, v0''],[v0'', 0]]
        a.signature = 0;
        a.on_y_axis = false;
        a.sqrt_abs_det_doubled_arg = a.sqrt_abs_det;
        pts.push_back(a);

        CriticalPoint b;
        b.x = 0.0;
        b.y = 2.0 * xi;
        b.hess = family.hessian(0.0, 2.0 * xi);   // diag(2 v0''(x_i), v0''(x_i)/2)
        b.sqrt_abs_det = std::sqrt(std::abs(b.hess[0] * b.hess[2]));
        b.signature = (b.hess[0] > 0.0) ? 2 : -2;
        b.on_y_axis = true;
        b.sqrt_abs_det_doubled_arg = std::abs(level.p_plus_derivative(2.0 * xi));
        pts.push_back(b);
    }
    for (const auto& p : pts) {
        auto [sx, sy] = family.gradient(p.x, p.y);
        if (std::hypot(sx, sy) > 1e-10)
            throw SolverError("critical_points: back-substitution failed", std::hypot(sx, sy));
    }
    return pts;
}

StationaryPhaseEstimate stationary_phase_estimate(const PhaseFamily& family,
                                                  const TestSymbol& f, double h, double eps)
{
    const Mollifier eta(eps);
    StationaryPhaseEstimate out;
    std::vector<CriticalPoint> pts;
    try {
        pts = critical_points(family);
    } catch (const std::domain_error&) {
        out.degenerate = true;
        return out;
    }
    const double rho = family.rho();
    for (const auto& p : pts) {
        if (!p.on_y_axis) {
            out.j1 += two_pi * h / p.sqrt_abs_det * f(p.x, rho) * family.zeta(p.x, 0.0);
        } else {
            const double amp = two_pi * h / p.sqrt_abs_det * eta(p.y) * f(0.0, rho) *
                               family.zeta(0.0, p.y);
            const complex sig = (p.signature > 0) ? complex(0.0, 1.0) : complex(0.0, -1.0);
            const double s = family.S(0.0, p.y) / h;
            out.j2 += amp * sig * complex(std::cos(s), std::sin(s));
        }
    }
    out.total = complex(out.j1, 0.0) + out.j2;
    return out;
}

namespace {

complex tensor_integral(const PhaseFamily& family, const TestSymbol& f, double h,
                        double eps, std::size_t M)
{
    const ClassicalLevel& level = family.level();
    const std::size_t M2 = 2 * M;
    const PeriodicGrid fine(M2);

    // p_plus and phi on the doubled grid; phi by spectral antiderivative
    std::vector<double> pp(M2), phi(M2);
    for (std::size_t k = 0; k < M2; ++k) pp[k] = level.p_plus(fine.node(k)) - level.P();
    phi = spectral_antiderivative(pp);
    {
        TrigInterpolant t(phi);
        const double off = -t(-0.5);
        for (double& v : phi) v += off;
    }
    for (std::size_t k = 0; k < M2; ++k) pp[k] += level.P();  // back to p_plus

    const double rho = family.rho();
    const double pxbar = family.p_plus_xbar();
    const double P = level.P();

    std::vector<double> fx(M);
    PeriodicGrid grid(M);
    for (std::size_t j = 0; j < M; ++j) fx[j] = f(grid.node(j), rho);

    std::vector<double> eta_y(M, 1.0);
    double eta_half = 1.0;  // mollifier value at y = 1/2
    if (eps > 0.0) {
        const Mollifier eta(eps);
        for (std::size_t l = 0; l < M; ++l) eta_y[l] = eta(grid.node(l));
        eta_half = eta(0.5);
    }

    complex acc(0.0, 0.0);
    for (std::size_t j = 0; j < M; ++j) {
        if (fx[j] == 0.0) continue;
        complex rowacc(0.0, 0.0);
        for (std::size_t l = 0; l < M; ++l) {
            const std::size_t kp = (2 * j + l + 2 * M2 - M / 2) % M2;
            const std::size_t km = (2 * j + M / 2 + 2 * M2 - l) % M2;
            const double y = grid.node(l);
            if (l == 0) {
                // seam average of the 2-periodic integrand at y = -1/2, +1/2
                const std::size_t kp2 = (2 * j + M / 2) % M2;
                const std::size_t km2 = (2 * j + M2 - M / 2) % M2;
                complex sum(0.0, 0.0);
                const double sA = (P - rho) * (-0.5) + phi[kp] - phi[km];
                const double zA = pxbar / std::sqrt(pp[kp] * pp[km]);
                sum += zA * complex(std::cos(sA / h), std::sin(sA / h));
                const double sB = (P - rho) * 0.5 + phi[kp2] - phi[km2];
                const double zB = pxbar / std::sqrt(pp[kp2] * pp[km2]);
                sum += zB * complex(std::cos(sB / h), std::sin(sB / h));
                rowacc += eta_half * 0.5 * sum;
                continue;
            }
            if (eta_y[l] == 0.0) continue;
            const double S = (P - rho) * y + phi[kp] - phi[km];
            const double z = pxbar / std::sqrt(pp[kp] * pp[km]);
            rowacc += eta_y[l] * z * complex(std::cos(S / h), std::sin(S / h));
        }
        acc += fx[j] * rowacc;
    }
    return acc / static_cast<double>(M * M);
}

}  // namespace

OscillatoryResult direct_oscillatory_integral(const PhaseFamily& family, const TestSymbol& f,
                                              double h, double eps, std::size_t grid, double tol)
{
    const ClassicalLevel& level = family.level();
    if (grid == 0) {
        const double span = level.p_max() - level.p_min();
        const double bound = span + std::max(std::abs(level.p_max() - family.rho()),
                                             std::abs(family.rho() - level.p_min()));
        grid = next_power_of_two(static_cast<std::size_t>(
            std::max(256.0, 16.0 * bound / (two_pi * h))));
        grid = std::min<std::size_t>(grid, 1u << 13);
    }
    OscillatoryResult out;
    const complex coarse = tensor_integral(family, f, h, eps, grid / 2);
    out.value = tensor_integral(family, f, h, eps, grid);
    out.error_estimate = std::abs(out.value - coarse);
    out.grid_used = grid;
    if (out.error_estimate > tol)
        throw SolverError("direct_oscillatory_integral: phase not resolved "
                          "(Richardson estimate above tolerance)", out.error_estimate);
    return out;
}

DecayCheck nonstationary_decay_check(const ClassicalLevel& level, const TestSymbol& f,
                                     std::span<const double> h_list, std::size_t grid)
{
    auto ps = f.p_support();
    if (!ps)
        throw std::invalid_argument("nonstationary_decay_check: f needs compact p-support");
    if (!(ps->second < level.p_min() || ps->first > level.p_max()))
        throw std::invalid_argument(
            "nonstationary_decay_check: support must avoid [p_min, p_max]");

    DecayCheck out;
    for (double h : h_list) {
        // lattice momenta with 2 pi p_hat inside the support
        const double mlo = (ps->first - level.P()) / (two_pi * h);
        const double mhi = (ps->second - level.P()) / (two_pi * h);
        complex acc(0.0, 0.0);
        for (int m = static_cast<int>(std::ceil(mlo)); m <= static_cast<int>(std::floor(mhi)); ++m) {
            PhaseFamily fam(level, h * m + level.P() / two_pi);
            acc += direct_oscillatory_integral(fam, f, h, 0.0, grid).value;
        }
        out.h.push_back(h);
        out.magnitude.push_back(std::abs(acc));
    }
    out.fit = fit_order(out.h, out.magnitude);
    return out;
}

}  // namespace wkw
