#include "wkw/classical.hpp"

#include <algorithm>

#include "wkw/roots.hpp"

namespace wkw {

namespace {

// trapezoid with doubling until the change drops below abstol
template <typename F>
double refine_quadrature(const F& integrand, double lo, double hi, double abstol,
                         std::size_t n0 = 256, std::size_t nmax = (1u << 18))
{
    double prev = std::nan("");
    for (std::size_t n = n0; n <= nmax; n *= 2) {
        const double dx = (hi - lo) / static_cast<double>(n);
        double s = 0.5 * (integrand(lo) + integrand(hi));
        for (std::size_t j = 1; j < n; ++j) s += integrand(lo + dx * static_cast<double>(j));
        s *= dx;
        if (std::isfinite(prev) && std::abs(s - prev) <= abstol) return s;
        prev = s;
    }
    return prev;
}

// periodic trapezoid of a smooth torus function with grid doubling
template <typename F>
double refine_periodic(const F& f, double abstol, std::size_t n0 = 256,
                       std::size_t nmax = (1u << 17))
{
    double prev = std::nan("");
    for (std::size_t n = n0; n <= nmax; n *= 2) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            s += f(-0.5 + static_cast<double>(j) / static_cast<double>(n));
        s /= static_cast<double>(n);
        if (std::isfinite(prev) && std::abs(s - prev) <= abstol) return s;
        prev = s;
    }
    return prev;
}

}  // namespace

double p_crit(const SymmetricPotential& V)
{
    const double vmax = V.v_max();
    if (vmax <= V.v_min() + 1e-300) return 0.0;  // flat potential
    auto integrand = [&](double theta) {
        const double x = 0.5 * std::sin(theta);
        const double s = std::max(2.0 * (vmax - V(x)), 0.0);
        return std::sqrt(s) * 0.5 * std::cos(theta);
    };
    return refine_quadrature(integrand, -0.5 * pi, 0.5 * pi, 1e-13, 512);
}

ClassicalLevel::ClassicalLevel(PotentialPtr V, double P, double hbar, const LevelOptions& opt)
    : m_V(std::move(V)), m_P(P), m_hbar(hbar), m_grid(opt.grid)
{
    m_p_max = p_plus(m_V->min_location());
    m_p_min = p_plus(m_V->max_location());
    const double inv_q = refine_periodic([&](double x) { return 1.0 / p_plus(x); }, 1e-13);
    m_dHdP = 1.0 / inv_q;

    const std::size_t M = m_grid.size();
    std::vector<double> dphi(M);
    for (std::size_t j = 0; j < M; ++j) dphi[j] = p_plus(m_grid.node(j)) - m_P;
    std::vector<double> psi = spectral_antiderivative(dphi);
    m_phi_interp = TrigInterpolant(psi);
    m_phi_offset = -m_phi_interp(-0.5);
}

ClassicalLevel ClassicalLevel::solve(PotentialPtr V, double P, const LevelOptions& opt)
{
    if (!V) throw std::invalid_argument("ClassicalLevel: null potential");
    const double pc = p_crit(*V);
    const double floor = (pc > 0.0) ? pc * (1.0 + opt.margin_factor) : 0.0;
    if (!(P > floor))
        throw std::domain_error("ClassicalLevel: P = " + std::to_string(P) +
                                " not above P_crit margin " + std::to_string(floor));

    const double vmax = V->v_max();
    auto momentum_integral = [&](double hb) {
        return refine_periodic(
            [&](double x) { return std::sqrt(std::max(2.0 * (hb - (*V)(x)), 0.0)); },
            opt.tol * 0.05);
    };

    // bracket Hbar: integral is increasing in Hbar, -> P_crit at Vmax+
    double lo = vmax + std::max(1e-14, 1e-12 * std::abs(vmax));
    double hi = std::max({vmax + 1.0, 0.5 * P * P + vmax, 1.0});
    while (momentum_integral(hi) < P) hi *= 2.0;
    if (momentum_integral(lo) > P) {
        // margin guaranteed P > P_crit, so only roundoff can land here
        throw std::domain_error("ClassicalLevel: level collapsed onto the separatrix");
    }
    const double hbar = find_root_monotone(
        [&](double hb) { return momentum_integral(hb) - P; }, lo, hi, opt.tol * 0.25);

    ClassicalLevel level(std::move(V), P, hbar, opt);
    const double check = refine_periodic([&](double x) { return level.p_plus(x); }, opt.tol * 0.05);
    if (std::abs(check - P) > opt.tol)
        throw SolverError("ClassicalLevel: momentum constraint missed", std::abs(check - P));
    return level;
}

Jet ClassicalLevel::p_plus_jet(double x, std::size_t order) const
{
    Jet vj = m_V->jet(x, order);
    Jet arg = 2.0 * (Jet(order, m_hbar) - vj);
    return jet_sqrt(arg);
}

std::pair<double, double> ClassicalLevel::branches(double p) const
{
    const double span = m_p_max - m_p_min;
    if (!(p > m_p_min && p < m_p_max))
        throw std::domain_error("branches: momentum outside the open interval (p_min, p_max)");
    if (std::min(p - m_p_min, m_p_max - p) < 1e-13 * span)
        throw std::domain_error("branches: momentum too close to a degenerate endpoint");

    // p_plus increases from p_min to p_max on [-1/2, 0] and mirrors on [0, 1/2]
    auto g1 = [&](double x) { return p_plus(x) - p; };
    const double x1 = find_root_monotone(g1, -0.5, 0.0, 1e-14);
    const double x2 = find_root_monotone(g1, 0.0, 0.5, 1e-14);
    return {x1, x2};
}

double mather_limit_functional(const ClassicalLevel& level, const TestSymbol& f,
                               const MatherFunctionalOptions& opt)
{
    const double pmin = level.p_min(), pmax = level.p_max();
    const double delta = opt.margin_fraction * (pmax - pmin);

    auto sup = f.p_support();
    double c, d;
    if (sup) {
        c = sup->first;
        d = sup->second;
    } else {
        c = pmin - 2.0 * delta;  // constant p-factor: integrate over the whole level
        d = pmax + 2.0 * delta;
    }

    if (d <= pmin || c >= pmax) return 0.0;  // support misses the level entirely

    if (!opt.allow_crossing && sup) {
        const bool inside = (c >= pmin + delta && d <= pmax - delta);
        if (!inside)
            throw std::domain_error(
                "mather_limit_functional: test-symbol p-support crosses the degenerate "
                "lines p_min/p_max; shrink the support or set allow_crossing");
    }

    const double lo = std::max(c, pmin + delta);
    const double hi = std::min(d, pmax - delta);
    if (!(lo < hi)) return 0.0;

    const std::size_t n = opt.quad_points;
    const double dp = (hi - lo) / static_cast<double>(n);
    double acc = 0.0;
    for (std::size_t j = 0; j <= n; ++j) {
        const double p = lo + dp * static_cast<double>(j);
        if (p <= pmin || p >= pmax) continue;
        double x1, x2;
        try {
            std::tie(x1, x2) = level.branches(p);
        } catch (const std::domain_error&) {
            continue;
        }
        const double w1 = std::abs(level.p_plus_derivative(x1));
        const double w2 = std::abs(level.p_plus_derivative(x2));
        const double term = level.dHdP() * (f(x1, p) / w1 + f(x2, p) / w2) / p;
        acc += (j == 0 || j == n) ? 0.5 * term : term;
    }
    return acc * dp;
}

double mather_limit_functional_xspace(const ClassicalLevel& level, const TestSymbol& f)
{
    const std::size_t n = 1u << 14;
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double x = -0.5 + static_cast<double>(j) / static_cast<double>(n);
        acc += f(x, level.p_plus(x)) * level.mather_density(x);
    }
    return acc / static_cast<double>(n);
}

}  // namespace wkw
