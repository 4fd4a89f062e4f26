#include "wkw/potential.hpp"

#include <algorithm>

namespace wkw {

namespace {

// n-th derivative of a(1 - cos(w x)): for n >= 1 it cycles through
// sin, cos, -sin, -cos with a factor w^n.
double harmonic_derivative(double a, double w, int order, double x)
{
    if (order == 0) return a * (1.0 - std::cos(w * x));
    const double amp = a * std::pow(w, order);
    switch ((order - 1) & 3) {
        case 0: return amp * std::sin(w * x);
        case 1: return amp * std::cos(w * x);
        case 2: return -amp * std::sin(w * x);
        default: return -amp * std::cos(w * x);
    }
}

}  // namespace

double SymmetricPotential::v_max() const
{
    // generic scan + golden refinement; overridden analytically by built-ins
    const int n = 4096;
    double best = -std::numeric_limits<double>::infinity();
    double xb = 0.0;
    for (int j = 0; j < n; ++j) {
        const double x = -0.5 + static_cast<double>(j) / n;
        const double v = derivative(0, x);
        if (v > best) { best = v; xb = x; }
    }
    double lo = xb - 1.0 / n, hi = xb + 1.0 / n;
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    for (int it = 0; it < 120; ++it) {
        const double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
        if (derivative(0, x1) < derivative(0, x2)) lo = x1; else hi = x2;
    }
    return derivative(0, 0.5 * (lo + hi));
}

PendulumPotential::PendulumPotential(double kappa) : m_kappa(kappa)
{
    if (kappa <= 0.0) throw std::invalid_argument("PendulumPotential: kappa must be positive");
}

double PendulumPotential::derivative(int order, double x) const
{
    return harmonic_derivative(m_kappa, two_pi, order, x);
}

TwoHarmonicPotential::TwoHarmonicPotential(double kappa, double beta)
    : m_kappa(kappa), m_beta(beta)
{
    if (kappa <= 0.0) throw std::invalid_argument("TwoHarmonicPotential: kappa must be positive");
    if (beta < 0.0) throw std::invalid_argument("TwoHarmonicPotential: beta must be non-negative");
}

double TwoHarmonicPotential::derivative(int order, double x) const
{
    return harmonic_derivative(m_kappa, two_pi, order, x) +
           harmonic_derivative(m_beta, 2.0 * two_pi, order, x);
}

PotentialPtr make_potential(const std::string& name, double kappa, double beta)
{
    if (name == "pendulum") return std::make_shared<PendulumPotential>(kappa);
    if (name == "two_harmonic") return std::make_shared<TwoHarmonicPotential>(kappa, beta);
    if (name == "zero") return std::make_shared<ZeroPotential>();
    throw std::invalid_argument("unknown potential: " + name);
}

PotentialReport validate(const SymmetricPotential& V, std::size_t samples)
{
    PotentialReport rep;
    if (samples < 16) samples = 16;

    unsigned state = 987654321u;
    auto next01 = [&state]() {
        state = state * 1664525u + 1013904223u;
        return static_cast<double>(state) / 4294967296.0;
    };
    for (std::size_t i = 0; i < samples; ++i) {
        const double x = next01() - 0.5;
        rep.symmetry_residual =
            std::max(rep.symmetry_residual, std::abs(V(x) - V(-x)));
    }
    rep.second_derivative_at_min = V.d2(0.0);

    // minima = sign changes of V' from - to +, scanned on a dense periodic
    // grid offset by half a spacing (symmetry points are exact zeros of V')
    const std::size_t n = std::max<std::size_t>(samples, 1024);
    auto node = [&](std::size_t j) { return -0.5 + (static_cast<double>(j) + 0.5) / n; };
    double prev = V.d1(node(n - 1));
    for (std::size_t j = 0; j < n; ++j) {
        const double cur = V.d1(node(j));
        if (prev < 0.0 && cur > 0.0) {
            ++rep.minima_count;
            const double xm = wrap_torus(node(j) - 0.5 / n);
            if (rep.minima_count == 1 || std::abs(xm) < std::abs(rep.min_location))
                rep.min_location = xm;
        }
        prev = cur;
    }

    if (rep.symmetry_residual > 1e-12) {
        rep.message = "symmetry violated: max |V(x)-V(-x)| = " + std::to_string(rep.symmetry_residual);
        return rep;
    }
    if (!(rep.second_derivative_at_min > 0.0)) {
        rep.message = "degenerate minimum: V''(0) <= 0";
        return rep;
    }
    if (rep.minima_count != 1) {
        rep.message = "interior minimum not unique: found " + std::to_string(rep.minima_count) +
                      " sign changes of V' from - to +";
        return rep;
    }
    if (std::abs(rep.min_location) > 2.0 / static_cast<double>(n)) {
        rep.message = "minimum not at the origin (located near " + std::to_string(rep.min_location) + ")";
        return rep;
    }
    rep.pass = true;
    rep.message = "ok";
    return rep;
}

}  // namespace wkw
