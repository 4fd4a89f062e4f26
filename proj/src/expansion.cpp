#include "wkw/expansion.hpp"

#include <algorithm>

namespace wkw {

ExpansionSeries::ExpansionSeries(const ClassicalLevel& level, int order, std::size_t grid_size)
    : m_level(level), m_order(order), m_grid(grid_size)
{
}

ExpansionSeries ExpansionSeries::build(const ClassicalLevel& level, int order,
                                       std::size_t grid_size)
{
    if (order < 0 || order > max_order)
        throw std::invalid_argument("ExpansionSeries: order must be in [0, " +
                                    std::to_string(max_order) + "]");
    ExpansionSeries s(level, order, grid_size);
    const std::size_t M = s.m_grid.size();
    const std::size_t depth = static_cast<std::size_t>(order) + 2;  // jet order of v_0'

    s.m_hbar.assign(order + 1, 0.0);
    s.m_hbar[0] = level.hbar();
    s.m_v.assign(order + 1, {});
    s.m_v1.assign(order + 1, {});
    s.m_v2.assign(order + 1, {});
    s.m_vpot.resize(M);

    // per-node jets of v_k' (truncation shrinks with k; see header)
    std::vector<std::vector<Jet>> vp(order + 1, std::vector<Jet>(M));
    std::vector<Jet> pj(M);
    std::vector<double> density(M);
    for (std::size_t j = 0; j < M; ++j) {
        const double x = s.m_grid.node(j);
        s.m_vpot[j] = level.potential()(x);
        pj[j] = level.p_plus_jet(x, depth);
        vp[0][j] = pj[j] + (-level.P());
        density[j] = level.mather_density(x);
    }

    for (int k = 1; k <= order; ++k) {
        // compatibility constant
        std::vector<double> integrand(M);
        for (std::size_t j = 0; j < M; ++j) {
            double quad = 0.0;
            for (int i = 1; i < k; ++i) quad += vp[i][j].value() * vp[k - i][j].value();
            integrand[j] = (-0.5 * vp[k - 1][j].derivative(1) + 0.5 * quad) * density[j];
        }
        s.m_hbar[k] = quad_periodic(std::span<const double>(integrand));

        for (std::size_t j = 0; j < M; ++j) {
            Jet rhs = Jet(vp[k - 1][j].order() - 1, s.m_hbar[k]) +
                      0.5 * vp[k - 1][j].shifted_derivative();
            for (int i = 1; i < k; ++i)
                rhs = rhs - 0.5 * (vp[i][j] * vp[k - i][j]);
            vp[k][j] = rhs / pj[j];
        }
    }

    // grid tables of v_k, v_k', v_k''
    for (int k = 0; k <= order; ++k) {
        s.m_v1[k].resize(M);
        s.m_v2[k].resize(M);
        for (std::size_t j = 0; j < M; ++j) {
            s.m_v1[k][j] = vp[k][j].value();
            s.m_v2[k][j] = vp[k][j].derivative(1);
        }
    }
    // values: v_0 pinned to phi(-1/2) = 0, v_1 = (1/2) ln p_plus exactly,
    // v_k mean-zero for k >= 2
    for (int k = 0; k <= order; ++k) {
        if (k == 1) {
            s.m_v[k].resize(M);
            for (std::size_t j = 0; j < M; ++j)
                s.m_v[k][j] = 0.5 * std::log(pj[j].value());
        } else {
            s.m_v[k] = spectral_antiderivative(s.m_v1[k]);
            if (k == 0) {
                TrigInterpolant tmp(s.m_v[k]);
                const double off = -tmp(-0.5);
                for (double& v : s.m_v[k]) v += off;
            }
        }
    }
    s.m_interp.reserve(order + 1);
    for (int k = 0; k <= order; ++k) s.m_interp.emplace_back(s.m_v[k]);
    return s;
}

double ExpansionSeries::hbar_sum(double h) const
{
    double acc = 0.0, hk = 1.0;
    for (int j = 0; j <= m_order; ++j) {
        acc += hk * m_hbar[j];
        hk *= h;
    }
    return acc;
}

namespace {
inline double sign_for(int j, bool starred) { return (starred && (j & 1)) ? -1.0 : 1.0; }
}

std::vector<double> ExpansionSeries::assemble(double h, bool starred) const
{
    const std::size_t M = m_grid.size();
    std::vector<double> out(M, 0.0);
    double hk = 1.0;
    for (int j = 0; j <= m_order; ++j) {
        const double w = hk * sign_for(j, starred);
        for (std::size_t i = 0; i < M; ++i) out[i] += w * m_v[j][i];
        hk *= h;
    }
    return out;
}

std::vector<double> ExpansionSeries::assemble_prime(double h, bool starred) const
{
    const std::size_t M = m_grid.size();
    std::vector<double> out(M, 0.0);
    double hk = 1.0;
    for (int j = 0; j <= m_order; ++j) {
        const double w = hk * sign_for(j, starred);
        for (std::size_t i = 0; i < M; ++i) out[i] += w * m_v1[j][i];
        hk *= h;
    }
    return out;
}

std::vector<double> ExpansionSeries::assemble_second(double h, bool starred) const
{
    const std::size_t M = m_grid.size();
    std::vector<double> out(M, 0.0);
    double hk = 1.0;
    for (int j = 0; j <= m_order; ++j) {
        const double w = hk * sign_for(j, starred);
        for (std::size_t i = 0; i < M; ++i) out[i] += w * m_v2[j][i];
        hk *= h;
    }
    return out;
}

double ExpansionSeries::residual(double h, bool starred) const
{
    if (h < 0.0) throw std::invalid_argument("ExpansionSeries::residual: h must be >= 0");
    const std::size_t M = m_grid.size();
    const std::vector<double> d1 = assemble_prime(h, starred);
    const std::vector<double> d2 = assemble_second(h, starred);
    const double hh = hbar_sum(h);
    const double diff_sign = starred ? +0.5 : -0.5;
    double sup = 0.0;
    for (std::size_t j = 0; j < M; ++j) {
        const double r = diff_sign * h * d2[j] + 0.5 * sqr(m_level.P() + d1[j]) + m_vpot[j] - hh;
        sup = std::max(sup, std::abs(r));
    }
    return sup;
}

}  // namespace wkw
