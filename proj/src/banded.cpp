#include "wkw/banded.hpp"

#include <algorithm>
#include <cstdlib>

namespace wkw {

BandedMatrix::BandedMatrix(std::size_t n, std::size_t kl, std::size_t ku)
    : m_n(n), m_kl(kl), m_ku(ku), m_width(2 * kl + ku + 1), m_data(n * m_width, 0.0)
{
    if (n == 0) throw std::invalid_argument("BandedMatrix: empty");
    if (kl >= n || ku >= n) throw std::invalid_argument("BandedMatrix: bandwidth exceeds size");
}

bool BandedMatrix::in_band(std::size_t i, std::size_t j) const
{
    const auto d = static_cast<std::ptrdiff_t>(j) - static_cast<std::ptrdiff_t>(i);
    return d >= -static_cast<std::ptrdiff_t>(m_kl) &&
           d <= static_cast<std::ptrdiff_t>(m_ku + m_kl);
}

double& BandedMatrix::at(std::size_t i, std::size_t j)
{
    if (!in_band(i, j)) throw std::out_of_range("BandedMatrix::at outside band");
    return m_data[i * m_width + (j - i + m_kl)];
}

double BandedMatrix::get(std::size_t i, std::size_t j) const
{
    if (!in_band(i, j)) return 0.0;
    return m_data[i * m_width + (j - i + m_kl)];
}

std::vector<double> BandedMatrix::apply(std::span<const double> x) const
{
    if (x.size() != m_n) throw std::invalid_argument("BandedMatrix::apply size mismatch");
    std::vector<double> y(m_n, 0.0);
    for (std::size_t i = 0; i < m_n; ++i) {
        const std::size_t j0 = (i >= m_kl) ? i - m_kl : 0;
        const std::size_t j1 = std::min(m_n - 1, i + m_ku);  // logical band only
        double s = 0.0;
        for (std::size_t j = j0; j <= j1; ++j) s += get(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

double BandedMatrix::norm_inf() const
{
    double best = 0.0;
    for (std::size_t i = 0; i < m_n; ++i) {
        const std::size_t j0 = (i >= m_kl) ? i - m_kl : 0;
        const std::size_t j1 = std::min(m_n - 1, i + m_ku + m_kl);
        double s = 0.0;
        for (std::size_t j = j0; j <= j1; ++j) s += std::abs(get(i, j));
        best = std::max(best, s);
    }
    return best;
}

BandedLU::BandedLU(BandedMatrix a) : m_lu(std::move(a)), m_pivot(m_lu.m_n), m_norm_a(m_lu.norm_inf())
{
    const std::size_t n = m_lu.m_n;
    const std::size_t kl = m_lu.m_kl;
    const std::size_t ku = m_lu.m_ku;
    const std::size_t width = m_lu.m_width;
    auto& d = m_lu.m_data;
    auto entry = [&](std::size_t i, std::size_t j) -> double& { return d[i * width + (j - i + kl)]; };

    for (std::size_t c = 0; c < n; ++c) {
        const std::size_t rmax = std::min(n - 1, c + kl);
        std::size_t p = c;
        double best = std::abs(entry(c, c));
        for (std::size_t r = c + 1; r <= rmax; ++r) {
            const double v = std::abs(entry(r, c));
            if (v > best) { best = v; p = r; }
        }
        m_pivot[c] = p;
        if (best == 0.0)
            throw SolverError("banded LU: singular matrix at column " + std::to_string(c));
        const std::size_t jmax = std::min(n - 1, c + ku + kl);
        if (p != c)
            for (std::size_t j = c; j <= jmax; ++j) std::swap(entry(c, j), entry(p, j));
        const double piv = entry(c, c);
        for (std::size_t r = c + 1; r <= rmax; ++r) {
            const double l = entry(r, c) / piv;
            entry(r, c) = l;
            if (l != 0.0)
                for (std::size_t j = c + 1; j <= jmax; ++j) entry(r, j) -= l * entry(c, j);
        }
    }
}

void BandedLU::solve_inplace(std::vector<double>& rhs) const
{
    const std::size_t n = m_lu.m_n;
    if (rhs.size() != n) throw std::invalid_argument("BandedLU::solve size mismatch");
    const std::size_t kl = m_lu.m_kl;
    const std::size_t ku = m_lu.m_ku;
    const std::size_t width = m_lu.m_width;
    const auto& d = m_lu.m_data;
    auto entry = [&](std::size_t i, std::size_t j) -> double { return d[i * width + (j - i + kl)]; };

    for (std::size_t c = 0; c < n; ++c) {
        if (m_pivot[c] != c) std::swap(rhs[c], rhs[m_pivot[c]]);
        const std::size_t rmax = std::min(n - 1, c + kl);
        for (std::size_t r = c + 1; r <= rmax; ++r) rhs[r] -= entry(r, c) * rhs[c];
    }
    for (std::size_t ci = n; ci-- > 0;) {
        const std::size_t jmax = std::min(n - 1, ci + ku + kl);
        double s = rhs[ci];
        for (std::size_t j = ci + 1; j <= jmax; ++j) s -= entry(ci, j) * rhs[j];
        rhs[ci] = s / entry(ci, ci);
    }
}

std::vector<double> BandedLU::solve(std::span<const double> rhs) const
{
    std::vector<double> x(rhs.begin(), rhs.end());
    solve_inplace(x);
    return x;
}

double BandedLU::condition_estimate() const
{
    const std::size_t n = m_lu.m_n;
    // probe ||A^{-1}||_inf with a few deterministic +-1 vectors
    double inv_norm = 0.0;
    unsigned state = 12345u;
    for (int trial = 0; trial < 4; ++trial) {
        std::vector<double> z(n);
        for (std::size_t i = 0; i < n; ++i) {
            state = state * 1664525u + 1013904223u;
            z[i] = (state & 0x10000u) ? 1.0 : -1.0;
        }
        solve_inplace(z);
        double nrm = 0.0;
        for (double v : z) nrm = std::max(nrm, std::abs(v));
        inv_norm = std::max(inv_norm, nrm);
    }
    return m_norm_a * inv_norm;
}

BorderedBandedSolver::BorderedBandedSolver(BandedMatrix core, std::vector<Update> updates)
    : m_lu(std::move(core)), m_updates(std::move(updates)), m_rank(m_updates.size())
{
    if (m_rank == 0) return;
    const std::size_t n = m_updates.front().u.size();
    m_binv_u.reserve(m_rank);
    for (const auto& up : m_updates) {
        if (up.u.size() != n || up.v.size() != n)
            throw std::invalid_argument("BorderedBandedSolver: update size mismatch");
        m_binv_u.push_back(m_lu.solve(up.u));
    }
    // capacitance C = I + V^T B^{-1} U
    m_cap_lu.assign(m_rank * m_rank, 0.0);
    for (std::size_t r = 0; r < m_rank; ++r) {
        for (std::size_t c = 0; c < m_rank; ++c) {
            double s = (r == c) ? 1.0 : 0.0;
            for (std::size_t i = 0; i < n; ++i) s += m_updates[r].v[i] * m_binv_u[c][i];
            m_cap_lu[r * m_rank + c] = s;
        }
    }
    if (!dense_lu_factor(m_cap_lu, m_cap_piv, m_rank))
        throw SolverError("BorderedBandedSolver: singular capacitance (full matrix singular?)");
}

std::vector<double> BorderedBandedSolver::solve(std::span<const double> rhs) const
{
    std::vector<double> y = m_lu.solve(rhs);
    if (m_rank == 0) return y;
    std::vector<double> t(m_rank, 0.0);
    for (std::size_t r = 0; r < m_rank; ++r) {
        double s = 0.0;
        for (std::size_t i = 0; i < y.size(); ++i) s += m_updates[r].v[i] * y[i];
        t[r] = s;
    }
    dense_lu_solve(m_cap_lu, m_cap_piv, m_rank, t);
    for (std::size_t r = 0; r < m_rank; ++r)
        for (std::size_t i = 0; i < y.size(); ++i) y[i] -= m_binv_u[r][i] * t[r];
    return y;
}

bool dense_lu_factor(std::vector<double>& a, std::vector<std::size_t>& piv, std::size_t n)
{
    piv.assign(n, 0);
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        double best = std::abs(a[c * n + c]);
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::abs(a[r * n + c]) > best) { best = std::abs(a[r * n + c]); p = r; }
        if (best == 0.0) return false;
        piv[c] = p;
        if (p != c)
            for (std::size_t j = 0; j < n; ++j) std::swap(a[c * n + j], a[p * n + j]);
        for (std::size_t r = c + 1; r < n; ++r) {
            const double l = a[r * n + c] / a[c * n + c];
            a[r * n + c] = l;
            if (l != 0.0)
                for (std::size_t j = c + 1; j < n; ++j) a[r * n + j] -= l * a[c * n + j];
        }
    }
    return true;
}

void dense_lu_solve(const std::vector<double>& a, const std::vector<std::size_t>& piv,
                    std::size_t n, std::vector<double>& rhs)
{
    // the factorization swaps entire rows (multipliers travel with them), so
    // the permutation must be applied to the rhs up front
    for (std::size_t c = 0; c < n; ++c)
        if (piv[c] != c) std::swap(rhs[c], rhs[piv[c]]);
    for (std::size_t c = 0; c < n; ++c)
        for (std::size_t r = c + 1; r < n; ++r) rhs[r] -= a[r * n + c] * rhs[c];
    for (std::size_t ci = n; ci-- > 0;) {
        double s = rhs[ci];
        for (std::size_t j = ci + 1; j < n; ++j) s -= a[ci * n + j] * rhs[j];
        rhs[ci] = s / a[ci * n + ci];
    }
}

}  // namespace wkw
