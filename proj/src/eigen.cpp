#include "wkw/eigen.hpp"

#include <algorithm>

namespace wkw {

BandedPeriodicOperator::BandedPeriodicOperator(BandedMatrix a,
                                               std::vector<BorderedBandedSolver::Update> corners)
    : m_a(std::move(a)), m_corners(std::move(corners))
{
}

std::vector<double> BandedPeriodicOperator::apply(std::span<const double> x) const
{
    std::vector<double> y = m_a.apply(x);
    for (const auto& up : m_corners) {
        double s = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) s += up.v[i] * x[i];
        for (std::size_t i = 0; i < y.size(); ++i) y[i] += up.u[i] * s;
    }
    return y;
}

std::vector<double> BandedPeriodicOperator::solve_shifted(double shift, std::span<const double> rhs)
{
    if (!m_solver || shift != m_shift) {
        BandedMatrix shifted = m_a;
        for (std::size_t i = 0; i < shifted.size(); ++i) shifted.at(i, i) -= shift;
        m_solver = std::make_unique<BorderedBandedSolver>(std::move(shifted), m_corners);
        m_shift = shift;
    }
    return m_solver->solve(rhs);
}

DenseOperator::DenseOperator(std::size_t n, std::vector<double> data)
    : m_n(n), m_data(std::move(data))
{
    if (m_data.size() != n * n) throw std::invalid_argument("DenseOperator: bad data size");
}

std::vector<double> DenseOperator::apply(std::span<const double> x) const
{
    if (x.size() != m_n) throw std::invalid_argument("DenseOperator::apply size mismatch");
    std::vector<double> y(m_n, 0.0);
    for (std::size_t i = 0; i < m_n; ++i) {
        double s = 0.0;
        const double* row = &m_data[i * m_n];
        for (std::size_t j = 0; j < m_n; ++j) s += row[j] * x[j];
        y[i] = s;
    }
    return y;
}

std::vector<double> DenseOperator::solve_shifted(double shift, std::span<const double> rhs)
{
    if (m_lu.empty() || shift != m_shift) {
        m_lu = m_data;
        for (std::size_t i = 0; i < m_n; ++i) m_lu[i * m_n + i] -= shift;
        if (!dense_lu_factor(m_lu, m_piv, m_n)) {
            // shift landed on an eigenvalue; nudge and retry once
            m_lu = m_data;
            const double nudge = 1e-10 * (1.0 + std::abs(shift));
            for (std::size_t i = 0; i < m_n; ++i) m_lu[i * m_n + i] -= shift + nudge;
            if (!dense_lu_factor(m_lu, m_piv, m_n))
                throw SolverError("DenseOperator: singular shifted matrix");
        }
        m_shift = shift;
    }
    std::vector<double> x(rhs.begin(), rhs.end());
    dense_lu_solve(m_lu, m_piv, m_n, x);
    return x;
}

PrincipalEigenResult principal_eigenpair(SpectralOperator& op, double guess, double tol, int max_iter)
{
    const std::size_t n = op.size();
    std::vector<double> u(n, 1.0);
    double shift = guess;
    double lambda = guess;
    PrincipalEigenResult out;

    auto normalize_max = [](std::vector<double>& w) {
        double mx = 0.0;
        for (double v : w) mx = std::max(mx, std::abs(v));
        if (mx == 0.0) throw SolverError("principal_eigenpair: zero iterate");
        // fix sign by the largest-magnitude entry
        double signed_mx = 0.0;
        for (double v : w)
            if (std::abs(v) == mx) { signed_mx = v; break; }
        for (double& v : w) v /= signed_mx;
    };

    double prev_residual = std::numeric_limits<double>::infinity();
    int stagnant = 0;
    for (int it = 1; it <= max_iter; ++it) {
        std::vector<double> w;
        try {
            w = op.solve_shifted(shift, u);
        } catch (const SolverError&) {
            shift += 1e-9 * (1.0 + std::abs(shift));
            w = op.solve_shifted(shift, u);
        }
        normalize_max(w);
        std::vector<double> aw = op.apply(w);
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < n; ++i) { num += w[i] * aw[i]; den += w[i] * w[i]; }
        lambda = num / den;
        double resid = 0.0, wn = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            resid = std::max(resid, std::abs(aw[i] - lambda * w[i]));
            wn = std::max(wn, std::abs(w[i]));
        }
        resid /= wn;
        u = std::move(w);
        out.iterations = it;
        if (resid <= tol * std::max(1.0, std::abs(lambda))) {
            out.value = lambda;
            out.residual = resid;
            break;
        }
        // Rayleigh-quotient shift updates after a few fixed-shift steps
        if (it >= 3) shift = lambda;
        if (resid > 0.5 * prev_residual) {
            if (++stagnant > 12)
                throw SolverError("principal_eigenpair: iteration stagnation", resid);
        } else {
            stagnant = 0;
        }
        prev_residual = resid;
        if (it == max_iter)
            throw SolverError("principal_eigenpair: no convergence", resid);
    }

    double mn = std::numeric_limits<double>::infinity();
    for (double v : u) mn = std::min(mn, v);
    if (!(mn > 0.0))
        throw SolverError("principal_eigenpair: eigenvector not strictly positive "
                          "(non-Perron discretization; refine the grid or increase h)", mn);
    out.vector = std::move(u);
    return out;
}

}  // namespace wkw
