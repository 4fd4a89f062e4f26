#include "wkw/cell.hpp"

#include <algorithm>

#include "wkw/eigen.hpp"
#include "wkw/roots.hpp"

namespace wkw {

namespace {

struct Workspace {
    const SymmetricPotential* V;
    double P, h;
    int diff_sign;  // -1 for the backward equation, +1 for the forward one
    PeriodicGrid grid;
    std::vector<double> vpot;
    bool finite_difference;

    explicit Workspace(const SymmetricPotential* pot, double P_, double h_, int sign,
                       std::size_t M, bool fd)
        : V(pot), P(P_), h(h_), diff_sign(sign), grid(M), vpot(M), finite_difference(fd)
    {
        for (std::size_t j = 0; j < M; ++j) vpot[j] = (*V)(grid.node(j));
    }

    // residual F_j = diff_sign (h/2) v'' + (1/2)(P + v')^2 + V - Hbar
    // and the drift g = P + v'
    void residual(const std::vector<double>& v, double hbar,
                  std::vector<double>& F, std::vector<double>& drift) const
    {
        const std::size_t M = grid.size();
        std::vector<double> d1, d2;
        if (finite_difference) {
            const double dx = grid.spacing();
            d1.resize(M);
            d2.resize(M);
            for (std::size_t j = 0; j < M; ++j) {
                const std::size_t jp = (j + 1) % M, jm = (j + M - 1) % M;
                d1[j] = (v[jp] - v[jm]) / (2.0 * dx);
                d2[j] = (v[jp] - 2.0 * v[j] + v[jm]) / (dx * dx);
            }
        } else {
            d1 = spectral_derivative(v, 1);
            d2 = spectral_derivative(v, 2);
        }
        F.resize(M);
        drift.resize(M);
        for (std::size_t j = 0; j < M; ++j) {
            drift[j] = P + d1[j];
            F[j] = diff_sign * 0.5 * h * d2[j] + 0.5 * sqr(drift[j]) + vpot[j] - hbar;
        }
    }

    static double sup_norm(const std::vector<double>& F)
    {
        double s = 0.0;
        for (double f : F) s = std::max(s, std::abs(f));
        return s;
    }

    // Rows of the starred equation are negated so the banded core is always
    // the elliptic orientation: the anti-diffusive strip operator has an
    // exponentially large inverse (~ e^{2P/h}) and would wreck the Woodbury
    // split, while the elliptic one obeys a maximum principle.
    double row_sign() const { return diff_sign < 0 ? 1.0 : -1.0; }

    // bordered-banded Newton system: 4th-order periodic finite-difference
    // linearization (bandwidth 2) plus wrap corners, the dHbar column and
    // the mean-gauge row as rank-one borders (Woodbury)
    BorderedBandedSolver jacobian(const std::vector<double>& drift) const
    {
        const std::size_t M = grid.size();
        const std::size_t n = M + 1;
        const double dx = grid.spacing();
        const double s = row_sign();

        // coefficient of v_{j+k} in  -(h/2) D2 + g_eff D1  (4th order)
        const double cd = 0.5 * h / (12.0 * dx * dx);  // diffusion unit
        auto coef = [&](int k, double g) -> double {
            const double ca = g / (12.0 * dx);
            switch (k) {
                case -2: return cd + ca;
                case -1: return -16.0 * cd - 8.0 * ca;
                case 0: return 30.0 * cd;
                case 1: return -16.0 * cd + 8.0 * ca;
                default: return cd - ca;
            }
        };

        BandedMatrix core(n, 2, 2);
        std::vector<BorderedBandedSolver::Update> ups;
        auto add_entry = [&](std::size_t r, int k) {
            const double v = coef(k, s * drift[r]);
            const std::ptrdiff_t c = static_cast<std::ptrdiff_t>(r) + k;
            if (c >= 0 && c < static_cast<std::ptrdiff_t>(M)) {
                core.at(r, static_cast<std::size_t>(c)) = v;
            } else {
                BorderedBandedSolver::Update up;
                up.u.assign(n, 0.0);
                up.v.assign(n, 0.0);
                up.u[r] = v;
                up.v[static_cast<std::size_t>((c + static_cast<std::ptrdiff_t>(M)) % static_cast<std::ptrdiff_t>(M))] = 1.0;
                ups.push_back(std::move(up));
            }
        };
        for (std::size_t j = 0; j < M; ++j)
            for (int k = -2; k <= 2; ++k) add_entry(j, k);
        core.at(M, M) = 1.0;

        // dHbar column: s * (-1) on the first M rows
        BorderedBandedSolver::Update col;
        col.u.assign(n, 0.0);
        col.v.assign(n, 0.0);
        for (std::size_t j = 0; j < M; ++j) col.u[j] = -s;
        col.v[M] = 1.0;
        ups.push_back(std::move(col));
        // mean-gauge row (and clear the placeholder corner)
        BorderedBandedSolver::Update row;
        row.u.assign(n, 0.0);
        row.v.assign(n, 0.0);
        row.u[M] = 1.0;
        for (std::size_t j = 0; j < M; ++j) row.v[j] = 1.0;
        row.v[M] = -1.0;
        ups.push_back(std::move(row));
        return BorderedBandedSolver(std::move(core), std::move(ups));
    }
};

struct NewtonResult {
    std::vector<double> v;
    double hbar;
    double residual;
    int iterations;
};

NewtonResult newton_solve(const Workspace& ws, std::vector<double> v, double hbar,
                          double tol, int max_iter)
{
    const std::size_t M = ws.grid.size();
    std::vector<double> F, drift;
    ws.residual(v, hbar, F, drift);
    double fn = Workspace::sup_norm(F);

    NewtonResult out;
    out.iterations = 0;
    const double s = ws.row_sign();
    for (int it = 0; it < max_iter && fn > tol; ++it) {
        BorderedBandedSolver J = ws.jacobian(drift);
        std::vector<double> rhs(M + 1);
        double gauge = 0.0;
        for (std::size_t j = 0; j < M; ++j) gauge += v[j];
        for (std::size_t j = 0; j < M; ++j) rhs[j] = -s * F[j];
        rhs[M] = -gauge;
        std::vector<double> delta = J.solve(rhs);

        // line search: halve until the residual drops
        double t = 1.0;
        bool accepted = false;
        std::vector<double> vt(M), Ft, driftt;
        for (int ls = 0; ls < 9; ++ls) {
            for (std::size_t j = 0; j < M; ++j) vt[j] = v[j] + t * delta[j];
            const double hbt = hbar + t * delta[M];
            ws.residual(vt, hbt, Ft, driftt);
            const double fnt = Workspace::sup_norm(Ft);
            if (fnt < fn || fnt <= tol) {
                v.swap(vt);
                hbar = hbt;
                F.swap(Ft);
                drift.swap(driftt);
                fn = fnt;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        out.iterations = it + 1;
        if (!accepted)
            throw SolverError("cell Newton: line search stalled (residual " +
                              std::to_string(fn) + "); try a finer grid or larger h", fn);
    }
    if (fn > tol)
        throw SolverError("cell Newton: no convergence (residual " + std::to_string(fn) +
                          "); try a finer grid or larger h", fn);
    out.v = std::move(v);
    out.hbar = hbar;
    out.residual = fn;
    return out;
}

// march down in h, warm-starting from the previous solution
NewtonResult continuation_solve(const Workspace& ws, const ExpansionSeries& series,
                                double h_target, double h_start, double tol, int max_iter,
                                bool starred)
{
    std::vector<double> hs;
    for (double hh = h_start; hh > h_target * 1.0001; hh *= 0.75) hs.push_back(hh);
    hs.push_back(h_target);

    std::vector<double> v = series.assemble(hs.front(), starred);
    double hbar = series.hbar_sum(hs.front());
    NewtonResult res;
    for (double hh : hs) {
        Workspace wsh(ws.V, ws.P, hh, ws.diff_sign, ws.grid.size(), ws.finite_difference);
        res = newton_solve(wsh, v, hbar, tol, max_iter);
        v = res.v;
        hbar = res.hbar;
    }
    return res;
}

double zero_mean(std::vector<double>& v)
{
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    for (double& x : v) x -= mean;
    return mean;
}

// log of int exp(d/h) dx, evaluated with max subtraction
double log_normalization(const std::vector<double>& d, double h)
{
    double mx = -std::numeric_limits<double>::infinity();
    for (double x : d) mx = std::max(mx, x / h);
    double s = 0.0;
    for (double x : d) s += std::exp(x / h - mx);
    s /= static_cast<double>(d.size());
    return mx + std::log(s);
}

}  // namespace

CellSolution solve_cell(PotentialPtr V, double P, double h, const CellOptions& opt)
{
    if (!V) throw std::invalid_argument("solve_cell: null potential");
    if (!(h > 0.0) || h > opt.h_max)
        throw std::domain_error("solve_cell: h must lie in (0, " + std::to_string(opt.h_max) + "]");

    std::size_t M = opt.grid;
    if (M == 0) M = std::max<std::size_t>(256, next_power_of_two(
                        static_cast<std::size_t>(std::ceil(opt.points_per_h / h))));
    if (static_cast<double>(M) < opt.points_per_h / h)
        throw std::domain_error("solve_cell: grid too coarse for h (need M >= " +
                                std::to_string(opt.points_per_h / h) + ")");

    LevelOptions lopt;
    lopt.grid = M;
    ClassicalLevel level = ClassicalLevel::solve(V, P, lopt);
    ExpansionSeries series = ExpansionSeries::build(level, opt.expansion_order, M);

    // roundoff floor of the spectral residual
    double vscale = 0.0;
    for (double x : series.assemble(h)) vscale = std::max(vscale, std::abs(x));
    const double floor = 25.0 * 1.1e-16 * 0.5 * h * sqr(pi * static_cast<double>(M)) *
                         std::max(0.05, vscale);
    const double tol = std::max(opt.tol, floor);

    CellSolution sol;
    sol.m_V = V;
    sol.m_h = h;
    sol.m_P = P;
    sol.m_grid = PeriodicGrid(M);
    sol.m_tol_used = tol;
    sol.m_vpot.resize(M);
    for (std::size_t j = 0; j < M; ++j) sol.m_vpot[j] = (*V)(sol.m_grid.node(j));

    NewtonResult r1, r2;
    for (int pass = 0; pass < 2; ++pass) {
        const bool starred = (pass == 1);
        Workspace ws(V.get(), P, h, starred ? +1 : -1, M, opt.finite_difference);
        NewtonResult res;
        try {
            res = newton_solve(ws, series.assemble(h, starred), series.hbar_sum(h),
                               tol, opt.max_newton);
        } catch (const SolverError&) {
            res = continuation_solve(ws, series, h, std::min(opt.h_max, 0.4), tol,
                                     opt.max_newton, starred);
        }
        (starred ? r2 : r1) = std::move(res);
    }

    zero_mean(r1.v);
    zero_mean(r2.v);
    sol.m_hbar_b1 = r1.hbar;
    sol.m_hbar_b2 = r2.hbar;
    if (std::abs(r1.hbar - r2.hbar) > 64.0 * tol)
        throw SolverError("solve_cell: the two equations disagree on Hbar_h",
                          std::abs(r1.hbar - r2.hbar));
    sol.m_hbar = 0.5 * (r1.hbar + r2.hbar);
    sol.m_v = std::move(r1.v);
    sol.m_vstar = std::move(r2.v);

    sol.finalize(opt.finite_difference);
    return sol;
}

// joint normalization of (v, v*), residuals against the shared constant, and
// the zero set of v* - v with the canonical x_h
void CellSolution::finalize(bool finite_difference)
{
    CellSolution& sol = *this;
    const std::size_t M = sol.m_grid.size();
    const double h = sol.m_h;
    std::vector<double> d(M);
    for (std::size_t j = 0; j < M; ++j) d[j] = sol.m_vstar[j] - sol.m_v[j];
    const double shift = h * log_normalization(d, h);
    for (std::size_t j = 0; j < M; ++j) {
        sol.m_vstar[j] -= shift;
        d[j] -= shift;
    }

    {
        Workspace w1(sol.m_V.get(), sol.m_P, h, -1, M, finite_difference);
        Workspace w2(sol.m_V.get(), sol.m_P, h, +1, M, finite_difference);
        std::vector<double> F, drift;
        w1.residual(sol.m_v, sol.m_hbar, F, drift);
        sol.m_res1 = Workspace::sup_norm(F);
        w2.residual(sol.m_vstar, sol.m_hbar, F, drift);
        sol.m_res2 = Workspace::sup_norm(F);
    }

    sol.m_zeros.clear();
    double dmax = 0.0;
    for (double x : d) dmax = std::max(dmax, std::abs(x));
    if (dmax <= 1e-12) {
        // v* == v (flat potential): every point qualifies, return the convention
        sol.m_x_h = -0.5;
        sol.m_zeros = {-0.5};
    } else {
        TrigInterpolant di(d);
        const std::size_t fine = 4 * M;
        double prev = di(-0.5);
        for (std::size_t j = 1; j <= fine; ++j) {
            const double x = -0.5 + static_cast<double>(j) / static_cast<double>(fine);
            const double cur = di(x);
            if ((prev < 0.0 && cur > 0.0) || (prev > 0.0 && cur < 0.0)) {
                const double a = x - 1.0 / static_cast<double>(fine);
                double root = find_root_monotone([&](double t) { return di(t); }, a, x, 1e-14);
                sol.m_zeros.push_back(wrap_torus(root));
            }
            prev = cur;
        }
        if (sol.m_zeros.empty())
            throw SolverError("solve_cell: no zero of v* - v found despite normalization");
        std::sort(sol.m_zeros.begin(), sol.m_zeros.end());
        sol.m_x_h = 0.0;
        bool found = false;
        for (double z : sol.m_zeros) {
            if (z <= 1e-12) { sol.m_x_h = z; found = true; break; }  // first zero in [-1/2, 0]
        }
        if (!found) sol.m_x_h = -sol.m_zeros.front();  // mirror of a positive zero
    }
}

CellSolution CellSolution::with_gauge_shifts(double dv, double dvstar) const
{
    CellSolution out = *this;
    for (double& x : out.m_v) x += dv;
    for (double& x : out.m_vstar) x += dvstar;
    out.finalize(false);
    // restore the mean-zero gauge of v for comparability
    double mean = 0.0;
    for (double x : out.m_v) mean += x;
    mean /= static_cast<double>(out.m_v.size());
    for (double& x : out.m_v) x -= mean;
    for (double& x : out.m_vstar) x -= mean;
    return out;
}

double CellSolution::normalization_integral() const
{
    std::vector<double> d(m_v.size());
    for (std::size_t j = 0; j < m_v.size(); ++j) d[j] = m_vstar[j] - m_v[j];
    return std::exp(log_normalization(d, m_h));
}

std::pair<double, double> CellSolution::residual_refined(std::size_t factor) const
{
    const std::size_t Mf = m_grid.size() * factor;
    PeriodicGrid gf(Mf);
    auto eval = [&](const std::vector<double>& v, int sign) {
        std::vector<double> vf = trig_refine(v, factor);
        std::vector<double> d1 = spectral_derivative(vf, 1);
        std::vector<double> d2 = spectral_derivative(vf, 2);
        double sup = 0.0;
        for (std::size_t j = 0; j < Mf; ++j) {
            const double r = sign * 0.5 * m_h * d2[j] + 0.5 * sqr(m_P + d1[j]) +
                             (*m_V)(gf.node(j)) - m_hbar;
            sup = std::max(sup, std::abs(r));
        }
        return sup;
    };
    return {eval(m_v, -1), eval(m_vstar, +1)};
}

std::pair<std::vector<double>, std::vector<double>> CellSolution::residual_profiles() const
{
    const std::size_t M = m_grid.size();
    auto eval = [&](const std::vector<double>& v, int sign) {
        std::vector<double> d1 = spectral_derivative(v, 1);
        std::vector<double> d2 = spectral_derivative(v, 2);
        std::vector<double> r(M);
        for (std::size_t j = 0; j < M; ++j)
            r[j] = sign * 0.5 * m_h * d2[j] + 0.5 * sqr(m_P + d1[j]) + m_vpot[j] - m_hbar;
        return r;
    };
    return {eval(m_v, -1), eval(m_vstar, +1)};
}

WaveState::WaveState(const CellSolution& sol)
    : m_h(sol.h()), m_P(sol.P()), m_grid(sol.grid()), m_v(sol.v()), m_vstar(sol.vstar())
{
    const std::size_t M = m_grid.size();
    m_amp.resize(M);
    m_w.resize(M);
    for (std::size_t j = 0; j < M; ++j) {
        m_amp[j] = std::exp((m_vstar[j] - m_v[j]) / (2.0 * m_h));
        m_w[j] = 0.5 * (m_v[j] + m_vstar[j]);
    }
}

std::pair<std::vector<double>, std::vector<double>> WaveState::refined(std::size_t factor) const
{
    std::vector<double> vf = trig_refine(m_v, factor);
    std::vector<double> vsf = trig_refine(m_vstar, factor);
    std::vector<double> amp(vf.size()), w(vf.size());
    for (std::size_t j = 0; j < vf.size(); ++j) {
        amp[j] = std::exp((vsf[j] - vf[j]) / (2.0 * m_h));
        w[j] = 0.5 * (vf[j] + vsf[j]);
    }
    return {std::move(amp), std::move(w)};
}

SigmaDensity sigma_invariant(const ExpansionSeries& series, double h)
{
    if (!(h > 0.0)) throw std::invalid_argument("sigma_invariant: h must be positive");
    const PeriodicGrid& grid = series.grid();
    const std::size_t M = grid.size();
    const double P = series.level().P();

    // G(x) = int_{-1/2}^x g,  g = P + (vhat^N_h)'
    std::vector<double> gsamp = series.assemble_prime(h);  // mean-zero part of g
    std::vector<double> psi = spectral_antiderivative(gsamp);
    TrigInterpolant psi_i(psi);
    const double psi_left = psi_i(-0.5);
    auto G = [&](double x) { return psi_i(x) - psi_left + P * (x + 0.5); };

    std::vector<double> Gj(M + 1);
    for (std::size_t j = 0; j < M; ++j) Gj[j] = G(grid.node(j));
    Gj[M] = G(0.5);

    // cumulative J(x_j) = int_{-1/2}^{x_j} exp((G(s)-G(x_j))/h) ds; every
    // exponent is <= 0, so nothing overflows
    static const double gl_x[4] = {-0.8611363115940526, -0.3399810435848563,
                                   0.3399810435848563, 0.8611363115940526};
    static const double gl_w[4] = {0.3478548451374538, 0.6521451548625461,
                                   0.6521451548625461, 0.3478548451374538};
    std::vector<double> J(M + 1);
    J[0] = 0.0;
    const double dx = grid.spacing();
    for (std::size_t j = 0; j < M; ++j) {
        const double a = -0.5 + dx * static_cast<double>(j);
        double panel = 0.0;
        for (int q = 0; q < 4; ++q) {
            const double s = a + 0.5 * dx * (1.0 + gl_x[q]);
            panel += gl_w[q] * std::exp((G(s) - Gj[j + 1]) / h);
        }
        panel *= 0.5 * dx;
        J[j + 1] = J[j] * std::exp((Gj[j] - Gj[j + 1]) / h) + panel;
    }

    const double K = J[M];  // full-period shifted integral
    const double ratio = K / (1.0 - std::exp(-P / h));  // C_h / c_h

    SigmaDensity out;
    out.values.resize(M);
    double Z = 0.0;
    for (std::size_t j = 0; j < M; ++j) {
        out.values[j] = J[j] + ratio * std::exp(-Gj[j] / h);
        Z += out.values[j];
    }
    Z /= static_cast<double>(M);
    out.min = std::numeric_limits<double>::infinity();
    out.max = 0.0;
    for (double& v : out.values) {
        v /= Z;
        out.min = std::min(out.min, v);
        out.max = std::max(out.max, v);
    }
    out.c_h = h / Z;
    out.C_h = out.c_h * ratio;
    return out;
}

ExpansionError expansion_error(const CellSolution& sol, const ExpansionSeries& series)
{
    if (sol.grid().size() != series.grid().size())
        throw std::invalid_argument("expansion_error: grids must match");
    const std::size_t M = sol.grid().size();
    const double h = sol.h();

    ExpansionError out;
    std::vector<double> vhat = series.assemble(h);
    double gmin = std::numeric_limits<double>::infinity(), gmax = -gmin;
    for (std::size_t j = 0; j < M; ++j) {
        const double g = sol.v()[j] - vhat[j];
        gmin = std::min(gmin, g);
        gmax = std::max(gmax, g);
    }
    out.c0_seminorm = gmax - gmin;

    std::vector<double> dv = spectral_derivative(sol.v(), 1);
    std::vector<double> dvhat = series.assemble_prime(h);
    double acc = 0.0;
    for (std::size_t j = 0; j < M; ++j) acc += sqr(dv[j] - dvhat[j]);
    out.l2_derivative = std::sqrt(acc / static_cast<double>(M));

    out.hbar_error = std::abs(sol.hbar() - series.hbar_sum(h));
    return out;
}

double cole_hopf_hbar(const SymmetricPotential& V, double P, double h,
                      std::size_t grid_size, double guess, double tol)
{
    const PeriodicGrid grid(grid_size);
    const std::size_t M = grid_size;

    // dense spectral differentiation matrices, columns = derivative of e_k
    std::vector<double> D1(M * M), D2(M * M);
    std::vector<double> e(M, 0.0);
    for (std::size_t k = 0; k < M; ++k) {
        e[k] = 1.0;
        std::vector<double> c1 = spectral_derivative(e, 1);
        std::vector<double> c2 = spectral_derivative(e, 2);
        for (std::size_t j = 0; j < M; ++j) {
            D1[j * M + k] = c1[j];
            D2[j * M + k] = c2[j];
        }
        e[k] = 0.0;
    }
    std::vector<double> L(M * M);
    for (std::size_t j = 0; j < M; ++j)
        for (std::size_t k = 0; k < M; ++k)
            L[j * M + k] = 0.5 * h * h * D2[j * M + k] - h * P * D1[j * M + k];
    for (std::size_t j = 0; j < M; ++j)
        L[j * M + j] += V(grid.node(j)) + 0.5 * P * P;

    DenseOperator op(M, std::move(L));
    PrincipalEigenResult eig = principal_eigenpair(op, guess, tol);
    return eig.value;
}

}  // namespace wkw
