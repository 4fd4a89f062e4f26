#include "wkw/wigner.hpp"

#include <algorithm>
#include <thread>

namespace wkw {

namespace {

void transform_rows(const std::vector<double>& amp2, const std::vector<double>& w2,
                    double h, std::size_t M, std::size_t j_begin, std::size_t j_end,
                    std::vector<complex>& out)
{
    const std::size_t M2 = 2 * M;
    std::vector<complex> row(M);
    for (std::size_t j = j_begin; j < j_end; ++j) {
        // y_l = -1/2 + l/M; half-point indices on the 2M grid
        for (std::size_t l = 0; l < M; ++l) {
            const std::size_t kp = (2 * j + l + 2 * M2 - M / 2) % M2;
            const std::size_t km = (2 * j + M / 2 + 2 * M2 - l) % M2;
            const double phase = (w2[kp] - w2[km]) / h;
            row[l] = amp2[kp] * amp2[km] * complex(std::cos(phase), std::sin(phase));
        }
        // seam: y = -1/2 and y = +1/2 are distinct values of the 2-periodic
        // integrand; the trapezoid rule takes their average, i.e. Re c(1/2)
        {
            const std::size_t kp = (2 * j + M / 2) % M2;
            const std::size_t km = (2 * j + M2 - M / 2) % M2;
            const double phase = (w2[kp] - w2[km]) / h;
            row[0] = amp2[kp] * amp2[km] * std::cos(phase);
        }
        fft(row, -1);
        // c_m = (1/M)(-1)^m FFT_m, stored centered (column m + M/2)
        const double inv = 1.0 / static_cast<double>(M);
        for (std::size_t k = 0; k < M; ++k) {
            const int m = coeff_mode(k, M);
            const double s = (m & 1) ? -inv : inv;
            out[j * M + static_cast<std::size_t>(m + static_cast<int>(M / 2))] = s * row[k];
        }
    }
}

}  // namespace

WignerTable wigner_transform(const WaveState& state, const WignerOptions& opt)
{
    const std::size_t M = state.grid().size();
    WignerTable table;
    table.m_grid = state.grid();
    table.m_lat.h = state.h();
    table.m_lat.P = state.P();
    table.m_values.assign(M * M, complex(0.0, 0.0));

    auto [amp2, w2] = state.refined(2);

    const int jobs = std::max(1, opt.jobs);
    if (jobs == 1 || M < 64) {
        transform_rows(amp2, w2, state.h(), M, 0, M, table.m_values);
    } else {
        std::vector<std::thread> pool;
        const std::size_t chunk = (M + jobs - 1) / jobs;
        for (int t = 0; t < jobs; ++t) {
            const std::size_t b = std::min(M, static_cast<std::size_t>(t) * chunk);
            const std::size_t e = std::min(M, b + chunk);
            if (b >= e) break;
            pool.emplace_back(transform_rows, std::cref(amp2), std::cref(w2), state.h(), M,
                              b, e, std::ref(table.m_values));
        }
        for (auto& th : pool) th.join();
    }

    // diagnostics and marginals over the full mode range
    table.m_x_marginal.assign(M, 0.0);
    table.m_p_marginal.assign(M, 0.0);
    double max_imag = 0.0;
    for (std::size_t j = 0; j < M; ++j) {
        double xr = 0.0;
        for (std::size_t k = 0; k < M; ++k) {
            const complex w = table.m_values[j * M + k];
            xr += w.real();
            table.m_p_marginal[k] += w.real();
            max_imag = std::max(max_imag, std::abs(w.imag()));
        }
        table.m_x_marginal[j] = xr;
    }
    for (double& p : table.m_p_marginal) p /= static_cast<double>(M);
    table.m_max_imag = max_imag;
    table.m_mass_full = 0.0;
    for (double p : table.m_p_marginal) table.m_mass_full += p;

    // reporting window: requested half width, then widen until the discarded
    // tail drops below tail_tol (cap: the full range)
    const int mhalf = static_cast<int>(M / 2);
    int half = mhalf - 1;
    if (opt.window_half_width > 0.0)
        half = std::min<int>(mhalf - 1,
                             static_cast<int>(std::ceil(opt.window_half_width / (two_pi * state.h()))));
    auto window_mass = [&](int hw) {
        double s = 0.0;
        for (int m = -hw; m <= hw; ++m) s += table.m_p_marginal[static_cast<std::size_t>(m + mhalf)];
        return s;
    };
    double mass = window_mass(half);
    while (table.m_mass_full - mass > opt.tail_tol && half < mhalf - 1) {
        half = std::min(mhalf - 1, 2 * half);
        mass = window_mass(half);
    }
    if (table.m_mass_full - mass > opt.tail_tol)
        throw SolverError("wigner_transform: tail mass above tolerance even at full window",
                          table.m_mass_full - mass);
    table.m_lat.m_lo = -half;
    table.m_lat.m_hi = half;
    table.m_mass = mass;
    return table;
}

double integrate_symbol(const WignerTable& table, const TestSymbol& f, double* imag_residue)
{
    const MomentumLattice& lat = table.lattice();
    int lo = lat.m_lo, hi = lat.m_hi;
    if (auto ps = f.p_support()) {
        if (ps->first < lat.phase_momentum(lo) || ps->second > lat.phase_momentum(hi))
            throw std::domain_error(
                "integrate_symbol: test-symbol p-support exceeds the lattice window");
    } else {
        // no p-localization: the symbol acts by multiplication in x and the
        // x-marginal identity needs every mode
        const int mhalf = static_cast<int>(table.grid().size() / 2);
        lo = -mhalf;
        hi = mhalf - 1;
    }
    const std::size_t M = table.grid().size();
    complex acc(0.0, 0.0);
    for (int m = lo; m <= hi; ++m) {
        const double rho = lat.phase_momentum(m);
        complex col(0.0, 0.0);
        for (std::size_t j = 0; j < M; ++j) {
            const double fx = f(table.grid().node(j), rho);
            if (fx != 0.0) col += fx * table.value(j, m);
        }
        acc += col;
    }
    acc /= static_cast<double>(M);
    if (imag_residue) *imag_residue = std::abs(acc.imag());
    return acc.real();
}

ConvergenceReport convergence_sweep(PotentialPtr V, double P, const TestSymbol& f,
                                    std::span<const double> h_list, const SweepOptions& opt)
{
    if (h_list.size() < 3)
        throw std::invalid_argument("convergence_sweep: need at least 3 values of h");
    for (std::size_t i = 1; i < h_list.size(); ++i)
        if (!(h_list[i] < h_list[i - 1]))
            throw std::invalid_argument("convergence_sweep: h-list must be strictly decreasing");

    ClassicalLevel level = ClassicalLevel::solve(V, P);
    ConvergenceReport rep;
    rep.limit = mather_limit_functional(level, f, opt.mather);

    WignerOptions wopt = opt.wigner;
    if (wopt.window_half_width <= 0.0)
        wopt.window_half_width = 3.0 * (level.p_max() - level.p_min());
    // the window must still cover the support of f
    if (auto ps = f.p_support()) {
        const double need = std::max(std::abs(ps->first - P), std::abs(ps->second - P));
        wopt.window_half_width = std::max(wopt.window_half_width, 1.05 * need);
    }

    for (double h : h_list) {
        CellOptions copt = opt.cell;
        copt.grid = opt.grid;
        copt.expansion_order = opt.expansion_order;
        CellSolution sol = solve_cell(V, P, h, copt);
        WaveState state(sol);
        WignerTable table = wigner_transform(state, wopt);
        ConvergenceRow row;
        row.h = h;
        row.value = integrate_symbol(table, f);
        row.reference = rep.limit;
        row.abs_error = std::abs(row.value - rep.limit);
        rep.rows.push_back(row);
    }
    std::vector<double> hs, errs;
    for (const auto& r : rep.rows) {
        hs.push_back(r.h);
        errs.push_back(r.abs_error);
    }
    rep.fit = fit_order(hs, errs);
    return rep;
}

}  // namespace wkw
