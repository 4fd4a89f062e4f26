// wkw command-line front end.  Links the shared C API only; all numerics live
// behind wkw.h.  Outputs are deterministic: fixed 17-significant-digit
// formatting, no timestamps inside data files.
#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <vector>

#include "svg.hpp"
#include "wkw.h"

using nlohmann::json;

namespace {

constexpr double kTwoPi = 6.28318530717958647692528676655900577;

int g_log_level = 0;  // 0 quiet, 1 info, 2 debug (WKW_LOG)

void log_info(const std::string& msg)
{
    if (g_log_level >= 1) std::fprintf(stderr, "[wkw] %s\n", msg.c_str());
}

struct CliError {
    int exit_code;
    std::string message;
};

void check(wkw_status st)
{
    if (st == WKW_OK) return;
    const int code = (st == WKW_ERR_SOLVER || st == WKW_ERR_INTERNAL) ? 3 : 2;
    throw CliError{code, wkw_last_error()};
}

std::string fmt17(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// ------------------------------------------------------------------ config

struct SymbolSpec {
    bool given = false;
    std::string kind = "bump";  // bump | plateau
    bool x_const = true;
    double x_lo = 0, x_hi = 0;
    double p_lo = 0, p_hi = 0;
    double p_ilo = 0, p_ihi = 0;  // plateau interior
};

struct Config {
    std::string potential = "pendulum";
    double kappa = 1.0, beta = 0.0;
    double P = 1.6;
    double h = 0.05;
    std::vector<double> h_list;
    std::size_t grid = 0;
    int order = 2;
    SymbolSpec symbol;
    double window_half_width = 0.0;
    double tail_tol = 0.0;
    double tol = 0.0;
    double p_hat = 0.0;
    double eps = 0.3;
    int phase_points = 9;
    std::string out = ".";
    int jobs = 1;
    std::string format = "csv";
    bool plot = false;

    json canonical() const
    {
        json j;
        j["potential"] = {{"name", potential}, {"kappa", kappa}, {"beta", beta}};
        j["P"] = P;
        j["h"] = h;
        j["h_list"] = h_list;
        j["grid"] = grid;
        j["order"] = order;
        if (symbol.given) {
            json s;
            s["kind"] = symbol.kind;
            if (!symbol.x_const) s["x"] = {symbol.x_lo, symbol.x_hi};
            s["p"] = {symbol.p_lo, symbol.p_hi};
            if (symbol.kind == "plateau") s["p_inner"] = {symbol.p_ilo, symbol.p_ihi};
            j["symbol"] = s;
        }
        j["window_half_width"] = window_half_width;
        j["tail_tol"] = tail_tol;
        j["tol"] = tol;
        j["jobs"] = jobs;
        return j;
    }
};

void reject_unknown(const json& j, std::initializer_list<const char*> allowed,
                    const std::string& where)
{
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* a : allowed)
            if (it.key() == a) ok = true;
        if (!ok) throw CliError{2, "unknown config key '" + it.key() + "' in " + where};
    }
}

void load_config(const std::string& path, Config& cfg)
{
    std::ifstream is(path);
    if (!is) throw CliError{2, "cannot open config file " + path};
    json j;
    try {
        is >> j;
    } catch (const std::exception& e) {
        throw CliError{2, std::string("config parse error: ") + e.what()};
    }
    reject_unknown(j,
                   {"potential", "P", "h", "h_list", "grid", "order", "symbol",
                    "window_half_width", "tail_tol", "tol", "p_hat", "eps", "phase_points",
                    "out", "jobs", "format", "plot"},
                   path);
    if (j.contains("potential")) {
        const json& p = j["potential"];
        reject_unknown(p, {"name", "kappa", "beta"}, "potential");
        if (p.contains("name")) cfg.potential = p["name"];
        if (p.contains("kappa")) cfg.kappa = p["kappa"];
        if (p.contains("beta")) cfg.beta = p["beta"];
    }
    if (j.contains("P")) cfg.P = j["P"];
    if (j.contains("h")) cfg.h = j["h"];
    if (j.contains("h_list")) cfg.h_list = j["h_list"].get<std::vector<double>>();
    if (j.contains("grid")) cfg.grid = j["grid"];
    if (j.contains("order")) cfg.order = j["order"];
    if (j.contains("symbol")) {
        const json& s = j["symbol"];
        reject_unknown(s, {"kind", "x", "p", "p_inner"}, "symbol");
        cfg.symbol.given = true;
        if (s.contains("kind")) cfg.symbol.kind = s["kind"];
        if (s.contains("x")) {
            cfg.symbol.x_const = false;
            cfg.symbol.x_lo = s["x"][0];
            cfg.symbol.x_hi = s["x"][1];
        }
        if (s.contains("p")) {
            cfg.symbol.p_lo = s["p"][0];
            cfg.symbol.p_hi = s["p"][1];
        }
        if (s.contains("p_inner")) {
            cfg.symbol.p_ilo = s["p_inner"][0];
            cfg.symbol.p_ihi = s["p_inner"][1];
        }
    }
    if (j.contains("window_half_width")) cfg.window_half_width = j["window_half_width"];
    if (j.contains("tail_tol")) cfg.tail_tol = j["tail_tol"];
    if (j.contains("tol")) cfg.tol = j["tol"];
    if (j.contains("p_hat")) cfg.p_hat = j["p_hat"];
    if (j.contains("eps")) cfg.eps = j["eps"];
    if (j.contains("phase_points")) cfg.phase_points = j["phase_points"];
    if (j.contains("out")) cfg.out = j["out"];
    if (j.contains("jobs")) cfg.jobs = j["jobs"];
    if (j.contains("format")) cfg.format = j["format"];
    if (j.contains("plot")) cfg.plot = j["plot"];
}

std::uint64_t fnv1a(const std::string& s)
{
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

json metadata(const Config& cfg)
{
    char hash[24];
    std::snprintf(hash, sizeof hash, "%016llx",
                  static_cast<unsigned long long>(fnv1a(cfg.canonical().dump())));
    return json{{"config_hash", hash}, {"version", wkw_version()}};
}

// ------------------------------------------------------------------ handles

struct PotentialDeleter { void operator()(wkw_potential* p) const { wkw_potential_free(p); } };
struct LevelDeleter { void operator()(wkw_level* p) const { wkw_level_free(p); } };
struct SymbolDeleter { void operator()(wkw_symbol* p) const { wkw_symbol_free(p); } };
struct ExpansionDeleter { void operator()(wkw_expansion* p) const { wkw_expansion_free(p); } };
struct CellDeleter { void operator()(wkw_cell* p) const { wkw_cell_free(p); } };
struct WignerDeleter { void operator()(wkw_wigner* p) const { wkw_wigner_free(p); } };
struct PhaseDeleter { void operator()(wkw_phase* p) const { wkw_phase_free(p); } };

using PotentialPtr = std::unique_ptr<wkw_potential, PotentialDeleter>;
using LevelPtr = std::unique_ptr<wkw_level, LevelDeleter>;
using SymbolPtr = std::unique_ptr<wkw_symbol, SymbolDeleter>;
using ExpansionPtr = std::unique_ptr<wkw_expansion, ExpansionDeleter>;
using CellPtr = std::unique_ptr<wkw_cell, CellDeleter>;
using WignerPtr = std::unique_ptr<wkw_wigner, WignerDeleter>;
using PhasePtr = std::unique_ptr<wkw_phase, PhaseDeleter>;

PotentialPtr make_potential(const Config& cfg)
{
    wkw_potential* p = nullptr;
    if (cfg.potential == "pendulum")
        check(wkw_potential_pendulum(cfg.kappa, &p));
    else if (cfg.potential == "two_harmonic")
        check(wkw_potential_two_harmonic(cfg.kappa, cfg.beta, &p));
    else if (cfg.potential == "zero")
        check(wkw_potential_zero(&p));
    else
        throw CliError{2, "unknown potential '" + cfg.potential + "'"};
    return PotentialPtr(p);
}

LevelPtr make_level(const wkw_potential* p, const Config& cfg)
{
    wkw_level* l = nullptr;
    check(wkw_level_create(p, cfg.P, 0, &l));
    return LevelPtr(l);
}

SymbolPtr make_symbol(const Config& cfg)
{
    if (!cfg.symbol.given) throw CliError{2, "this subcommand requires a test symbol"};
    const SymbolSpec& s = cfg.symbol;
    wkw_symbol* f = nullptr;
    if (s.kind == "bump")
        check(wkw_symbol_bump(s.x_const ? 1 : 0, s.x_lo, s.x_hi, s.p_lo, s.p_hi, &f));
    else if (s.kind == "plateau")
        check(wkw_symbol_plateau(s.x_const ? 1 : 0, s.x_lo, s.x_hi, s.p_lo, s.p_ilo, s.p_ihi,
                                 s.p_hi, &f));
    else
        throw CliError{2, "unknown symbol kind '" + s.kind + "'"};
    return SymbolPtr(f);
}

// default sweep symbol: bump on the upper part of the level, the regime with
// the square-root turning-point corrections
SymbolPtr default_sweep_symbol(const wkw_level* lvl)
{
    double pmin = 0, pmax = 0;
    check(wkw_level_p_min(lvl, &pmin));
    check(wkw_level_p_max(lvl, &pmax));
    const double span = pmax - pmin;
    wkw_symbol* f = nullptr;
    check(wkw_symbol_bump(1, 0, 0, pmax - 0.32 * span, pmax - 0.02 * span, &f));
    return SymbolPtr(f);
}

// ------------------------------------------------------------------ output

class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
        : m_os(path)
    {
        if (!m_os) throw CliError{2, "cannot open output file " + path.string()};
        for (std::size_t i = 0; i < header.size(); ++i)
            m_os << (i ? "," : "") << header[i];
        m_os << "\r\n";
    }
    void row(const std::vector<double>& values)
    {
        for (std::size_t i = 0; i < values.size(); ++i)
            m_os << (i ? "," : "") << fmt17(values[i]);
        m_os << "\r\n";
    }

private:
    std::ofstream m_os;
};

std::filesystem::path out_path(const Config& cfg, const std::string& name)
{
    std::filesystem::create_directories(cfg.out);
    return std::filesystem::path(cfg.out) / name;
}

void emit_summary(const json& j)
{
    std::cout << j.dump(2) << "\n";
}

// ------------------------------------------------------------------ subcommands

int cmd_classical(const Config& cfg)
{
    PotentialPtr pot = make_potential(cfg);
    wkw_potential_report rep;
    check(wkw_potential_validate(pot.get(), 0, &rep));
    double pcrit = 0;
    check(wkw_p_crit(pot.get(), &pcrit));
    LevelPtr lvl = make_level(pot.get(), cfg);

    double hbar = 0, pmin = 0, pmax = 0, q = 0;
    check(wkw_level_hbar(lvl.get(), &hbar));
    check(wkw_level_p_min(lvl.get(), &pmin));
    check(wkw_level_p_max(lvl.get(), &pmax));
    check(wkw_level_rotation_number(lvl.get(), &q));

    const std::size_t M = cfg.grid ? cfg.grid : 512;
    json table = json::array();
    std::unique_ptr<CsvWriter> csv;
    if (cfg.format == "csv")
        csv = std::make_unique<CsvWriter>(
            out_path(cfg, "classical.csv"),
            std::vector<std::string>{"x", "p_plus", "phi", "density"});
    for (std::size_t jx = 0; jx < M; ++jx) {
        const double x = -0.5 + static_cast<double>(jx) / static_cast<double>(M);
        double pp = 0, phi = 0, b = 0;
        check(wkw_level_p_plus(lvl.get(), x, &pp));
        check(wkw_level_phi(lvl.get(), x, &phi));
        check(wkw_level_density(lvl.get(), x, &b));
        if (csv)
            csv->row({x, pp, phi, b});
        else
            table.push_back({x, pp, phi, b});
    }

    json out{{"potential", cfg.potential},
             {"validation", {{"pass", rep.pass == 1}, {"message", rep.message}}},
             {"P", cfg.P},
             {"P_crit", pcrit},
             {"H_bar", hbar},
             {"p_min", pmin},
             {"p_max", pmax},
             {"dHdP", q},
             {"metadata", metadata(cfg)}};
    if (!table.empty()) out["table"] = std::move(table);
    emit_summary(out);
    return 0;
}

int cmd_expand(const Config& cfg)
{
    PotentialPtr pot = make_potential(cfg);
    LevelPtr lvl = make_level(pot.get(), cfg);
    ExpansionPtr exp;
    {
        wkw_expansion* e = nullptr;
        check(wkw_expansion_create(lvl.get(), cfg.order, cfg.grid, &e));
        exp.reset(e);
    }
    size_t M = 0;
    check(wkw_expansion_grid_size(exp.get(), &M));

    json coeffs = json::array();
    for (int j = 0; j <= cfg.order; ++j) {
        double c = 0;
        check(wkw_expansion_hbar_coeff(exp.get(), j, &c));
        coeffs.push_back(c);
    }

    std::vector<std::string> header{"x"};
    for (int j = 0; j <= cfg.order; ++j) header.push_back("v" + std::to_string(j));
    json table = json::array();
    std::unique_ptr<CsvWriter> csv;
    if (cfg.format == "csv")
        csv = std::make_unique<CsvWriter>(out_path(cfg, "expansion.csv"), header);
    for (std::size_t jx = 0; jx < M; ++jx) {
        const double x = -0.5 + static_cast<double>(jx) / static_cast<double>(M);
        std::vector<double> row{x};
        for (int j = 0; j <= cfg.order; ++j) {
            double v = 0;
            check(wkw_expansion_v(exp.get(), j, x, &v));
            row.push_back(v);
        }
        if (csv)
            csv->row(row);
        else
            table.push_back(row);
    }

    double res = 0, res_star = 0;
    check(wkw_expansion_residual(exp.get(), cfg.h, 0, &res));
    check(wkw_expansion_residual(exp.get(), cfg.h, 1, &res_star));
    json out{{"P", cfg.P},
             {"order", cfg.order},
             {"h", cfg.h},
             {"hbar_coefficients", coeffs},
             {"residual", res},
             {"residual_starred", res_star},
             {"metadata", metadata(cfg)}};
    if (!table.empty()) out["table"] = std::move(table);
    emit_summary(out);
    return 0;
}

int cmd_cell(const Config& cfg, const std::string& golden_path)
{
    PotentialPtr pot = make_potential(cfg);
    CellPtr cell;
    {
        wkw_cell* c = nullptr;
        check(wkw_cell_solve(pot.get(), cfg.P, cfg.h, cfg.grid, cfg.tol, &c));
        cell.reset(c);
    }
    double hbar = 0, xh = 0, r1 = 0, r2 = 0, tol = 0, norm = 0;
    size_t M = 0;
    check(wkw_cell_hbar(cell.get(), &hbar));
    check(wkw_cell_x_h(cell.get(), &xh));
    check(wkw_cell_residuals(cell.get(), &r1, &r2));
    check(wkw_cell_tol_used(cell.get(), &tol));
    check(wkw_cell_normalization(cell.get(), &norm));
    check(wkw_cell_grid_size(cell.get(), &M));

    size_t nz = 0;
    check(wkw_cell_zeros(cell.get(), nullptr, &nz));
    std::vector<double> zeros(nz);
    check(wkw_cell_zeros(cell.get(), zeros.data(), &nz));

    // gauge-invariant distances to the order-N expansion on the same grid
    double e_c0 = 0, e_l2 = 0, e_hb = 0;
    {
        LevelPtr lvl = make_level(pot.get(), cfg);
        ExpansionPtr exp;
        wkw_expansion* e = nullptr;
        check(wkw_expansion_create(lvl.get(), cfg.order, M, &e));
        exp.reset(e);
        check(wkw_cell_expansion_error(cell.get(), exp.get(), &e_c0, &e_l2, &e_hb));
    }

    std::vector<double> x(M), v(M), vs(M), a2(M), p1(M), p2(M);
    check(wkw_cell_profiles(cell.get(), x.data(), v.data(), vs.data(), a2.data(), M));
    check(wkw_cell_residual_profiles(cell.get(), p1.data(), p2.data(), M));
    json table = json::array();
    std::unique_ptr<CsvWriter> csv;
    if (cfg.format == "csv")
        csv = std::make_unique<CsvWriter>(
            out_path(cfg, "cell.csv"),
            std::vector<std::string>{"x", "v", "v_star", "amplitude_sq", "residual_b1",
                                     "residual_b2"});
    for (std::size_t j = 0; j < M; ++j) {
        if (csv)
            csv->row({x[j], v[j], vs[j], a2[j], p1[j], p2[j]});
        else
            table.push_back({x[j], v[j], vs[j], a2[j], p1[j], p2[j]});
    }

    json out{{"P", cfg.P},
             {"h", cfg.h},
             {"grid", M},
             {"H_bar", hbar},
             {"x_h", xh},
             {"residuals", {{"b1", r1}, {"b2", r2}, {"tol", tol}}},
             {"errors",
              {{"c0_seminorm", e_c0}, {"l2_derivative", e_l2}, {"hbar_error", e_hb},
               {"expansion_order", cfg.order}}},
             {"normalization", norm},
             {"zeros", zeros},
             {"metadata", metadata(cfg)}};
    if (!table.empty()) out["table"] = std::move(table);
    emit_summary(out);

    if (!golden_path.empty()) {
        std::ifstream is(golden_path);
        if (!is) throw CliError{2, "cannot open golden file " + golden_path};
        json g;
        is >> g;
        const double gtol = g.value("tolerance", 1e-9);
        const double dh = std::abs(hbar - g["H_bar"].get<double>());
        const double dx = std::abs(xh - g["x_h"].get<double>());
        if (dh > gtol || dx > gtol) {
            std::fprintf(stderr, "golden mismatch: |dH_bar| = %.3e, |dx_h| = %.3e (tol %.1e)\n",
                         dh, dx, gtol);
            return 4;
        }
        log_info("golden regression passed");
    }
    return 0;
}

int cmd_wigner(const Config& cfg)
{
    PotentialPtr pot = make_potential(cfg);
    CellPtr cell;
    {
        wkw_cell* c = nullptr;
        check(wkw_cell_solve(pot.get(), cfg.P, cfg.h, cfg.grid, cfg.tol, &c));
        cell.reset(c);
    }
    WignerPtr wig;
    {
        wkw_wigner* w = nullptr;
        check(wkw_wigner_create(cell.get(), cfg.tail_tol, cfg.window_half_width, cfg.jobs, &w));
        wig.reset(w);
    }
    size_t M = 0;
    int mlo = 0, mhi = 0;
    check(wkw_wigner_dims(wig.get(), &M, &mlo, &mhi));
    double mass = 0, tail = 0, maximag = 0;
    check(wkw_wigner_mass(wig.get(), &mass, &tail));
    check(wkw_wigner_max_imag(wig.get(), &maximag));

    json table = json::array();
    std::unique_ptr<CsvWriter> csv;
    if (cfg.format == "csv")
        csv = std::make_unique<CsvWriter>(
            out_path(cfg, "wigner.csv"),
            std::vector<std::string>{"x", "p", "two_pi_p", "re_w", "im_w"});
    std::vector<double> heat;
    heat.reserve(M * static_cast<std::size_t>(mhi - mlo + 1));
    for (int m = mlo; m <= mhi; ++m) {
        double pm = 0;
        check(wkw_wigner_momentum(wig.get(), m, &pm));
        for (std::size_t j = 0; j < M; ++j) {
            const double x = -0.5 + static_cast<double>(j) / static_cast<double>(M);
            double re = 0, im = 0;
            check(wkw_wigner_value(wig.get(), j, m, &re, &im));
            if (csv)
                csv->row({x, pm, kTwoPi * pm, re, im});
            else
                table.push_back({x, pm, kTwoPi * pm, re, im});
        }
    }
    if (cfg.plot) {
        // heat map rows = momentum, cols = x
        for (int m = mlo; m <= mhi; ++m)
            for (std::size_t j = 0; j < M; ++j) {
                double re = 0, im = 0;
                check(wkw_wigner_value(wig.get(), j, m, &re, &im));
                heat.push_back(re);
            }
        double plo = 0, phi = 0;
        check(wkw_wigner_momentum(wig.get(), mlo, &plo));
        check(wkw_wigner_momentum(wig.get(), mhi, &phi));
        svg::write_heatmap(out_path(cfg, "wigner_heatmap.svg").string(), heat,
                           static_cast<std::size_t>(mhi - mlo + 1), M, -0.5, 0.5,
                           kTwoPi * plo, kTwoPi * phi, "W(x, 2 pi p)");
    }

    json out{{"P", cfg.P},
             {"h", cfg.h},
             {"grid", M},
             {"window", {{"m_lo", mlo}, {"m_hi", mhi}}},
             {"mass", mass},
             {"tail_mass", tail},
             {"max_imag", maximag},
             {"metadata", metadata(cfg)}};
    if (!table.empty()) out["table"] = std::move(table);
    if (cfg.symbol.given) {
        SymbolPtr f = make_symbol(cfg);
        double If = 0;
        check(wkw_wigner_integrate(wig.get(), f.get(), &If));
        out["integral"] = If;
    }
    emit_summary(out);
    return 0;
}

int cmd_sweep(const Config& cfg)
{
    if (cfg.h_list.size() < 3) throw CliError{2, "sweep needs an h_list with at least 3 entries"};
    PotentialPtr pot = make_potential(cfg);
    LevelPtr lvl = make_level(pot.get(), cfg);
    SymbolPtr f = cfg.symbol.given ? make_symbol(cfg) : default_sweep_symbol(lvl.get());

    std::vector<double> values(cfg.h_list.size(), 0.0);
    double limit = 0, order = 0, resid = 0;
    check(wkw_sweep(pot.get(), cfg.P, f.get(), cfg.h_list.data(), cfg.h_list.size(), cfg.order,
                    values.data(), &limit, &order, &resid));

    std::ofstream csvs(out_path(cfg, "sweep.csv"));
    csvs << "h,metric,value,reference,abs_error\r\n";
    std::vector<double> errs;
    for (std::size_t i = 0; i < cfg.h_list.size(); ++i) {
        errs.push_back(std::abs(values[i] - limit));
        csvs << fmt17(cfg.h_list[i]) << ",I_f," << fmt17(values[i]) << "," << fmt17(limit)
             << "," << fmt17(errs.back()) << "\r\n";
    }
    if (cfg.plot)
        svg::write_loglog(out_path(cfg, "sweep.svg").string(), cfg.h_list, errs, order,
                          "|I_f(h) - limit|");

    json rows = json::array();
    for (std::size_t i = 0; i < cfg.h_list.size(); ++i)
        rows.push_back({{"h", cfg.h_list[i]},
                        {"metric", "I_f"},
                        {"value", values[i]},
                        {"reference", limit},
                        {"abs_error", errs[i]}});
    json out{{"P", cfg.P},
             {"rows", rows},
             {"limit", limit},
             {"fitted_order", order},
             {"fit_residual_rms", resid},
             {"fit_residual_95", 1.96 * resid},
             {"metadata", metadata(cfg)}};
    std::ofstream(out_path(cfg, "sweep.json")) << out.dump(2) << "\n";
    emit_summary(out);
    return 0;
}

int cmd_phase(const Config& cfg)
{
    PotentialPtr pot = make_potential(cfg);
    LevelPtr lvl = make_level(pot.get(), cfg);
    double pmin = 0, pmax = 0;
    check(wkw_level_p_min(lvl.get(), &pmin));
    check(wkw_level_p_max(lvl.get(), &pmax));
    const double span = pmax - pmin;

    std::vector<double> phats;
    if (cfg.p_hat > 0.0) {
        phats.push_back(cfg.p_hat);
    } else {
        const int n = std::max(1, cfg.phase_points);
        for (int i = 0; i < n; ++i)
            phats.push_back((pmin + span * (0.1 + 0.8 * i / std::max(1, n - 1))) / kTwoPi);
    }

    CsvWriter csv(out_path(cfg, "phase.csv"),
                  {"p_hat", "j1", "j2_re", "j2_im", "direct_re", "direct_im", "rel_error"});
    SymbolPtr f;
    if (cfg.symbol.given)
        f = make_symbol(cfg);
    else {
        wkw_symbol* s = nullptr;
        check(wkw_symbol_plateau(1, 0, 0, pmin + 0.02 * span, pmin + 0.07 * span,
                                 pmax - 0.07 * span, pmax - 0.02 * span, &s));
        f.reset(s);
    }

    json rows = json::array();
    for (double ph : phats) {
        PhasePtr fam;
        {
            wkw_phase* p = nullptr;
            check(wkw_phase_create(lvl.get(), ph, &p));
            fam.reset(p);
        }
        double j1 = 0, j2r = 0, j2i = 0, tr = 0, ti = 0;
        check(wkw_phase_stationary_estimate(fam.get(), f.get(), cfg.h, cfg.eps, &j1, &j2r, &j2i,
                                            &tr, &ti));
        double re = 0, im = 0, ee = 0;
        check(wkw_phase_direct_integral(fam.get(), f.get(), cfg.h, cfg.eps, cfg.grid, &re, &im,
                                        &ee));
        const double dmag = std::hypot(re, im);
        const double rel = dmag > 0 ? std::hypot(re - tr, im - ti) / dmag : 0.0;
        csv.row({ph, j1, j2r, j2i, re, im, rel});
        rows.push_back({{"p_hat", ph},
                        {"j1", j1},
                        {"j2", {j2r, j2i}},
                        {"direct", {re, im}},
                        {"rel_error", rel}});
    }

    if (cfg.plot && !phats.empty()) {
        // S(x, y) heat map with critical points for the middle momentum
        const double ph = phats[phats.size() / 2];
        PhasePtr fam;
        {
            wkw_phase* p = nullptr;
            check(wkw_phase_create(lvl.get(), ph, &p));
            fam.reset(p);
        }
        const std::size_t N = 96;
        std::vector<double> s(N * N);
        for (std::size_t r = 0; r < N; ++r)
            for (std::size_t c = 0; c < N; ++c) {
                const double y = -0.5 + (static_cast<double>(r) + 0.5) / N;
                const double x = -0.5 + (static_cast<double>(c) + 0.5) / N;
                check(wkw_phase_s(fam.get(), x, y, &s[r * N + c]));
            }
        double xy[8];
        size_t count = 4;
        std::vector<svg::Marker> marks;
        if (wkw_phase_critical_points(fam.get(), xy, &count) == WKW_OK)
            for (size_t i = 0; i < count && i < 4; ++i)
                marks.push_back({xy[2 * i], xy[2 * i + 1]});
        svg::write_heatmap(out_path(cfg, "phase_s.svg").string(), s, N, N, -0.5, 0.5, -0.5, 0.5,
                           "S(x, y) with critical points", marks);
    }

    emit_summary(json{{"P", cfg.P},
                      {"h", cfg.h},
                      {"eps", cfg.eps},
                      {"rows", rows},
                      {"metadata", metadata(cfg)}});
    return 0;
}

int cmd_selftest(bool quick)
{
    int failures = 0;
    auto report = [&](const char* name, bool ok) {
        std::printf("%s %s\n", ok ? "ok  " : "FAIL", name);
        if (!ok) ++failures;
    };

    // flat-potential oracles: everything exact
    {
        wkw_potential* z = nullptr;
        report("zero potential constructs", wkw_potential_zero(&z) == WKW_OK);
        double pc = 1.0;
        report("P_crit(zero) = 0", wkw_p_crit(z, &pc) == WKW_OK && pc == 0.0);

        wkw_cell* c = nullptr;
        bool ok = wkw_cell_solve(z, 1.3, 0.1, 0, 0, &c) == WKW_OK;
        double hb = 0, xh = 1;
        ok = ok && wkw_cell_hbar(c, &hb) == WKW_OK && std::abs(hb - 0.845) <= 1e-11;
        report("flat cell: H_bar = P^2/2", ok);
        ok = wkw_cell_x_h(c, &xh) == WKW_OK && xh == -0.5;
        report("flat cell: x_h convention", ok);

        wkw_wigner* w = nullptr;
        ok = wkw_wigner_create(c, 0, 1.0, 1, &w) == WKW_OK;
        double mass = 0, tail = 0, mi = 1;
        ok = ok && wkw_wigner_mass(w, &mass, &tail) == WKW_OK &&
             std::abs(mass - 1.0) <= 1e-11 && wkw_wigner_max_imag(w, &mi) == WKW_OK &&
             mi <= 1e-12;
        report("flat table: unit mass, real", ok);
        double re = 0, im = 0;
        ok = wkw_wigner_value(w, 3, 0, &re, &im) == WKW_OK && std::abs(re - 1.0) <= 1e-11 &&
             wkw_wigner_value(w, 3, 1, &re, &im) == WKW_OK && std::abs(re) <= 1e-11;
        report("flat table: delta at the central mode", ok);

        wkw_symbol* f = nullptr;
        ok = wkw_symbol_bump(0, -0.3, 0.2, 1.0, 1.7, &f) == WKW_OK;
        double If = 0, fv = 0;
        ok = ok && wkw_wigner_integrate(w, f, &If) == WKW_OK;
        if (ok) {
            double ref = 0;
            size_t M = 0;
            wkw_cell_grid_size(c, &M);
            for (size_t j = 0; j < M; ++j) {
                const double x = -0.5 + double(j) / double(M);
                wkw_symbol_eval(f, x, 1.3, &fv);
                ref += fv;
            }
            ref /= double(M);
            ok = std::abs(If - ref) <= 1e-11;
        }
        report("flat table: separable symbol integrates exactly", ok);
        wkw_symbol_free(f);
        wkw_wigner_free(w);
        wkw_cell_free(c);
        wkw_potential_free(z);
    }

    if (!quick) {
        wkw_potential* p = nullptr;
        wkw_potential_pendulum(1.0, &p);
        double pc = 0;
        bool ok = wkw_p_crit(p, &pc) == WKW_OK && std::abs(pc - 1.2732395447351628) <= 1e-8;
        report("pendulum: P_crit = 4/pi", ok);

        wkw_cell* c = nullptr;
        ok = wkw_cell_solve(p, 1.6, 0.1, 512, 0, &c) == WKW_OK;
        double hb = 0, ch = 0;
        ok = ok && wkw_cell_hbar(c, &hb) == WKW_OK &&
             wkw_cole_hopf_hbar(p, 1.6, 0.1, 512, hb, &ch) == WKW_OK && std::abs(hb - ch) <= 1e-8;
        report("pendulum: Newton and eigen routes agree", ok);

        wkw_wigner* w = nullptr;
        ok = wkw_wigner_create(c, 0, 0, 1, &w) == WKW_OK;
        double mi = 1, mass = 0, tail = 1;
        ok = ok && wkw_wigner_max_imag(w, &mi) == WKW_OK && mi <= 1e-10 &&
             wkw_wigner_mass(w, &mass, &tail) == WKW_OK && std::abs(mass - 1.0) <= 1e-5;
        report("pendulum table: real, unit mass", ok);
        wkw_wigner_free(w);
        wkw_cell_free(c);
        wkw_potential_free(p);
    }

    return failures == 0 ? 0 : 4;
}

}  // namespace

int main(int argc, char** argv)
{
    if (const char* lvl = std::getenv("WKW_LOG")) {
        if (std::string(lvl) == "info") g_log_level = 1;
        if (std::string(lvl) == "debug") g_log_level = 2;
    }

    CLI::App app{"weak-KAM / Wigner toolkit for 1D torus Hamiltonians"};
    app.require_subcommand(1);
    app.set_help_flag("--help", "print help");  // --h is taken by the physics

    Config cfg;
    std::string config_path, golden_path, h_list_str;
    bool quick = false;

    // first pass: pick up --config so flags can override file values
    for (int i = 1; i + 1 < argc; ++i)
        if (std::string(argv[i]) == "--config") config_path = argv[i + 1];
    try {
        if (!config_path.empty()) load_config(config_path, cfg);
    } catch (const CliError& e) {
        std::cerr << json{{"error", {{"code", e.exit_code}, {"message", e.message}}}}.dump()
                  << "\n";
        return e.exit_code;
    }

    auto add_common = [&](CLI::App* sub) {
        sub->set_help_flag("--help", "print help");
        sub->add_option("--config", config_path, "JSON configuration file");
        sub->add_option("--P", cfg.P, "momentum parameter (must exceed P_crit)");
        sub->add_option("--h", cfg.h, "semiclassical parameter");
        sub->add_option("--h-list", h_list_str, "comma-separated decreasing h values");
        sub->add_option("--grid", cfg.grid, "grid size (power of two; 0 = automatic)");
        sub->add_option("--order", cfg.order, "expansion order N");
        sub->add_option("--out", cfg.out, "output directory");
        sub->add_option("--jobs", cfg.jobs, "parallel workers for independent items");
        sub->add_option("--format", cfg.format, "table format: csv | json")
            ->check(CLI::IsMember({"csv", "json"}));
        sub->add_flag("--plot", cfg.plot, "emit SVG plots");
        sub->add_option("--potential", cfg.potential, "pendulum | two_harmonic | zero");
        sub->add_option("--kappa", cfg.kappa, "potential strength");
        sub->add_option("--beta", cfg.beta, "second-harmonic strength");
        sub->add_option("--tol", cfg.tol, "solver tolerance (0 = default)");
    };

    CLI::App* classical = app.add_subcommand("classical", "classical level quantities");
    add_common(classical);
    CLI::App* expand = app.add_subcommand("expand", "asymptotic expansion tables");
    add_common(expand);
    CLI::App* cell = app.add_subcommand("cell", "solve the viscous cell problems");
    add_common(cell);
    cell->add_option("--golden", golden_path, "compare the summary against a golden JSON file");
    CLI::App* wigner = app.add_subcommand("wigner", "Wigner table of the critical state");
    add_common(wigner);
    wigner->add_option("--tail-tol", cfg.tail_tol, "lattice window tail tolerance");
    wigner->add_option("--window", cfg.window_half_width,
                       "window half width in phase-space momentum units");
    CLI::App* sweep = app.add_subcommand("sweep", "semiclassical convergence sweep");
    add_common(sweep);
    CLI::App* phase = app.add_subcommand("phase", "stationary-phase laboratory");
    add_common(phase);
    phase->add_option("--p-hat", cfg.p_hat, "single lattice momentum (0 = scan)");
    phase->add_option("--eps", cfg.eps, "mollifier width");
    phase->add_option("--points", cfg.phase_points, "scan points across the level");
    CLI::App* selftest = app.add_subcommand("selftest", "built-in checks");
    selftest->add_flag("--quick", quick, "flat-potential oracles only");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp")
            return app.exit(e);
        std::cerr << json{{"error", {{"code", 2}, {"message", e.what()}}}}.dump() << "\n";
        return 2;
    }

    if (!h_list_str.empty()) {
        cfg.h_list.clear();
        std::string tok;
        for (char c : h_list_str + ",") {
            if (c == ',') {
                if (!tok.empty()) cfg.h_list.push_back(std::atof(tok.c_str()));
                tok.clear();
            } else {
                tok += c;
            }
        }
    }

    try {
        if (classical->parsed()) return cmd_classical(cfg);
        if (expand->parsed()) return cmd_expand(cfg);
        if (cell->parsed()) return cmd_cell(cfg, golden_path);
        if (wigner->parsed()) return cmd_wigner(cfg);
        if (sweep->parsed()) return cmd_sweep(cfg);
        if (phase->parsed()) return cmd_phase(cfg);
        if (selftest->parsed()) return cmd_selftest(quick);
    } catch (const CliError& e) {
        std::cerr << json{{"error", {{"code", e.exit_code}, {"message", e.message}}}}.dump()
                  << "\n";
        return e.exit_code;
    } catch (const std::exception& e) {
        std::cerr << json{{"error", {{"code", 3}, {"message", e.what()}}}}.dump() << "\n";
        return 3;
    }
    return 2;
}
