#ifndef WKW_SYMBOL_HPP
#define WKW_SYMBOL_HPP

#include <optional>

#include "wkw/common.hpp"

namespace wkw {

/// C-infinity building blocks for compactly supported test functions.
namespace smooth {

/// exp(-1/(1-t^2)) on |t|<1, rescaled to peak 1 at t = 0
inline double bump(double t)
{
    if (std::abs(t) >= 1.0) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - t * t));
}

/// C-infinity monotone ramp: 0 for t<=0, 1 for t>=1
inline double ramp(double t)
{
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    const double a = std::exp(-1.0 / t);
    const double b = std::exp(-1.0 / (1.0 - t));
    return a / (a + b);
}

/// 1 on [ilo, ihi], 0 outside [lo, hi], smooth ramps between
inline double plateau(double s, double lo, double ilo, double ihi, double hi)
{
    if (s <= lo || s >= hi) return 0.0;
    double v = 1.0;
    if (s < ilo) v *= ramp((s - lo) / (ilo - lo));
    if (s > ihi) v *= ramp((hi - s) / (hi - ihi));
    return v;
}

}  // namespace smooth

/// Smooth phase-space test function f(x, p), a product of one x-factor and
/// one p-factor, vanishing identically outside its support box.  Here p is a
/// phase-space momentum (the lattice momentum scaled by 2 pi).
class TestSymbol {
public:
    struct Factor {
        enum class Kind { One, Bump, Plateau } kind = Kind::One;
        double lo = 0, hi = 0;    // support interval
        double ilo = 0, ihi = 0;  // plateau region (Kind::Plateau)

        double operator()(double s) const
        {
            switch (kind) {
                case Kind::One: return 1.0;
                case Kind::Bump: return smooth::bump((2.0 * s - lo - hi) / (hi - lo));
                default: return smooth::plateau(s, lo, ilo, ihi, hi);
            }
        }
    };

    TestSymbol(Factor fx, Factor fp) : m_fx(fx), m_fp(fp)
    {
        auto check = [](const Factor& f, bool torus) {
            if (f.kind == Factor::Kind::One) return;
            if (!(f.lo < f.hi)) throw std::invalid_argument("TestSymbol: empty support interval");
            if (torus && (f.lo < -0.5 || f.hi > 0.5))
                throw std::invalid_argument("TestSymbol: x-support outside [-1/2, 1/2]");
            if (f.kind == Factor::Kind::Plateau && !(f.lo < f.ilo && f.ilo < f.ihi && f.ihi < f.hi))
                throw std::invalid_argument("TestSymbol: plateau region must nest inside support");
        };
        check(m_fx, true);
        check(m_fp, false);
    }

    double operator()(double x, double p) const { return m_fx(wrap_torus(x)) * m_fp(p); }

    /// x-support; nullopt means the whole torus
    std::optional<std::pair<double, double>> x_support() const
    {
        if (m_fx.kind == Factor::Kind::One) return std::nullopt;
        return std::make_pair(m_fx.lo, m_fx.hi);
    }
    /// p-support; nullopt means all momenta (constant factor)
    std::optional<std::pair<double, double>> p_support() const
    {
        if (m_fp.kind == Factor::Kind::One) return std::nullopt;
        return std::make_pair(m_fp.lo, m_fp.hi);
    }

    static TestSymbol bump_p(double plo, double phi)
    {
        return TestSymbol(Factor{}, Factor{Factor::Kind::Bump, plo, phi, 0, 0});
    }
    static TestSymbol plateau_p(double plo, double ilo, double ihi, double phi)
    {
        return TestSymbol(Factor{}, Factor{Factor::Kind::Plateau, plo, phi, ilo, ihi});
    }
    static TestSymbol bump_x_bump_p(double xlo, double xhi, double plo, double phi)
    {
        return TestSymbol(Factor{Factor::Kind::Bump, xlo, xhi, 0, 0},
                          Factor{Factor::Kind::Bump, plo, phi, 0, 0});
    }
    static TestSymbol bump_x_plateau_p(double xlo, double xhi,
                                       double plo, double ilo, double ihi, double phi)
    {
        return TestSymbol(Factor{Factor::Kind::Bump, xlo, xhi, 0, 0},
                          Factor{Factor::Kind::Plateau, plo, phi, ilo, ihi});
    }

private:
    Factor m_fx, m_fp;
};

}  // namespace wkw

#endif
