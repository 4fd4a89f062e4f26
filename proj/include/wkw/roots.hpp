#ifndef WKW_ROOTS_HPP
#define WKW_ROOTS_HPP

#include <functional>

#include "wkw/common.hpp"

namespace wkw {

/// Brent's method on a bracketing interval.  Requires g(a) g(b) <= 0 and a
/// continuous g; intended for monotone functions where the root is unique.
/// tol bounds the bracket width at exit; capped at 200 iterations.
inline double find_root_monotone(const std::function<double(double)>& g,
                                 double a, double b, double tol = 1e-12)
{
    constexpr int max_iter = 200;
    double fa = g(a), fb = g(b);
    if (!std::isfinite(fa) || !std::isfinite(fb))
        throw std::invalid_argument("find_root_monotone: non-finite endpoint value");
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if (fa * fb > 0.0)
        throw std::invalid_argument("find_root_monotone: no sign change on bracket");

    double c = a, fc = fa, d = b - a, e = d;
    for (int iter = 0; iter < max_iter; ++iter) {
        if (std::abs(fc) < std::abs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        const double tol1 = 2.0 * 1e-16 * std::abs(b) + 0.5 * tol;
        const double xm = 0.5 * (c - b);
        if (std::abs(xm) <= tol1 || fb == 0.0) return b;
        if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
            // inverse quadratic interpolation / secant
            double p, q;
            const double s = fb / fa;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                const double qq = fa / fc, r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            p = std::abs(p);
            if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol1 * q), std::abs(e * q))) {
                e = d; d = p / q;
            } else {
                d = xm; e = d;
            }
        } else {
            d = xm; e = d;
        }
        a = b; fa = fb;
        b += (std::abs(d) > tol1) ? d : (xm > 0.0 ? tol1 : -tol1);
        fb = g(b);
        if (!std::isfinite(fb))
            throw SolverError("find_root_monotone: non-finite evaluation", fb);
        if ((fb > 0.0) == (fc > 0.0)) { c = a; fc = fa; d = b - a; e = d; }
    }
    throw SolverError("find_root_monotone: iteration cap reached", std::abs(fb));
}

}  // namespace wkw

#endif
