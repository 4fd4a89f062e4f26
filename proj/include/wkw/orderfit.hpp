#ifndef WKW_ORDERFIT_HPP
#define WKW_ORDERFIT_HPP

#include <span>

#include "wkw/common.hpp"

namespace wkw {

struct OrderFit {
    double order = std::nan("");      // least-squares slope of log err vs log h
    double intercept = std::nan("");
    double residual = std::nan("");   // rms residual of the fit in log space
    int points = 0;                   // valid (positive, finite) samples used
};

/// Least-squares slope of log|err| against log h.  Requires >= 3 valid rows;
/// non-positive or non-finite errors are skipped.
inline OrderFit fit_order(std::span<const double> h, std::span<const double> err)
{
    if (h.size() != err.size())
        throw std::invalid_argument("fit_order: size mismatch");
    OrderFit out;
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < h.size(); ++i) {
        if (h[i] > 0.0 && err[i] > 0.0 && std::isfinite(err[i])) {
            lx.push_back(std::log(h[i]));
            ly.push_back(std::log(err[i]));
        }
    }
    out.points = static_cast<int>(lx.size());
    if (out.points < 3) return out;
    const double n = static_cast<double>(lx.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sx += lx[i]; sy += ly[i];
        sxx += lx[i] * lx[i]; sxy += lx[i] * ly[i];
    }
    const double denom = n * sxx - sx * sx;
    out.order = (n * sxy - sx * sy) / denom;
    out.intercept = (sy - out.order * sx) / n;
    double ss = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i)
        ss += sqr(ly[i] - out.order * lx[i] - out.intercept);
    out.residual = std::sqrt(ss / n);
    return out;
}

}  // namespace wkw

#endif
