#ifndef WKW_JET_HPP
#define WKW_JET_HPP

#include <vector>

#include "wkw/common.hpp"

namespace wkw {

/// Truncated Taylor series at a point: coeff[k] = f^{(k)}(x0) / k!.
/// Arithmetic on jets propagates exact derivatives through algebraic
/// expressions; used to differentiate recursively defined functions without
/// resorting to grid differentiation.
class Jet {
public:
    Jet() = default;
    explicit Jet(std::size_t order) : c(order + 1, 0.0) {}
    Jet(std::size_t order, double value) : c(order + 1, 0.0) { c[0] = value; }

    static Jet variable(std::size_t order, double value)
    {
        Jet j(order, value);
        if (order >= 1) j.c[1] = 1.0;
        return j;
    }

    std::size_t order() const { return c.size() - 1; }
    double value() const { return c[0]; }

    /// k-th derivative encoded by this jet (k <= order)
    double derivative(std::size_t k) const
    {
        double fact = 1.0;
        for (std::size_t i = 2; i <= k; ++i) fact *= static_cast<double>(i);
        return c[k] * fact;
    }

    /// jet of f' with order reduced by one
    Jet shifted_derivative() const
    {
        if (c.size() < 2) throw std::invalid_argument("Jet: cannot differentiate order-0 jet");
        Jet out(c.size() - 2);
        for (std::size_t k = 1; k < c.size(); ++k) out.c[k - 1] = c[k] * static_cast<double>(k);
        return out;
    }

    std::vector<double> c;
};

inline Jet operator+(const Jet& a, const Jet& b)
{
    Jet out(std::min(a.order(), b.order()));
    for (std::size_t k = 0; k < out.c.size(); ++k) out.c[k] = a.c[k] + b.c[k];
    return out;
}

inline Jet operator-(const Jet& a, const Jet& b)
{
    Jet out(std::min(a.order(), b.order()));
    for (std::size_t k = 0; k < out.c.size(); ++k) out.c[k] = a.c[k] - b.c[k];
    return out;
}

inline Jet operator*(double s, const Jet& a)
{
    Jet out = a;
    for (double& v : out.c) v *= s;
    return out;
}

inline Jet operator+(const Jet& a, double s)
{
    Jet out = a;
    out.c[0] += s;
    return out;
}

inline Jet operator-(double s, const Jet& a)
{
    Jet out = -1.0 * a;
    out.c[0] += s;
    return out;
}

inline Jet operator*(const Jet& a, const Jet& b)
{
    Jet out(std::min(a.order(), b.order()));
    for (std::size_t k = 0; k < out.c.size(); ++k) {
        double s = 0.0;
        for (std::size_t i = 0; i <= k; ++i) s += a.c[i] * b.c[k - i];
        out.c[k] = s;
    }
    return out;
}

inline Jet operator/(const Jet& a, const Jet& b)
{
    if (b.c[0] == 0.0) throw std::domain_error("Jet: division by series with zero constant term");
    Jet out(std::min(a.order(), b.order()));
    for (std::size_t k = 0; k < out.c.size(); ++k) {
        double s = a.c[k];
        for (std::size_t i = 0; i < k; ++i) s -= out.c[i] * b.c[k - i];
        out.c[k] = s / b.c[0];
    }
    return out;
}

inline Jet jet_sqrt(const Jet& a)
{
    if (a.c[0] <= 0.0) throw std::domain_error("Jet: sqrt of non-positive constant term");
    Jet out(a.order());
    out.c[0] = std::sqrt(a.c[0]);
    for (std::size_t k = 1; k < out.c.size(); ++k) {
        double s = a.c[k];
        for (std::size_t i = 1; i < k; ++i) s -= out.c[i] * out.c[k - i];
        out.c[k] = s / (2.0 * out.c[0]);
    }
    return out;
}

}  // namespace wkw

#endif
