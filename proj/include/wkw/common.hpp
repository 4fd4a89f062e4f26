#ifndef WKW_COMMON_HPP
#define WKW_COMMON_HPP

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace wkw {

using complex = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846264338327950288;
inline constexpr double two_pi = 2.0 * pi;

/// thrown when an iterative solver fails to converge; carries the last residual
class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& what, double residual = std::nan(""))
        : std::runtime_error(what), last_residual(residual) {}
    double last_residual;
};

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

inline std::size_t next_power_of_two(std::size_t n)
{
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

inline double sqr(double x) { return x * x; }

/// wrap a point to the fundamental domain [-1/2, 1/2)
inline double wrap_torus(double x)
{
    double y = x - std::floor(x + 0.5);
    if (y >= 0.5) y -= 1.0;   // guard against floor rounding at the seam
    return y;
}

}  // namespace wkw

#endif
