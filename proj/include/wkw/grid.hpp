#ifndef WKW_GRID_HPP
#define WKW_GRID_HPP

#include <cstddef>
#include <span>

#include "wkw/common.hpp"

namespace wkw {

/// Equispaced grid on the unit torus identified with [-1/2, 1/2).
/// Nodes are x_j = -1/2 + j/M.  M must be an even power of two >= 16 so that
/// half-points x +- y/2 land on the doubled grid and FFTs apply directly.
class PeriodicGrid {
public:
    explicit PeriodicGrid(std::size_t size) : m_size(size)
    {
        if (size < 16 || !is_power_of_two(size))
            throw std::invalid_argument("PeriodicGrid: size must be a power of two >= 16");
    }

    std::size_t size() const { return m_size; }
    double spacing() const { return 1.0 / static_cast<double>(m_size); }
    double node(std::size_t j) const { return -0.5 + static_cast<double>(j) / static_cast<double>(m_size); }

    std::vector<double> nodes() const
    {
        std::vector<double> x(m_size);
        for (std::size_t j = 0; j < m_size; ++j) x[j] = node(j);
        return x;
    }

private:
    std::size_t m_size;
};

/// Trapezoid rule on a periodic grid: (1/M) * sum of samples.
/// Spectrally accurate for smooth periodic integrands.
inline double quad_periodic(std::span<const double> samples)
{
    if (samples.empty())
        throw std::invalid_argument("quad_periodic: empty sample set");
    double s = 0.0;
    for (double v : samples) s += v;
    return s / static_cast<double>(samples.size());
}

inline complex quad_periodic(std::span<const complex> samples)
{
    if (samples.empty())
        throw std::invalid_argument("quad_periodic: empty sample set");
    complex s = 0.0;
    for (const complex& v : samples) s += v;
    return s / static_cast<double>(samples.size());
}

}  // namespace wkw

#endif
