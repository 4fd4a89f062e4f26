#ifndef WKW_EXPANSION_HPP
#define WKW_EXPANSION_HPP

#include "wkw/classical.hpp"

namespace wkw {

/// Formal series  vhat^N_h = sum_j h^j v_j  and  Hhat^N_h = sum_j h^j Hbar_j
/// built by the order-by-order compatibility recursion of the viscous cell
/// problem.  Conventions: v_0 = phi (the viscosity solution), v_1 =
/// (1/2) ln p_plus with no additive constant, v_j mean-zero for j >= 2.
/// The starred series carries v*_j = (-1)^j v_j, consistent with flipping the
/// sign of the diffusion term; the residual tests verify this rather than
/// assume it.
///
/// Order-k relation (k >= 1), with sigma_0 the normalized density b:
///   Hbar_k = int [ -v_{k-1}''/2 + (1/2) sum_{i+j=k, i,j>=1} v_i' v_j' ] b dx
///   v_k'   = ( Hbar_k + v_{k-1}''/2 - (1/2) sum v_i' v_j' ) / p_plus
/// All x-derivatives are propagated analytically through Taylor jets of V,
/// never by grid differentiation.
class ExpansionSeries {
public:
    static constexpr int max_order = 6;

    static ExpansionSeries build(const ClassicalLevel& level, int order,
                                 std::size_t grid_size = 1024);

    int order() const { return m_order; }
    const ClassicalLevel& level() const { return m_level; }
    const PeriodicGrid& grid() const { return m_grid; }

    double hbar_coeff(int j) const { return m_hbar.at(j); }
    /// Hhat^N_h = sum_{j<=N} h^j Hbar_j
    double hbar_sum(double h) const;

    const std::vector<double>& v_on_grid(int j) const { return m_v.at(j); }
    const std::vector<double>& v_prime_on_grid(int j) const { return m_v1.at(j); }
    const std::vector<double>& v_second_on_grid(int j) const { return m_v2.at(j); }

    double v(int j, double x) const { return m_interp.at(j)(x); }

    /// assembled series (and first/second derivative) on the grid
    std::vector<double> assemble(double h, bool starred = false) const;
    std::vector<double> assemble_prime(double h, bool starred = false) const;
    std::vector<double> assemble_second(double h, bool starred = false) const;

    /// sup-norm residual of the assembled series in the viscous cell equation
    /// (sign of the diffusion flipped for the starred family); O(h^{N+1})
    double residual(double h, bool starred = false) const;

private:
    ExpansionSeries(const ClassicalLevel& level, int order, std::size_t grid_size);

    ClassicalLevel m_level;
    int m_order;
    PeriodicGrid m_grid;
    std::vector<double> m_hbar;
    std::vector<std::vector<double>> m_v, m_v1, m_v2;
    std::vector<TrigInterpolant> m_interp;
    std::vector<double> m_vpot;  // V on the grid
};

}  // namespace wkw

#endif
