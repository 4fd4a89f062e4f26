#ifndef WKW_BANDED_HPP
#define WKW_BANDED_HPP

#include <span>
#include <vector>

#include "wkw/common.hpp"

namespace wkw {

/// Square banded matrix with lower bandwidth kl and upper bandwidth ku.
/// Extra kl superdiagonals of workspace are kept for pivoting fill-in.
class BandedMatrix {
public:
    BandedMatrix(std::size_t n, std::size_t kl, std::size_t ku);

    std::size_t size() const { return m_n; }
    std::size_t lower_bandwidth() const { return m_kl; }
    std::size_t upper_bandwidth() const { return m_ku; }

    double& at(std::size_t i, std::size_t j);
    double get(std::size_t i, std::size_t j) const;
    bool in_band(std::size_t i, std::size_t j) const;

    std::vector<double> apply(std::span<const double> x) const;
    double norm_inf() const;

private:
    friend class BandedLU;
    std::size_t m_n, m_kl, m_ku, m_width;
    std::vector<double> m_data;  // row i, offset j - i + kl
};

/// LU factorization with partial pivoting of a banded matrix.
/// Throws SolverError if a pivot is exactly zero (singular system).
class BandedLU {
public:
    explicit BandedLU(BandedMatrix a);

    std::vector<double> solve(std::span<const double> rhs) const;
    void solve_inplace(std::vector<double>& rhs) const;

    /// crude lower-bound estimate of the infinity-norm condition number
    double condition_estimate() const;

private:
    BandedMatrix m_lu;
    std::vector<std::size_t> m_pivot;
    double m_norm_a;
};

/// Solver for  (B + sum_k u_k v_k^T) x = b  with banded B, via the
/// Sherman-Morrison-Woodbury identity.  B must be nonsingular; the full
/// matrix must be nonsingular for the capacitance system to be solvable.
/// This covers periodic wrap-around corners and dense border rows/columns
/// (e.g. an appended mean-gauge constraint) on top of a banded core.
class BorderedBandedSolver {
public:
    struct Update {
        std::vector<double> u, v;
    };

    BorderedBandedSolver(BandedMatrix core, std::vector<Update> updates);

    std::vector<double> solve(std::span<const double> rhs) const;
    double condition_estimate() const { return m_lu.condition_estimate(); }

private:
    BandedLU m_lu;
    std::vector<Update> m_updates;
    std::vector<std::vector<double>> m_binv_u;  // B^{-1} u_k
    std::vector<double> m_cap_lu;               // dense LU of I + V^T B^{-1} U
    std::vector<std::size_t> m_cap_piv;
    std::size_t m_rank;
};

/// Dense LU with partial pivoting on a small matrix (row-major, n x n).
/// Returns false if singular.
bool dense_lu_factor(std::vector<double>& a, std::vector<std::size_t>& piv, std::size_t n);
void dense_lu_solve(const std::vector<double>& a, const std::vector<std::size_t>& piv,
                    std::size_t n, std::vector<double>& rhs);

}  // namespace wkw

#endif
