#ifndef WKW_EIGEN_HPP
#define WKW_EIGEN_HPP

#include <memory>
#include <span>

#include "wkw/banded.hpp"
#include "wkw/common.hpp"

namespace wkw {

/// Linear operator supporting application and shifted solves, the two
/// ingredients of shifted inverse power iteration.
class SpectralOperator {
public:
    virtual ~SpectralOperator() = default;
    virtual std::size_t size() const = 0;
    virtual std::vector<double> apply(std::span<const double> x) const = 0;
    /// solve (A - shift I) x = rhs
    virtual std::vector<double> solve_shifted(double shift, std::span<const double> rhs) = 0;
};

/// Banded matrix plus optional rank-one corrections (periodic wrap corners).
class BandedPeriodicOperator : public SpectralOperator {
public:
    BandedPeriodicOperator(BandedMatrix a, std::vector<BorderedBandedSolver::Update> corners);
    std::size_t size() const override { return m_a.size(); }
    std::vector<double> apply(std::span<const double> x) const override;
    std::vector<double> solve_shifted(double shift, std::span<const double> rhs) override;

private:
    BandedMatrix m_a;
    std::vector<BorderedBandedSolver::Update> m_corners;
    std::unique_ptr<BorderedBandedSolver> m_solver;
    double m_shift = std::nan("");
};

/// Dense row-major matrix operator (used where banded structure is absent,
/// e.g. spectral differentiation matrices).
class DenseOperator : public SpectralOperator {
public:
    DenseOperator(std::size_t n, std::vector<double> data);
    std::size_t size() const override { return m_n; }
    std::vector<double> apply(std::span<const double> x) const override;
    std::vector<double> solve_shifted(double shift, std::span<const double> rhs) override;
    double& at(std::size_t i, std::size_t j) { return m_data[i * m_n + j]; }

private:
    std::size_t m_n;
    std::vector<double> m_data;
    std::vector<double> m_lu;
    std::vector<std::size_t> m_piv;
    double m_shift = std::nan("");
};

struct PrincipalEigenResult {
    double value = std::nan("");
    std::vector<double> vector;   // normalized to max entry 1, strictly positive
    double residual = std::nan("");  // ||Au - lambda u||_inf / ||u||_inf
    int iterations = 0;
};

/// Shifted inverse power iteration for the principal (Perron) eigenpair of a
/// discretized drift-diffusion operator: simple real eigenvalue, positive
/// eigenvector.  Fails with SolverError on stagnation or persistent negative
/// entries (non-Perron discretization).
PrincipalEigenResult principal_eigenpair(SpectralOperator& op, double guess,
                                         double tol = 1e-10, int max_iter = 200);

}  // namespace wkw

#endif
