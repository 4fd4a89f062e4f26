#ifndef WKW_POTENTIAL_HPP
#define WKW_POTENTIAL_HPP

#include <memory>
#include <string>

#include "wkw/common.hpp"
#include "wkw/jet.hpp"

namespace wkw {

/// Smooth potential on the unit torus, symmetric about the origin, with its
/// minimum at x = 0.  Built-ins carry analytic derivatives of every order;
/// the expansion machinery consumes them through Taylor jets, so grid
/// differentiation never enters the solver paths.
class SymmetricPotential {
public:
    virtual ~SymmetricPotential() = default;

    /// n-th derivative of V at x (n = 0 gives V itself)
    virtual double derivative(int order, double x) const = 0;

    double operator()(double x) const { return derivative(0, x); }
    double d1(double x) const { return derivative(1, x); }
    double d2(double x) const { return derivative(2, x); }
    double d3(double x) const { return derivative(3, x); }

    virtual double v_min() const { return derivative(0, min_location()); }
    virtual double v_max() const;
    virtual double min_location() const { return 0.0; }
    virtual double max_location() const { return -0.5; }  // and +1/2 by symmetry

    virtual std::string name() const = 0;

    Jet jet(double x, std::size_t order) const
    {
        Jet out(order);
        double fact = 1.0;
        for (std::size_t k = 0; k <= order; ++k) {
            if (k >= 2) fact *= static_cast<double>(k);
            out.c[k] = derivative(static_cast<int>(k), x) / fact;
        }
        return out;
    }
};

using PotentialPtr = std::shared_ptr<const SymmetricPotential>;

/// V(x) = kappa (1 - cos 2 pi x); minimum 0 at the origin, maximum 2 kappa at +-1/2.
class PendulumPotential : public SymmetricPotential {
public:
    explicit PendulumPotential(double kappa = 1.0);
    double derivative(int order, double x) const override;
    double v_min() const override { return 0.0; }
    double v_max() const override { return 2.0 * m_kappa; }
    std::string name() const override { return "pendulum"; }
    double kappa() const { return m_kappa; }

private:
    double m_kappa;
};

/// V(x) = kappa (1 - cos 2 pi x) + beta (1 - cos 4 pi x); the minimum at the
/// origin stays unique and non-degenerate for beta < kappa / 4.
class TwoHarmonicPotential : public SymmetricPotential {
public:
    TwoHarmonicPotential(double kappa, double beta);
    double derivative(int order, double x) const override;
    double v_min() const override { return 0.0; }
    std::string name() const override { return "two_harmonic"; }
    double kappa() const { return m_kappa; }
    double beta() const { return m_beta; }

private:
    double m_kappa, m_beta;
};

/// V = 0.  Violates the non-degenerate-minimum hypothesis; everything about
/// it is exactly solvable, which makes it the standard degenerate oracle.
class ZeroPotential : public SymmetricPotential {
public:
    double derivative(int, double) const override { return 0.0; }
    double v_min() const override { return 0.0; }
    double v_max() const override { return 0.0; }
    std::string name() const override { return "zero"; }
};

PotentialPtr make_potential(const std::string& name, double kappa = 1.0, double beta = 0.0);

/// Hypothesis check: symmetry, minimum at the origin, non-degeneracy, and
/// uniqueness of the interior minimum (sign-change scan of V').
struct PotentialReport {
    bool pass = false;
    double symmetry_residual = 0.0;   // max |V(x) - V(-x)| over the sample set
    double second_derivative_at_min = 0.0;
    int minima_count = 0;             // sign changes of V' from - to +
    double min_location = 0.0;
    std::string message;              // names the violated hypothesis on failure
};

PotentialReport validate(const SymmetricPotential& V, std::size_t samples = 2048);

}  // namespace wkw

#endif
