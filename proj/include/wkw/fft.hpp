#ifndef WKW_FFT_HPP
#define WKW_FFT_HPP

#include <span>
#include <vector>

#include "wkw/common.hpp"

namespace wkw {

/// In-place complex FFT, size power of two.
/// sign = -1: X_k = sum_j x_j e^{-2 pi i jk/M}; sign = +1: conjugate transform.
/// No normalization is applied.
void fft(std::vector<complex>& a, int sign);

/// Discrete Fourier coefficients of samples taken at x_j = -1/2 + j/M:
///   c_m = (1/M) sum_j f(x_j) e^{-2 pi i m x_j}
/// for m in [-M/2, M/2), returned in FFT order (index k holds mode k for
/// k < M/2 and mode k - M otherwise).
std::vector<complex> fourier_coefficients(std::span<const complex> samples);
std::vector<complex> fourier_coefficients(std::span<const double> samples);

/// Inverse of fourier_coefficients: values at x_j = -1/2 + j/M, j = 0..M-1.
std::vector<complex> fourier_synthesis(std::span<const complex> coeffs);

/// Mode number carried by FFT-order index k in a spectrum of size M.
inline int coeff_mode(std::size_t k, std::size_t M)
{
    return k < M / 2 ? static_cast<int>(k) : static_cast<int>(k) - static_cast<int>(M);
}

/// Spectral derivative of a smooth periodic grid function (order >= 1).
/// The Nyquist mode is zeroed for odd orders.
std::vector<double> spectral_derivative(std::span<const double> samples, int order = 1);

/// Mean-zero periodic antiderivative; the input's mean component is ignored.
std::vector<double> spectral_antiderivative(std::span<const double> samples);

/// Trigonometric refinement onto a grid `factor` times finer (zero padding).
std::vector<double> trig_refine(std::span<const double> samples, std::size_t factor);

/// Trigonometric interpolant of a real periodic grid function; exact at the
/// nodes, spectrally accurate off-grid for resolved functions.
class TrigInterpolant {
public:
    TrigInterpolant() = default;
    explicit TrigInterpolant(std::span<const double> samples);

    double operator()(double x) const;
    double derivative(double x) const;
    std::size_t size() const { return m_coeff.size(); }

private:
    std::vector<complex> m_coeff;  // FFT order
};

}  // namespace wkw

#endif
