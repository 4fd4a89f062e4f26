#include "wkw/fft.hpp"

namespace wkw {

void fft(std::vector<complex>& a, int sign)
{
    const std::size_t n = a.size();
    if (!is_power_of_two(n))
        throw std::invalid_argument("fft: size must be a power of two");
    // bit reversal
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = sign * two_pi / static_cast<double>(len);
        const complex wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            complex w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                complex u = a[i + k];
                complex v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
}

std::vector<complex> fourier_coefficients(std::span<const complex> samples)
{
    const std::size_t n = samples.size();
    std::vector<complex> a(samples.begin(), samples.end());
    fft(a, -1);
    // grid starts at -1/2: e^{-2 pi i m x_j} = (-1)^m e^{-2 pi i m j / M}
    const double inv = 1.0 / static_cast<double>(n);
    for (std::size_t k = 0; k < n; ++k) {
        const int m = coeff_mode(k, n);
        a[k] *= (m & 1) ? -inv : inv;
    }
    return a;
}

std::vector<complex> fourier_coefficients(std::span<const double> samples)
{
    std::vector<complex> tmp(samples.size());
    for (std::size_t j = 0; j < samples.size(); ++j) tmp[j] = samples[j];
    return fourier_coefficients(std::span<const complex>(tmp));
}

std::vector<complex> fourier_synthesis(std::span<const complex> coeffs)
{
    const std::size_t n = coeffs.size();
    std::vector<complex> a(coeffs.begin(), coeffs.end());
    for (std::size_t k = 0; k < n; ++k) {
        const int m = coeff_mode(k, n);
        if (m & 1) a[k] = -a[k];
    }
    fft(a, +1);
    return a;
}

std::vector<double> spectral_derivative(std::span<const double> samples, int order)
{
    if (order < 1) throw std::invalid_argument("spectral_derivative: order must be >= 1");
    const std::size_t n = samples.size();
    std::vector<complex> c = fourier_coefficients(samples);
    for (std::size_t k = 0; k < n; ++k) {
        const int m = coeff_mode(k, n);
        if (m == -static_cast<int>(n / 2) && (order & 1)) {
            c[k] = 0.0;
            continue;
        }
        complex factor = std::pow(complex(0.0, two_pi * m), order);
        c[k] *= factor;
    }
    std::vector<complex> back = fourier_synthesis(c);
    std::vector<double> out(n);
    for (std::size_t j = 0; j < n; ++j) out[j] = back[j].real();
    return out;
}

std::vector<double> spectral_antiderivative(std::span<const double> samples)
{
    const std::size_t n = samples.size();
    std::vector<complex> c = fourier_coefficients(samples);
    for (std::size_t k = 0; k < n; ++k) {
        const int m = coeff_mode(k, n);
        if (m == 0)
            c[k] = 0.0;
        else
            c[k] /= complex(0.0, two_pi * m);
    }
    std::vector<complex> back = fourier_synthesis(c);
    std::vector<double> out(n);
    for (std::size_t j = 0; j < n; ++j) out[j] = back[j].real();
    // enforce exact zero mean
    double mean = 0.0;
    for (double v : out) mean += v;
    mean /= static_cast<double>(n);
    for (double& v : out) v -= mean;
    return out;
}

std::vector<double> trig_refine(std::span<const double> samples, std::size_t factor)
{
    if (factor == 0 || !is_power_of_two(factor))
        throw std::invalid_argument("trig_refine: factor must be a power of two");
    if (factor == 1) return std::vector<double>(samples.begin(), samples.end());
    const std::size_t n = samples.size();
    const std::size_t nf = n * factor;
    std::vector<complex> c = fourier_coefficients(samples);
    std::vector<complex> cf(nf, complex(0.0, 0.0));
    for (std::size_t k = 0; k < n; ++k) {
        const int m = coeff_mode(k, n);
        if (m == -static_cast<int>(n / 2)) {
            // split the Nyquist mode symmetrically so the result stays real
            cf[(nf - n / 2) % nf] += 0.5 * c[k];
            cf[n / 2] += 0.5 * c[k];
        } else {
            cf[(m >= 0) ? static_cast<std::size_t>(m) : nf + m] = c[k];
        }
    }
    std::vector<complex> back = fourier_synthesis(cf);
    std::vector<double> out(nf);
    for (std::size_t j = 0; j < nf; ++j) out[j] = back[j].real();
    return out;
}

TrigInterpolant::TrigInterpolant(std::span<const double> samples)
    : m_coeff(fourier_coefficients(samples))
{
}

double TrigInterpolant::operator()(double x) const
{
    const std::size_t n = m_coeff.size();
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const int m = coeff_mode(k, n);
        if (m == -static_cast<int>(n / 2)) {
            acc += m_coeff[k].real() * std::cos(pi * static_cast<double>(n) * x);
        } else {
            const double ang = two_pi * m * x;
            acc += m_coeff[k].real() * std::cos(ang) - m_coeff[k].imag() * std::sin(ang);
        }
    }
    return acc;
}

double TrigInterpolant::derivative(double x) const
{
    const std::size_t n = m_coeff.size();
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const int m = coeff_mode(k, n);
        if (m == -static_cast<int>(n / 2)) continue;
        const double ang = two_pi * m * x;
        // d/dx Re[c e^{i ang}] = -2 pi m (Re c sin + Im c cos)
        acc -= two_pi * m * (m_coeff[k].real() * std::sin(ang) + m_coeff[k].imag() * std::cos(ang));
    }
    return acc;
}

}  // namespace wkw
