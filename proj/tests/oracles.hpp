// Test-only reference implementations, independent of the library's own
// numerical paths: adaptive Gauss-Kronrod quadrature, a determinant-bisection
// eigenvalue oracle, finite differences, and a deterministic RNG.
#ifndef WKW_TESTS_ORACLES_HPP
#define WKW_TESTS_ORACLES_HPP

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace oracle {

// QUADPACK dqk15 constants
inline const double gk_x[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
inline const double gk_wk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline const double gk_wg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct GK {
    double value, error;
};

inline GK gk15(const std::function<double(double)>& f, double a, double b)
{
    const double c = 0.5 * (a + b), hw = 0.5 * (b - a);
    double kron = gk_wk[7] * f(c);
    double gauss = gk_wg[3] * f(c);
    for (int i = 0; i < 7; ++i) {
        const double fp = f(c + hw * gk_x[i]);
        const double fm = f(c - hw * gk_x[i]);
        kron += gk_wk[i] * (fp + fm);
        if (i % 2 == 1) gauss += gk_wg[i / 2] * (fp + fm);
    }
    return {kron * hw, std::abs(kron - gauss) * hw};
}

inline double adaptive_quadrature(const std::function<double(double)>& f, double a, double b,
                                  double tol = 1e-12, int depth = 0)
{
    GK r = gk15(f, a, b);
    if (r.error <= tol || depth >= 28) return r.value;
    const double c = 0.5 * (a + b);
    return adaptive_quadrature(f, a, c, 0.5 * tol, depth + 1) +
           adaptive_quadrature(f, c, b, 0.5 * tol, depth + 1);
}

// sign of det(A - lambda I) by Gaussian elimination with partial pivoting
inline int det_sign_shifted(std::vector<double> a, std::size_t n, double lambda)
{
    for (std::size_t i = 0; i < n; ++i) a[i * n + i] -= lambda;
    int sign = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::abs(a[r * n + c]) > std::abs(a[p * n + c])) p = r;
        if (a[p * n + c] == 0.0) return 0;
        if (p != c) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a[c * n + j], a[p * n + j]);
            sign = -sign;
        }
        if (a[c * n + c] < 0.0) sign = -sign;
        for (std::size_t r = c + 1; r < n; ++r) {
            const double l = a[r * n + c] / a[c * n + c];
            for (std::size_t j = c; j < n; ++j) a[r * n + j] -= l * a[c * n + j];
        }
    }
    return sign;
}

// largest real eigenvalue by scanning the determinant sign downward from the
// Gershgorin bound and bisecting the first sign change; complex pairs do not
// flip the sign, so this lands on the principal (Perron) eigenvalue for the
// operators under test
inline double principal_eigenvalue_det(const std::vector<double>& a, std::size_t n,
                                       int scan_points = 4000)
{
    double ub = -1e300, lb = 1e300;
    for (std::size_t i = 0; i < n; ++i) {
        double off = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            if (j != i) off += std::abs(a[i * n + j]);
        ub = std::max(ub, a[i * n + i] + off);
        lb = std::min(lb, a[i * n + i] - off);
    }
    ub += 1.0;
    const int s_top = det_sign_shifted(a, n, ub);
    double hi = ub, lo = ub;
    const double step = (ub - lb) / scan_points;
    bool found = false;
    for (int k = 1; k <= scan_points + 1; ++k) {
        lo = ub - step * k;
        if (det_sign_shifted(a, n, lo) != s_top) {
            found = true;
            break;
        }
        hi = lo;
    }
    if (!found) throw std::runtime_error("det oracle: no sign change found");
    for (int it = 0; it < 100; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (det_sign_shifted(a, n, mid) == s_top)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

inline double central_diff(const std::function<double(double)>& f, double x, double d)
{
    return (f(x + d) - f(x - d)) / (2.0 * d);
}

struct Lcg {
    unsigned long long s;
    explicit Lcg(unsigned long long seed = 88172645463325252ull) : s(seed) {}
    double uniform()
    {
        s = s * 6364136223846793005ull + 1442695040888963407ull;
        return static_cast<double>(s >> 11) / 9007199254740992.0;
    }
    double sym() { return 2.0 * uniform() - 1.0; }
};

}  // namespace oracle

#endif
