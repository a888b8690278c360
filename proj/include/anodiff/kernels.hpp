#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>

namespace anodiff {

using cplx = std::complex<double>;

/// exp(z) - 1 without cancellation for small |z|.
inline cplx expm1(cplx z) {
    const double x = z.real();
    const double y = z.imag();
    const double s = std::sin(0.5 * y);
    const double re = std::expm1(x) * std::cos(y) - 2.0 * s * s;
    const double im = std::exp(x) * std::sin(y);
    return {re, im};
}

namespace detail {

inline constexpr double kSeriesThreshold = 1e-3;

inline void check_kernel_args(cplx a, double tau) {
    if (a.real() < 0.0) throw std::domain_error("exponential kernel requires Re(a) >= 0");
    if (!(tau > 0.0)) throw std::domain_error("exponential kernel requires tau > 0");
}

}  // namespace detail

/// E0(a, tau) = integral_0^tau exp(-a s) ds = (1 - exp(-a tau)) / a.
inline cplx kernel_e0(cplx a, double tau) {
    detail::check_kernel_args(a, tau);
    const cplx z = a * tau;
    if (std::abs(z) < detail::kSeriesThreshold) {
        // tau * sum_n (-z)^n / (n+1)!
        cplx term = 1.0;
        cplx sum = 1.0;
        for (int n = 1; n < 8; ++n) {
            term *= -z / static_cast<double>(n + 1);
            sum += term;
        }
        return tau * sum;
    }
    return -expm1(-z) / a;
}

/// E1(a, tau) = integral_0^tau (s/tau) exp(-a s) ds = (1 - (1 + a tau) exp(-a tau)) / (a^2 tau).
inline cplx kernel_e1(cplx a, double tau) {
    detail::check_kernel_args(a, tau);
    const cplx z = a * tau;
    if (std::abs(z) < detail::kSeriesThreshold) {
        // tau * sum_n (-1)^n (n+1) z^n / (n+2)!
        cplx power = 1.0;
        double fact = 2.0;
        cplx sum = 0.5;
        for (int n = 1; n < 8; ++n) {
            power *= -z;
            fact *= static_cast<double>(n + 2);
            sum += power * (static_cast<double>(n + 1) / fact);
        }
        return tau * sum;
    }
    return (-expm1(-z) - z * std::exp(-z)) / (a * z);
}

}  // namespace anodiff
