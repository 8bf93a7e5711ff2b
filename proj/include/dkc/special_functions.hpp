#pragma once

#include <cmath>
#include <complex>

#include <boost/math/special_functions/gamma.hpp>

#include "dkc/errors.hpp"

namespace dkc {

namespace detail {

// Forward three-term recurrence, no argument checks.
inline double laguerre_unchecked(int n, double alpha, double x) {
    if (n < 0) return 0.0;
    double prev = 1.0;
    if (n == 0) return prev;
    double curr = 1.0 + alpha - x;
    for (int k = 1; k < n; ++k) {
        const double next = ((2.0 * k + 1.0 + alpha - x) * curr - (k + alpha) * prev) / (k + 1.0);
        prev = curr;
        curr = next;
    }
    return curr;
}

} // namespace detail

/// ln Γ(x) for x > 0.
inline double log_gamma(double x) {
    if (!(x > 0.0)) throw DomainError("log_gamma requires x > 0");
    return boost::math::lgamma(x);
}

/// Γ(a)/Γ(b) through log-gamma differences; a, b > 0.
inline double gamma_ratio(double a, double b) { return std::exp(log_gamma(a) - log_gamma(b)); }

/// Generalized Laguerre polynomial L_n^α(x) by the forward recurrence
/// (k+1)L_{k+1} = (2k+1+α−x)L_k − (k+α)L_{k−1}.
inline double laguerre(int n, double alpha, double x) {
    if (n < 0) throw DomainError("laguerre requires n >= 0");
    if (!(alpha > -1.0)) throw DomainError("laguerre requires alpha > -1");
    return detail::laguerre_unchecked(n, alpha, x);
}

/// k-th derivative d^k/dx^k L_n^α(x) = (−1)^k L_{n−k}^{α+k}(x); zero for k > n.
inline double laguerre_derivative(int n, double alpha, double x, int k = 1) {
    if (n < 0 || k < 0) throw DomainError("laguerre_derivative requires n, k >= 0");
    if (!(alpha > -1.0)) throw DomainError("laguerre requires alpha > -1");
    if (k > n) return 0.0;
    const double value = detail::laguerre_unchecked(n - k, alpha + k, x);
    return (k % 2 == 0) ? value : -value;
}

/// L_n^α(0) = Γ(n+α+1)/(n! Γ(α+1)).
inline double laguerre_at_zero(int n, double alpha) {
    if (n < 0) throw DomainError("laguerre_at_zero requires n >= 0");
    if (!(alpha > -1.0)) throw DomainError("laguerre requires alpha > -1");
    return std::exp(log_gamma(n + alpha + 1.0) - log_gamma(n + 1.0) - log_gamma(alpha + 1.0));
}

/// log of Σ_n L_n^ν(x) yⁿ, i.e. −xy/(1−y) − (ν+1) log(1−y), principal branch, |y| < 1.
inline std::complex<double> log_laguerre_generating_closed(double nu, std::complex<double> y, double x) {
    if (!(std::abs(y) < 1.0)) throw DomainError("generating function requires |y| < 1");
    const std::complex<double> one_minus = 1.0 - y;
    return -x * y / one_minus - (nu + 1.0) * std::log(one_minus);
}

/// Σ_n L_n^ν(x) yⁿ = exp(−xy/(1−y)) / (1−y)^{ν+1}, principal branch, |y| < 1.
inline std::complex<double> laguerre_generating_closed(double nu, std::complex<double> y, double x) {
    return std::exp(log_laguerre_generating_closed(nu, y, x));
}

} // namespace dkc
