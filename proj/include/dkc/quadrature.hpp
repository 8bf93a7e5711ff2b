#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <type_traits>
#include <vector>

#include <Eigen/Eigenvalues>
#include <boost/math/quadrature/exp_sinh.hpp>

#include "dkc/errors.hpp"
#include "dkc/special_functions.hpp"

namespace dkc {

/// Gauss-Laguerre rule for the weight x^α e^{−x} on (0, ∞).
struct QuadratureRule {
    int order = 0;
    double alpha = 0.0;
    std::vector<double> nodes;
    std::vector<double> weights;     ///< may underflow to 0 for very high orders
    std::vector<double> log_weights; ///< always finite
};

namespace detail {

struct ScaledLaguerre {
    double last = 0.0;      ///< L_N(x) / e^{log_scale}
    double previous = 0.0;  ///< L_{N−1}(x) / e^{log_scale}
    double log_scale = 0.0;
};

// L_N and L_{N−1} with running rescaling so large orders do not overflow.
inline ScaledLaguerre scaled_laguerre_pair(int n, double alpha, double x) {
    constexpr double big = 1e150;
    ScaledLaguerre out;
    double prev = 1.0;
    double curr = 1.0 + alpha - x;
    if (n == 1) return {curr, prev, 0.0};
    for (int k = 1; k < n; ++k) {
        const double next = ((2.0 * k + 1.0 + alpha - x) * curr - (k + alpha) * prev) / (k + 1.0);
        prev = curr;
        curr = next;
        if (std::abs(curr) > big) {
            curr /= big;
            prev /= big;
            out.log_scale += std::log(big);
        }
    }
    out.last = curr;
    out.previous = prev;
    return out;
}

} // namespace detail

/// Nodes are the zeros of L_N^α: Golub-Welsch eigenvalues as starting points, then
/// Newton polishing on the three-term recurrence to 1e-14 relative.
inline QuadratureRule build_rule(int order, double alpha) {
    if (order < 1 || order > 512) throw DomainError("quadrature order must be in [1, 512]");
    if (!(alpha > -1.0)) throw DomainError("quadrature requires alpha > -1");

    Eigen::VectorXd diag(order);
    Eigen::VectorXd sub(std::max(order - 1, 0));
    for (int k = 0; k < order; ++k) diag[k] = 2.0 * k + 1.0 + alpha;
    for (int k = 0; k + 1 < order; ++k) sub[k] = std::sqrt((k + 1.0) * (k + 1.0 + alpha));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;
    eig.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    if (eig.info() != Eigen::Success) throw ConvergenceFailure("tridiagonal eigensolver failed");

    QuadratureRule rule;
    rule.order = order;
    rule.alpha = alpha;
    rule.nodes.resize(order);
    rule.weights.resize(order);
    rule.log_weights.resize(order);

    const double n = order;
    const double log_norm = log_gamma(n + alpha + 1.0) - log_gamma(n + 1.0) - 2.0 * std::log(n + alpha);
    for (int i = 0; i < order; ++i) {
        double x = std::max(eig.eigenvalues()[i], std::numeric_limits<double>::min());
        bool converged = false;
        double previous_step = std::numeric_limits<double>::infinity();
        for (int iter = 0; iter < 100; ++iter) {
            const auto p = detail::scaled_laguerre_pair(order, alpha, x);
            // x L_N' = N L_N − (N+α) L_{N−1}
            const double slope_times_x = n * p.last - (n + alpha) * p.previous;
            const double dx = x * p.last / slope_times_x;
            x -= dx;
            if (!(x > 0.0) || !std::isfinite(x)) break;
            // stop at 1e-14, or once steps stall at the rounding floor of the recurrence
            const double step = std::abs(dx);
            if (step <= 1e-14 * x || (step <= 1e-10 * x && step >= 0.5 * previous_step)) {
                converged = true;
                break;
            }
            previous_step = step;
        }
        if (!converged) throw ConvergenceFailure("Newton iteration for Laguerre zero did not converge");
        rule.nodes[i] = x;
        const auto p = detail::scaled_laguerre_pair(order, alpha, x);
        // w_i = Γ(N+α+1) x_i / (N! (N+α)² L_{N−1}(x_i)²)
        rule.log_weights[i] = log_norm + std::log(x) - 2.0 * (std::log(std::abs(p.previous)) + p.log_scale);
        rule.weights[i] = std::exp(rule.log_weights[i]);
    }
    for (int i = 1; i < order; ++i)
        if (!(rule.nodes[i] > rule.nodes[i - 1] * (1.0 + 1e-12)))
            throw ConvergenceFailure("Laguerre zeros are not distinct");
    return rule;
}

/// ∫₀^∞ f(r) dr with x = 2·scale·r and the factor x^α e^{−x} moved into the rule's weight.
/// Exact when f(r) e^{2·scale·r} (2·scale·r)^{−α} is a polynomial of degree < 2N.
template <class Fn>
auto integrate_radial(Fn&& f, double scale, const QuadratureRule& rule) {
    using Result = std::decay_t<decltype(f(1.0))>;
    if (!(scale > 0.0)) throw DomainError("integrate_radial requires scale > 0");
    Result sum{};
    for (int i = 0; i < rule.order; ++i) {
        const double x = rule.nodes[i];
        const double factor = std::exp(rule.log_weights[i] + x - rule.alpha * std::log(x));
        sum += factor * f(x / (2.0 * scale));
    }
    return sum / (2.0 * scale);
}

template <class Fn>
auto integrate_radial(Fn&& f, double scale, double alpha_hint, int order) {
    return integrate_radial(std::forward<Fn>(f), scale, build_rule(order, alpha_hint));
}

namespace detail {

template <class Fn>
double exp_sinh_real(Fn&& f, double tolerance) {
    boost::math::quadrature::exp_sinh<double> integrator(12);
    double error = 0.0;
    double l1 = 0.0;
    std::size_t levels = 0;
    // Far out, e^{−ar} underflows against a growing polynomial and gives 0·∞; the limit is 0.
    const auto guarded = [&f](double r) {
        const double v = f(r);
        return !std::isfinite(v) && r > 1e8 ? 0.0 : v;
    };
    return integrator.integrate(guarded, 0.0, std::numeric_limits<double>::infinity(), tolerance, &error, &l1,
                                &levels);
}

} // namespace detail

/// Adaptive double-exponential quadrature on (0, ∞); complex integrands are done component-wise.
template <class Fn>
auto integrate_adaptive(Fn&& f, double tolerance = 1e-10) {
    using Result = std::decay_t<decltype(f(1.0))>;
    if constexpr (std::is_same_v<Result, std::complex<double>>) {
        const double re = detail::exp_sinh_real([&](double r) { return f(r).real(); }, tolerance);
        const double im = detail::exp_sinh_real([&](double r) { return f(r).imag(); }, tolerance);
        return std::complex<double>(re, im);
    } else {
        return detail::exp_sinh_real([&](double r) { return static_cast<double>(f(r)); }, tolerance);
    }
}

/// Gauss-Laguerre value, cross-checked against the adaptive path.
/// Throws AccuracyNotReached if the two disagree beyond 1e-7 (relative to max(1, |value|)).
template <class Fn>
auto integrate_checked(Fn&& f, double scale, const QuadratureRule& rule) {
    const auto gauss = integrate_radial(f, scale, rule);
    const auto adaptive = integrate_adaptive(f);
    const double diff = std::abs(gauss - adaptive);
    if (diff > 1e-7 * std::max(1.0, std::abs(gauss)))
        throw AccuracyNotReached("Gauss-Laguerre and adaptive quadrature disagree by " + std::to_string(diff));
    return gauss;
}

} // namespace dkc
