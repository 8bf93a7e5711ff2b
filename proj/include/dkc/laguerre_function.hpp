#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "dkc/errors.hpp"
#include "dkc/special_functions.hpp"

namespace dkc {

/// Highest derivative order carried by a Jet; compositions of two second-order
/// operators need four.
inline constexpr int kMaxJetOrder = 4;

/// (f, f', f'', f''', f'''') at one point.
using Jet = std::array<double, kMaxJetOrder + 1>;

/// c · r^p · e^{−βr} · L_m^α(γr), the shape shared by Sturmian functions and the
/// physical radial components. Derivatives of every order are analytic.
struct LaguerreFunction {
    double coeff = 1.0;
    double power = 0.0;     ///< p
    double decay = 1.0;     ///< β
    int degree = 0;         ///< m
    double order = 0.0;     ///< α
    double arg_scale = 2.0; ///< γ

    double operator()(double r) const { return value(r); }

    double value(double r) const {
        return coeff * std::exp(power * std::log(r) - decay * r) *
               detail::laguerre_unchecked(degree, order, arg_scale * r);
    }

    Jet jet(double r) const {
        // g = r^p e^{−βr}: g^{(i)} = g Σ_l C(i,l) (p)_l r^{−l} (−β)^{i−l}
        // h = L_m^α(γr):   h^{(j)} = (−γ)^j L_{m−j}^{α+j}(γr)
        const double base = coeff * std::exp(power * std::log(r) - decay * r);
        std::array<double, kMaxJetOrder + 1> g{};
        std::array<double, kMaxJetOrder + 1> h{};
        for (int i = 0; i <= kMaxJetOrder; ++i) {
            double sum = 0.0;
            double falling = 1.0;
            for (int l = 0; l <= i; ++l) {
                sum += binomial(i, l) * falling * std::pow(r, -l) * std::pow(-decay, i - l);
                falling *= (power - l);
            }
            g[i] = base * sum;
            h[i] = std::pow(-arg_scale, i) * detail::laguerre_unchecked(degree - i, order + i, arg_scale * r);
        }
        Jet out{};
        for (int k = 0; k <= kMaxJetOrder; ++k) {
            double sum = 0.0;
            for (int i = 0; i <= k; ++i) sum += binomial(k, i) * g[i] * h[k - i];
            out[k] = sum;
        }
        return out;
    }

    /// e^θ f(e^θ r), again of the same shape.
    LaguerreFunction scaled(double theta) const {
        const double lambda = std::exp(theta);
        LaguerreFunction g = *this;
        g.coeff = coeff * lambda * std::exp(power * theta);
        g.decay = decay * lambda;
        g.arg_scale = arg_scale * lambda;
        return g;
    }

private:
    static double binomial(int n, int k) {
        static constexpr double table[kMaxJetOrder + 1][kMaxJetOrder + 1] = {
            {1, 0, 0, 0, 0}, {1, 1, 0, 0, 0}, {1, 2, 1, 0, 0}, {1, 3, 3, 1, 0}, {1, 4, 6, 4, 1}};
        return table[n][k];
    }
};

inline std::vector<double> log_grid(double r_min, double r_max, int count) {
    if (count < 2 || !(r_min > 0.0) || !(r_max > r_min)) throw DomainError("invalid logarithmic grid");
    std::vector<double> grid(count);
    const double step = std::log(r_max / r_min) / (count - 1);
    for (int i = 0; i < count; ++i) grid[i] = r_min * std::exp(step * i);
    grid.back() = r_max;
    return grid;
}

inline std::vector<double> linear_grid(double r_min, double r_max, int count) {
    if (count < 2 || !(r_min > 0.0) || !(r_max > r_min)) throw DomainError("invalid linear grid");
    std::vector<double> grid(count);
    const double step = (r_max - r_min) / (count - 1);
    for (int i = 0; i < count; ++i) grid[i] = r_min + step * i;
    grid.back() = r_max;
    return grid;
}

/// 400 log-spaced points on [10⁻²/a, 40/a].
inline std::vector<double> default_residual_grid(double a) { return log_grid(1e-2 / a, 40.0 / a, 400); }

/// Number of strict sign changes of f over the grid points (exact zeros skipped).
template <class Fn>
int count_sign_changes(Fn&& f, const std::vector<double>& grid) {
    int changes = 0;
    int last_sign = 0;
    for (double r : grid) {
        const double v = f(r);
        const int sign = (v > 0.0) - (v < 0.0);
        if (sign == 0) continue;
        if (last_sign != 0 && sign != last_sign) ++changes;
        last_sign = sign;
    }
    return changes;
}

} // namespace dkc
