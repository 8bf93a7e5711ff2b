#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "dkc/errors.hpp"
#include "dkc/laguerre_function.hpp"
#include "dkc/quadrature.hpp"
#include "dkc/quantum_setup.hpp"
#include "dkc/report.hpp"
#include "dkc/special_functions.hpp"
#include "dkc/spectrum.hpp"

namespace dkc {

/// Decoupled radial channel: u carries centrifugal s(s−1), v carries s(s+1).
enum class Channel { u, v };

inline const char* to_string(Channel c) { return c == Channel::u ? "u" : "v"; }

/// Bargmann index of the discrete series carried by a channel.
inline double bargmann_index(Channel channel, double s) { return channel == Channel::u ? s : s + 1.0; }

/// ℓ in the realization A₀ = ½(rP_r² + ℓ(ℓ+1)/r + r): s − 1 for u, s for v.
inline double realization_parameter(Channel channel, double s) { return channel == Channel::u ? s - 1.0 : s; }

/// Position of a Sturmian label inside its irreducible representation (n for u, n − 1 for v).
inline int group_index(Channel channel, int n) { return channel == Channel::u ? n : n - 1; }

/// Sturmian basis function, orthonormal under r dr:
///   v̄_{ns}(r) = 2√((n−1)!/Γ(n+2s+1)) (2r)^s e^{−r} L_{n−1}^{2s+1}(2r),  n ≥ 1
///   ū_{ns}(r) = 2√(n!/Γ(n+2s)) (2r)^{s−1} e^{−r} L_n^{2s−1}(2r),        n ≥ 0
inline LaguerreFunction sturmian_function(Channel channel, int n, double s) {
    if (!(s > 0.0)) throw DomainError("Sturmian functions require s > 0");
    LaguerreFunction f;
    f.decay = 1.0;
    f.arg_scale = 2.0;
    if (channel == Channel::v) {
        if (n < 1) throw DomainError("v-channel Sturmian requires n >= 1");
        f.power = s;
        f.degree = n - 1;
        f.order = 2.0 * s + 1.0;
        f.coeff = 2.0 * std::exp(0.5 * (log_gamma(n) - log_gamma(n + 2.0 * s + 1.0)) + s * std::log(2.0));
    } else {
        if (n < 0) throw DomainError("u-channel Sturmian requires n >= 0");
        f.power = s - 1.0;
        f.degree = n;
        f.order = 2.0 * s - 1.0;
        f.coeff = 2.0 * std::exp(0.5 * (log_gamma(n + 1.0) - log_gamma(n + 2.0 * s)) + (s - 1.0) * std::log(2.0));
    }
    return f;
}

inline double sturmian(Channel channel, int n, double s, double r) {
    if (!(r > 0.0)) throw DomainError("Sturmian functions are evaluated at r > 0");
    return sturmian_function(channel, n, s).value(r);
}

/// The dilatation e^{iθA₂}: f ↦ (r ↦ e^θ f(e^θ r)).
template <class Fn>
auto apply_scaling(Fn f, double theta) {
    const double lambda = std::exp(theta);
    return [f = std::move(f), lambda](double r) { return lambda * f(lambda * r); };
}

inline LaguerreFunction apply_scaling(const LaguerreFunction& f, double theta) { return f.scaled(theta); }

/// ũ(r) = (2ar)^{s−1} e^{−ar} L_n^{2s−1}(2ar) and ṽ(r) = (2ar)^s e^{−ar} L_{n−1}^{2s+1}(2ar),
/// without the constants A_n, B_n.
inline std::pair<LaguerreFunction, LaguerreFunction> physical_components(const BoundLevel& level,
                                                                         const DerivedConstants& c) {
    if (level.n < 1) throw DomainError("physical components require n >= 1");
    const double a = level.a;
    const double s = c.s;
    LaguerreFunction u{std::pow(2.0 * a, s - 1.0), s - 1.0, a, level.n, 2.0 * s - 1.0, 2.0 * a};
    LaguerreFunction v{std::pow(2.0 * a, s), s, a, level.n - 1, 2.0 * s + 1.0, 2.0 * a};
    return {u, v};
}

/// B_n / A_n = ωs / (a n (n+2s)).
inline double coefficient_ratio_Bn(const BoundLevel& level, const DerivedConstants& c) {
    if (level.n < 1) throw DomainError("B_n/A_n is undefined for n = 0");
    return level.omega * c.s / (level.a * level.n * (level.n + 2.0 * c.s));
}

/// F = A(2a)^{s−1} r^s e^{−ar}[F₁L_n^{2s−1}(2ar) + F₂ r L_{n−1}^{2s+1}(2ar)], same for G.
struct SpinorCoefficients {
    double F1 = 0.0;
    double F2 = 0.0;
    double G1 = 0.0;
    double G2 = 0.0;

    /// G ≡ 0: the uncoupled free-particle limit, which has no normalisable bound state.
    bool degenerate() const { return G1 == 0.0 && G2 == 0.0; }
};

inline SpinorCoefficients spinor_coefficients(int n, const DerivedConstants& c, double omega_value) {
    if (n < 1) throw DomainError("spinor coefficients require n >= 1");
    const double s = c.s;
    const double p = s - c.kappa;
    const double denom = n * (n + 2.0 * s);
    return {p, -2.0 * omega_value * s * c.alpha_minus / denom, -c.alpha_plus, 2.0 * omega_value * s * p / denom};
}

/// Closed form A_n = 2(a³ n! / (Γ(n+2s)(n+s)(σ+τ+χ)))^{1/2} evaluated as written
/// (NaN if σ+τ+χ ≤ 0). Kept for comparison with the quadrature constant only.
inline double closed_form_normalization(const BoundLevel& level, const DerivedConstants& c) {
    const int n = level.n;
    const double s = c.s;
    const double p = s - c.kappa;
    const double w = level.omega;
    const double sigma = p * p + c.alpha_plus * c.alpha_plus;
    const double tau = 4.0 * w * s * c.alpha_minus * p / (n + s);
    const double chi = w * w * s * s * (p * p + c.alpha_minus * c.alpha_minus) / (n * (n + 2.0 * s));
    const double total = sigma + tau + chi;
    if (!(total > 0.0)) return std::nan("");
    const double log_arg = 3.0 * std::log(level.a) + log_gamma(n + 1.0) - log_gamma(n + 2.0 * s) -
                           std::log(n + s) - std::log(total);
    return 2.0 * std::exp(0.5 * log_arg);
}

struct SpinorValue {
    double F = 0.0;
    double G = 0.0;
};

/// Normalised radial spinor (F, G) of one bound level. Immutable after construction.
class RadialSpinor {
public:
    RadialSpinor(BoundLevel level, DerivedConstants constants, SpinorCoefficients coefficients, double normalization,
                 NormalizationComparison comparison, bool normalized)
        : level_(level),
          constants_(constants),
          coeffs_(coefficients),
          normalization_(normalization),
          comparison_(comparison),
          normalized_(normalized) {}

    const BoundLevel& level() const { return level_; }
    const DerivedConstants& constants() const { return constants_; }
    const SpinorCoefficients& coefficients() const { return coeffs_; }
    /// Signed A_n; its sign makes F(r → 0⁺) > 0.
    double normalization() const { return normalization_; }
    const NormalizationComparison& comparison() const { return comparison_; }
    bool normalized() const { return normalized_; }

    SpinorValue operator()(double r) const { return evaluate(r); }

    SpinorValue evaluate(double r) const {
        const auto t = terms(r);
        return {normalization_ * t.envelope * t.q_f, normalization_ * t.envelope * t.q_g};
    }

    SpinorValue derivative(double r) const {
        const auto t = terms(r);
        const double d_envelope = t.envelope * (constants_.s / r - level_.a);
        return {normalization_ * (d_envelope * t.q_f + t.envelope * t.dq_f),
                normalization_ * (d_envelope * t.q_g + t.envelope * t.dq_g)};
    }

private:
    struct Terms {
        double envelope, q_f, q_g, dq_f, dq_g;
    };

    Terms terms(double r) const {
        const double s = constants_.s;
        const double a = level_.a;
        const int n = level_.n;
        const double x = 2.0 * a * r;
        const double envelope = std::exp((s - 1.0) * std::log(2.0 * a) + s * std::log(r) - a * r);
        const double lu = detail::laguerre_unchecked(n, 2.0 * s - 1.0, x);
        const double lv = detail::laguerre_unchecked(n - 1, 2.0 * s + 1.0, x);
        const double dlu = -2.0 * a * detail::laguerre_unchecked(n - 1, 2.0 * s, x);
        const double d_rlv = lv - 2.0 * a * r * detail::laguerre_unchecked(n - 2, 2.0 * s + 2.0, x);
        return {envelope,
                coeffs_.F1 * lu + coeffs_.F2 * r * lv,
                coeffs_.G1 * lu + coeffs_.G2 * r * lv,
                coeffs_.F1 * dlu + coeffs_.F2 * d_rlv,
                coeffs_.G1 * dlu + coeffs_.G2 * d_rlv};
    }

    BoundLevel level_;
    DerivedConstants constants_;
    SpinorCoefficients coeffs_;
    double normalization_;
    NormalizationComparison comparison_;
    bool normalized_;
};

/// Spinor with the closed-form coefficients and A_n fixed by ∫(F²+G²)dr = 1.
/// The quadrature is cross-checked against the adaptive path.
inline RadialSpinor assemble_spinor(const BoundLevel& level, const DerivedConstants& c) {
    if (level.n < 1) throw DomainError("spinors are defined for n >= 1");
    if (c.s == c.kappa) throw SingularTransform("spinor assembly requires s != kappa");
    const auto coeffs = spinor_coefficients(level.n, c, level.omega);
    if (coeffs.degenerate()) return RadialSpinor(level, c, coeffs, 1.0, {}, false);

    const RadialSpinor unit(level, c, coeffs, 1.0, {}, false);
    const auto rule = build_rule(level.n + 8, 2.0 * c.s);
    const double norm_sq = integrate_checked(
        [&](double r) {
            const auto v = unit.evaluate(r);
            return v.F * v.F + v.G * v.G;
        },
        level.a, rule);
    if (!(norm_sq > 0.0)) throw NonNormalizable("spinor has zero norm");
    const double magnitude = 1.0 / std::sqrt(norm_sq);
    const double signed_a = coeffs.F1 >= 0.0 ? magnitude : -magnitude;
    return RadialSpinor(level, c, coeffs, signed_a,
                        compare_normalization(magnitude, closed_form_normalization(level, c)), true);
}

/// Rows of the first-order system F' + (κF − α₋G)/r − (m+E)G and
/// G' + (α₊F − κG)/r − (m−E)F, each divided by the sum of its term magnitudes.
/// Works with anything exposing evaluate(r) and derivative(r) returning SpinorValue.
template <class SpinorLike>
ResidualStats ode_residual_first_order(const SpinorLike& spinor, const DerivedConstants& c, double e, double mass,
                                       const std::vector<double>& grid) {
    ResidualStats stats;
    for (double r : grid) {
        const auto f = spinor.evaluate(r);
        const auto d = spinor.derivative(r);
        const double t1[] = {d.F, c.kappa * f.F / r, -c.alpha_minus * f.G / r, -(mass + e) * f.G};
        const double t2[] = {d.G, c.alpha_plus * f.F / r, -c.kappa * f.G / r, -(mass - e) * f.F};
        double row1 = 0.0, scale1 = 0.0, row2 = 0.0, scale2 = 0.0;
        for (double t : t1) row1 += t, scale1 += std::abs(t);
        for (double t : t2) row2 += t, scale2 += std::abs(t);
        const double rel1 = scale1 > 0.0 ? std::abs(row1) / scale1 : 0.0;
        const double rel2 = scale2 > 0.0 ? std::abs(row2) / scale2 : 0.0;
        stats.add(std::max(rel1, rel2), r);
    }
    return stats;
}

inline ResidualStats ode_residual_first_order(const RadialSpinor& spinor, const std::vector<double>& grid) {
    return ode_residual_first_order(spinor, spinor.constants(), spinor.level().energy, spinor.level().mass, grid);
}

/// Spinor with its upper component multiplied by a constant; used for sensitivity checks.
template <class SpinorLike>
struct ScaledUpperSpinor {
    const SpinorLike& base;
    double factor = 1.0;

    SpinorValue evaluate(double r) const {
        auto v = base.evaluate(r);
        v.F *= factor;
        return v;
    }
    SpinorValue derivative(double r) const {
        auto v = base.derivative(r);
        v.F *= factor;
        return v;
    }
};

/// −f'' − (2/r)f' + c f/r² − 2(α_vE + α_s m)f/r + (m² − E²)f relative to the sum of term
/// magnitudes, with E taken from `level` (so a shifted energy shows up as a residual).
template <class JetFn>
ResidualStats ode_residual_second_order(const JetFn& f, double centrifugal, const BoundLevel& level,
                                        const DerivedConstants& c, const std::vector<double>& grid) {
    const double z = c.alpha_v() * level.energy + c.alpha_s() * level.mass;
    const double a_sq = (level.mass - level.energy) * (level.mass + level.energy);
    ResidualStats stats;
    for (double r : grid) {
        const Jet j = f.jet(r);
        const double terms[] = {-j[2], -2.0 * j[1] / r, centrifugal * j[0] / (r * r), -2.0 * z * j[0] / r,
                                a_sq * j[0]};
        double sum = 0.0, scale = 0.0;
        for (double t : terms) sum += t, scale += std::abs(t);
        stats.add(scale > 0.0 ? std::abs(sum) / scale : 0.0, r);
    }
    return stats;
}

/// Channel form: centrifugal s(s+1) for ṽ, s(s−1) for ũ.
template <class JetFn>
ResidualStats ode_residual_second_order(const JetFn& f, Channel channel, const BoundLevel& level,
                                        const DerivedConstants& c, const std::vector<double>& grid) {
    const double l = realization_parameter(channel, c.s);
    return ode_residual_second_order(f, l * (l + 1.0), level, c, grid);
}

} // namespace dkc
