#pragma once

#include <cmath>
#include <complex>
#include <utility>
#include <vector>

#include <boost/math/special_functions/beta.hpp>

#include "dkc/errors.hpp"
#include "dkc/quadrature.hpp"
#include "dkc/quantum_setup.hpp"
#include "dkc/radial_states.hpp"
#include "dkc/report.hpp"
#include "dkc/special_functions.hpp"
#include "dkc/spectrum.hpp"

namespace dkc {

using cplx = std::complex<double>;

namespace detail {
inline void require_disc(cplx xi) {
    if (!(std::abs(xi) < 1.0)) throw DomainError("coherent-state label requires |xi| < 1");
}
} // namespace detail

/// Disc label ξ = −tanh(τ/2) e^{−iφ} of D(ξ)|k,0⟩, with η = ln(1 − |ξ|²).
struct CoherentLabel {
    cplx xi;
    double k = 1.0;
    double tau = 0.0;
    double phi = 0.0;
    double eta = 0.0;

    static CoherentLabel from_xi(cplx xi, double k) {
        detail::require_disc(xi);
        if (!(k > 0.0)) throw DomainError("Bargmann index must be positive");
        const double m = std::abs(xi);
        return {xi, k, 2.0 * std::atanh(m), m > 0.0 ? -std::arg(-xi) : 0.0, std::log1p(-m * m)};
    }

    static CoherentLabel from_displacement(double tau, double phi, double k) {
        if (!(tau >= 0.0) || !std::isfinite(tau)) throw DomainError("tau must be finite and >= 0");
        return from_xi(-std::tanh(0.5 * tau) * std::polar(1.0, -phi), k);
    }
};

/// c_n = (1−|ξ|²)^k √(Γ(n+2k)/(n! Γ(2k))) ξⁿ for group indices 0..N.
inline std::vector<cplx> perelomov_weights(double k, cplx xi, int N) {
    detail::require_disc(xi);
    if (!(k > 0.0)) throw DomainError("Bargmann index must be positive");
    if (N < 0) throw DomainError("truncation order must be >= 0");
    std::vector<cplx> c(N + 1);
    c[0] = std::exp(k * std::log1p(-std::norm(xi)));
    for (int n = 0; n < N; ++n) c[n + 1] = c[n] * xi * std::sqrt((n + 2.0 * k) / (n + 1.0));
    return c;
}

/// Σ_{n>N} |c_n|², the negative-binomial tail I_{|ξ|²}(N+1, 2k).
inline double tail_probability(double k, cplx xi, int N) {
    detail::require_disc(xi);
    if (N < 0) throw DomainError("truncation order must be >= 0");
    const double x = std::norm(xi);
    if (x == 0.0) return 0.0;
    return boost::math::ibeta(N + 1.0, 2.0 * k, x);
}

/// Smallest N with Σ_{n>N} |c_n|² < eps.
inline int truncation_order(double k, cplx xi, double eps, int max_order = 100000) {
    if (!(eps > 0.0)) throw DomainError("tail bound must be positive");
    for (int n = 0; n <= max_order; ++n)
        if (tail_probability(k, xi, n) < eps) return n;
    throw ConvergenceFailure("coherent truncation order exceeds " + std::to_string(max_order));
}

/// Closed form of Σ c_n × Sturmian_n:
///   v̄(r,ξ) = 2(1−|ξ|²)^{s+1}/√Γ(2s+2) (2r)^s e^{−r} e^{−2rξ/(1−ξ)}/(1−ξ)^{2s+2}
///   ū(r,ξ) = 2(1−|ξ|²)^s/√Γ(2s) (2r)^{s−1} e^{−r} e^{−2rξ/(1−ξ)}/(1−ξ)^{2s}
inline cplx sturmian_coherent(Channel channel, double s, cplx xi, double r) {
    detail::require_disc(xi);
    if (!(s > 0.0)) throw DomainError("coherent states require s > 0");
    if (!(r > 0.0)) throw DomainError("coherent states are evaluated at r > 0");
    const double k = bargmann_index(channel, s);
    const double p = realization_parameter(channel, s);
    // one exponent, so e^{−r} and a growing e^{−2rξ/(1−ξ)} never meet as 0·∞
    const double log_prefactor =
        std::log(2.0) + k * std::log1p(-std::norm(xi)) - 0.5 * log_gamma(2.0 * k) + p * std::log(2.0 * r) - r;
    return std::exp(log_prefactor + log_laguerre_generating_closed(2.0 * k - 1.0, xi, 2.0 * r));
}

/// Σ_{n_g=0}^{N} c_{n_g} × Sturmian(n_g), the oracle for the closed form.
inline cplx sturmian_coherent_series(Channel channel, double s, cplx xi, double r, int N) {
    const auto c = perelomov_weights(bargmann_index(channel, s), xi, N);
    const int first = channel == Channel::u ? 0 : 1;
    cplx sum{};
    for (int ng = 0; ng <= N; ++ng) sum += c[ng] * sturmian(channel, first + ng, s, r);
    return sum;
}

struct SeriesComparison {
    int truncation = 0;
    double tail = 0.0;        ///< Σ_{n>N} |c_n|²
    double abs_max = 0.0;     ///< sup |closed − series|
    double closed_max = 0.0;  ///< sup |closed|
    double relative = 0.0;    ///< abs_max / closed_max
    double worst_r = 0.0;
};

/// Closed form against the truncated sum with N the smallest order whose tail is below eps.
inline SeriesComparison compare_coherent_series(Channel channel, double s, cplx xi, const std::vector<double>& grid,
                                                double eps) {
    SeriesComparison out;
    const double k = bargmann_index(channel, s);
    out.truncation = truncation_order(k, xi, eps);
    out.tail = tail_probability(k, xi, out.truncation);
    for (double r : grid) {
        const cplx closed = sturmian_coherent(channel, s, xi, r);
        const double diff = std::abs(closed - sturmian_coherent_series(channel, s, xi, r, out.truncation));
        out.closed_max = std::max(out.closed_max, std::abs(closed));
        if (!(diff <= out.abs_max)) {
            out.abs_max = diff;
            out.worst_r = r;
        }
    }
    out.relative = out.abs_max / out.closed_max;
    return out;
}

/// Scale and ω used to map Sturmian coherent states to physical ones.
/// The default is the n = 1 level; the result is exact in the Sturmian picture only.
struct CoherentReference {
    double a_ref = 1.0;
    double omega_ref = 0.0;

    static CoherentReference from_level(const BoundLevel& level) { return {level.a, level.omega}; }
};

/// Physical components r·e^θ f(e^θ r)/a_ref with θ = ln a_ref, i.e.
///   u(r,ξ) = (1−|ξ|²)^s/√Γ(2s) e^{−ar} a^{s−1}(2r)^s e^{−2arξ/(1−ξ)}/(1−ξ)^{2s}
///   v(r,ξ) = (1−|ξ|²)^{s+1}/√Γ(2s+2) e^{−ar} a^s (2r)^{s+1} e^{−2arξ/(1−ξ)}/(1−ξ)^{2s+2}
/// before the constants A′, B′.
class CoherentComponents {
public:
    CoherentComponents(double s, cplx xi, double a_ref) : s_(s), xi_(xi), a_(a_ref) {
        detail::require_disc(xi);
        if (!(a_ref > 0.0)) throw DomainError("reference scale a_ref must be positive");
        if (!(s > 0.0)) throw DomainError("coherent states require s > 0");
    }

    cplx u(double r) const { return component(Channel::u, r); }
    cplx v(double r) const { return component(Channel::v, r); }

    double s() const { return s_; }
    cplx xi() const { return xi_; }
    double a_ref() const { return a_; }

private:
    cplx component(Channel channel, double r) const {
        if (!(r > 0.0)) throw DomainError("coherent states are evaluated at r > 0");
        const double s = s_;
        const cplx xi = xi_;
        const auto scaled = apply_scaling([channel, s, xi](double x) { return sturmian_coherent(channel, s, xi, x); },
                                          std::log(a_));
        return r * scaled(r) / a_;
    }

    double s_;
    cplx xi_;
    double a_;
};

inline CoherentComponents physical_coherent_components(double s, cplx xi, double a_ref) { return {s, xi, a_ref}; }

/// Explicit closed forms of u(r,ξ), v(r,ξ), evaluated directly.
inline cplx explicit_coherent_u(double s, cplx xi, double a, double r) {
    const cplx one_minus = 1.0 - xi;
    return std::exp(s * std::log1p(-std::norm(xi)) - 0.5 * log_gamma(2.0 * s) - a * r + (s - 1.0) * std::log(a) +
                    s * std::log(2.0 * r) - 2.0 * a * r * xi / one_minus - 2.0 * s * std::log(one_minus));
}

inline cplx explicit_coherent_v(double s, cplx xi, double a, double r) {
    const cplx one_minus = 1.0 - xi;
    return std::exp((s + 1.0) * std::log1p(-std::norm(xi)) - 0.5 * log_gamma(2.0 * s + 2.0) - a * r +
                    s * std::log(a) + (s + 1.0) * std::log(2.0 * r) - 2.0 * a * r * xi / one_minus -
                    (2.0 * s + 2.0) * std::log(one_minus));
}

/// B′/A′ = ω(1−ξ)² / (a(1−|ξ|²)) · √(s/(2(2s+1))).
inline cplx coherent_ratio_Bn_prime(double s, cplx xi, double a_ref, double omega_ref) {
    detail::require_disc(xi);
    if (!(a_ref > 0.0)) throw DomainError("reference scale a_ref must be positive");
    return omega_ref * (1.0 - xi) * (1.0 - xi) / (a_ref * (1.0 - std::norm(xi))) *
           std::sqrt(s / (2.0 * (2.0 * s + 1.0)));
}

/// r → 0 limit of [B′(v' + s v/r) − ω A′ u] / (ω A′ u) on the explicit components, obtained by
/// Richardson extrapolation of three small radii. Returns |limit|.
inline double coherent_ratio_limit_residual(double s, cplx xi, double a_ref, double omega_ref) {
    if (omega_ref == 0.0) throw DomainError("limit check needs omega_ref != 0");
    const cplx ratio = coherent_ratio_Bn_prime(s, xi, a_ref, omega_ref);
    // v'/v = (s+1)/r − a − 2aξ/(1−ξ) for the explicit form
    const cplx log_slope_const = -a_ref - 2.0 * a_ref * xi / (1.0 - xi);
    const auto q = [&](double r) {
        const cplx v = explicit_coherent_v(s, xi, a_ref, r);
        const cplx dv = v * ((s + 1.0) / r + log_slope_const);
        const cplx u = explicit_coherent_u(s, xi, a_ref, r);
        return ratio * (dv + s * v / r) / (omega_ref * u) - 1.0;
    };
    const double h = 1e-3 / a_ref;
    const cplx q1 = q(h), q2 = q(0.5 * h), q4 = q(0.25 * h);
    // eliminate the O(r) and O(r²) terms
    const cplx r12 = 2.0 * q2 - q1;
    const cplx r24 = 2.0 * q4 - q2;
    return std::abs((4.0 * r24 - r12) / 3.0);
}

struct CoherentValue {
    cplx F;
    cplx G;
};

/// Closed-form A′ with σ′, τ′, χ′, kept for comparison only (NaN when not a positive real).
inline double closed_form_coherent_normalization(const DerivedConstants& c, cplx xi, double a_ref, double omega_ref) {
    const double s = c.s;
    const double p = s - c.kappa;
    const double w = omega_ref;
    const double q = std::norm(1.0 - xi); // (1−ξ)(1−ξ*)
    const double d = 1.0 - std::norm(xi);
    const double sigma = p * p + c.alpha_plus * c.alpha_plus;
    const double tau = -2.0 * w * p * c.alpha_v() * q * std::tgamma(2.0 * s + 1.0) / (a_ref * d);
    const double chi_base = w * q / ((2.0 * s + 1.0) * a_ref * d);
    const double chi = chi_base * chi_base * std::tgamma(2.0 * s + 3.0) * (c.alpha_minus * c.alpha_minus + p * p);
    const double total = sigma + tau + chi;
    const double arg = a_ref * a_ref * a_ref * d / (s * q * total);
    return arg > 0.0 ? std::sqrt(arg) : std::nan("");
}

/// (F, G) = M (A′u, B′v) = A′ N(r) [(s−κ) − α₋ωr/(2s+1), −α₊ + (s−κ)ωr/(2s+1)].
class CoherentSpinor {
public:
    CoherentSpinor(CoherentLabel label, DerivedConstants constants, CoherentReference ref, double normalization,
                   NormalizationComparison comparison)
        : label_(label), constants_(constants), ref_(ref), normalization_(normalization), comparison_(comparison),
          components_(constants.s, label.xi, ref.a_ref) {}

    const CoherentLabel& label() const { return label_; }
    const DerivedConstants& constants() const { return constants_; }
    const CoherentReference& reference() const { return ref_; }
    double a_ref() const { return ref_.a_ref; }
    /// Signed A′; F(1/a_ref) has the sign of the bracket's real part times A′ > 0 for real ξ.
    double normalization() const { return normalization_; }
    const NormalizationComparison& comparison() const { return comparison_; }
    const CoherentComponents& components() const { return components_; }

    CoherentValue operator()(double r) const { return evaluate(r); }

    CoherentValue evaluate(double r) const {
        const cplx u = normalization_ * components_.u(r);
        const cplx v = normalization_ * ratio() * components_.v(r);
        const double p = constants_.s - constants_.kappa;
        return {p * u - constants_.alpha_minus * v, -constants_.alpha_plus * u + p * v};
    }

    cplx ratio() const { return coherent_ratio_Bn_prime(constants_.s, label_.xi, ref_.a_ref, ref_.omega_ref); }

    /// Re[a(1+ξ)/(1−ξ)] = a(1−|ξ|²)/|1−ξ|², the decay rate of the envelope.
    double decay_rate() const { return coherent_decay_rate(label_.xi, ref_.a_ref); }

    static double coherent_decay_rate(cplx xi, double a_ref) { return (a_ref * (1.0 + xi) / (1.0 - xi)).real(); }

private:
    CoherentLabel label_;
    DerivedConstants constants_;
    CoherentReference ref_;
    double normalization_;
    NormalizationComparison comparison_;
    CoherentComponents components_;
};

/// Coherent spinor with A′ fixed by ∫(|F|²+|G|²)dr = 1 under quadrature.
/// The sign of A′ makes the upper bracket (s−κ) − α₋ω r₀/(2s+1) times A′ positive at r₀ = 1/a_ref.
inline CoherentSpinor assemble_coherent_spinor(const DerivedConstants& c, cplx xi, const CoherentReference& ref) {
    if (c.s == c.kappa) throw SingularTransform("coherent spinor requires s != kappa");
    const auto label = CoherentLabel::from_xi(xi, c.s);
    const double decay = CoherentSpinor::coherent_decay_rate(xi, ref.a_ref);
    if (!(decay > 0.0)) throw NonNormalizable("coherent envelope does not decay");

    const CoherentSpinor unit(label, c, ref, 1.0, {});
    const auto rule = build_rule(10, 2.0 * c.s);
    const double norm_sq = integrate_checked(
        [&](double r) {
            const auto v = unit.evaluate(r);
            return std::norm(v.F) + std::norm(v.G);
        },
        decay, rule);
    if (!(norm_sq > 0.0)) throw NonNormalizable("coherent spinor has zero norm");
    const double magnitude = 1.0 / std::sqrt(norm_sq);
    const double r0 = 1.0 / ref.a_ref;
    const double bracket = (c.s - c.kappa) - c.alpha_minus * ref.omega_ref * r0 / (2.0 * c.s + 1.0);
    const double signed_a = bracket >= 0.0 ? magnitude : -magnitude;
    return CoherentSpinor(label, c, ref, signed_a,
                          compare_normalization(magnitude,
                                                closed_form_coherent_normalization(c, xi, ref.a_ref, ref.omega_ref)));
}

inline CoherentSpinor assemble_coherent_spinor(const ProblemParams& params, cplx xi) {
    const auto c = derive_constants(params);
    return assemble_coherent_spinor(c, xi, CoherentReference::from_level(make_level(1, c, params.mass)));
}

} // namespace dkc
