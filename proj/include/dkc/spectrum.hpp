#pragma once

#include <cmath>
#include <string>
#include <tuple>
#include <utility>

#include "dkc/errors.hpp"
#include "dkc/quantum_setup.hpp"

namespace dkc {

/// One bound level of the radial problem. n ≥ 1 labels both the energy formula and
/// the Sturmian pair (L_n^{2s−1}, L_{n−1}^{2s+1}).
struct BoundLevel {
    int n = 1;
    double energy = 0.0;
    double mass = 1.0;
    double a = 0.0;     ///< √(m² − E²)
    double theta = 0.0; ///< ln a, the dilatation that diagonalises the radial equation
    double omega = 0.0;

    /// α_v E + α_s m, the effective Coulomb strength seen by both decoupled equations.
    double coulomb_strength(const DerivedConstants& c) const {
        return c.alpha_v() * energy + c.alpha_s() * mass;
    }
};

/// E_n = m[−α_vα_s + (n+s)√((n+s)² + α_v² − α_s²)] / (α_v² + (n+s)²), positive branch.
/// E_n == m is accepted (free-limit rounding); anything beyond m throws.
inline double energy(int n, const DerivedConstants& c, double mass) {
    if (n < 1) throw DomainError("bound level label n must be >= 1");
    const double av = c.alpha_v();
    const double as = c.alpha_s();
    const double ns = n + c.s;
    const double radicand = ns * ns + c.alpha_plus * c.alpha_minus;
    if (radicand < 0.0) throw NoBoundState("negative radicand (n+s)^2 + alpha_v^2 - alpha_s^2");
    const double e = mass * (-av * as + ns * std::sqrt(radicand)) / (av * av + ns * ns);
    if (!(std::abs(e) <= mass)) throw NoBoundState("|E| > m for n = " + std::to_string(n));
    return e;
}

inline double energy(int n, const DerivedConstants& c, const ProblemParams& params) {
    return energy(n, c, params.mass);
}

/// ω = −(E − m) − α₊(α_v E + α_s m) / (s(s − κ)).
inline double omega(double e, double mass, const DerivedConstants& c) {
    const double p = c.s - c.kappa;
    if (p == 0.0) throw SingularTransform("omega requires s != kappa");
    return -(e - mass) - c.alpha_plus * (c.alpha_v() * e + c.alpha_s() * mass) / (c.s * p);
}

/// a = √(m² − E²) (computed as √((m−E)(m+E))) and θ = ln a.
inline std::pair<double, double> scale_and_theta(double e, double mass) {
    const double a_sq = (mass - e) * (mass + e);
    if (!(a_sq > 0.0)) throw NoBoundState("|E| >= m: no bound-state scale");
    const double a = std::sqrt(a_sq);
    return {a, std::log(a)};
}

/// a_n = m[α_s(n+s) + α_v√((n+s)² + α_v² − α_s²)] / (α_v² + (n+s)²), which equals √(m² − E_n²)
/// without the cancellation in m − E_n near the free limit.
inline double bound_scale(int n, const DerivedConstants& c, double mass) {
    if (n < 1) throw DomainError("bound level label n must be >= 1");
    const double av = c.alpha_v();
    const double as = c.alpha_s();
    const double ns = n + c.s;
    const double radicand = ns * ns + c.alpha_plus * c.alpha_minus;
    if (radicand < 0.0) throw NoBoundState("negative radicand (n+s)^2 + alpha_v^2 - alpha_s^2");
    return mass * (as * ns + av * std::sqrt(radicand)) / (av * av + ns * ns);
}

inline BoundLevel make_level(int n, const DerivedConstants& c, double mass) {
    BoundLevel level;
    level.n = n;
    level.mass = mass;
    level.energy = energy(n, c, mass);
    level.a = bound_scale(n, c, mass);
    if (!(level.a > 0.0)) throw NoBoundState("no bound-state scale for n = " + std::to_string(n));
    level.theta = std::log(level.a);
    level.omega = omega(level.energy, mass, c);
    return level;
}

inline BoundLevel make_level(int n, const ProblemParams& params) {
    return make_level(n, derive_constants(params), params.mass);
}

} // namespace dkc
