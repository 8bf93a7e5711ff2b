#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "dkc/errors.hpp"

namespace dkc {

/// Spin alignment of the upper spinor component: j = ℓ + 1/2 (aligned) or j = ℓ − 1/2.
enum class Alignment { aligned, unaligned };

inline const char* to_string(Alignment a) { return a == Alignment::aligned ? "aligned" : "unaligned"; }

/// Positive half-odd integer (1/2, 3/2, ...) stored as twice its value so κ stays exact.
class HalfInteger {
public:
    static HalfInteger from_twice(int twice) {
        if (twice <= 0 || twice % 2 == 0)
            throw DomainError("j must be a positive half-integer (1/2, 3/2, ...), got " +
                              std::to_string(twice) + "/2");
        return HalfInteger(twice);
    }

    static HalfInteger from_value(double j) {
        const double twice = 2.0 * j;
        const double rounded = std::round(twice);
        if (!std::isfinite(j) || std::abs(twice - rounded) > 1e-9 || rounded > 1e9)
            throw DomainError("j must be a positive half-integer (1/2, 3/2, ...)");
        return from_twice(static_cast<int>(rounded));
    }

    int twice() const { return twice_; }
    double value() const { return 0.5 * twice_; }

private:
    explicit HalfInteger(int twice) : twice_(twice) {}
    int twice_;
};

/// Physical inputs in natural units (ħ = c = 1).
struct ProblemParams {
    int dimension = 3;
    HalfInteger j = HalfInteger::from_twice(1);
    Alignment alignment = Alignment::aligned;
    double alpha_v = 0.5; ///< vector coupling, potential −α_v/r
    double alpha_s = 0.0; ///< scalar coupling, potential −α_s/r
    double mass = 1.0;

    void validate() const {
        if (dimension < 2) throw DomainError("dimension must be >= 2");
        if (!(alpha_v > 0.0) || !std::isfinite(alpha_v)) throw DomainError("alpha_v must be > 0");
        if (!(alpha_s >= 0.0) || !std::isfinite(alpha_s)) throw DomainError("alpha_s must be >= 0");
        if (!(mass > 0.0) || !std::isfinite(mass)) throw DomainError("mass must be > 0");
    }
};

struct DerivedConstants {
    int twice_kappa = -2; ///< exact 2κ
    double kappa = -1.0;
    double s = 1.0;
    double alpha_plus = 0.0;  ///< α_v + α_s
    double alpha_minus = 0.0; ///< α_v − α_s
    double bargmann_u = 1.0;  ///< k = s for the u channel
    double bargmann_v = 2.0;  ///< k = s + 1 for the v channel

    double alpha_v() const { return 0.5 * (alpha_plus + alpha_minus); }
    double alpha_s() const { return 0.5 * (alpha_plus - alpha_minus); }
};

/// 2κ_D = ∓(2j + D − 2), minus for aligned spin.
inline int twice_kappa(int dimension, HalfInteger j, Alignment alignment) {
    const int magnitude = j.twice() + dimension - 2;
    return alignment == Alignment::aligned ? -magnitude : magnitude;
}

/// Eigenvalue κ_D of the spin-orbit operator.
inline double kappa(int dimension, HalfInteger j, Alignment alignment) {
    return 0.5 * twice_kappa(dimension, j, alignment);
}

/// Constants from an exact 2κ and the couplings; no range checks on the couplings.
inline DerivedConstants derive_constants(int twice_k, double alpha_v, double alpha_s) {
    DerivedConstants c;
    c.twice_kappa = twice_k;
    c.kappa = 0.5 * twice_k;
    c.alpha_plus = alpha_v + alpha_s;
    c.alpha_minus = alpha_v - alpha_s;
    const double kappa_sq = 0.25 * static_cast<double>(twice_k) * static_cast<double>(twice_k);
    const double s_sq = kappa_sq - c.alpha_plus * c.alpha_minus;
    if (!(s_sq > 0.0))
        throw SupercriticalCoupling(
            "supercritical coupling: kappa^2 <= alpha_v^2 - alpha_s^2 (kappa = " +
            std::to_string(c.kappa) + "), no real positive s");
    c.s = std::sqrt(s_sq);
    c.bargmann_u = c.s;
    c.bargmann_v = c.s + 1.0;
    return c;
}

/// κ, s = √(κ² − α₊α₋) and the Bargmann indices of both channels.
inline DerivedConstants derive_constants(const ProblemParams& params) {
    params.validate();
    return derive_constants(twice_kappa(params.dimension, params.j, params.alignment),
                            params.alpha_v, params.alpha_s);
}

using Matrix2 = std::array<std::array<double, 2>, 2>;

inline Matrix2 multiply(const Matrix2& a, const Matrix2& b) {
    Matrix2 c{};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
    return c;
}

inline Matrix2 inverse(const Matrix2& m) {
    const double det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    if (det == 0.0) throw SingularTransform("matrix is singular");
    return {{{m[1][1] / det, -m[0][1] / det}, {-m[1][0] / det, m[0][0] / det}}};
}

/// The 1/r coupling matrix of the first-order radial system,
/// F' + (κF − α₋G)/r = (m+E)G, G' + (α₊F − κG)/r = (m−E)F.
inline Matrix2 coupling_matrix(const DerivedConstants& c) {
    return {{{c.kappa, -c.alpha_minus}, {c.alpha_plus, -c.kappa}}};
}

/// M with M⁻¹ · coupling_matrix · M = diag(−s, s); det M = 2s(s − κ).
inline Matrix2 decoupling_matrix(const DerivedConstants& c) {
    const double p = c.s - c.kappa;
    const double det = p * p - c.alpha_plus * c.alpha_minus;
    const double scale = p * p + std::abs(c.alpha_plus * c.alpha_minus) + c.kappa * c.kappa;
    if (std::abs(det) <= 64.0 * std::numeric_limits<double>::epsilon() * scale)
        throw SingularTransform("decoupling matrix is singular: (s - kappa)^2 = alpha_+ alpha_-");
    return {{{p, -c.alpha_minus}, {-c.alpha_plus, p}}};
}

} // namespace dkc
