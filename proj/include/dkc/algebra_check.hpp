#pragma once

#include <cmath>
#include <complex>
#include <map>
#include <string>
#include <vector>

#include "dkc/errors.hpp"
#include "dkc/laguerre_function.hpp"
#include "dkc/quadrature.hpp"
#include "dkc/radial_states.hpp"
#include "dkc/report.hpp"

namespace dkc {

using cplx = std::complex<double>;

/// Σ_k c_k r^k with integer k of either sign.
class LaurentPoly {
public:
    LaurentPoly() = default;
    LaurentPoly(int power, cplx c) { add(power, c); }

    void add(int power, cplx c) {
        if (c == cplx{}) return;
        auto& slot = terms_[power];
        slot += c;
        if (slot == cplx{}) terms_.erase(power);
    }

    bool empty() const { return terms_.empty(); }
    const std::map<int, cplx>& terms() const { return terms_; }

    LaurentPoly derivative() const {
        LaurentPoly d;
        for (auto [k, c] : terms_) d.add(k - 1, c * static_cast<double>(k));
        return d;
    }

    cplx operator()(double r) const {
        cplx sum{};
        for (auto [k, c] : terms_) sum += c * std::pow(r, k);
        return sum;
    }

    friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
        LaurentPoly p;
        for (auto [i, ci] : a.terms_)
            for (auto [j, cj] : b.terms_) p.add(i + j, ci * cj);
        return p;
    }

    friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) {
        for (auto [k, c] : b.terms_) a.add(k, c);
        return a;
    }

    friend LaurentPoly operator*(cplx s, const LaurentPoly& a) {
        LaurentPoly p;
        for (auto [k, c] : a.terms_) p.add(k, s * c);
        return p;
    }

private:
    std::map<int, cplx> terms_;
};

/// Linear differential operator Σ_k c_k(r) d^k/dr^k with Laurent-polynomial coefficients.
/// Composition is exact, so commutators are formed without finite differencing.
class DiffOperator {
public:
    DiffOperator() = default;
    explicit DiffOperator(std::vector<LaurentPoly> coefficients) : coeffs_(std::move(coefficients)) { trim(); }

    static DiffOperator identity() { return DiffOperator({LaurentPoly(0, 1.0)}); }

    int order() const { return static_cast<int>(coeffs_.size()) - 1; }
    const std::vector<LaurentPoly>& coefficients() const { return coeffs_; }

    friend DiffOperator operator+(const DiffOperator& a, const DiffOperator& b) {
        std::vector<LaurentPoly> c(std::max(a.coeffs_.size(), b.coeffs_.size()));
        for (std::size_t k = 0; k < a.coeffs_.size(); ++k) c[k] = c[k] + a.coeffs_[k];
        for (std::size_t k = 0; k < b.coeffs_.size(); ++k) c[k] = c[k] + b.coeffs_[k];
        return DiffOperator(std::move(c));
    }

    friend DiffOperator operator*(cplx s, const DiffOperator& a) {
        std::vector<LaurentPoly> c;
        for (const auto& p : a.coeffs_) c.push_back(s * p);
        return DiffOperator(std::move(c));
    }

    friend DiffOperator operator-(const DiffOperator& a, const DiffOperator& b) { return a + cplx(-1.0) * b; }

    /// (X∘Y) = Σ_i Σ_j a_i Σ_l C(i,l) b_j^{(l)} ∂^{i−l+j}
    friend DiffOperator operator*(const DiffOperator& x, const DiffOperator& y) {
        std::vector<LaurentPoly> c(std::max<std::size_t>(x.coeffs_.size() + y.coeffs_.size(), 1));
        for (std::size_t i = 0; i < x.coeffs_.size(); ++i) {
            for (std::size_t j = 0; j < y.coeffs_.size(); ++j) {
                LaurentPoly bl = y.coeffs_[j];
                double binom = 1.0;
                for (std::size_t l = 0; l <= i; ++l) {
                    c[i - l + j] = c[i - l + j] + cplx(binom) * (x.coeffs_[i] * bl);
                    bl = bl.derivative();
                    binom = binom * static_cast<double>(i - l) / static_cast<double>(l + 1);
                }
            }
        }
        return DiffOperator(std::move(c));
    }

    struct Image {
        cplx value;
        double magnitude; ///< Σ_k |c_k(r) f^{(k)}(r)|, the local scale for guarded residuals
    };

    Image apply(const Jet& jet, double r) const {
        if (!(r > 0.0)) throw DomainError("radial operators act at r > 0");
        if (order() > kMaxJetOrder) throw DomainError("operator order exceeds the available derivative jet");
        Image out{cplx{}, 0.0};
        for (std::size_t k = 0; k < coeffs_.size(); ++k) {
            const cplx term = coeffs_[k](r) * jet[k];
            out.value += term;
            out.magnitude += std::abs(term);
        }
        return out;
    }

private:
    void trim() {
        while (!coeffs_.empty() && coeffs_.back().empty()) coeffs_.pop_back();
    }
    std::vector<LaurentPoly> coeffs_;
};

inline DiffOperator commutator(const DiffOperator& x, const DiffOperator& y) { return x * y - y * x; }

enum class OperatorKind { A0, A1, A2, Pr2, Kplus, Kminus, K0 };

inline const char* to_string(OperatorKind k) {
    switch (k) {
    case OperatorKind::A0: return "A0";
    case OperatorKind::A1: return "A1";
    case OperatorKind::A2: return "A2";
    case OperatorKind::Pr2: return "Pr2";
    case OperatorKind::Kplus: return "K+";
    case OperatorKind::Kminus: return "K-";
    case OperatorKind::K0: return "K0";
    }
    return "?";
}

/// Realization of su(1,1) on radial functions, fixed by the centrifugal constant c = ℓ(ℓ+1):
///   P_r² = −∂² − (2/r)∂,  A₀ = ½(rP_r² + c/r + r),  A₁ = ½(rP_r² + c/r − r),
///   A₂ = −ir(∂ + 1/r),   K± = A₁ ± iA₂,  K₀ = A₀.
struct RadialOperator {
    OperatorKind kind = OperatorKind::A0;
    double centrifugal = 0.0;

    static RadialOperator for_channel(OperatorKind kind, Channel channel, double s) {
        const double l = realization_parameter(channel, s);
        return {kind, l * (l + 1.0)};
    }

    DiffOperator op() const {
        const cplx i(0.0, 1.0);
        const DiffOperator pr2({LaurentPoly{}, LaurentPoly(-1, -2.0), LaurentPoly(0, -1.0)});
        const DiffOperator r_pr2({LaurentPoly{}, LaurentPoly(0, -2.0), LaurentPoly(1, -1.0)});
        const DiffOperator centrifugal_term({LaurentPoly(-1, centrifugal)});
        const DiffOperator r_mult({LaurentPoly(1, 1.0)});
        const DiffOperator a0 = cplx(0.5) * (r_pr2 + centrifugal_term + r_mult);
        const DiffOperator a1 = cplx(0.5) * (r_pr2 + centrifugal_term - r_mult);
        const DiffOperator a2({LaurentPoly(0, -i), LaurentPoly(1, -i)});
        switch (kind) {
        case OperatorKind::A0:
        case OperatorKind::K0: return a0;
        case OperatorKind::A1: return a1;
        case OperatorKind::A2: return a2;
        case OperatorKind::Pr2: return pr2;
        case OperatorKind::Kplus: return a1 + i * a2;
        case OperatorKind::Kminus: return a1 - i * a2;
        }
        return {};
    }
};

/// Operator image at r from an analytic derivative jet.
template <class JetFn>
cplx apply_operator(const RadialOperator& op, const JetFn& f, double r) {
    if (!(r > 0.0)) throw DomainError("radial operators act at r > 0");
    return op.op().apply(f.jet(r), r).value;
}

/// Central five-point jet (f, f', f'') for functions without analytic derivatives;
/// higher entries are NaN. Step h = 1e-3·r.
template <class Fn>
Jet finite_difference_jet(const Fn& f, double r) {
    if (!(r > 0.0)) throw DomainError("finite differences are taken at r > 0");
    const double h = 1e-3 * r;
    const double fm2 = f(r - 2 * h), fm1 = f(r - h), f0 = f(r), fp1 = f(r + h), fp2 = f(r + 2 * h);
    Jet j;
    j.fill(std::nan(""));
    j[0] = f0;
    j[1] = (fm2 - 8 * fm1 + 8 * fp1 - fp2) / (12 * h);
    j[2] = (-fm2 + 16 * fm1 - 30 * f0 + 16 * fp1 - fp2) / (12 * h * h);
    return j;
}

/// Wraps an arbitrary callable as a jet function through finite differences.
template <class Fn>
struct FiniteDifferenceFunction {
    Fn f;
    double operator()(double r) const { return f(r); }
    Jet jet(double r) const { return finite_difference_jet(f, r); }
};

template <class Fn>
FiniteDifferenceFunction<Fn> finite_difference_function(Fn f) {
    return {std::move(f)};
}

enum class AlgebraRelation { K0_Kplus, K0_Kminus, Kminus_Kplus };

inline const char* to_string(AlgebraRelation r) {
    switch (r) {
    case AlgebraRelation::K0_Kplus: return "[K0,K+]=K+";
    case AlgebraRelation::K0_Kminus: return "[K0,K-]=-K-";
    case AlgebraRelation::Kminus_Kplus: return "[K-,K+]=2K0";
    }
    return "?";
}

/// max over grid and test set of |X(Yf) − Y(Xf) − Zf| divided by the summed magnitudes of the
/// three images, for one relation of [K₀,K±] = ±K±, [K₋,K₊] = 2K₀.
template <class JetFn>
ResidualStats commutator_residual(AlgebraRelation relation, double centrifugal, const std::vector<JetFn>& tests,
                                  const std::vector<double>& grid) {
    const auto K = [&](OperatorKind k) { return RadialOperator{k, centrifugal}.op(); };
    DiffOperator x, y, z;
    switch (relation) {
    case AlgebraRelation::K0_Kplus:
        x = K(OperatorKind::K0), y = K(OperatorKind::Kplus), z = K(OperatorKind::Kplus);
        break;
    case AlgebraRelation::K0_Kminus:
        x = K(OperatorKind::K0), y = K(OperatorKind::Kminus), z = cplx(-1.0) * K(OperatorKind::Kminus);
        break;
    case AlgebraRelation::Kminus_Kplus:
        x = K(OperatorKind::Kminus), y = K(OperatorKind::Kplus), z = cplx(2.0) * K(OperatorKind::K0);
        break;
    }
    const DiffOperator xy = x * y;
    const DiffOperator yx = y * x;
    ResidualStats stats;
    for (const auto& f : tests) {
        for (double r : grid) {
            const Jet j = f.jet(r);
            const auto a = xy.apply(j, r);
            const auto b = yx.apply(j, r);
            const auto c = z.apply(j, r);
            const double scale = a.magnitude + b.magnitude + c.magnitude;
            stats.add(scale > 0.0 ? std::abs(a.value - b.value - c.value) / scale : 0.0, r);
        }
    }
    return stats;
}

/// Casimir −K₊K₋ + K₀(K₀ − 1) against k(k−1)f, k = ℓ + 1 from the realization's channel.
template <class JetFn>
ResidualStats casimir_residual(double centrifugal, double bargmann, const std::vector<JetFn>& tests,
                               const std::vector<double>& grid) {
    const auto K = [&](OperatorKind k) { return RadialOperator{k, centrifugal}.op(); };
    const DiffOperator k0 = K(OperatorKind::K0);
    const DiffOperator casimir = cplx(-1.0) * (K(OperatorKind::Kplus) * K(OperatorKind::Kminus)) + k0 * k0 - k0;
    const double expected = bargmann * (bargmann - 1.0);
    ResidualStats stats;
    for (const auto& f : tests) {
        for (double r : grid) {
            const Jet j = f.jet(r);
            const auto img = casimir.apply(j, r);
            const double scale = img.magnitude + std::abs(expected * j[0]);
            stats.add(scale > 0.0 ? std::abs(img.value - expected * j[0]) / scale : 0.0, r);
        }
    }
    return stats;
}

/// A₀ f = (k + n_g) f on Sturmian states.
inline ResidualStats a0_eigenvalue_residual(Channel channel, double s, int count, const std::vector<double>& grid,
                                            double centrifugal_override = std::nan("")) {
    const double l = realization_parameter(channel, s);
    const double c = std::isnan(centrifugal_override) ? l * (l + 1.0) : centrifugal_override;
    const DiffOperator a0 = RadialOperator{OperatorKind::A0, c}.op();
    const double k = bargmann_index(channel, s);
    const int first = channel == Channel::u ? 0 : 1;
    ResidualStats stats;
    for (int n = first; n < first + count; ++n) {
        const auto f = sturmian_function(channel, n, s);
        const double eigenvalue = k + group_index(channel, n);
        for (double r : grid) {
            const Jet j = f.jet(r);
            const auto img = a0.apply(j, r);
            const double scale = img.magnitude + std::abs(eigenvalue * j[0]);
            stats.add(std::abs(img.value - eigenvalue * j[0]) / scale, r);
        }
    }
    return stats;
}

/// First `count` Sturmian functions of a channel (n_g = 0 .. count−1).
inline std::vector<LaguerreFunction> sturmian_family(Channel channel, double s, int count) {
    std::vector<LaguerreFunction> out;
    const int first = channel == Channel::u ? 0 : 1;
    for (int n = first; n < first + count; ++n) out.push_back(sturmian_function(channel, n, s));
    return out;
}

/// ∫₀^∞ f(r) g(r) r dr for Sturmian-type functions decaying as e^{−r} each.
/// `alpha_hint` is the power of x = 2r carried by the integrand.
template <class Fn, class Gn>
auto sturmian_inner_product(const Fn& f, const Gn& g, const QuadratureRule& rule) {
    return integrate_radial([&](double r) { return f(r) * g(r) * r; }, 1.0, rule);
}

struct LadderElements {
    double up = 0.0;           ///< ⟨n_g+1| K₊ |n_g⟩
    double down = 0.0;         ///< ⟨n_g−1| K₋ |n_g⟩, or ‖K₋|0⟩‖ for the lowest state
    double expected_up = 0.0;  ///< √((n_g+1)(2k+n_g))
    double expected_down = 0.0;///< √(n_g(2k+n_g−1))
    double leakage = 0.0;      ///< largest projection of K±|n_g⟩ outside the neighbour, and imaginary parts
};

/// Projects K±f_n onto neighbouring Sturmian states with the r dr measure.
inline LadderElements ladder_matrix_elements(Channel channel, int n, double s) {
    const int ng = group_index(channel, n);
    if (ng < 0) throw DomainError("invalid Sturmian label for ladder elements");
    const double k = bargmann_index(channel, s);
    const auto kp = RadialOperator::for_channel(OperatorKind::Kplus, channel, s).op();
    const auto km = RadialOperator::for_channel(OperatorKind::Kminus, channel, s).op();
    const auto f = sturmian_function(channel, n, s);
    // ℓ(ℓ+1)/r cancels the r^{p−1} terms, so f_m · (K f) · r ∝ x^{2p+1} e^{−x} × polynomial
    const double p = realization_parameter(channel, s);
    const auto rule = build_rule(ng + 12, 2.0 * p + 1.0);

    const auto image = [&](const DiffOperator& op) { return [&op, &f](double r) { return op.apply(f.jet(r), r).value; }; };
    const auto kp_f = image(kp);
    const auto km_f = image(km);

    LadderElements out;
    out.expected_up = std::sqrt((ng + 1.0) * (2.0 * k + ng));
    out.expected_down = std::sqrt(ng * (2.0 * k + ng - 1.0));
    const int first = channel == Channel::u ? 0 : 1;
    for (int m = first; m <= n + 3; ++m) {
        const auto g = sturmian_function(channel, m, s);
        const cplx up = integrate_radial([&](double r) { return g(r) * kp_f(r) * r; }, 1.0, rule);
        const cplx down = integrate_radial([&](double r) { return g(r) * km_f(r) * r; }, 1.0, rule);
        out.leakage = std::max({out.leakage, std::abs(up.imag()), std::abs(down.imag())});
        if (m == n + 1)
            out.up = up.real();
        else
            out.leakage = std::max(out.leakage, std::abs(up));
        if (m == n - 1)
            out.down = down.real();
        else
            out.leakage = std::max(out.leakage, std::abs(down));
    }
    if (ng == 0) {
        const cplx norm_sq = integrate_radial([&](double r) { return std::norm(km_f(r)) * r; }, 1.0, rule);
        out.down = std::sqrt(std::abs(norm_sq));
    }
    return out;
}

/// Scaling identities checked through the substitution action S_θ f = e^θ f(e^θ ·):
///   S_{−θ} A₀ S_θ = A₀ cosh θ + A₁ sinh θ,  S_{−θ} A₁ S_θ = A₀ sinh θ + A₁ cosh θ,
///   S_{−θ} (A₀ ± A₁) S_θ = e^{±θ}(A₀ ± A₁).
enum class ScalingIdentity { A0_conjugation, A1_conjugation, plus_combination, minus_combination };

inline const char* to_string(ScalingIdentity id) {
    switch (id) {
    case ScalingIdentity::A0_conjugation: return "A0-conjugation";
    case ScalingIdentity::A1_conjugation: return "A1-conjugation";
    case ScalingIdentity::plus_combination: return "A0+A1";
    case ScalingIdentity::minus_combination: return "A0-A1";
    }
    return "?";
}

inline ResidualStats scaling_identity_residual(ScalingIdentity id, double theta, double centrifugal,
                                               const std::vector<LaguerreFunction>& tests,
                                               const std::vector<double>& grid) {
    const DiffOperator a0 = RadialOperator{OperatorKind::A0, centrifugal}.op();
    const DiffOperator a1 = RadialOperator{OperatorKind::A1, centrifugal}.op();
    const double ch = std::cosh(theta), sh = std::sinh(theta);
    DiffOperator conjugated, rhs;
    switch (id) {
    case ScalingIdentity::A0_conjugation:
        conjugated = a0, rhs = cplx(ch) * a0 + cplx(sh) * a1;
        break;
    case ScalingIdentity::A1_conjugation:
        conjugated = a1, rhs = cplx(sh) * a0 + cplx(ch) * a1;
        break;
    case ScalingIdentity::plus_combination:
        conjugated = a0 + a1, rhs = cplx(std::exp(theta)) * (a0 + a1);
        break;
    case ScalingIdentity::minus_combination:
        conjugated = a0 - a1, rhs = cplx(std::exp(-theta)) * (a0 - a1);
        break;
    }
    const double shrink = std::exp(-theta);
    ResidualStats stats;
    for (const auto& f : tests) {
        const LaguerreFunction g = f.scaled(theta);
        for (double r : grid) {
            const double rho = shrink * r;
            const auto lhs = conjugated.apply(g.jet(rho), rho);
            const auto right = rhs.apply(f.jet(r), r);
            const cplx left = shrink * lhs.value;
            const double scale = shrink * lhs.magnitude + right.magnitude;
            stats.add(scale > 0.0 ? std::abs(left - right.value) / scale : 0.0, r);
        }
    }
    return stats;
}

} // namespace dkc
