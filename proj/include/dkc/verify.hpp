#pragma once

#include <cmath>
#include <complex>
#include <cstdio>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "dkc/algebra_check.hpp"
#include "dkc/coherent.hpp"
#include "dkc/quadrature.hpp"
#include "dkc/quantum_setup.hpp"
#include "dkc/radial_states.hpp"
#include "dkc/report.hpp"
#include "dkc/special_functions.hpp"
#include "dkc/spectrum.hpp"

namespace dkc {

inline std::string format_real(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

/// Default tolerance for each check, plus `coherent_tail`, the tail bound Σ_{n>N}|c_n|²
/// that fixes the truncation order of the coherent-series comparison.
inline std::map<std::string, double> default_tolerances() {
    return {
        {"spectrum.free_limit", 1e-11},
        {"spectrum.sommerfeld", 1e-12},
        {"spectrum.diagonalization", 1e-11},
        {"sturmian.orthonormality_u", 1e-10},
        {"sturmian.orthonormality_v", 1e-10},
        {"algebra.commutator_k0_kplus", 1e-8},
        {"algebra.commutator_k0_kminus", 1e-8},
        {"algebra.commutator_kminus_kplus", 1e-8},
        {"algebra.ladder", 1e-8},
        {"algebra.casimir", 1e-8},
        {"algebra.annihilation", 1e-8},
        {"algebra.a0_eigenvalue", 1e-8},
        {"scaling.a0_conjugation", 1e-9},
        {"scaling.a1_conjugation", 1e-9},
        {"scaling.plus_combination", 1e-9},
        {"scaling.minus_combination", 1e-9},
        {"ode.first_order", 1e-8},
        {"ode.second_order", 1e-7},
        {"ode.sensitivity", 1e-3},
        {"normalization.quadrature", 1e-8},
        {"coherent.series", 1e-8},
        {"coherent.identity", 1e-12},
        {"coherent.weights", 1e-12},
        {"coherent.spinor_norm", 1e-8},
        {"coherent.ratio_limit", 1e-9},
        {"generating.closed_form", 1e-10},
        {"coherent_tail", 1e-20},
    };
}

/// Number of reports produced by run_verification_suite.
inline constexpr int kVerificationCheckCount = 26;

struct VerifyConfig {
    ProblemParams params;
    std::map<std::string, double> tolerances = default_tolerances();
    bool perturb = false; ///< fault injection: scales F by 1.01 in the first-order residual

    double tolerance(const std::string& key) const {
        const auto it = tolerances.find(key);
        if (it == tolerances.end()) throw DomainError("unknown tolerance key: " + key);
        return it->second;
    }
};

inline ProblemParams make_params(int dimension, int twice_j, Alignment alignment, double alpha_v, double alpha_s,
                                 double mass = 1.0) {
    ProblemParams p;
    p.dimension = dimension;
    p.j = HalfInteger::from_twice(twice_j);
    p.alignment = alignment;
    p.alpha_v = alpha_v;
    p.alpha_s = alpha_s;
    p.mass = mass;
    return p;
}

/// Couplings covering both signs of κ, D ∈ {2, 3, 4}, and α_s = 0 as well as α_s > 0.
inline std::vector<ProblemParams> coupling_grid() {
    return {
        make_params(3, 1, Alignment::aligned, 0.5, 0.0),
        make_params(3, 1, Alignment::aligned, 0.5, 0.2),
        make_params(3, 3, Alignment::unaligned, 0.3, 0.1),
        make_params(3, 1, Alignment::unaligned, 0.4, 0.0),
        make_params(2, 1, Alignment::aligned, 0.3, 0.1),
        make_params(4, 3, Alignment::aligned, 0.6, 0.3),
    };
}

inline const std::vector<double>& sturmian_s_values() {
    static const std::vector<double> values{0.6, 0.866, 1.5, 2.2};
    return values;
}

inline const std::vector<double>& scaling_thetas() {
    static const std::vector<double> values{0.0, 0.7, -0.7, std::numbers::ln2};
    return values;
}

namespace detail {

inline VerificationReport stats_report(const std::string& check, const ResidualStats& stats, double tol,
                                       std::map<std::string, std::string> context = {}) {
    context.emplace("points", std::to_string(stats.points));
    context.emplace("worst_r", format_real(stats.worst_r));
    return make_report(check, stats.max, stats.rms, tol, std::move(context));
}

inline std::vector<double> sturmian_grid() { return log_grid(1e-2, 40.0, 200); }

} // namespace detail

/// |E_n/m − 1| for α_v = α_s = 10⁻¹², n ≤ 10.
inline VerificationReport check_free_limit(double tol) {
    const auto params = make_params(3, 1, Alignment::aligned, 1e-12, 1e-12);
    const auto c = derive_constants(params);
    ResidualStats stats;
    for (int n = 1; n <= 10; ++n) stats.add(std::abs(energy(n, c, params.mass) / params.mass - 1.0), n);
    return detail::stats_report("spectrum.free_limit", stats, tol);
}

/// α_s = 0, D = 3: E_n = m(1 + α_v²/(n+s)²)^{−1/2}, relative deviation.
inline VerificationReport check_sommerfeld(double tol) {
    ResidualStats stats;
    const std::pair<int, Alignment> channels[] = {
        {1, Alignment::aligned}, {3, Alignment::aligned}, {1, Alignment::unaligned}};
    for (auto [twice_j, align] : channels) {
        const double k_abs = std::abs(kappa(3, HalfInteger::from_twice(twice_j), align));
        for (double av : {0.1, 0.5, 0.9 * k_abs}) {
            const auto params = make_params(3, twice_j, align, av, 0.0);
            const auto c = derive_constants(params);
            for (int n = 1; n <= 8; ++n) {
                const double ns = n + c.s;
                const double reference = params.mass / std::sqrt(1.0 + av * av / (ns * ns));
                stats.add(std::abs(energy(n, c, params.mass) - reference) / reference, n);
            }
        }
    }
    return detail::stats_report("spectrum.sommerfeld", stats, tol);
}

/// a(n+s) − (α_v E + α_s m), divided by m, over the Sommerfeld grid, the coupling grid and `extra`.
inline VerificationReport check_diagonalization(double tol, const std::vector<ProblemParams>& extra = {}) {
    std::vector<ProblemParams> cases = coupling_grid();
    cases.insert(cases.end(), extra.begin(), extra.end());
    const std::pair<int, Alignment> channels[] = {
        {1, Alignment::aligned}, {3, Alignment::aligned}, {1, Alignment::unaligned}};
    for (auto [twice_j, align] : channels) {
        const double k_abs = std::abs(kappa(3, HalfInteger::from_twice(twice_j), align));
        for (double av : {0.1, 0.5, 0.9 * k_abs}) cases.push_back(make_params(3, twice_j, align, av, 0.0));
    }
    ResidualStats stats;
    for (const auto& p : cases) {
        const auto c = derive_constants(p);
        for (int n = 1; n <= 8; ++n) {
            const auto level = make_level(n, c, p.mass);
            stats.add(std::abs(level.a * (n + c.s) - level.coulomb_strength(c)) / p.mass, n);
        }
    }
    return detail::stats_report("spectrum.diagonalization", stats, tol);
}

/// Largest entrywise deviation of the Gram matrix of the first `count` Sturmian functions from I.
inline double gram_deviation(Channel channel, double s, int count) {
    const auto family = sturmian_family(channel, s, count);
    const auto rule = build_rule(count + 4, 2.0 * realization_parameter(channel, s) + 1.0);
    double worst = 0.0;
    for (int i = 0; i < count; ++i)
        for (int j = i; j < count; ++j) {
            const double g = sturmian_inner_product(family[i], family[j], rule);
            worst = std::max(worst, std::abs(g - (i == j ? 1.0 : 0.0)));
        }
    return worst;
}

inline VerificationReport check_orthonormality(Channel channel, const std::vector<double>& s_values, double tol) {
    ResidualStats stats;
    for (double s : s_values) stats.add(gram_deviation(channel, s, 12), s);
    return detail::stats_report(std::string("sturmian.orthonormality_") + to_string(channel), stats, tol,
                                {{"basis_size", "12"}});
}

namespace detail {

struct AlgebraFamily {
    std::vector<LaguerreFunction> functions;
    double centrifugal;
    double bargmann;
};

inline std::vector<AlgebraFamily> algebra_families(const std::vector<double>& s_values) {
    std::vector<AlgebraFamily> out;
    for (double s : s_values)
        for (Channel ch : {Channel::u, Channel::v}) {
            const double l = realization_parameter(ch, s);
            out.push_back({sturmian_family(ch, s, 6), l * (l + 1.0), bargmann_index(ch, s)});
        }
    return out;
}

} // namespace detail

inline VerificationReport check_commutator(AlgebraRelation relation, const std::vector<double>& s_values, double tol) {
    const auto grid = detail::sturmian_grid();
    ResidualStats stats;
    for (const auto& fam : detail::algebra_families(s_values))
        stats.merge(commutator_residual(relation, fam.centrifugal, fam.functions, grid));
    const char* name = relation == AlgebraRelation::K0_Kplus    ? "algebra.commutator_k0_kplus"
                       : relation == AlgebraRelation::K0_Kminus ? "algebra.commutator_k0_kminus"
                                                                : "algebra.commutator_kminus_kplus";
    return detail::stats_report(name, stats, tol, {{"relation", to_string(relation)}});
}

/// ⟨n_g+1|K₊|n_g⟩ and ⟨n_g−1|K₋|n_g⟩ against √((n_g+1)(2k+n_g)), √(n_g(2k+n_g−1)), plus leakage.
inline VerificationReport check_ladder(const std::vector<double>& s_values, double tol) {
    ResidualStats stats;
    for (double s : s_values)
        for (Channel ch : {Channel::u, Channel::v})
            for (int ng = 0; ng <= 5; ++ng) {
                const int n = ch == Channel::u ? ng : ng + 1;
                const auto e = ladder_matrix_elements(ch, n, s);
                const double up = std::abs(e.up - e.expected_up) / e.expected_up;
                const double down = ng == 0 ? 0.0 : std::abs(e.down - e.expected_down) / e.expected_down;
                stats.add(std::max({up, down, e.leakage}), s);
            }
    return detail::stats_report("algebra.ladder", stats, tol);
}

inline VerificationReport check_casimir(const std::vector<double>& s_values, double tol) {
    const auto grid = detail::sturmian_grid();
    ResidualStats stats;
    for (const auto& fam : detail::algebra_families(s_values))
        stats.merge(casimir_residual(fam.centrifugal, fam.bargmann, fam.functions, grid));
    return detail::stats_report("algebra.casimir", stats, tol);
}

/// ‖K₋|k,0⟩‖ under r dr for both channels.
inline VerificationReport check_annihilation(const std::vector<double>& s_values, double tol) {
    ResidualStats stats;
    for (double s : s_values) {
        stats.add(ladder_matrix_elements(Channel::u, 0, s).down, s);
        stats.add(ladder_matrix_elements(Channel::v, 1, s).down, s);
    }
    return detail::stats_report("algebra.annihilation", stats, tol);
}

inline VerificationReport check_a0_eigenvalue(const std::vector<double>& s_values, double tol) {
    const auto grid = detail::sturmian_grid();
    ResidualStats stats;
    for (double s : s_values)
        for (Channel ch : {Channel::u, Channel::v}) stats.merge(a0_eigenvalue_residual(ch, s, 6, grid));
    return detail::stats_report("algebra.a0_eigenvalue", stats, tol);
}

/// Sturmian families of both channels plus the physical components of the first levels.
inline std::vector<std::pair<std::vector<LaguerreFunction>, double>> scaling_test_family(
    const std::vector<double>& s_values, const ProblemParams& params) {
    std::vector<std::pair<std::vector<LaguerreFunction>, double>> out;
    for (double s : s_values)
        for (Channel ch : {Channel::u, Channel::v}) {
            const double l = realization_parameter(ch, s);
            out.emplace_back(sturmian_family(ch, s, 5), l * (l + 1.0));
        }
    const auto c = derive_constants(params);
    std::vector<LaguerreFunction> us, vs;
    for (int n = 1; n <= 3; ++n) {
        const auto [u, v] = physical_components(make_level(n, c, params.mass), c);
        us.push_back(u);
        vs.push_back(v);
    }
    out.emplace_back(us, c.s * (c.s - 1.0));
    out.emplace_back(vs, c.s * (c.s + 1.0));
    return out;
}

inline VerificationReport check_scaling(ScalingIdentity id, const std::vector<double>& s_values,
                                        const ProblemParams& params, double tol) {
    const auto grid = detail::sturmian_grid();
    ResidualStats stats;
    for (const auto& [functions, centrifugal] : scaling_test_family(s_values, params))
        for (double theta : scaling_thetas())
            stats.merge(scaling_identity_residual(id, theta, centrifugal, functions, grid));
    const char* name = id == ScalingIdentity::A0_conjugation   ? "scaling.a0_conjugation"
                       : id == ScalingIdentity::A1_conjugation ? "scaling.a1_conjugation"
                       : id == ScalingIdentity::plus_combination ? "scaling.plus_combination"
                                                                 : "scaling.minus_combination";
    return detail::stats_report(name, stats, tol, {{"identity", to_string(id)}, {"thetas", "0;0.7;-0.7;ln2"}});
}

struct OdeChecks {
    VerificationReport first_order;
    VerificationReport second_order;
    VerificationReport sensitivity;
    VerificationReport normalization;
};

/// Spinor checks for n ≤ 5 over `cases`: first- and second-order residuals, the response to
/// a 1% change of F, and ∫(F²+G²)dr recomputed by adaptive quadrature.
inline OdeChecks check_spinors(const std::vector<ProblemParams>& cases, const VerifyConfig& cfg) {
    ResidualStats first, second, norm;
    double weakest_response = std::numeric_limits<double>::infinity();
    double worst_ratio_dev = 0.0;
    for (const auto& p : cases) {
        const auto c = derive_constants(p);
        for (int n = 1; n <= 5; ++n) {
            const auto level = make_level(n, c, p.mass);
            const auto spinor = assemble_spinor(level, c);
            if (!spinor.normalized()) continue;
            const auto grid = default_residual_grid(level.a);
            if (cfg.perturb) {
                const ScaledUpperSpinor<RadialSpinor> faulty{spinor, 1.01};
                first.merge(ode_residual_first_order(faulty, c, level.energy, level.mass, grid));
            } else {
                first.merge(ode_residual_first_order(spinor, grid));
            }
            const auto [u, v] = physical_components(level, c);
            second.merge(ode_residual_second_order(u, Channel::u, level, c, grid));
            second.merge(ode_residual_second_order(v, Channel::v, level, c, grid));

            const ScaledUpperSpinor<RadialSpinor> shifted{spinor, 1.01};
            weakest_response =
                std::min(weakest_response, ode_residual_first_order(shifted, c, level.energy, level.mass, grid).max);

            const double integral = integrate_adaptive([&](double r) {
                const auto f = spinor.evaluate(r);
                return f.F * f.F + f.G * f.G;
            });
            norm.add(std::abs(integral - 1.0), n);
            worst_ratio_dev = std::max(worst_ratio_dev, std::abs(spinor.comparison().ratio - 1.0));
        }
    }
    OdeChecks out{
        detail::stats_report("ode.first_order", first, cfg.tolerance("ode.first_order"),
                             {{"perturbed", cfg.perturb ? "true" : "false"}}),
        detail::stats_report("ode.second_order", second, cfg.tolerance("ode.second_order")),
        {},
        detail::stats_report("normalization.quadrature", norm, cfg.tolerance("normalization.quadrature"),
                             {{"closed_form_ratio_max_deviation", format_real(worst_ratio_dev)}}),
    };
    // Lower bound: the smallest residual seen after perturbing F must exceed the tolerance.
    VerificationReport sens;
    sens.check = "ode.sensitivity";
    sens.residual_max = weakest_response;
    sens.residual_rms = weakest_response;
    sens.tolerance = cfg.tolerance("ode.sensitivity");
    sens.passed = weakest_response > sens.tolerance;
    sens.context = {{"bound", "lower"}, {"perturbation", "F*1.01"}};
    out.sensitivity = sens;
    return out;
}

inline std::vector<std::complex<double>> coherent_test_labels() {
    std::vector<std::complex<double>> out;
    for (double m : {0.2, 0.4, 0.6})
        for (double phase : {0.0, 2.0}) out.push_back(std::polar(m, phase));
    return out;
}

/// Closed form against the truncated Perelomov sum; residual is the sup-norm relative error.
inline VerificationReport check_coherent_series(const std::vector<double>& s_values, double tail, double tol) {
    const auto grid = detail::sturmian_grid();
    ResidualStats stats;
    int max_order = 0;
    for (double s : s_values)
        for (auto xi : coherent_test_labels())
            for (Channel ch : {Channel::u, Channel::v}) {
                const auto cmp = compare_coherent_series(ch, s, xi, grid, tail);
                stats.add(cmp.relative, std::abs(xi));
                max_order = std::max(max_order, cmp.truncation);
            }
    return detail::stats_report("coherent.series", stats, tol,
                                {{"tail_bound", format_real(tail)}, {"max_truncation", std::to_string(max_order)}});
}

/// ξ = 0 against the lowest Sturmian state, |difference| / max(1, |state|).
inline VerificationReport check_coherent_identity(const std::vector<double>& s_values, double tol) {
    const auto grid = detail::sturmian_grid();
    ResidualStats stats;
    for (double s : s_values)
        for (Channel ch : {Channel::u, Channel::v}) {
            const auto ground = sturmian_function(ch, ch == Channel::u ? 0 : 1, s);
            for (double r : grid) {
                const double g = ground(r);
                stats.add(std::abs(sturmian_coherent(ch, s, 0.0, r) - g) / std::max(1.0, std::abs(g)), r);
            }
        }
    return detail::stats_report("coherent.identity", stats, tol);
}

/// |Σ_{n≤N}|c_n|² − 1| with N from the tail bound.
inline VerificationReport check_coherent_weights(const std::vector<double>& s_values, double tail, double tol) {
    ResidualStats stats;
    for (double s : s_values)
        for (double k : {s, s + 1.0})
            for (auto xi : coherent_test_labels()) {
                const int N = truncation_order(k, xi, tail);
                double sum = 0.0;
                for (auto c : perelomov_weights(k, xi, N)) sum += std::norm(c);
                stats.add(std::abs(sum - 1.0), std::abs(xi));
            }
    return detail::stats_report("coherent.weights", stats, tol, {{"tail_bound", format_real(tail)}});
}

struct CoherentSpinorChecks {
    VerificationReport norm;
    VerificationReport ratio_limit;
};

/// Coherent spinors over `cases` and the test labels: adaptive ∫(|F|²+|G|²)dr and the r → 0
/// consistency of B′/A′.
inline CoherentSpinorChecks check_coherent_spinors(const std::vector<ProblemParams>& cases, double norm_tol,
                                                   double ratio_tol) {
    ResidualStats norm, ratio;
    for (const auto& p : cases) {
        const auto c = derive_constants(p);
        const auto ref = CoherentReference::from_level(make_level(1, c, p.mass));
        for (auto xi : coherent_test_labels()) {
            const auto spinor = assemble_coherent_spinor(c, xi, ref);
            const double integral = integrate_adaptive([&](double r) {
                const auto f = spinor.evaluate(r);
                return std::norm(f.F) + std::norm(f.G);
            });
            norm.add(std::abs(integral - 1.0), std::abs(xi));
            ratio.add(coherent_ratio_limit_residual(c.s, xi, ref.a_ref, ref.omega_ref), std::abs(xi));
        }
    }
    return {detail::stats_report("coherent.spinor_norm", norm, norm_tol),
            detail::stats_report("coherent.ratio_limit", ratio, ratio_tol)};
}

/// Partial sums Σ_{n≤400} L_n^ν(x) yⁿ against the closed form, |difference| / max(1, |closed|).
inline VerificationReport check_generating_function(double tol) {
    ResidualStats stats;
    const std::complex<double> ys[] = {0.3, -0.5, 0.7, -0.7, {0.4, 0.5}, std::polar(0.7, 2.2), std::polar(0.65, -1.0)};
    for (double nu : {0.0, 0.5, 1.732, 3.4})
        for (auto y : ys)
            for (double x : {0.1, 1.0, 2.5, 5.0, 10.0}) {
                std::complex<double> sum{}, power = 1.0;
                for (int n = 0; n <= 400; ++n) {
                    sum += laguerre(n, nu, x) * power;
                    power *= y;
                }
                const auto closed = laguerre_generating_closed(nu, y, x);
                stats.add(std::abs(sum - closed) / std::max(1.0, std::abs(closed)), x);
            }
    return detail::stats_report("generating.closed_form", stats, tol);
}

/// Full oracle suite; always returns kVerificationCheckCount reports in a fixed order.
inline std::vector<VerificationReport> run_verification_suite(const VerifyConfig& cfg) {
    const auto c = derive_constants(cfg.params);
    std::vector<double> s_values = sturmian_s_values();
    s_values.push_back(c.s);
    std::vector<ProblemParams> cases = coupling_grid();
    cases.push_back(cfg.params);

    std::vector<VerificationReport> out;
    out.push_back(check_free_limit(cfg.tolerance("spectrum.free_limit")));
    out.push_back(check_sommerfeld(cfg.tolerance("spectrum.sommerfeld")));
    out.push_back(check_diagonalization(cfg.tolerance("spectrum.diagonalization"), {cfg.params}));
    out.push_back(check_orthonormality(Channel::u, s_values, cfg.tolerance("sturmian.orthonormality_u")));
    out.push_back(check_orthonormality(Channel::v, s_values, cfg.tolerance("sturmian.orthonormality_v")));
    out.push_back(check_commutator(AlgebraRelation::K0_Kplus, s_values, cfg.tolerance("algebra.commutator_k0_kplus")));
    out.push_back(
        check_commutator(AlgebraRelation::K0_Kminus, s_values, cfg.tolerance("algebra.commutator_k0_kminus")));
    out.push_back(
        check_commutator(AlgebraRelation::Kminus_Kplus, s_values, cfg.tolerance("algebra.commutator_kminus_kplus")));
    out.push_back(check_ladder(s_values, cfg.tolerance("algebra.ladder")));
    out.push_back(check_casimir(s_values, cfg.tolerance("algebra.casimir")));
    out.push_back(check_annihilation(s_values, cfg.tolerance("algebra.annihilation")));
    out.push_back(check_a0_eigenvalue(s_values, cfg.tolerance("algebra.a0_eigenvalue")));
    for (auto id : {ScalingIdentity::A0_conjugation, ScalingIdentity::A1_conjugation,
                    ScalingIdentity::plus_combination, ScalingIdentity::minus_combination}) {
        const std::string key = id == ScalingIdentity::A0_conjugation   ? "scaling.a0_conjugation"
                                : id == ScalingIdentity::A1_conjugation ? "scaling.a1_conjugation"
                                : id == ScalingIdentity::plus_combination ? "scaling.plus_combination"
                                                                          : "scaling.minus_combination";
        out.push_back(check_scaling(id, s_values, cfg.params, cfg.tolerance(key)));
    }
    auto spinors = check_spinors(cases, cfg);
    out.push_back(std::move(spinors.first_order));
    out.push_back(std::move(spinors.second_order));
    out.push_back(std::move(spinors.sensitivity));
    out.push_back(std::move(spinors.normalization));
    const double tail = cfg.tolerance("coherent_tail");
    out.push_back(check_coherent_series({0.866, c.s}, tail, cfg.tolerance("coherent.series")));
    out.push_back(check_coherent_identity(s_values, cfg.tolerance("coherent.identity")));
    out.push_back(check_coherent_weights(s_values, tail, cfg.tolerance("coherent.weights")));
    auto coherent = check_coherent_spinors(cases, cfg.tolerance("coherent.spinor_norm"),
                                           cfg.tolerance("coherent.ratio_limit"));
    out.push_back(std::move(coherent.norm));
    out.push_back(std::move(coherent.ratio_limit));
    out.push_back(check_generating_function(cfg.tolerance("generating.closed_form")));
    return out;
}

} // namespace dkc
