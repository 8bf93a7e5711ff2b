#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "dkc/spectrum.hpp"
#include "dkc/verify.hpp"

namespace {

using dkc::Alignment;

// Root of (m² − E²)(n+s)² = (α_v E + α_s m)² with α_v E + α_s m > 0, in long double.
long double quadratic_oracle(int n, long double s, long double av, long double as, long double m) {
    const long double ns2 = (n + s) * (n + s);
    const long double A = ns2 + av * av;
    const long double B = 2 * av * as * m;
    const long double C = as * as * m * m - ns2 * m * m;
    const long double disc = std::sqrt(B * B - 4 * A * C);
    for (long double e : {(-B + disc) / (2 * A), (-B - disc) / (2 * A)})
        if (av * e + as * m > 0 && std::abs(e) <= m) return e;
    return std::nanl("");
}

TEST(Energy, SommerfeldReduction) {
    for (auto [tj, align] : {std::pair{1, Alignment::aligned}, {3, Alignment::aligned}, {1, Alignment::unaligned}}) {
        const double k_abs = std::abs(dkc::kappa(3, dkc::HalfInteger::from_twice(tj), align));
        for (double av : {0.1, 0.5, 0.9 * k_abs}) {
            const auto c = dkc::derive_constants(dkc::make_params(3, tj, align, av, 0.0));
            for (int n = 1; n <= 8; ++n) {
                const double ref = 1.0 / std::sqrt(1.0 + av * av / ((n + c.s) * (n + c.s)));
                EXPECT_NEAR(dkc::energy(n, c, 1.0), ref, 1e-12 * ref);
            }
        }
    }
}

TEST(Energy, FreeLimit) {
    const auto c = dkc::derive_constants(dkc::make_params(3, 1, Alignment::aligned, 1e-12, 1e-12));
    for (int n = 1; n <= 10; ++n) EXPECT_LT(std::abs(dkc::energy(n, c, 2.5) / 2.5 - 1.0), 1e-11);
}

TEST(Energy, AgreesWithQuadraticOracleProperty) {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(0.01, 0.9);
    for (int trial = 0; trial < 300; ++trial) {
        const int tj = 1 + 2 * (trial % 3);
        const auto align = trial % 2 ? Alignment::aligned : Alignment::unaligned;
        const int dim = 2 + trial % 3;
        const double av = u(rng), as = u(rng) * av, m = 0.5 + u(rng);
        dkc::DerivedConstants c;
        try {
            c = dkc::derive_constants(dkc::make_params(dim, tj, align, av, as, m));
        } catch (const dkc::SupercriticalCoupling&) {
            continue;
        }
        for (int n = 1; n <= 6; ++n) {
            const double e = dkc::energy(n, c, m);
            EXPECT_NEAR(e, static_cast<double>(quadratic_oracle(n, c.s, av, as, m)), 1e-13 * m);
            const auto level = dkc::make_level(n, c, m);
            EXPECT_NEAR(level.a * (n + c.s), level.coulomb_strength(c), 1e-12 * m);
        }
    }
}

TEST(Energy, IncreasesWithNAndStaysBelowMass) {
    const auto c = dkc::derive_constants(dkc::make_params(3, 1, Alignment::aligned, 0.6, 0.3));
    double previous = -2.0;
    for (int n = 1; n <= 40; ++n) {
        const double e = dkc::energy(n, c, 1.0);
        EXPECT_GT(e, previous);
        EXPECT_LT(e, 1.0);
        previous = e;
    }
}

TEST(Energy, InvalidLabel) {
    const auto c = dkc::derive_constants(dkc::ProblemParams{});
    EXPECT_THROW(dkc::energy(0, c, 1.0), dkc::DomainError);
    EXPECT_THROW(dkc::make_level(-3, c, 1.0), dkc::DomainError);
}

TEST(ScaleAndTheta, FreeLimitHasNoScale) {
    EXPECT_THROW(dkc::scale_and_theta(1.0, 1.0), dkc::NoBoundState);
    const auto [a, theta] = dkc::scale_and_theta(0.6, 1.0);
    EXPECT_DOUBLE_EQ(a, 0.8);
    EXPECT_DOUBLE_EQ(theta, std::log(0.8));
}

TEST(BoundScale, MatchesDefinitionAndAvoidsCancellation) {
    const auto c = dkc::derive_constants(dkc::make_params(3, 1, Alignment::aligned, 0.6, 0.3));
    for (int n = 1; n <= 6; ++n) {
        const double e = dkc::energy(n, c, 1.4);
        const double a = dkc::bound_scale(n, c, 1.4);
        EXPECT_NEAR(a, dkc::scale_and_theta(e, 1.4).first, 1e-14);
        EXPECT_NEAR(a * a + e * e, 1.4 * 1.4, 1e-12 * 1.4 * 1.4);
    }
    // free limit: m − E rounds to zero but a stays resolved
    const auto weak = dkc::derive_constants(dkc::make_params(3, 1, Alignment::aligned, 1e-12, 1e-12));
    const auto level = dkc::make_level(1, weak, 1.0);
    EXPECT_GT(level.a, 0.0);
    EXPECT_NEAR(level.a * (1 + weak.s), level.coulomb_strength(weak), 1e-26);
}

TEST(Omega, MatchesDefinition) {
    const auto c = dkc::derive_constants(dkc::make_params(3, 3, Alignment::unaligned, 0.4, 0.1));
    const double e = dkc::energy(2, c, 1.3);
    const double z = 0.4 * e + 0.1 * 1.3;
    EXPECT_NEAR(dkc::omega(e, 1.3, c), (1.3 - e) - c.alpha_plus * z / (c.s * (c.s - c.kappa)), 1e-15);
}

TEST(Omega, SingularWhenSEqualsKappa) {
    const auto c = dkc::derive_constants(2, 0.3, 0.3);
    EXPECT_THROW(dkc::omega(0.9, 1.0, c), dkc::SingularTransform);
}

} // namespace
