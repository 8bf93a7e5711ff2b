#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "dkc/quantum_setup.hpp"

namespace {

using dkc::Alignment;
using dkc::HalfInteger;

TEST(Kappa, ThreeDimensionalValues) {
    EXPECT_EQ(dkc::kappa(3, HalfInteger::from_twice(1), Alignment::aligned), -1.0);
    EXPECT_EQ(dkc::kappa(3, HalfInteger::from_twice(1), Alignment::unaligned), 1.0);
    EXPECT_EQ(dkc::kappa(3, HalfInteger::from_twice(3), Alignment::aligned), -2.0);
    EXPECT_EQ(dkc::kappa(3, HalfInteger::from_twice(5), Alignment::unaligned), 3.0);
}

TEST(Kappa, OtherDimensions) {
    EXPECT_EQ(dkc::kappa(2, HalfInteger::from_twice(1), Alignment::aligned), -0.5);
    EXPECT_EQ(dkc::kappa(4, HalfInteger::from_twice(3), Alignment::aligned), -2.5);
    EXPECT_EQ(dkc::twice_kappa(5, HalfInteger::from_twice(1), Alignment::unaligned), 4);
}

TEST(HalfInteger, RejectsIntegersAndNonPositive) {
    EXPECT_THROW(HalfInteger::from_value(1.0), dkc::DomainError);
    EXPECT_THROW(HalfInteger::from_value(0.0), dkc::DomainError);
    EXPECT_THROW(HalfInteger::from_value(-0.5), dkc::DomainError);
    EXPECT_THROW(HalfInteger::from_value(0.3), dkc::DomainError);
    EXPECT_THROW(HalfInteger::from_value(std::nan("")), dkc::DomainError);
    EXPECT_EQ(HalfInteger::from_value(2.5).twice(), 5);
}

TEST(ProblemParams, ValidateRejectsBadInputs) {
    dkc::ProblemParams p;
    EXPECT_NO_THROW(p.validate());
    p.dimension = 1;
    EXPECT_THROW(p.validate(), dkc::DomainError);
    p = {};
    p.alpha_v = 0.0;
    EXPECT_THROW(p.validate(), dkc::DomainError);
    p = {};
    p.alpha_s = -0.1;
    EXPECT_THROW(p.validate(), dkc::DomainError);
    p = {};
    p.mass = 0.0;
    EXPECT_THROW(p.validate(), dkc::DomainError);
}

TEST(DeriveConstants, EffectiveAngularParameter) {
    dkc::ProblemParams p;
    p.alpha_v = 0.5;
    p.alpha_s = 0.2;
    const auto c = dkc::derive_constants(p);
    EXPECT_NEAR(c.s, std::sqrt(1.0 - 0.25 + 0.04), 1e-15);
    EXPECT_DOUBLE_EQ(c.alpha_plus, 0.7);
    EXPECT_DOUBLE_EQ(c.alpha_minus, 0.3);
    EXPECT_DOUBLE_EQ(c.bargmann_u, c.s);
    EXPECT_DOUBLE_EQ(c.bargmann_v, c.s + 1.0);
    EXPECT_NEAR(c.alpha_v(), 0.5, 1e-16);
    EXPECT_NEAR(c.alpha_s(), 0.2, 1e-16);
}

TEST(DeriveConstants, SupercriticalCouplingThrows) {
    dkc::ProblemParams p;
    p.alpha_v = 1.0;
    EXPECT_THROW(dkc::derive_constants(p), dkc::SupercriticalCoupling);
    p.alpha_v = 1.2;
    EXPECT_THROW(dkc::derive_constants(p), dkc::SupercriticalCoupling);
    p.alpha_s = 0.7; // κ² − α_v² + α_s² > 0 again
    EXPECT_NO_THROW(dkc::derive_constants(p));
}

TEST(DecouplingMatrix, SingularWhenSEqualsKappa) {
    // unaligned κ = +1 with α_v = α_s gives s = κ
    const auto c = dkc::derive_constants(2, 0.3, 0.3);
    EXPECT_DOUBLE_EQ(c.s, 1.0);
    EXPECT_THROW(dkc::decoupling_matrix(c), dkc::SingularTransform);
}

TEST(DecouplingMatrix, DiagonalisesCouplingMatrixProperty) {
    std::mt19937 rng(20240611);
    std::uniform_real_distribution<double> coupling(0.01, 0.95);
    const int twice_kappas[] = {-1, 1, -2, 2, -3, 3, -5, 5};
    int checked = 0;
    for (int trial = 0; trial < 400; ++trial) {
        const int tk = twice_kappas[trial % 8];
        const double av = coupling(rng);
        const double as = coupling(rng) * av;
        dkc::DerivedConstants c;
        try {
            c = dkc::derive_constants(tk, av, as);
        } catch (const dkc::SupercriticalCoupling&) {
            continue;
        }
        const auto m = dkc::decoupling_matrix(c);
        const auto d = dkc::multiply(dkc::inverse(m), dkc::multiply(dkc::coupling_matrix(c), m));
        const double scale = 1.0 + std::abs(c.kappa);
        EXPECT_NEAR(d[0][0], -c.s, 1e-12 * scale);
        EXPECT_NEAR(d[1][1], c.s, 1e-12 * scale);
        EXPECT_NEAR(d[0][1], 0.0, 1e-12 * scale);
        EXPECT_NEAR(d[1][0], 0.0, 1e-12 * scale);
        const double det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        EXPECT_NEAR(det, 2.0 * c.s * (c.s - c.kappa), 1e-12 * scale * scale);
        ++checked;
    }
    EXPECT_GT(checked, 300);
}

TEST(Matrix2, InverseOfSingularThrows) {
    const dkc::Matrix2 m{{{1.0, 2.0}, {2.0, 4.0}}};
    EXPECT_THROW(dkc::inverse(m), dkc::SingularTransform);
}

} // namespace
