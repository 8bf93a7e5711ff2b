#include <cmath>
#include <complex>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <gtest/gtest.h>

#include "dkc/special_functions.hpp"

namespace {

using big = boost::multiprecision::cpp_bin_float_50;

// L_n^α(x) = Σ_k (−1)^k C(n+α, n−k) x^k / k! at 50 digits; returns the value and Σ|terms|.
std::pair<double, double> laguerre_oracle(int n, double alpha, double x) {
    big sum = 0, magnitude = 0;
    const big bx = x, ba = alpha;
    for (int k = 0; k <= n; ++k) {
        big binom = 1; // C(n+α, n−k) = Π_{i=1}^{n−k} (α+k+i)/i
        for (int i = 1; i <= n - k; ++i) binom *= (ba + k + i) / i;
        big term = binom * boost::multiprecision::pow(bx, k);
        for (int i = 1; i <= k; ++i) term /= i;
        sum += (k % 2 ? -term : term);
        magnitude += boost::multiprecision::abs(term);
    }
    return {static_cast<double>(sum), static_cast<double>(magnitude)};
}

TEST(Laguerre, MatchesExplicitSumOracle) {
    for (int n : {0, 1, 2, 5, 10, 17, 30})
        for (double alpha : {-0.5, 0.0, 0.7, 2.5, 5.1})
            for (double x : {0.01, 0.5, 1.0, 3.7, 10.0, 25.0, 50.0}) {
                const auto [ref, mag] = laguerre_oracle(n, alpha, x);
                EXPECT_NEAR(dkc::laguerre(n, alpha, x), ref, 1e-14 * std::max(mag, 1.0))
                    << "n=" << n << " alpha=" << alpha << " x=" << x;
            }
}

TEST(Laguerre, LowDegreeClosedForms) {
    const double a = 1.3, x = 0.9;
    EXPECT_DOUBLE_EQ(dkc::laguerre(0, a, x), 1.0);
    EXPECT_NEAR(dkc::laguerre(1, a, x), 1.0 + a - x, 1e-15);
    EXPECT_NEAR(dkc::laguerre(2, a, x), 0.5 * (x * x - 2.0 * (a + 2.0) * x + (a + 1.0) * (a + 2.0)), 1e-14);
}

TEST(Laguerre, ValueAtZeroIsBinomial) {
    for (int n : {0, 3, 9})
        for (double a : {0.0, 0.5, 2.2}) {
            const double binom = std::exp(std::lgamma(n + a + 1) - std::lgamma(n + 1) - std::lgamma(a + 1));
            EXPECT_NEAR(dkc::laguerre_at_zero(n, a), binom, 1e-12 * binom);
            EXPECT_NEAR(dkc::laguerre(n, a, 0.0), binom, 1e-12 * binom);
        }
}

TEST(Laguerre, DerivativeMatchesFiniteDifference) {
    for (int n : {1, 4, 8})
        for (double a : {0.2, 1.7})
            for (double x : {0.3, 2.0, 6.5}) {
                const double h = 1e-5;
                const double fd = (dkc::laguerre(n, a, x + h) - dkc::laguerre(n, a, x - h)) / (2 * h);
                EXPECT_NEAR(dkc::laguerre_derivative(n, a, x), fd, 1e-6 * std::max(1.0, std::abs(fd)));
            }
    EXPECT_DOUBLE_EQ(dkc::laguerre_derivative(2, 0.5, 1.0, 3), 0.0);
}

TEST(Laguerre, DomainErrors) {
    EXPECT_THROW(dkc::laguerre(-1, 0.0, 1.0), dkc::DomainError);
    EXPECT_THROW(dkc::laguerre(2, -1.0, 1.0), dkc::DomainError);
    EXPECT_THROW(dkc::laguerre(2, -3.5, 1.0), dkc::DomainError);
}

TEST(LogGamma, AgreesWithStdAndRejectsNonPositive) {
    for (double x : {0.1, 0.5, 1.0, 2.732, 10.0, 171.5})
        EXPECT_NEAR(dkc::log_gamma(x), std::lgamma(x), 1e-13 * std::max(1.0, std::abs(std::lgamma(x))));
    EXPECT_THROW(dkc::log_gamma(0.0), dkc::DomainError);
    EXPECT_THROW(dkc::log_gamma(-2.5), dkc::DomainError);
    EXPECT_NEAR(dkc::gamma_ratio(5.0, 3.0), 12.0, 1e-13);
}

TEST(GeneratingFunction, SignOfExponent) {
    // ν = 0, y = 1/2, x = 1: Σ L_n(1)/2ⁿ = e^{−1} · 2
    EXPECT_NEAR(std::abs(dkc::laguerre_generating_closed(0.0, 0.5, 1.0) - 2.0 * std::exp(-1.0)), 0.0, 1e-15);
}

TEST(GeneratingFunction, PartialSumsConverge) {
    const std::complex<double> ys[] = {0.2, -0.6, {0.3, 0.4}, std::polar(0.7, 1.1)};
    for (double nu : {0.0, 0.73, 2.5})
        for (auto y : ys)
            for (double x : {0.2, 1.5, 4.0}) {
                std::complex<double> sum = 0.0, p = 1.0;
                for (int n = 0; n <= 300; ++n, p *= y) sum += dkc::laguerre(n, nu, x) * p;
                const auto closed = dkc::laguerre_generating_closed(nu, y, x);
                EXPECT_LT(std::abs(sum - closed), 1e-12 * std::max(1.0, std::abs(closed)));
                EXPECT_NEAR(std::abs(std::exp(dkc::log_laguerre_generating_closed(nu, y, x)) - closed), 0.0,
                            1e-14 * std::abs(closed));
            }
}

TEST(GeneratingFunction, RejectsOutsideUnitDisc) {
    EXPECT_THROW(dkc::laguerre_generating_closed(1.0, 1.0, 1.0), dkc::DomainError);
    EXPECT_THROW(dkc::laguerre_generating_closed(1.0, {0.0, -1.2}, 1.0), dkc::DomainError);
}

} // namespace
