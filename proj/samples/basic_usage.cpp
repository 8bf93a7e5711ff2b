// Spectrum, a normalised spinor and a coherent state for hydrogen-like inputs.
#include <complex>
#include <cstdio>

#include "dkc/dkc.hpp"

int main() {
    dkc::ProblemParams params;
    params.alpha_v = 0.5;
    params.alpha_s = 0.2;
    const auto c = dkc::derive_constants(params);
    std::printf("kappa = %g, s = %.12f\n", c.kappa, c.s);

    for (int n = 1; n <= 4; ++n) {
        const auto level = dkc::make_level(n, c, params.mass);
        std::printf("n = %d  E/m = %.15f  a = %.12f\n", n, level.energy / params.mass, level.a);
    }

    const auto level = dkc::make_level(2, c, params.mass);
    const auto spinor = dkc::assemble_spinor(level, c);
    const auto residual = dkc::ode_residual_first_order(spinor, dkc::default_residual_grid(level.a));
    std::printf("n = 2 spinor: A = %.12f, closed-form ratio = %.6f, first-order residual = %.2e\n",
                spinor.normalization(), spinor.comparison().ratio, residual.max);
    for (double r : {0.5, 2.0, 8.0}) {
        const auto v = spinor(r);
        std::printf("  r = %4.1f  F = % .10e  G = % .10e\n", r, v.F, v.G);
    }

    const std::complex<double> xi(0.3, 0.2);
    const auto coherent = dkc::assemble_coherent_spinor(params, xi);
    const auto w = coherent(1.0);
    std::printf("coherent xi = 0.3+0.2i: A' = %.12f, F(1) = %.6e%+.6ei\n", coherent.normalization(), w.F.real(),
                w.F.imag());
    return 0;
}
