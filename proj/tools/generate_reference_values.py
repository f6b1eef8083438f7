#!/usr/bin/env python3
"""Generates the frozen reference constants used by tests/reference_values.hpp.

Every value is computed here by a route independent of the C++ library:
high-precision series, exact rational arithmetic, or mpmath quadrature of
closed-form integrands. Re-run and diff against the header after changing
any of the inputs below.

    python3 tools/generate_reference_values.py > tests/reference_values.hpp
"""

from fractions import Fraction

import mpmath as mp

mp.mp.dps = 40

LAMBDA = mp.mpf("0.3")
SIGMA2 = 6  # second moment of the Wand kernel


def normal_pdf(x, mean, var):
    return mp.exp(-((x - mean) ** 2) / (2 * var)) / mp.sqrt(2 * mp.pi * var)


def g_standard_normal(x, lam):
    """Series over convolution powers, summed far past double precision."""
    total = mp.mpf(0)
    norm = 1 - mp.exp(-lam)
    for k in range(1, 200):
        weight = mp.exp(-lam) * lam**k / mp.factorial(k) / norm
        total += weight * normal_pdf(x, 0, k)
    return total


def phi_mixture(t):
    return mp.mpf("0.75") * mp.exp(-t * t / 2) + mp.mpf("0.25") * mp.exp(
        1j * mp.mpf("1.5") * t - t * t / 18
    )


def g_by_fourier(x, lam, phi_f):
    """Fourier inversion of phi_g; independent of any convolution expansion."""
    def integrand(t):
        phi_g = (mp.exp(lam * phi_f(t)) - 1) / (mp.exp(lam) - 1)
        return mp.re(mp.exp(-1j * t * x) * phi_g)

    return mp.quad(integrand, [-mp.inf, -10, 0, 10, mp.inf]) / (2 * mp.pi)


def bias_integral(x, lam):
    """int e^{-itx} t^2 phi_g/((e^lam-1)phi_g+1) dt, using the simplification
    (e^lam-1)phi_g+1 = exp(lam phi_f) so the integrand is
    t^2 (1 - exp(-lam phi_f)) / (e^lam - 1)."""
    def integrand(t):
        phi_f = mp.exp(-t * t / 2)
        return mp.cos(t * x) * t * t * (1 - mp.exp(-lam * phi_f)) / (mp.exp(lam) - 1)

    return mp.quad(integrand, [-mp.inf, -10, 0, 10, mp.inf])


def single_obs_inversion(a, x, lam, h):
    """(1/2 pi lam) Re int_{-1/h}^{1/h} e^{-itx} log((e^lam-1) e^{ita} phi_w(ht) + 1) dt."""
    def integrand(t):
        phi_w = (1 - (h * t) ** 2) ** 3
        z = (mp.exp(lam) - 1) * mp.exp(1j * t * a) * phi_w + 1
        return mp.re(mp.exp(-1j * t * x) * mp.log(z))

    return mp.quad(integrand, [-1 / h, 0, 1 / h]) / (2 * mp.pi * lam)


def binomial_moment(power):
    """int_0^1 (1 - t^2)^power dt as an exact rational."""
    from math import comb

    return sum(Fraction((-1) ** k * comb(power, k), 2 * k + 1) for k in range(power + 1))


def emit(name, value, comment):
    print(f"// {comment}")
    print(f"inline constexpr double {name} = {mp.nstr(value, 20)};")


def kolmogorov_cdf(d, n):
    """P(D_n < d) by Durbin's matrix formula in exact-enough arithmetic.
    scipy's kstwo switches to an approximation for large n and is off by
    ~5e-8 at n = 500, so it is not used here."""
    nd = n * d
    k = int(mp.floor(nd)) + 1
    m = 2 * k - 1
    h = k - nd
    H = mp.matrix(m, m)
    for i in range(m):
        for j in range(m):
            H[i, j] = 1 if i - j + 1 >= 0 else 0
    for i in range(m):
        H[i, 0] -= h ** (i + 1)
        H[m - 1, i] -= h ** (m - i)
    if 2 * h - 1 > 0:
        H[m - 1, 0] += (2 * h - 1) ** m
    for i in range(m):
        for j in range(m):
            if i - j + 1 > 0:
                H[i, j] /= mp.factorial(i - j + 1)
    q = (H**n)[k - 1, k - 1]
    for i in range(1, n + 1):
        q = q * i / n
    return q


def main():
    print("// Generated by tools/generate_reference_values.py. Do not edit by hand.")
    print("#pragma once\n")
    print("namespace decomp::reference {\n")

    int_w_sq = binomial_moment(6)
    w0 = 2 * binomial_moment(3)
    emit("wand_w0", mp.mpf(w0.numerator) / w0.denominator / (2 * mp.pi),
         "w(0) = (1/2pi) int_{-1}^{1} (1-t^2)^3 dt = 16/(35 pi)")
    emit("wand_int_w_squared", mp.mpf(int_w_sq.numerator) / int_w_sq.denominator / mp.pi,
         f"int w^2 = (1/pi) int_0^1 (1-t^2)^6 dt = ({int_w_sq})/pi, Parseval")

    g0 = g_standard_normal(0, LAMBDA)
    emit("g0_normal_lambda03", g0, "g(0), standard normal jumps, lambda = 0.3 (series)")
    emit("g1_normal_lambda03", g_standard_normal(1, LAMBDA),
         "g(1), standard normal jumps, lambda = 0.3 (series)")
    emit("g1_mixture_lambda03", g_by_fourier(1, LAMBDA, phi_mixture),
         "g(1), two-component mixture, lambda = 0.3 (Fourier inversion)")
    emit("g0_mixture_lambda03", g_by_fourier(0, LAMBDA, phi_mixture),
         "g(0), two-component mixture, lambda = 0.3 (Fourier inversion)")
    emit("g15_mixture_lambda2", g_by_fourier(mp.mpf("1.5"), 2, phi_mixture),
         "g(1.5), two-component mixture, lambda = 2 (Fourier inversion)")

    inner0 = bias_integral(0, LAMBDA)
    emit("bias_integral_x0", inner0, "int t^2 phi_g/((e^l-1)phi_g+1) dt at x = 0, lambda = 0.3")
    inner1 = bias_integral(1, LAMBDA)
    emit("bias_integral_x1", inner1, "same integral at x = 1")
    pref = SIGMA2 * (mp.exp(LAMBDA) - 1) / (4 * mp.pi * LAMBDA)
    for h, tag in ((mp.mpf("0.14"), "h014"), (mp.mpf("0.2"), "h02")):
        emit(f"leading_bias_x0_{tag}", -h * h * pref * inner0,
             f"leading bias at x = 0, h = {h}")

    int_w2 = mp.mpf(int_w_sq.numerator) / int_w_sq.denominator / mp.pi
    hopt = (4 * mp.pi**2 * g0 * int_w2 / (SIGMA2**2 * inner0**2)) ** (mp.mpf(1) / 5) \
        * mp.mpf(1000) ** (-mp.mpf(1) / 5)
    emit("hopt_x0_n1000", hopt, "optimal bandwidth at x = 0, n = 1000, lambda = 0.3")

    var = (1 / (1000 * mp.mpf("0.14"))) * (mp.exp(LAMBDA) - 1) ** 2 / LAMBDA**2 * g0 * int_w2
    emit("asymptotic_variance_fig1", var, "leading variance, n = 1000, h = 0.14, x = 0")

    emit("single_obs_a05_x03", single_obs_inversion(mp.mpf("0.5"), mp.mpf("0.3"), LAMBDA, 1),
         "direct inversion, sample = [0.5], x = 0.3, lambda = 0.3, h = 1")
    emit("single_obs_a05_x0", single_obs_inversion(mp.mpf("0.5"), 0, LAMBDA, 1),
         "direct inversion, sample = [0.5], x = 0, lambda = 0.3, h = 1")

    emit("zero_ratio_lambda03", mp.exp(-LAMBDA) / (1 - mp.exp(-LAMBDA)),
         "E[zero_count]/n = e^-l/(1-e^-l), lambda = 0.3")

    for d, n, tag in (("0.03", 500, "a"), ("0.05", 500, "b"), ("0.08", 500, "c"), ("0.1", 100, "d")):
        emit(f"ks_pvalue_{tag}", 1 - kolmogorov_cdf(mp.mpf(d), n),
             f"exact one-sample KS survival, D = {d}, n = {n} (Durbin matrix, 40 digits)")

    print("\n}  // namespace decomp::reference")


if __name__ == "__main__":
    main()
