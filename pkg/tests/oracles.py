"""Independent oracles the implementation is validated against.

These deliberately avoid the code paths under test: tail probabilities
come from adaptive quadrature of the densities (QUADPACK via scipy), the
Kolmogorov CDF from a plain partial sum of its alternating series, and
small-sample p-values from exhaustive permutation.
"""

from __future__ import annotations

import math

from scipy import integrate


def chi2_pdf(t: float, df: float) -> float:
    if t <= 0.0:
        return 0.0
    return math.exp(
        (df / 2.0 - 1.0) * math.log(t)
        - t / 2.0
        - math.lgamma(df / 2.0)
        - (df / 2.0) * math.log(2.0)
    )


def chi2_sf_quad(x: float, df: float) -> float:
    value, _ = integrate.quad(lambda t: chi2_pdf(t, df), x, math.inf, limit=300)
    return value


def chi2_cdf_quad(x: float, df: float) -> float:
    if x <= 0.0:
        return 0.0
    value, _ = integrate.quad(lambda t: chi2_pdf(t, df), 0.0, x, limit=300)
    return value


def f_pdf(t: float, d1: float, d2: float) -> float:
    if t <= 0.0:
        return 0.0
    logp = (
        (d1 / 2.0) * math.log(d1)
        + (d2 / 2.0) * math.log(d2)
        + (d1 / 2.0 - 1.0) * math.log(t)
        - ((d1 + d2) / 2.0) * math.log(d2 + d1 * t)
        + math.lgamma((d1 + d2) / 2.0)
        - math.lgamma(d1 / 2.0)
        - math.lgamma(d2 / 2.0)
    )
    return math.exp(logp)


def f_sf_quad(x: float, d1: float, d2: float) -> float:
    value, _ = integrate.quad(lambda t: f_pdf(t, d1, d2), x, math.inf, limit=400)
    return value


def t_pdf(u: float, df: float) -> float:
    return math.exp(
        math.lgamma((df + 1.0) / 2.0)
        - math.lgamma(df / 2.0)
        - 0.5 * math.log(df * math.pi)
        - ((df + 1.0) / 2.0) * math.log1p(u * u / df)
    )


def t_sf_quad(x: float, df: float) -> float:
    value, _ = integrate.quad(lambda u: t_pdf(u, df), x, math.inf, limit=400)
    return value


def kolmogorov_sf_partial(x: float, max_terms: int = 200_000) -> float:
    """Plain alternating partial sum of 2 sum (-1)^{k-1} exp(-2 k^2 x^2)."""
    if x <= 0.0:
        return 1.0
    total = 0.0
    sign = 1.0
    for k in range(1, max_terms + 1):
        term = math.exp(-2.0 * k * k * x * x)
        total += sign * term
        if term < 1e-12 and k >= 4:
            break
        sign = -sign
    return max(0.0, min(1.0, 2.0 * total))


def kolmogorov_cdf_partial(x: float) -> float:
    return 1.0 - kolmogorov_sf_partial(x)
