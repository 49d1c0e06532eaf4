"""Terminal-digit forensics.

Genuine count data carries close-to-uniform terminal digits, while
invented numbers rarely do.  This module extracts the requested decimal
digit from a column of integers and tests the digit distribution for
uniformity with a chi-square goodness-of-fit test (df = 9) and a
one-sample Kolmogorov-Smirnov test.

The KS statistic and its asymptotic p-value are the standard
continuous-case ones even though digits are discrete; this is the common
packaged-software behaviour and errs on the conservative side.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Union

from .special import chi_square_sf, kolmogorov_sf

LAST = "last"
SECOND_TO_LAST = "second-to-last"
POSITIONS = (LAST, SECOND_TO_LAST)


@dataclass(frozen=True)
class DigitSample:
    """Digits 0..9 extracted from a sequence of reported integers."""

    digits: tuple[int, ...]
    source_position: str

    def __post_init__(self):
        digits = tuple(int(d) for d in self.digits)
        if not digits:
            raise ValueError("digit sample must be non-empty")
        if any(d < 0 or d > 9 for d in digits):
            raise ValueError("digits must lie in 0..9")
        if self.source_position not in POSITIONS:
            raise ValueError(f"position must be one of {POSITIONS}")
        object.__setattr__(self, "digits", digits)


@dataclass(frozen=True)
class TestOutcome:
    """Result of one statistical test.

    ``df`` is None for distribution-free tests, a number for one-parameter
    families, or an ordered pair for the F test.
    """

    statistic: float
    df: Union[float, tuple[float, float], None]
    p_value: float
    test_name: str

    def __post_init__(self):
        if not 0.0 <= self.p_value <= 1.0:
            raise ValueError("p-value must lie in [0, 1]")


def extract_digits(values: Sequence[int], position: str = LAST) -> DigitSample:
    """Take the digit at ``position`` from each non-negative integer.

    ``second-to-last`` requires every value to have at least two digits.
    """
    if position not in POSITIONS:
        raise ValueError(f"position must be one of {POSITIONS}")
    if not values:
        raise ValueError("no values to extract digits from")
    digits = []
    for v in values:
        v = int(v)
        if v < 0:
            raise ValueError(f"value {v} is negative")
        if position == LAST:
            digits.append(v % 10)
        else:
            if v < 10:
                raise ValueError(f"value {v} too short for second-to-last digit")
            digits.append((v // 10) % 10)
    return DigitSample(tuple(digits), position)


def digit_histogram(s: DigitSample) -> list[int]:
    """Multiplicity of each digit 0..9, summing to the sample size."""
    counts = [0] * 10
    for d in s.digits:
        counts[d] += 1
    return counts


def chi_square_uniform(counts: Sequence[int]) -> TestOutcome:
    """Chi-square goodness-of-fit of 10 digit counts against uniformity.

    No continuity correction is applied (plain multinomial fit, df = 9).
    Requires at least 10 observations so every expected cell count is >= 1.
    """
    if len(counts) != 10:
        raise ValueError("expected exactly 10 digit counts")
    if any(c < 0 for c in counts):
        raise ValueError("counts must be non-negative")
    n = sum(counts)
    if n < 10:
        raise ValueError("sample too small: need at least 10 digits")
    expected = n / 10.0
    statistic = math.fsum((o - expected) ** 2 for o in counts) / expected
    return TestOutcome(statistic, 9, chi_square_sf(statistic, 9), "chi-square-uniform")


def ks_uniform_digits(s: DigitSample) -> TestOutcome:
    """One-sample KS test of the digit distribution against uniform.

    D is the largest gap between the empirical digit CDF and (k+1)/10;
    the p-value comes from the asymptotic Kolmogorov distribution of
    sqrt(n) * D.
    """
    n = len(s.digits)
    if n < 5:
        raise ValueError("sample too small: need at least 5 digits")
    counts = digit_histogram(s)
    cumulative = 0
    d_stat = 0.0
    for k in range(10):
        cumulative += counts[k]
        d_stat = max(d_stat, abs(cumulative / n - (k + 1) / 10.0))
    p = kolmogorov_sf(math.sqrt(n) * d_stat)
    return TestOutcome(d_stat, None, p, "ks-uniform")
