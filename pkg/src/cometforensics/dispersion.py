"""Variation forensics: intra/inter-assay CVs, theoretical moment bounds,
and two-sample comparison tests.

The key idea: duplicate slides drawn honestly from a pooled cell
population cannot vary less than the sampling noise of the draw itself.
``multinomial_tf_moments`` gives that floor in closed form, and
``pooled_variance_deficit_test`` scores how far below it a set of
duplicates sits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .dataset import CalibrationScale
from .digits import TestOutcome
from .special import chi_square_cdf, f_sf, student_t_sf
from .tailfactor import DuplicateSummary

MULTINOMIAL = "multinomial"
HYPERGEOMETRIC = "hypergeometric"
BASES = (MULTINOMIAL, HYPERGEOMETRIC)


@dataclass(frozen=True)
class MomentEstimate:
    """Theoretical mean and standard deviation of the tail factor."""

    mean: float
    sd: float
    basis: str


@dataclass(frozen=True)
class DispersionSummary:
    """Observed variation: mean per-pair CV vs CV of the pair means.

    ``inter_cv`` is None when fewer than two pairs exist.
    """

    intra_cv: float
    inter_cv: Optional[float]
    n_pairs: int


def intra_assay_cv(summaries: Sequence[DuplicateSummary]) -> float:
    """Arithmetic mean of the per-pair coefficients of variation."""
    if not summaries:
        raise ValueError("no duplicate summaries given")
    return math.fsum(s.cv for s in summaries) / len(summaries)


def inter_assay_cv(summaries: Sequence[DuplicateSummary]) -> float:
    """Sample SD of the pair means divided by their grand mean."""
    if len(summaries) < 2:
        raise ValueError("need at least 2 pairs for the inter-assay CV")
    means = np.array([s.mean for s in summaries], dtype=float)
    return float(means.std(ddof=1) / means.mean())


def multinomial_tf_moments(
    probs: Sequence[float],
    scale: CalibrationScale,
    n: int,
    basis: str = MULTINOMIAL,
    population_size: Optional[int] = None,
) -> MomentEstimate:
    """Closed-form moments of the tail factor of one sampled slide.

    For category probabilities p and weights w the per-slide tail factor
    has mean sum(w*p) and variance (sum(w^2*p) - mean^2)/n.  Sampling
    without replacement from a finite population of size N multiplies the
    variance by the finite-population correction (N-n)/(N-1).
    """
    p = [float(x) for x in probs]
    if len(p) != len(scale.weights):
        raise ValueError("probability vector length must match the scale")
    if any(x < 0.0 for x in p) or abs(math.fsum(p) - 1.0) > 1e-9:
        raise ValueError("probabilities must be non-negative and sum to 1")
    if n < 1:
        raise ValueError("cells per slide must be at least 1")
    if basis not in BASES:
        raise ValueError(f"basis must be one of {BASES}")
    w = scale.weights
    mean = math.fsum(wi * pi for wi, pi in zip(w, p))
    variance = (math.fsum(wi * wi * pi for wi, pi in zip(w, p)) - mean * mean) / n
    if basis == HYPERGEOMETRIC:
        if population_size is None or population_size < n:
            raise ValueError("hypergeometric basis needs population_size >= n")
        variance *= (population_size - n) / (population_size - 1)
    return MomentEstimate(mean, math.sqrt(max(variance, 0.0)), basis)


def variance_ratio_test(sample_x: Sequence[float], sample_y: Sequence[float]) -> TestOutcome:
    """Two-sided F test for equal variances, larger variance on top."""
    x = np.asarray(sample_x, dtype=float)
    y = np.asarray(sample_y, dtype=float)
    if len(x) < 2 or len(y) < 2:
        raise ValueError("each sample needs at least 2 observations")
    vx = float(x.var(ddof=1))
    vy = float(y.var(ddof=1))
    if vx == 0.0 and vy == 0.0:
        raise ValueError("degenerate samples: both variances are zero")
    if vx >= vy:
        num_var, den_var = vx, vy
        df = (float(len(x) - 1), float(len(y) - 1))
    else:
        num_var, den_var = vy, vx
        df = (float(len(y) - 1), float(len(x) - 1))
    if den_var == 0.0:
        return TestOutcome(math.inf, df, 0.0, "variance-ratio-f")
    statistic = num_var / den_var
    tail = f_sf(statistic, df[0], df[1])
    p = min(1.0, max(0.0, 2.0 * min(tail, 1.0 - tail)))
    return TestOutcome(statistic, df, p, "variance-ratio-f")


def variance_permutation_test(
    sample_x: Sequence[float],
    sample_y: Sequence[float],
    rng: np.random.Generator,
    rounds: int = 2000,
) -> TestOutcome:
    """Permutation analogue of :func:`variance_ratio_test`.

    Robust to non-normal counts; the p-value is the fraction of label
    permutations whose variance ratio is at least as extreme, with the
    +1 correction so it never reaches zero.
    """
    x = np.asarray(sample_x, dtype=float)
    y = np.asarray(sample_y, dtype=float)
    if len(x) < 2 or len(y) < 2:
        raise ValueError("each sample needs at least 2 observations")
    vx, vy = float(x.var(ddof=1)), float(y.var(ddof=1))
    if vx == 0.0 and vy == 0.0:
        raise ValueError("degenerate samples: both variances are zero")
    observed = max(vx, vy) / min(vx, vy) if min(vx, vy) > 0 else math.inf
    pooled = np.concatenate([x, y])
    hits = 0
    for _ in range(rounds):
        perm = rng.permutation(pooled)
        px = float(perm[: len(x)].var(ddof=1))
        py = float(perm[len(x):].var(ddof=1))
        ratio = max(px, py) / min(px, py) if min(px, py) > 0 else math.inf
        if ratio >= observed:
            hits += 1
    p = (hits + 1) / (rounds + 1)
    return TestOutcome(observed, None, min(1.0, p), "variance-ratio-permutation")


def welch_t_test(sample_x: Sequence[float], sample_y: Sequence[float]) -> TestOutcome:
    """Welch's unequal-variance t test with Welch-Satterthwaite df."""
    x = np.asarray(sample_x, dtype=float)
    y = np.asarray(sample_y, dtype=float)
    nx, ny = len(x), len(y)
    if nx < 2 or ny < 2:
        raise ValueError("each sample needs at least 2 observations")
    vx, vy = float(x.var(ddof=1)), float(y.var(ddof=1))
    se2 = vx / nx + vy / ny
    if se2 == 0.0:
        raise ValueError("degenerate samples: no variance on either side")
    statistic = (float(x.mean()) - float(y.mean())) / math.sqrt(se2)
    df = se2 * se2 / ((vx / nx) ** 2 / (nx - 1) + (vy / ny) ** 2 / (ny - 1))
    p = min(1.0, 2.0 * student_t_sf(abs(statistic), df))
    return TestOutcome(statistic, df, p, "welch-t")


def pooled_variance_deficit_test(
    summaries: Sequence[DuplicateSummary], reference_sd: float
) -> TestOutcome:
    """Lower-tail chi-square test of duplicate spread against a floor.

    Each duplicate pair contributes one degree of freedom through its
    squared replicate SD; k * pooled_variance / reference_variance is
    approximately chi-square with k dof when the data really carry the
    reference noise, so an honest table almost never lands in the far
    lower tail.
    """
    if not summaries:
        raise ValueError("no duplicate summaries given")
    if reference_sd <= 0.0:
        raise ValueError("reference sd must be positive")
    k = len(summaries)
    pooled_variance = math.fsum(s.sd * s.sd for s in summaries) / k
    statistic = k * pooled_variance / (reference_sd * reference_sd)
    return TestOutcome(statistic, float(k), chi_square_cdf(statistic, k), "variance-deficit-chi-square")
