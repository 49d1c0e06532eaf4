"""Null model: the lowest variation honest replicate data can show.

The pooled cell population behind a dataset is reconstructed at a chosen
size, then slides are re-drawn from it without replacement (multivariate
hypergeometric, the exact formalisation of "randomly sort the population
and score the first n cells").  Because the draw excludes every real-world
confounder, its variation is a strict lower bound for honest data;
reported tables that vary even less are flagged upstream.

Reproducibility contract (scheme ``pcg64-seedseq-v1``): every slide draw
gets its own child generator, a PCG64 seeded with the entropy tuple
(seed, replicate_index, point_index, slide_index).  Results therefore do
not depend on execution order and replicates can run in parallel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .dataset import (
    CATEGORIES,
    CalibrationScale,
    CategoryCounts,
    Dataset,
    DatasetValidationError,
    DEFAULT_SCALE,
    DuplicatePoint,
    validate_dataset,
)
from .digits import TestOutcome
from .dispersion import (
    intra_assay_cv,
    inter_assay_cv,
    variance_permutation_test,
    variance_ratio_test,
    welch_t_test,
)
from .tailfactor import dataset_tail_factors

RNG_SCHEME = "pcg64-seedseq-v1"
WITHOUT_REPLACEMENT = "without-replacement"
WITH_REPLACEMENT = "with-replacement"
SAMPLING_MODES = (WITHOUT_REPLACEMENT, WITH_REPLACEMENT)

F_RATIO = "f-ratio"
PERMUTATION = "permutation"
VARIANCE_TESTS = (F_RATIO, PERMUTATION)

_SEED_MASK = (1 << 64) - 1


@dataclass(frozen=True)
class PopulationSpec:
    """A pooled, categorised cell population of known size."""

    counts: tuple[int, int, int, int, int]
    size: int

    def __post_init__(self):
        c = tuple(int(x) for x in self.counts)
        if len(c) != len(CATEGORIES):
            raise ValueError(f"expected {len(CATEGORIES)} category counts")
        if any(x < 0 for x in c):
            raise ValueError("population counts must be non-negative")
        if sum(c) != int(self.size):
            raise ValueError("population counts must sum to the population size")
        object.__setattr__(self, "counts", c)
        object.__setattr__(self, "size", int(self.size))


@dataclass(frozen=True)
class SimulationConfig:
    """Parameters of one simulation battery run."""

    n_points: int
    cells_per_slide: int
    seed: int
    replicates: int
    sampling: str = WITHOUT_REPLACEMENT
    population_size: int = 10_000

    def __post_init__(self):
        if self.n_points < 1:
            raise ValueError("n_points must be positive")
        if self.cells_per_slide < 1:
            raise ValueError("cells_per_slide must be positive")
        if self.replicates < 1:
            raise ValueError("replicates must be positive")
        if self.population_size < 1:
            raise ValueError("population_size must be positive")
        if self.sampling not in SAMPLING_MODES:
            raise ValueError(f"sampling must be one of {SAMPLING_MODES}")
        if self.seed < 0:
            raise ValueError("seed must be a non-negative 64-bit integer")
        if self.sampling == WITHOUT_REPLACEMENT and self.cells_per_slide > self.population_size:
            raise ValueError("cells_per_slide cannot exceed the population size")


@dataclass(frozen=True)
class Fig1Series:
    """Reported vs simulated tail factors, one row per duplicate point."""

    labels: tuple[str, ...]
    reported_a: tuple[float, ...]
    reported_b: tuple[float, ...]
    simulated_a: tuple[float, ...]
    simulated_b: tuple[float, ...]


@dataclass(frozen=True)
class Fig2Variances:
    """Per-category slide-count variance, reported vs simulated."""

    categories: tuple[str, ...]
    reported: tuple[float, ...]
    simulated: tuple[float, ...]


@dataclass(frozen=True)
class SimulationComparison:
    """Honest-resampling battery results against a reported dataset.

    Scalar fields and per-category test p-values are medians across the
    configured replicates; fig1 data comes from the first replicate.
    """

    sim_intra_cv: float
    sim_inter_cv: Optional[float]
    sim_tf_mean: float
    per_category_variance_tests: tuple[TestOutcome, ...]
    per_category_mean_tests: tuple[TestOutcome, ...]
    fig1_data: Fig1Series
    fig2_data: Fig2Variances


def slide_generator(seed: int, replicate: int, point: int, slide: int) -> np.random.Generator:
    """Child generator for one slide draw under the pcg64-seedseq-v1 scheme."""
    entropy = (int(seed) & _SEED_MASK, int(replicate), int(point), int(slide))
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy)))


def population_from_counts(pooled: Sequence[int], target_size: int) -> PopulationSpec:
    """Rescale pooled counts to ``target_size`` cells, conserving the total.

    Largest-remainder rounding: floor every quota, then hand the leftover
    cells to the largest fractional parts (ties broken by category order),
    so the result sums to ``target_size`` exactly.
    """
    pooled = [int(x) for x in pooled]
    total = sum(pooled)
    if total <= 0:
        raise ValueError("pooled counts are empty")
    quotas = [c * target_size / total for c in pooled]
    base = [math.floor(q) for q in quotas]
    leftover = target_size - sum(base)
    order = sorted(range(len(pooled)), key=lambda i: (-(quotas[i] - base[i]), i))
    for i in order[:leftover]:
        base[i] += 1
    return PopulationSpec(tuple(base), target_size)


def build_population(d: Dataset, target_size: int) -> PopulationSpec:
    """Pool every slide of a dataset and rescale to ``target_size`` cells."""
    issues = validate_dataset(d)
    if issues:
        raise DatasetValidationError(issues)
    if target_size < 1000:
        raise ValueError("target_size must be at least 1000")
    pooled = [0] * len(CATEGORIES)
    for point in d.points:
        for slide in (point.slide_a, point.slide_b):
            for i, c in enumerate(slide.counts):
                pooled[i] += c
    return population_from_counts(pooled, target_size)


def draw_slide(
    pop: PopulationSpec,
    n: int,
    rng: np.random.Generator,
    sampling: str = WITHOUT_REPLACEMENT,
) -> CategoryCounts:
    """Score one simulated slide of ``n`` cells from the population.

    Without replacement this is a multivariate hypergeometric draw,
    equivalent to randomly sorting the population and scoring the first
    ``n`` cells; with replacement it is a multinomial draw at the
    population frequencies.
    """
    if sampling not in SAMPLING_MODES:
        raise ValueError(f"sampling must be one of {SAMPLING_MODES}")
    if n < 1:
        raise ValueError("draw size must be positive")
    if sampling == WITHOUT_REPLACEMENT:
        if n > pop.size:
            raise ValueError(f"cannot draw {n} cells from a population of {pop.size}")
        counts = rng.multivariate_hypergeometric(list(pop.counts), n, method="count")
    else:
        probs = np.asarray(pop.counts, dtype=float) / pop.size
        counts = rng.multinomial(n, probs)
    return CategoryCounts(tuple(int(x) for x in counts))


def simulate_dataset(
    pop: PopulationSpec,
    cfg: SimulationConfig,
    scale: CalibrationScale = DEFAULT_SCALE,
    replicate_index: int = 0,
) -> Dataset:
    """Draw ``cfg.n_points`` duplicate pairs; deterministic for a fixed seed."""
    points = []
    for i in range(cfg.n_points):
        slides = [
            draw_slide(
                pop,
                cfg.cells_per_slide,
                slide_generator(cfg.seed, replicate_index, i, s),
                cfg.sampling,
            )
            for s in (0, 1)
        ]
        points.append(DuplicatePoint(f"sim {i + 1:02d}", slides[0], slides[1]))
    return Dataset(tuple(points), scale)


def _category_matrix(d: Dataset) -> np.ndarray:
    rows = []
    for point in d.points:
        rows.append(point.slide_a.counts)
        rows.append(point.slide_b.counts)
    return np.asarray(rows, dtype=float)


def simulation_battery(
    real: Dataset,
    cfg: SimulationConfig,
    variance_test: str = F_RATIO,
) -> SimulationComparison:
    """Compare a reported dataset against honest re-draws of itself.

    Per replicate, a same-shaped dataset is simulated from the pooled
    population and per-category variance and mean tests are run between
    reported and simulated slide counts.  p-values and summary statistics
    are aggregated across replicates by their medians, since the variance
    p-values are heavily skewed.
    """
    issues = validate_dataset(real)
    if issues:
        raise DatasetValidationError(issues)
    if variance_test not in VARIANCE_TESTS:
        raise ValueError(f"variance_test must be one of {VARIANCE_TESTS}")
    if cfg.n_points != len(real.points):
        raise ValueError("cfg.n_points must match the number of dataset points")
    if cfg.cells_per_slide != real.slide_total:
        raise ValueError("cfg.cells_per_slide must match the dataset slide total")

    pop = build_population(real, cfg.population_size)
    real_matrix = _category_matrix(real)
    real_summaries = dataset_tail_factors(real)

    intra, inter, grand = [], [], []
    var_stats = np.empty((cfg.replicates, 5))
    var_ps = np.empty((cfg.replicates, 5))
    mean_stats = np.empty((cfg.replicates, 5))
    mean_ps = np.empty((cfg.replicates, 5))
    sim_variances = np.empty((cfg.replicates, 5))
    var_df: list = [None] * 5
    mean_df: list = [None] * 5
    first_sim_summaries = None

    for r in range(cfg.replicates):
        sim = simulate_dataset(pop, cfg, real.scale, replicate_index=r)
        sim_matrix = _category_matrix(sim)
        summaries = dataset_tail_factors(sim)
        if r == 0:
            first_sim_summaries = summaries
        intra.append(intra_assay_cv(summaries))
        inter.append(inter_assay_cv(summaries) if len(summaries) >= 2 else math.nan)
        grand.append(math.fsum(s.mean for s in summaries) / len(summaries))
        for c in range(5):
            x = real_matrix[:, c]
            y = sim_matrix[:, c]
            if variance_test == F_RATIO:
                vt = variance_ratio_test(x, y)
            else:
                vt = variance_permutation_test(x, y, slide_generator(cfg.seed, r, cfg.n_points, 2 + c))
            mt = welch_t_test(x, y)
            var_stats[r, c] = vt.statistic
            var_ps[r, c] = vt.p_value
            var_df[c] = vt.df
            mean_stats[r, c] = mt.statistic
            mean_ps[r, c] = mt.p_value
            mean_df[c] = mt.df
            sim_variances[r, c] = y.var(ddof=1)

    variance_tests = tuple(
        TestOutcome(
            float(np.median(var_stats[:, c])),
            var_df[c],
            float(np.median(var_ps[:, c])),
            f"variance-{CATEGORIES[c]}",
        )
        for c in range(5)
    )
    mean_tests = tuple(
        TestOutcome(
            float(np.median(mean_stats[:, c])),
            mean_df[c],
            float(np.median(mean_ps[:, c])),
            f"mean-{CATEGORIES[c]}",
        )
        for c in range(5)
    )
    fig1 = Fig1Series(
        labels=tuple(s.label for s in real_summaries),
        reported_a=tuple(s.tf_a for s in real_summaries),
        reported_b=tuple(s.tf_b for s in real_summaries),
        simulated_a=tuple(s.tf_a for s in first_sim_summaries),
        simulated_b=tuple(s.tf_b for s in first_sim_summaries),
    )
    fig2 = Fig2Variances(
        categories=CATEGORIES,
        reported=tuple(float(v) for v in real_matrix.var(axis=0, ddof=1)),
        simulated=tuple(float(v) for v in np.median(sim_variances, axis=0)),
    )
    inter_values = [v for v in inter if not math.isnan(v)]
    return SimulationComparison(
        sim_intra_cv=float(np.median(intra)),
        sim_inter_cv=float(np.median(inter_values)) if inter_values else None,
        sim_tf_mean=float(np.median(grand)),
        per_category_variance_tests=variance_tests,
        per_category_mean_tests=mean_tests,
        fig1_data=fig1,
        fig2_data=fig2,
    )
