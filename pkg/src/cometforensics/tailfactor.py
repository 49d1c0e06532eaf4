"""Tail-factor scoring and duplicate-pair summaries.

The tail factor of a slide is the calibration-weighted average damage per
cell.  Duplicate pairs are summarised by mean, sample standard deviation
(n-1 denominator, which for two replicates is |a-b|/sqrt(2)) and the
coefficient of variation.  Values are carried at full precision; rounding
for display happens only in the report layer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .dataset import (
    CalibrationScale,
    CategoryCounts,
    Dataset,
    DatasetValidationError,
    validate_dataset,
)


@dataclass(frozen=True)
class DuplicateSummary:
    """Per-condition summary of the two replicate tail factors."""

    label: str
    tf_a: float
    tf_b: float
    mean: float
    sd: float
    cv: float


def tail_factor(c: CategoryCounts, s: CalibrationScale) -> float:
    """Weighted damage score: sum(count * weight) divided by cells scored."""
    if c.total <= 0:
        raise ValueError("slide total must be positive")
    return math.fsum(n * w for n, w in zip(c.counts, s.weights)) / c.total


def duplicate_summary(label: str, tf_a: float, tf_b: float) -> DuplicateSummary:
    """Summarise one duplicate pair of tail factors."""
    if tf_a <= 0.0 or tf_b <= 0.0:
        raise ValueError("tail factors must be positive")
    mean = (tf_a + tf_b) / 2.0
    sd = abs(tf_a - tf_b) / math.sqrt(2.0)
    return DuplicateSummary(label, tf_a, tf_b, mean, sd, sd / mean)


def dataset_tail_factors(d: Dataset) -> list[DuplicateSummary]:
    """One :class:`DuplicateSummary` per point, in dataset order."""
    issues = validate_dataset(d)
    if issues:
        raise DatasetValidationError(issues)
    return [
        duplicate_summary(
            p.label,
            tail_factor(p.slide_a, d.scale),
            tail_factor(p.slide_b, d.scale),
        )
        for p in d.points
    ]
