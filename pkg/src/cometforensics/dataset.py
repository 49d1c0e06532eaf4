"""Domain types and CSV ingestion for replicate slide-count tables.

A slide is scored by classifying a fixed number of cells into five damage
categories, A (intact) through E (maximally fragmented).  Each experimental
condition is a labelled data point with exactly two replicate slides.  All
types are immutable values: safe to share across threads, usable as dict
keys, and comparable by value.

Structural problems that a well-formed file cannot even express (wrong
column count, non-integer cells) are raised as :class:`DatasetFormatError`
while parsing.  Consistency problems that a constructed dataset may carry
(count sums, replicate totals) are reported, not raised, by
:func:`validate_dataset`.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Optional, Sequence

CATEGORIES = ("A", "B", "C", "D", "E")
CSV_HEADER = ("label",) + CATEGORIES

# validation issue kinds
SUM_MISMATCH = "sum-mismatch"
NEGATIVE_COUNT = "negative-count"
TOTAL_MISMATCH = "total-mismatch"
EMPTY = "empty"
ISSUE_KINDS = (SUM_MISMATCH, NEGATIVE_COUNT, TOTAL_MISMATCH, EMPTY)


class DatasetFormatError(ValueError):
    """CSV input cannot be parsed into a dataset."""


class DatasetValidationError(ValueError):
    """An operation required a structurally valid dataset and got issues."""

    def __init__(self, issues: Sequence["ValidationIssue"]):
        self.issues = list(issues)
        super().__init__(
            "dataset failed validation: "
            + "; ".join(f"[{i.kind} at point {i.point_index}] {i.message}" for i in self.issues)
        )


@dataclass(frozen=True)
class CalibrationScale:
    """Damage weights per category, ordered from intact to fully fragmented."""

    weights: tuple[float, float, float, float, float]

    def __post_init__(self):
        w = tuple(float(x) for x in self.weights)
        if len(w) != len(CATEGORIES):
            raise ValueError(f"expected {len(CATEGORIES)} weights, got {len(w)}")
        if any(x <= 0.0 for x in w):
            raise ValueError("calibration weights must be positive")
        if any(a >= b for a, b in zip(w, w[1:])):
            raise ValueError("calibration weights must be strictly increasing")
        object.__setattr__(self, "weights", w)


#: Factors conventionally used to turn A..E counts into a damage score.
DEFAULT_SCALE = CalibrationScale((2.5, 12.5, 30.0, 67.5, 97.5))


@dataclass(frozen=True)
class CategoryCounts:
    """Cells counted per damage category on one slide.

    ``total`` defaults to the sum of the counts; an explicit, possibly
    inconsistent total can be given and is caught by validation.
    """

    counts: tuple[int, int, int, int, int]
    total: Optional[int] = None

    def __post_init__(self):
        c = tuple(int(x) for x in self.counts)
        if len(c) != len(CATEGORIES):
            raise ValueError(f"expected {len(CATEGORIES)} category counts, got {len(c)}")
        object.__setattr__(self, "counts", c)
        object.__setattr__(self, "total", sum(c) if self.total is None else int(self.total))


@dataclass(frozen=True)
class DuplicatePoint:
    """One labelled experimental condition with two replicate slides."""

    label: str
    slide_a: CategoryCounts
    slide_b: CategoryCounts


@dataclass(frozen=True)
class Dataset:
    """An ordered collection of duplicate points scored on a common scale."""

    points: tuple[DuplicatePoint, ...]
    scale: CalibrationScale = DEFAULT_SCALE

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))

    @property
    def slide_total(self) -> Optional[int]:
        """Cells per slide, taken from the first slide (None when empty)."""
        return self.points[0].slide_a.total if self.points else None


@dataclass(frozen=True)
class ValidationIssue:
    """One consistency violation; ``point_index`` is -1 for dataset-level issues."""

    point_index: int
    kind: str
    message: str


def parse_dataset(text: str, scale: CalibrationScale = DEFAULT_SCALE) -> Dataset:
    """Parse ``label,A,B,C,D,E`` CSV content into a :class:`Dataset`.

    Consecutive rows sharing a label form one duplicate point.  Lines
    starting with ``#`` are ignored; LF and CRLF both work.  Raises
    :class:`DatasetFormatError` for malformed rows, non-integer or negative
    counts, an odd number of slides for a label, or an empty table.
    """
    rows: list[tuple[str, CategoryCounts]] = []
    reader = csv.reader(io.StringIO(text))
    header_seen = False
    for lineno, fields in enumerate(reader, start=1):
        if not fields or (len(fields) == 1 and not fields[0].strip()):
            continue
        if fields[0].lstrip().startswith("#"):
            continue
        if not header_seen:
            if tuple(f.strip() for f in fields) != CSV_HEADER:
                raise DatasetFormatError(
                    f"line {lineno}: expected header {','.join(CSV_HEADER)!r}"
                )
            header_seen = True
            continue
        if len(fields) != len(CSV_HEADER):
            raise DatasetFormatError(
                f"line {lineno}: malformed row, expected {len(CSV_HEADER)} columns, got {len(fields)}"
            )
        label = fields[0].strip()
        counts = []
        for name, raw in zip(CATEGORIES, fields[1:]):
            s = raw.strip()
            try:
                value = int(s)
            except ValueError:
                raise DatasetFormatError(
                    f"line {lineno}: non-integer count {s!r} in column {name}"
                ) from None
            if value < 0:
                raise DatasetFormatError(
                    f"line {lineno}: negative count {value} in column {name}"
                )
            counts.append(value)
        if sum(counts) == 0:
            raise DatasetFormatError(f"line {lineno}: slide has zero cells")
        rows.append((label, CategoryCounts(tuple(counts))))

    if not header_seen:
        raise DatasetFormatError("empty input: no header row")
    if not rows:
        raise DatasetFormatError("empty table: header only, no slide rows")

    points: list[DuplicatePoint] = []
    i = 0
    while i < len(rows):
        label = rows[i][0]
        run = [rows[i][1]]
        j = i + 1
        while j < len(rows) and rows[j][0] == label:
            run.append(rows[j][1])
            j += 1
        if len(run) % 2 != 0:
            raise DatasetFormatError(
                f"label {label!r} has {len(run)} slide rows; duplicates require an even number"
            )
        for k in range(0, len(run), 2):
            points.append(DuplicatePoint(label, run[k], run[k + 1]))
        i = j
    return Dataset(tuple(points), scale)


def serialize_dataset(d: Dataset) -> str:
    """Render a dataset back to canonical CSV (LF line endings, no comments)."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for point in d.points:
        for slide in (point.slide_a, point.slide_b):
            writer.writerow([point.label, *slide.counts])
    return out.getvalue()


def validate_dataset(d: Dataset) -> list[ValidationIssue]:
    """Check every type invariant; an empty result means the dataset is sound.

    Issues are returned rather than raised so callers can report all of
    them at once.
    """
    issues: list[ValidationIssue] = []
    if not d.points:
        issues.append(ValidationIssue(-1, EMPTY, "dataset contains no points"))
        return issues

    reference_total = d.points[0].slide_a.total
    for index, point in enumerate(d.points):
        for side, slide in (("a", point.slide_a), ("b", point.slide_b)):
            if any(c < 0 for c in slide.counts):
                issues.append(
                    ValidationIssue(
                        index, NEGATIVE_COUNT, f"slide {side} of {point.label!r} has a negative count"
                    )
                )
            if sum(slide.counts) != slide.total:
                issues.append(
                    ValidationIssue(
                        index,
                        SUM_MISMATCH,
                        f"slide {side} of {point.label!r}: counts sum to "
                        f"{sum(slide.counts)} but total is {slide.total}",
                    )
                )
            if slide.total <= 0:
                issues.append(
                    ValidationIssue(
                        index, EMPTY, f"slide {side} of {point.label!r} has non-positive total"
                    )
                )
        if point.slide_a.total != point.slide_b.total:
            issues.append(
                ValidationIssue(
                    index,
                    TOTAL_MISMATCH,
                    f"{point.label!r}: replicate totals differ "
                    f"({point.slide_a.total} vs {point.slide_b.total})",
                )
            )
        elif point.slide_a.total != reference_total:
            issues.append(
                ValidationIssue(
                    index,
                    TOTAL_MISMATCH,
                    f"{point.label!r}: slide total {point.slide_a.total} differs from "
                    f"dataset total {reference_total}",
                )
            )
    return issues


def category_column(d: Dataset, category: str) -> list[int]:
    """All counts of one category in slide order (a then b within each point)."""
    if category not in CATEGORIES:
        raise ValueError(f"unknown category {category!r}")
    k = CATEGORIES.index(category)
    column: list[int] = []
    for point in d.points:
        column.append(point.slide_a.counts[k])
        column.append(point.slide_b.counts[k])
    return column
