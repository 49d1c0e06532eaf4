"""Bundled demonstration fixtures.

The counts below are SYNTHETIC RECONSTRUCTIONS, not measured data.  They
are built to reproduce, simultaneously, the summary profile of a
fabricated-looking duplicate table so that every detector in this library
has a worked positive example:

* 12 sham conditions, duplicate slides, 500 cells per slide;
* grand mean tail factor 4.063 (displays as 4.06);
* intra-assay CV 2.1 % with inter-assay CV 1.3 % (inverted ordering);
* pooled population at 10,000 cells of exactly (8992, 776, 202, 18, 12);
* per-category slide-count variances far below the honest sampling floor;
* category-A counts whose last digits pile up on "2" (nine of 24 here,
  fourteen of 48 across the full two-arm column, with a single "5").

Any resemblance to a specific published table is limited to those summary
statistics; the individual rows are invented.
"""

from __future__ import annotations

from .dataset import CategoryCounts, Dataset, DEFAULT_SCALE, parse_dataset
from .simulate import PopulationSpec

# 24 slides, one row per slide: (label, A, B, C, D, E); consecutive rows pair up.
_SHAM_ROWS = (
    ("sham 4h r1", 452, 36, 11, 1, 0),
    ("sham 4h r1", 449, 39, 11, 0, 1),
    ("sham 4h r2", 452, 37, 10, 0, 1),
    ("sham 4h r2", 448, 40, 10, 1, 1),
    ("sham 4h r3", 452, 37, 10, 1, 0),
    ("sham 4h r3", 450, 37, 11, 2, 0),
    ("sham 4h r4", 452, 38, 9, 0, 1),
    ("sham 4h r4", 452, 37, 9, 2, 0),
    ("sham 16h r1", 447, 41, 10, 2, 0),
    ("sham 16h r1", 452, 38, 9, 0, 1),
    ("sham 16h r2", 448, 41, 10, 0, 1),
    ("sham 16h r2", 447, 42, 10, 1, 0),
    ("sham 16h r3", 450, 39, 10, 0, 1),
    ("sham 16h r3", 445, 42, 12, 1, 0),
    ("sham 16h r4", 452, 37, 9, 2, 0),
    ("sham 16h r4", 450, 38, 10, 1, 1),
    ("sham 24h r1", 451, 37, 10, 1, 1),
    ("sham 24h r1", 450, 38, 9, 2, 1),
    ("sham 24h r2", 452, 37, 9, 1, 1),
    ("sham 24h r2", 446, 41, 11, 2, 0),
    ("sham 24h r3", 448, 40, 11, 0, 1),
    ("sham 24h r3", 446, 42, 11, 0, 1),
    ("sham 24h r4", 452, 37, 10, 0, 1),
    ("sham 24h r4", 447, 40, 11, 2, 0),
)

# Category-A counts of the reconstructed exposed arm (12 more conditions).
# Only their terminal digits matter to the digit battery; together with the
# sham column they carry fourteen 2s and a single 5 in 48 values.
_EXPOSED_A_VALUES = (
    442, 440, 431, 439, 434, 438, 441, 432, 429, 430, 433, 428,  # exp 4h
    362, 371, 359, 369, 360, 352,                                 # exp 16h
    349, 341, 342, 353, 344, 339,                                 # exp 24h
)


def table1_example_slide() -> CategoryCounts:
    """The standard worked example slide: 500 cells, tail factor 4.92."""
    return CategoryCounts((442, 40, 12, 3, 3))


def sham_table_csv() -> str:
    """The reconstructed sham table as canonical CSV text."""
    lines = [",".join(("label",) + tuple("ABCDE"))]
    for label, *counts in _SHAM_ROWS:
        lines.append(",".join([label, *map(str, counts)]))
    return "\n".join(lines) + "\n"


def reconstructed_sham_dataset() -> Dataset:
    """The reconstructed 12-condition duplicate table (see module docstring)."""
    return parse_dataset(sham_table_csv(), DEFAULT_SCALE)


def reconstructed_a_cell_values() -> tuple[int, ...]:
    """All 48 category-A counts: sham column first, then the exposed arm."""
    sham = tuple(row[1] for row in _SHAM_ROWS)
    return sham + _EXPOSED_A_VALUES


def sham_population() -> PopulationSpec:
    """The sham table pooled and rescaled to 10,000 cells."""
    return PopulationSpec((8992, 776, 202, 18, 12), 10_000)
