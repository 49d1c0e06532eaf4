"""Battery orchestration and report emission.

``run_battery`` executes the full forensic pipeline over a dataset:
tail factors, terminal-digit uniformity tests, intra/inter-assay CVs,
the theoretical variance floor, and the honest-resampling comparison.
Red flags are machine-checkable predicates; every raised flag points at
the test outcome or numeric comparison that justifies it.

The structured report format is a versioned JSON schema (see
``docs/report-schema.md``); it keeps all numbers at full precision, so a
battery run is a pure function of (dataset bytes, config, seed) and two
identical runs emit byte-identical documents.  The text format rounds
for display only.
"""

from __future__ import annotations

import csv
import json
import math
import os
from dataclasses import dataclass
from typing import Optional, Union

from .dataset import (
    CATEGORIES,
    Dataset,
    DatasetValidationError,
    category_column,
    validate_dataset,
)
from .digits import (
    LAST,
    POSITIONS,
    TestOutcome,
    chi_square_uniform,
    digit_histogram,
    extract_digits,
    ks_uniform_digits,
)
from .dispersion import (
    DispersionSummary,
    HYPERGEOMETRIC,
    MULTINOMIAL,
    MomentEstimate,
    intra_assay_cv,
    inter_assay_cv,
    multinomial_tf_moments,
    pooled_variance_deficit_test,
)
from .simulate import (
    F_RATIO,
    Fig1Series,
    Fig2Variances,
    RNG_SCHEME,
    SimulationComparison,
    SimulationConfig,
    WITHOUT_REPLACEMENT,
    build_population,
    simulation_battery,
)
from .tailfactor import DuplicateSummary, dataset_tail_factors

SCHEMA_VERSION = 1

FLAG_DIGIT_CHISQ = "digit-nonuniform-chisq"
FLAG_DIGIT_KS = "digit-nonuniform-ks"
FLAG_INTER_BELOW_INTRA = "inter-below-intra"
FLAG_CV_BELOW_THEORETICAL = "cv-below-theoretical"
FLAG_VARIANCE_BELOW_SIMULATED = "variance-below-simulated"
ALL_FLAGS = frozenset(
    {
        FLAG_DIGIT_CHISQ,
        FLAG_DIGIT_KS,
        FLAG_INTER_BELOW_INTRA,
        FLAG_CV_BELOW_THEORETICAL,
        FLAG_VARIANCE_BELOW_SIMULATED,
    }
)

SEVERITY_NOTE = "note"
SEVERITY_SUSPICIOUS = "suspicious"
SEVERITY_SEVERE = "severe"

TEXT_FORMAT = "text"
STRUCTURED_FORMAT = "structured"


@dataclass(frozen=True)
class Verdict:
    """Severity classification of one raised flag."""

    flag_id: str
    severity: str
    evidence_pointer: str


@dataclass(frozen=True)
class ForensicReport:
    """Aggregated battery results, red flags, and plot-data payloads."""

    schema_version: int
    dataset_summary: tuple[DuplicateSummary, ...]
    digit_tests: tuple[TestOutcome, ...]
    dispersion: DispersionSummary
    theoretical_moments: MomentEstimate
    theoretical_test: TestOutcome
    theoretical_sd_ratio: Optional[float]
    simulation: SimulationComparison
    flags: tuple[str, ...]
    verdicts: tuple[Verdict, ...]
    config_echo: SimulationConfig
    alpha: float
    alpha_severe: float
    digit_column: str
    digit_position: str
    scale: tuple[float, ...]
    rng_scheme: str = RNG_SCHEME


def _severity(p: float, alpha: float, alpha_severe: float) -> str:
    if p <= alpha_severe:
        return SEVERITY_SEVERE
    if p <= alpha:
        return SEVERITY_SUSPICIOUS
    return SEVERITY_NOTE


def run_battery(
    d: Dataset,
    cfg: SimulationConfig,
    alpha: float = 0.05,
    *,
    alpha_severe: float = 0.01,
    digit_column: str = "A",
    digit_position: str = LAST,
    variance_test: str = F_RATIO,
) -> ForensicReport:
    """Run the complete forensic battery over ``d``.

    ``alpha`` controls when a flag is raised at all, ``alpha_severe`` when
    a raised flag is classified severe.  The digit battery targets one
    category column at one digit position (category A, last digit, by
    default).  Deterministic for a fixed ``cfg.seed``.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie strictly between 0 and 1")
    if not 0.0 < alpha_severe <= alpha:
        raise ValueError("alpha_severe must lie in (0, alpha]")
    if digit_column not in CATEGORIES:
        raise ValueError(f"digit_column must be one of {CATEGORIES}")
    if digit_position not in POSITIONS:
        raise ValueError(f"digit_position must be one of {POSITIONS}")
    issues = validate_dataset(d)
    if issues:
        raise DatasetValidationError(issues)

    summaries = tuple(dataset_tail_factors(d))

    # digit tests have minimum sample sizes; tables too small for one are
    # analysed without it rather than rejected outright
    sample = extract_digits(category_column(d, digit_column), digit_position)
    chi_outcome = None
    ks_outcome = None
    digit_tests = []
    if len(sample.digits) >= 10:
        raw = chi_square_uniform(digit_histogram(sample))
        chi_outcome = TestOutcome(
            raw.statistic, raw.df, raw.p_value,
            f"chi-square-uniform:{digit_column}:{digit_position}",
        )
        digit_tests.append(chi_outcome)
    if len(sample.digits) >= 5:
        raw = ks_uniform_digits(sample)
        ks_outcome = TestOutcome(
            raw.statistic, raw.df, raw.p_value,
            f"ks-uniform:{digit_column}:{digit_position}",
        )
        digit_tests.append(ks_outcome)
    digit_tests = tuple(digit_tests)

    intra = intra_assay_cv(summaries)
    inter = inter_assay_cv(summaries) if len(summaries) >= 2 else None
    dispersion = DispersionSummary(intra, inter, len(summaries))

    population = build_population(d, cfg.population_size)
    probs = tuple(c / population.size for c in population.counts)
    basis = HYPERGEOMETRIC if cfg.sampling == WITHOUT_REPLACEMENT else MULTINOMIAL
    moments = multinomial_tf_moments(
        probs,
        d.scale,
        d.slide_total,
        basis=basis,
        population_size=cfg.population_size,
    )
    theoretical_test = pooled_variance_deficit_test(summaries, moments.sd)
    pooled_sd = math.sqrt(math.fsum(s.sd * s.sd for s in summaries) / len(summaries))
    sd_ratio = moments.sd / pooled_sd if pooled_sd > 0.0 else None

    simulation = simulation_battery(d, cfg, variance_test=variance_test)

    flags: list[str] = []
    verdicts: list[Verdict] = []
    if chi_outcome is not None and chi_outcome.p_value <= alpha:
        flags.append(FLAG_DIGIT_CHISQ)
        verdicts.append(
            Verdict(
                FLAG_DIGIT_CHISQ,
                _severity(chi_outcome.p_value, alpha, alpha_severe),
                f"digit_tests[{digit_tests.index(chi_outcome)}]",
            )
        )
    if ks_outcome is not None and ks_outcome.p_value <= alpha:
        flags.append(FLAG_DIGIT_KS)
        verdicts.append(
            Verdict(
                FLAG_DIGIT_KS,
                _severity(ks_outcome.p_value, alpha, alpha_severe),
                f"digit_tests[{digit_tests.index(ks_outcome)}]",
            )
        )
    if inter is not None and inter < intra:
        flags.append(FLAG_INTER_BELOW_INTRA)
        verdicts.append(Verdict(FLAG_INTER_BELOW_INTRA, SEVERITY_NOTE, "dispersion"))
    if theoretical_test.p_value <= alpha:
        flags.append(FLAG_CV_BELOW_THEORETICAL)
        verdicts.append(
            Verdict(
                FLAG_CV_BELOW_THEORETICAL,
                _severity(theoretical_test.p_value, alpha, alpha_severe),
                "theoretical_test",
            )
        )
    smaller = [
        simulation.fig2_data.reported[c] < simulation.fig2_data.simulated[c]
        for c in range(5)
    ]
    rejecting = [
        smaller[c] and simulation.per_category_variance_tests[c].p_value <= alpha
        for c in range(5)
    ]
    if sum(rejecting) >= 3:
        severe_count = sum(
            1
            for c in range(5)
            if smaller[c] and simulation.per_category_variance_tests[c].p_value <= alpha_severe
        )
        flags.append(FLAG_VARIANCE_BELOW_SIMULATED)
        verdicts.append(
            Verdict(
                FLAG_VARIANCE_BELOW_SIMULATED,
                SEVERITY_SEVERE if severe_count >= 3 else SEVERITY_SUSPICIOUS,
                "simulation.per_category_variance_tests",
            )
        )

    return ForensicReport(
        schema_version=SCHEMA_VERSION,
        dataset_summary=summaries,
        digit_tests=digit_tests,
        dispersion=dispersion,
        theoretical_moments=moments,
        theoretical_test=theoretical_test,
        theoretical_sd_ratio=sd_ratio,
        simulation=simulation,
        flags=tuple(flags),
        verdicts=tuple(verdicts),
        config_echo=cfg,
        alpha=alpha,
        alpha_severe=alpha_severe,
        digit_column=digit_column,
        digit_position=digit_position,
        scale=d.scale.weights,
    )


def has_severe_flags(report: ForensicReport) -> bool:
    return any(v.severity == SEVERITY_SEVERE for v in report.verdicts)


# --- serialization ---------------------------------------------------------


def _outcome_dict(t: TestOutcome) -> dict:
    df: Union[float, list, None]
    if isinstance(t.df, tuple):
        df = list(t.df)
    else:
        df = t.df
    # strict JSON cannot carry infinities (unbounded variance ratios)
    statistic: Union[float, str] = t.statistic
    if math.isinf(t.statistic):
        statistic = "inf" if t.statistic > 0 else "-inf"
    return {"test_name": t.test_name, "statistic": statistic, "df": df, "p_value": t.p_value}


def _outcome_from(d: dict) -> TestOutcome:
    df = d["df"]
    if isinstance(df, list):
        df = tuple(df)
    statistic = d["statistic"]
    if isinstance(statistic, str):
        statistic = float(statistic)
    return TestOutcome(statistic, df, d["p_value"], d["test_name"])


def report_to_dict(r: ForensicReport) -> dict:
    """Plain-dict form of a report, with stable key order."""
    return {
        "schema_version": r.schema_version,
        "rng_scheme": r.rng_scheme,
        "alpha": r.alpha,
        "alpha_severe": r.alpha_severe,
        "digit_column": r.digit_column,
        "digit_position": r.digit_position,
        "scale": list(r.scale),
        "config": {
            "n_points": r.config_echo.n_points,
            "cells_per_slide": r.config_echo.cells_per_slide,
            "seed": r.config_echo.seed,
            "replicates": r.config_echo.replicates,
            "sampling": r.config_echo.sampling,
            "population_size": r.config_echo.population_size,
        },
        "dataset_summary": [
            {
                "label": s.label,
                "tf_a": s.tf_a,
                "tf_b": s.tf_b,
                "mean": s.mean,
                "sd": s.sd,
                "cv": s.cv,
            }
            for s in r.dataset_summary
        ],
        "digit_tests": [_outcome_dict(t) for t in r.digit_tests],
        "dispersion": {
            "intra_cv": r.dispersion.intra_cv,
            "inter_cv": r.dispersion.inter_cv,
            "n_pairs": r.dispersion.n_pairs,
        },
        "theoretical_moments": {
            "mean": r.theoretical_moments.mean,
            "sd": r.theoretical_moments.sd,
            "basis": r.theoretical_moments.basis,
        },
        "theoretical_test": _outcome_dict(r.theoretical_test),
        "theoretical_sd_ratio": r.theoretical_sd_ratio,
        "simulation": {
            "sim_intra_cv": r.simulation.sim_intra_cv,
            "sim_inter_cv": r.simulation.sim_inter_cv,
            "sim_tf_mean": r.simulation.sim_tf_mean,
            "per_category_variance_tests": [
                _outcome_dict(t) for t in r.simulation.per_category_variance_tests
            ],
            "per_category_mean_tests": [
                _outcome_dict(t) for t in r.simulation.per_category_mean_tests
            ],
            "fig1_data": {
                "labels": list(r.simulation.fig1_data.labels),
                "reported_a": list(r.simulation.fig1_data.reported_a),
                "reported_b": list(r.simulation.fig1_data.reported_b),
                "simulated_a": list(r.simulation.fig1_data.simulated_a),
                "simulated_b": list(r.simulation.fig1_data.simulated_b),
            },
            "fig2_data": {
                "categories": list(r.simulation.fig2_data.categories),
                "reported": list(r.simulation.fig2_data.reported),
                "simulated": list(r.simulation.fig2_data.simulated),
            },
        },
        "flags": list(r.flags),
        "verdicts": [
            {"flag_id": v.flag_id, "severity": v.severity, "evidence_pointer": v.evidence_pointer}
            for v in r.verdicts
        ],
    }


def report_from_dict(d: dict) -> ForensicReport:
    """Rebuild a :class:`ForensicReport` from its plain-dict form."""
    sim = d["simulation"]
    return ForensicReport(
        schema_version=d["schema_version"],
        dataset_summary=tuple(
            DuplicateSummary(s["label"], s["tf_a"], s["tf_b"], s["mean"], s["sd"], s["cv"])
            for s in d["dataset_summary"]
        ),
        digit_tests=tuple(_outcome_from(t) for t in d["digit_tests"]),
        dispersion=DispersionSummary(
            d["dispersion"]["intra_cv"], d["dispersion"]["inter_cv"], d["dispersion"]["n_pairs"]
        ),
        theoretical_moments=MomentEstimate(
            d["theoretical_moments"]["mean"],
            d["theoretical_moments"]["sd"],
            d["theoretical_moments"]["basis"],
        ),
        theoretical_test=_outcome_from(d["theoretical_test"]),
        theoretical_sd_ratio=d["theoretical_sd_ratio"],
        simulation=SimulationComparison(
            sim_intra_cv=sim["sim_intra_cv"],
            sim_inter_cv=sim["sim_inter_cv"],
            sim_tf_mean=sim["sim_tf_mean"],
            per_category_variance_tests=tuple(
                _outcome_from(t) for t in sim["per_category_variance_tests"]
            ),
            per_category_mean_tests=tuple(
                _outcome_from(t) for t in sim["per_category_mean_tests"]
            ),
            fig1_data=Fig1Series(
                labels=tuple(sim["fig1_data"]["labels"]),
                reported_a=tuple(sim["fig1_data"]["reported_a"]),
                reported_b=tuple(sim["fig1_data"]["reported_b"]),
                simulated_a=tuple(sim["fig1_data"]["simulated_a"]),
                simulated_b=tuple(sim["fig1_data"]["simulated_b"]),
            ),
            fig2_data=Fig2Variances(
                categories=tuple(sim["fig2_data"]["categories"]),
                reported=tuple(sim["fig2_data"]["reported"]),
                simulated=tuple(sim["fig2_data"]["simulated"]),
            ),
        ),
        flags=tuple(d["flags"]),
        verdicts=tuple(
            Verdict(v["flag_id"], v["severity"], v["evidence_pointer"]) for v in d["verdicts"]
        ),
        config_echo=SimulationConfig(
            n_points=d["config"]["n_points"],
            cells_per_slide=d["config"]["cells_per_slide"],
            seed=d["config"]["seed"],
            replicates=d["config"]["replicates"],
            sampling=d["config"]["sampling"],
            population_size=d["config"]["population_size"],
        ),
        alpha=d["alpha"],
        alpha_severe=d["alpha_severe"],
        digit_column=d["digit_column"],
        digit_position=d["digit_position"],
        scale=tuple(d["scale"]),
        rng_scheme=d["rng_scheme"],
    )


def report_from_json(data: Union[bytes, str]) -> ForensicReport:
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    return report_from_dict(json.loads(data))


def _pct(x: Optional[float]) -> str:
    return "n/a" if x is None else f"{100.0 * x:.1f}%"


def _format_text(r: ForensicReport) -> str:
    lines = []
    lines.append("replicate count-table forensics report")
    lines.append("=" * 38)
    lines.append(
        f"dataset: {len(r.dataset_summary)} duplicate points, "
        f"{r.config_echo.cells_per_slide} cells per slide"
    )
    lines.append(f"scale: {', '.join(f'{w:g}' for w in r.scale)}")
    lines.append("")
    lines.append("tail factors (mean / sd per duplicate):")
    for s in r.dataset_summary:
        lines.append(
            f"  {s.label:<14} {s.tf_a:6.2f} {s.tf_b:6.2f}   mean {s.mean:5.2f}  "
            f"sd {s.sd:5.2f}  cv {_pct(s.cv)}"
        )
    grand = math.fsum(s.mean for s in r.dataset_summary) / len(r.dataset_summary)
    lines.append(f"grand mean tail factor: {grand:.2f}")
    lines.append("")
    lines.append(f"intra-assay CV: {_pct(r.dispersion.intra_cv)}")
    lines.append(f"inter-assay CV: {_pct(r.dispersion.inter_cv)}")
    lines.append("")
    for t in r.digit_tests:
        df = "" if t.df is None else f", df={t.df:g}"
        lines.append(f"digit test {t.test_name}: statistic {t.statistic:.3f}{df}, p={t.p_value:.4g}")
    lines.append("")
    lines.append(
        f"theoretical tail-factor sd ({r.theoretical_moments.basis}): "
        f"{r.theoretical_moments.sd:.4f} around mean {r.theoretical_moments.mean:.2f}"
    )
    ratio = "n/a" if r.theoretical_sd_ratio is None else f"{r.theoretical_sd_ratio:.1f}x"
    lines.append(f"observed duplicate spread is below the floor by a factor of {ratio}")
    lines.append(
        f"variance-deficit test: statistic {r.theoretical_test.statistic:.3f}, "
        f"df={r.theoretical_test.df:g}, p={r.theoretical_test.p_value:.4g}"
    )
    lines.append("")
    lines.append(
        f"simulation (seed {r.config_echo.seed}, {r.config_echo.replicates} replicates, "
        f"{r.config_echo.sampling}, population {r.config_echo.population_size}):"
    )
    lines.append(
        f"  simulated intra-assay CV: {_pct(r.simulation.sim_intra_cv)}   "
        f"inter-assay CV: {_pct(r.simulation.sim_inter_cv)}   "
        f"tail-factor mean: {r.simulation.sim_tf_mean:.2f}"
    )
    lines.append("  per-category variance tests (reported vs simulated):")
    for c, t in enumerate(r.simulation.per_category_variance_tests):
        rep = r.simulation.fig2_data.reported[c]
        sim = r.simulation.fig2_data.simulated[c]
        lines.append(
            f"    {CATEGORIES[c]}: reported var {rep:8.3f}  simulated var {sim:8.3f}  "
            f"F={t.statistic:7.2f}  p={t.p_value:.4g}"
        )
    lines.append("  per-category mean tests:")
    for c, t in enumerate(r.simulation.per_category_mean_tests):
        lines.append(f"    {CATEGORIES[c]}: t={t.statistic:7.3f}  p={t.p_value:.4g}")
    lines.append("")
    if r.verdicts:
        lines.append("red flags:")
        for v in r.verdicts:
            lines.append(f"  [{v.severity}] {v.flag_id}  (evidence: {v.evidence_pointer})")
    else:
        lines.append("no red flags raised")
    lines.append("")
    return "\n".join(lines)


def emit_report(r: ForensicReport, format: str = TEXT_FORMAT) -> bytes:
    """Render a report as bytes, either human-readable or structured JSON."""
    if format == STRUCTURED_FORMAT:
        return (json.dumps(report_to_dict(r), indent=2, allow_nan=False) + "\n").encode("utf-8")
    if format == TEXT_FORMAT:
        return _format_text(r).encode("utf-8")
    raise ValueError(f"unknown format {format!r}")


def emit_plot_data(r: ForensicReport, out_dir: str) -> list[str]:
    """Write fig1.csv / fig2.csv plot data into ``out_dir``.

    fig1.csv: per-point reported and simulated tail factors plus means.
    fig2.csv: per-category slide-count variance for categories A..D,
    reported and simulated, one row per (category, source).
    """
    if not os.path.isdir(out_dir):
        raise NotADirectoryError(f"not a writable directory: {out_dir!r}")
    fig1_path = os.path.join(out_dir, "fig1.csv")
    fig2_path = os.path.join(out_dir, "fig2.csv")
    f1 = r.simulation.fig1_data
    with open(fig1_path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(
            [
                "point",
                "label",
                "reported_tf_a",
                "reported_tf_b",
                "reported_mean",
                "simulated_tf_a",
                "simulated_tf_b",
                "simulated_mean",
            ]
        )
        for i, label in enumerate(f1.labels):
            writer.writerow(
                [
                    i + 1,
                    label,
                    repr(f1.reported_a[i]),
                    repr(f1.reported_b[i]),
                    repr((f1.reported_a[i] + f1.reported_b[i]) / 2.0),
                    repr(f1.simulated_a[i]),
                    repr(f1.simulated_b[i]),
                    repr((f1.simulated_a[i] + f1.simulated_b[i]) / 2.0),
                ]
            )
    f2 = r.simulation.fig2_data
    with open(fig2_path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["category", "source", "variance"])
        for c, name in enumerate(f2.categories):
            if name not in ("A", "B", "C", "D"):
                continue
            writer.writerow([name, "reported", repr(f2.reported[c])])
            writer.writerow([name, "simulated", repr(f2.simulated[c])])
    return [fig1_path, fig2_path]
