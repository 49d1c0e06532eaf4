"""cometforensics: statistical forensics for replicate categorical-count data.

Detects the fingerprints of fabricated duplicate count tables: skewed
terminal digits, replicate variation below the sampling-noise floor,
inter-assay variation smaller than intra-assay variation, and per-category
count variances that an honest re-draw of the same population cannot
reproduce.
"""

from .dataset import (
    CATEGORIES,
    CalibrationScale,
    CategoryCounts,
    Dataset,
    DatasetFormatError,
    DatasetValidationError,
    DEFAULT_SCALE,
    DuplicatePoint,
    ValidationIssue,
    category_column,
    parse_dataset,
    serialize_dataset,
    validate_dataset,
)
from .digits import (
    DigitSample,
    LAST,
    SECOND_TO_LAST,
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
    variance_permutation_test,
    variance_ratio_test,
    welch_t_test,
)
from .report import (
    ALL_FLAGS,
    FLAG_CV_BELOW_THEORETICAL,
    FLAG_DIGIT_CHISQ,
    FLAG_DIGIT_KS,
    FLAG_INTER_BELOW_INTRA,
    FLAG_VARIANCE_BELOW_SIMULATED,
    ForensicReport,
    Verdict,
    emit_plot_data,
    emit_report,
    has_severe_flags,
    report_from_json,
    run_battery,
)
from .simulate import (
    Fig1Series,
    Fig2Variances,
    PopulationSpec,
    RNG_SCHEME,
    SimulationComparison,
    SimulationConfig,
    WITH_REPLACEMENT,
    WITHOUT_REPLACEMENT,
    build_population,
    draw_slide,
    population_from_counts,
    simulate_dataset,
    simulation_battery,
    slide_generator,
)
from .special import chi_square_cdf, chi_square_sf, kolmogorov_cdf, kolmogorov_sf
from .tailfactor import DuplicateSummary, dataset_tail_factors, duplicate_summary, tail_factor

__version__ = "0.1.0"
