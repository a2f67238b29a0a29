"""rankshift: simulate selective research assessments and measure rank stability.

The package scores every publication of a corpus by a field- and
year-normalized citation index, replays a national assessment exercise in
which universities submit their best products in staff-proportional
numbers, and quantifies how university rankings move when the size of the
evaluated subset changes.
"""

__version__ = "0.1.0"

from .assessment import (
    DEFAULT_MIN_FTE,
    DEFAULT_PER_RESEARCHER,
    DEFAULT_WEIGHTS,
    AssessmentConfig,
    Ranking,
    RankingEntry,
    RepresentativenessReport,
    RepresentativenessRow,
    SelectionRate,
    assess_uda,
    eligible_universities,
    quartile_ratings,
    quartile_thresholds,
    rank_universities,
    representativeness_report,
    required_selection_count,
    run_assessment,
    select_best,
    university_score,
)
from .corpus import Corpus, CorpusIndex, Publication, StaffEntry, resolve_udas
from .corpus_io import load_corpus, save_corpus
from .errors import DataError
from .impact import (
    BaselineCell,
    BaselineTable,
    ImpactScores,
    article_impact_index,
    compute_baselines,
    score_corpus,
)
from .sensitivity import (
    ConvergencePoint,
    DecileMatrix,
    DerivedRate,
    RankShiftStats,
    Scenario,
    SweepResult,
    build_scenarios,
    compare_rankings,
    convergence_curve,
    decile_frequency,
    derive_uniform_rate,
    kendall_tau,
    preset_scenarios,
    run_sweep,
    spearman_rank_correlation,
    uniform_share_rates,
)
from .synthetic import SyntheticConfig, generate_synthetic

__all__ = [
    "__version__",
    "AssessmentConfig",
    "BaselineCell",
    "BaselineTable",
    "ConvergencePoint",
    "Corpus",
    "CorpusIndex",
    "DataError",
    "DecileMatrix",
    "DerivedRate",
    "DEFAULT_MIN_FTE",
    "DEFAULT_PER_RESEARCHER",
    "DEFAULT_WEIGHTS",
    "ImpactScores",
    "Publication",
    "Ranking",
    "RankingEntry",
    "RankShiftStats",
    "RepresentativenessReport",
    "RepresentativenessRow",
    "Scenario",
    "SelectionRate",
    "StaffEntry",
    "SweepResult",
    "SyntheticConfig",
    "article_impact_index",
    "assess_uda",
    "build_scenarios",
    "compare_rankings",
    "compute_baselines",
    "convergence_curve",
    "decile_frequency",
    "derive_uniform_rate",
    "eligible_universities",
    "generate_synthetic",
    "kendall_tau",
    "load_corpus",
    "preset_scenarios",
    "quartile_ratings",
    "quartile_thresholds",
    "rank_universities",
    "representativeness_report",
    "required_selection_count",
    "resolve_udas",
    "run_assessment",
    "run_sweep",
    "save_corpus",
    "score_corpus",
    "select_best",
    "spearman_rank_correlation",
    "uniform_share_rates",
    "university_score",
]
