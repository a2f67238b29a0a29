"""Scenario sweeps and rank-stability statistics.

Given a corpus and one disciplinary area, this module derives uniform
"share of total output" selection rates, replays the assessment under a
list of such scenarios, and quantifies how much the resulting rankings
move: rank correlation and shift statistics between scenario pairs, decile
frequency matrices across all scenarios, and convergence curves against
the full-production benchmark (share 1.0), including a linear cost index.
"""

from __future__ import annotations

import math
import statistics
import warnings
from dataclasses import dataclass
from typing import Mapping, Sequence

from .assessment import (
    DEFAULT_PER_RESEARCHER,
    AssessmentConfig,
    Ranking,
    SelectionRate,
    assess_uda,
    rank_universities,
)
from .corpus import Corpus, CorpusIndex
from .errors import (
    EmptyIntersectionError,
    InvalidConfigError,
    MismatchedSetError,
    UnknownIdError,
)
from .impact import ImpactScores, score_corpus
from .rounding import percent_display, ratio_display, round_count

CORRELATION_METHODS = ("spearman", "kendall")


# --------------------------------------------------------------------------
# Uniform-share rate derivation


@dataclass(frozen=True)
class DerivedRate:
    """A share-of-output target translated into a per-researcher rate."""

    uda_id: str | None
    share: float
    total_pubs: int
    total_fte: float
    pubs_to_select: int
    rate: SelectionRate

    @property
    def staff_per_product(self) -> float:
        """Researchers per selected product; the published "1 : x" figure."""
        if self.pubs_to_select == 0:
            return math.inf
        return self.total_fte / self.pubs_to_select

    @property
    def display(self) -> str:
        return ratio_display(self.staff_per_product)


def derive_uniform_rate(
    total_pubs: int,
    total_fte: float,
    share: float,
    rounding: str = "half_up",
    uda_id: str | None = None,
) -> DerivedRate:
    """Turn "evaluate ``share`` of ``total_pubs``" into a staff quota."""
    if not 0 < share <= 1:
        raise InvalidConfigError(f"share must be in (0, 1], got {share!r}")
    if not total_fte > 0:
        raise InvalidConfigError(f"UDA {uda_id!r} has no staff; cannot derive a per-researcher rate")
    if total_pubs <= 0:
        raise InvalidConfigError(f"UDA {uda_id!r} has no publications; cannot derive a rate")
    pubs_to_select = round_count(share * total_pubs, rounding)
    per_researcher = pubs_to_select / total_fte
    return DerivedRate(
        uda_id=uda_id,
        share=share,
        total_pubs=total_pubs,
        total_fte=total_fte,
        pubs_to_select=pubs_to_select,
        rate=SelectionRate.per_researcher(per_researcher) if per_researcher > 0
        else SelectionRate.share_of_output(share),
    )


def _as_index(corpus: Corpus | CorpusIndex) -> CorpusIndex:
    return corpus if isinstance(corpus, CorpusIndex) else CorpusIndex(corpus)


def uniform_share_rates(
    corpus: Corpus | CorpusIndex, target_share: float, rounding: str = "half_up"
) -> dict[str, DerivedRate]:
    """Per-UDA rates that evaluate the same share of output everywhere."""
    index = _as_index(corpus)
    out: dict[str, DerivedRate] = {}
    for uda_id in index.corpus.udas:
        out[uda_id] = derive_uniform_rate(
            index.uda_production[uda_id],
            index.uda_fte[uda_id],
            target_share,
            rounding,
            uda_id,
        )
    return out


# --------------------------------------------------------------------------
# Scenarios


@dataclass(frozen=True)
class Scenario:
    """One configuration of the exercise within a sweep.

    ``share`` is the nominal share of the UDA's output to evaluate;
    ``derived_per_researcher`` and ``pubs_to_select`` are filled when the
    rate was derived from that share.  ``display`` is the "1 : x"
    staff-per-product figure.
    """

    label: str
    uda_id: str
    rate: SelectionRate
    share: float | None = None
    derived_per_researcher: float | None = None
    pubs_to_select: int | None = None
    display: str = ""

    def __post_init__(self) -> None:
        if self.derived_per_researcher is not None and not self.derived_per_researcher > 0:
            raise InvalidConfigError("derived_per_researcher must be > 0 when filled")


def build_scenarios(
    corpus: Corpus | CorpusIndex,
    uda_id: str,
    shares: Sequence[float],
    rounding: str = "half_up",
    per_researcher_overrides: Mapping[float, float] | None = None,
) -> list[Scenario]:
    """One scenario per share, rates derived from the UDA's own totals.

    ``per_researcher_overrides`` maps a share to a fixed staff rate for
    scenarios that are *defined* by their staff rate and merely labelled
    with the share of output they happen to reach (the realized share
    depends on the corpus at hand, the label keeps the nominal figure).
    """
    index = _as_index(corpus)
    overrides = per_researcher_overrides or {}
    scenarios: list[Scenario] = []
    for share in shares:
        label = percent_display(share)
        if share in overrides:
            value = overrides[share]
            scenarios.append(
                Scenario(
                    label=label,
                    uda_id=uda_id,
                    rate=SelectionRate.per_researcher(value),
                    share=share,
                    display=ratio_display(1.0 / value),
                )
            )
            continue
        derived = derive_uniform_rate(
            index.uda_production[uda_id], index.uda_fte[uda_id], share, rounding, uda_id
        )
        scenarios.append(
            Scenario(
                label=label,
                uda_id=uda_id,
                rate=SelectionRate.share_of_output(share),
                share=share,
                derived_per_researcher=derived.rate.value
                if derived.rate.kind == "per_researcher"
                else None,
                pubs_to_select=derived.pubs_to_select,
                display=derived.display,
            )
        )
    return scenarios


# Published sweep definitions.  The first scenario of the physics sweep is
# defined by the baseline staff rate (one product per four researchers);
# its label is the share of output that rule reached.
PHYSICS_SWEEP_SHARES = (0.046, 0.089, 0.10, 0.20, 0.30, 0.40, 0.50, 0.60)
BIOLOGY_SWEEP_SHARES = (0.089, 0.10, 0.15, 0.20, 0.30, 0.40, 0.50, 0.60)
SWEEP_PRESETS: dict[str, dict] = {
    "physics-sweep": {
        "shares": PHYSICS_SWEEP_SHARES,
        "per_researcher_overrides": {0.046: DEFAULT_PER_RESEARCHER},
    },
    "biology-sweep": {
        "shares": BIOLOGY_SWEEP_SHARES,
        "per_researcher_overrides": {},
    },
}


def preset_scenarios(
    corpus: Corpus | CorpusIndex, uda_id: str, preset: str, rounding: str = "half_up"
) -> list[Scenario]:
    """Scenario list for a named sweep preset."""
    try:
        params = SWEEP_PRESETS[preset]
    except KeyError:
        raise InvalidConfigError(
            f"unknown sweep preset {preset!r}; expected one of {tuple(SWEEP_PRESETS)}"
        ) from None
    return build_scenarios(
        corpus,
        uda_id,
        params["shares"],
        rounding,
        per_researcher_overrides=params["per_researcher_overrides"],
    )


def run_scenario(
    index: CorpusIndex,
    scores: ImpactScores,
    scenario: Scenario,
    config: AssessmentConfig = AssessmentConfig(),
) -> Ranking:
    """Assess the scenario's UDA under the scenario's rate."""
    return assess_uda(index, scores, scenario.uda_id, scenario.rate, config)


# --------------------------------------------------------------------------
# Rank correlation


def _average_ranks(values: Sequence[float]) -> list[float]:
    # Ascending 1-based ranks; tied values share the mean of their positions.
    n = len(values)
    order = sorted(range(n), key=values.__getitem__)
    ranks = [0.0] * n
    i = 0
    while i < n:
        j = i
        while j + 1 < n and values[order[j + 1]] == values[order[i]]:
            j += 1
        average = (i + j) / 2 + 1
        for k in range(i, j + 1):
            ranks[order[k]] = average
        i = j + 1
    return ranks


def spearman_rank_correlation(x: Sequence[float], y: Sequence[float]) -> float:
    """Spearman's rho with average-rank tie handling.

    Degenerate inputs follow the "no disagreement" convention: two constant
    vectors correlate at 1.0, exactly one constant vector gives 0.0.
    """
    if len(x) != len(y):
        raise ValueError(f"length mismatch: {len(x)} vs {len(y)}")
    if not x:
        raise ValueError("cannot correlate empty sequences")
    rx = _average_ranks(x)
    ry = _average_ranks(y)
    if rx == ry:
        # Identical orderings must correlate at exactly 1.0 (the benchmark
        # self-comparison asserts this), so skip the float arithmetic.
        return 1.0
    n = len(rx)
    mean_x = math.fsum(rx) / n
    mean_y = math.fsum(ry) / n
    sxx = math.fsum((a - mean_x) ** 2 for a in rx)
    syy = math.fsum((b - mean_y) ** 2 for b in ry)
    if sxx == 0.0 and syy == 0.0:
        return 1.0
    if sxx == 0.0 or syy == 0.0:
        return 0.0
    sxy = math.fsum((a - mean_x) * (b - mean_y) for a, b in zip(rx, ry))
    return max(-1.0, min(1.0, sxy / math.sqrt(sxx * syy)))


def kendall_tau(x: Sequence[float], y: Sequence[float]) -> float:
    """Kendall's tau-b (tie-adjusted), O(n^2), fine for ranking sizes."""
    if len(x) != len(y):
        raise ValueError(f"length mismatch: {len(x)} vs {len(y)}")
    if not x:
        raise ValueError("cannot correlate empty sequences")
    n = len(x)
    concordant = discordant = ties_x = ties_y = 0
    for i in range(n):
        for j in range(i + 1, n):
            dx = x[i] - x[j]
            dy = y[i] - y[j]
            if dx == 0 and dy == 0:
                continue
            if dx == 0:
                ties_x += 1
            elif dy == 0:
                ties_y += 1
            elif (dx > 0) == (dy > 0):
                concordant += 1
            else:
                discordant += 1
    pairs = n * (n - 1) // 2
    denom_x = pairs - sum(
        t * (t - 1) // 2 for t in _tie_sizes(x)
    )
    denom_y = pairs - sum(
        t * (t - 1) // 2 for t in _tie_sizes(y)
    )
    if denom_x == 0 and denom_y == 0:
        return 1.0
    if denom_x == 0 or denom_y == 0:
        return 0.0
    return (concordant - discordant) / math.sqrt(denom_x * denom_y)


def _tie_sizes(values: Sequence[float]) -> list[int]:
    counts: dict[float, int] = {}
    for v in values:
        counts[v] = counts.get(v, 0) + 1
    return [c for c in counts.values() if c > 1]


# --------------------------------------------------------------------------
# Ranking comparison


@dataclass(frozen=True)
class RankShiftStats:
    """How two rankings of (mostly) the same universities differ.

    Shift statistics are computed over all shared universities including
    the unmoved ones; the ``*_changed`` variants restrict to universities
    whose rank actually moved (None when nothing moved).
    """

    method: str
    n_total: int
    n_changed: int
    correlation: float
    mean_shift: float
    median_shift: float
    max_shift: int
    mean_shift_changed: float | None
    median_shift_changed: float | None


def compare_rankings(r1: Ranking, r2: Ranking, method: str = "spearman") -> RankShiftStats:
    """Rank correlation and shift statistics over shared universities."""
    if method not in CORRELATION_METHODS:
        raise InvalidConfigError(
            f"unknown correlation method {method!r}; expected one of {CORRELATION_METHODS}"
        )
    ranks1 = {e.university_id: e.rank for e in r1.entries}
    ranks2 = {e.university_id: e.rank for e in r2.entries}
    shared = sorted(set(ranks1) & set(ranks2))
    if not shared:
        raise EmptyIntersectionError("the rankings share no universities")
    if set(ranks1) != set(ranks2):
        warnings.warn(
            f"rankings cover different university sets; comparing the {len(shared)} shared ones",
            stacklevel=2,
        )
    x = [float(ranks1[u]) for u in shared]
    y = [float(ranks2[u]) for u in shared]
    correlate = spearman_rank_correlation if method == "spearman" else kendall_tau
    shifts = [abs(a - b) for a, b in zip(x, y)]
    changed = [s for s in shifts if s > 0]
    return RankShiftStats(
        method=method,
        n_total=len(shared),
        n_changed=len(changed),
        correlation=correlate(x, y),
        mean_shift=math.fsum(shifts) / len(shifts),
        median_shift=float(statistics.median(shifts)),
        max_shift=int(max(shifts)),
        mean_shift_changed=math.fsum(changed) / len(changed) if changed else None,
        median_shift_changed=float(statistics.median(changed)) if changed else None,
    )


# --------------------------------------------------------------------------
# Decile frequency


def decile_of(rank: int, n: int) -> int:
    """Decile (1..10) of a rank among ``n``: ceil(10 * rank / n)."""
    if not 1 <= rank <= n:
        raise ValueError(f"rank {rank} out of range for {n} universities")
    return (10 * rank + n - 1) // n


@dataclass(frozen=True)
class DecileRow:
    university_id: str
    counts: tuple[int, ...]  # occupancy of deciles 1..10 across scenarios
    modal_decile: int
    mean_decile: float


@dataclass(frozen=True)
class DecileMatrix:
    """Decile occupancy of each university across a sweep's scenarios."""

    uda_id: str
    n_scenarios: int
    rows: tuple[DecileRow, ...]


def decile_frequency(rankings: Sequence[Ranking]) -> DecileMatrix:
    """Count, per university, how often it lands in each ranking decile.

    All rankings must cover the same university set.  Rows are ordered by
    modal decile, then mean decile, then id, so habitual top performers
    appear first.
    """
    if not rankings:
        raise ValueError("at least one ranking is required")
    base = set(rankings[0].university_ids())
    for ranking in rankings[1:]:
        if set(ranking.university_ids()) != base:
            raise MismatchedSetError("rankings cover different university sets")
    if not base:
        raise MismatchedSetError("rankings contain no ranked universities")

    deciles: dict[str, list[int]] = {u: [] for u in base}
    for ranking in rankings:
        n = len(ranking.entries)
        for entry in ranking.entries:
            deciles[entry.university_id].append(decile_of(entry.rank, n))

    rows: list[DecileRow] = []
    for university_id in sorted(base):
        values = deciles[university_id]
        counts = [0] * 10
        for d in values:
            counts[d - 1] += 1
        modal = max(range(1, 11), key=lambda d: (counts[d - 1], -d))
        rows.append(
            DecileRow(
                university_id=university_id,
                counts=tuple(counts),
                modal_decile=modal,
                mean_decile=math.fsum(values) / len(values),
            )
        )
    rows.sort(key=lambda row: (row.modal_decile, row.mean_decile, row.university_id))
    return DecileMatrix(uda_id=rankings[0].uda_id, n_scenarios=len(rankings), rows=tuple(rows))


# --------------------------------------------------------------------------
# Convergence against the full-production benchmark


@dataclass(frozen=True)
class ConvergencePoint:
    share: float
    correlation_to_benchmark: float
    median_shift_to_benchmark: float
    cost_index: float
    pubs_to_select: int


def convergence_curve(
    corpus: Corpus | CorpusIndex,
    uda_id: str,
    shares: Sequence[float],
    cost_per_product: float = 1.0,
    *,
    config: AssessmentConfig = AssessmentConfig(),
    scores: ImpactScores | None = None,
    method: str = "spearman",
) -> list[ConvergencePoint]:
    """Ranking agreement with the evaluate-everything benchmark per share.

    The benchmark is the share-1.0 run; its own point (if requested) is an
    exact (1.0, 0.0) by self-comparison.  ``cost_index`` scales linearly
    with the number of products evaluated.
    """
    if not cost_per_product > 0:
        raise InvalidConfigError(f"cost_per_product must be > 0, got {cost_per_product!r}")
    index = _as_index(corpus)
    scores = scores if scores is not None else score_corpus(index.corpus, config.impact_method)
    benchmark = assess_uda(index, scores, uda_id, SelectionRate.share_of_output(1.0), config)
    points: list[ConvergencePoint] = []
    for share in shares:
        if share == 1.0:
            ranking = benchmark
            pubs_to_select = index.uda_production[uda_id]
        else:
            derived = derive_uniform_rate(
                index.uda_production[uda_id], index.uda_fte[uda_id], share, config.rounding, uda_id
            )
            ranking = assess_uda(index, scores, uda_id, derived.rate, config)
            pubs_to_select = derived.pubs_to_select
        stats = compare_rankings(ranking, benchmark, method)
        points.append(
            ConvergencePoint(
                share=share,
                correlation_to_benchmark=stats.correlation,
                median_shift_to_benchmark=stats.median_shift,
                cost_index=cost_per_product * pubs_to_select,
                pubs_to_select=pubs_to_select,
            )
        )
    return points


# --------------------------------------------------------------------------
# Sweep bundle


@dataclass(frozen=True)
class SweepResult:
    """Everything a scenario sweep produces for one UDA."""

    uda_id: str
    scenarios: tuple[Scenario, ...]
    rankings: Mapping[str, Ranking]  # keyed by scenario label, plus "reference"
    reference_label: str
    comparisons: Mapping[str, RankShiftStats]  # scenario label -> vs reference
    decile_matrix: DecileMatrix | None
    convergence: tuple[ConvergencePoint, ...]


def _restrict_ranking(ranking: Ranking, keep: set[str]) -> Ranking:
    kept = {e.university_id: e.score for e in ranking.entries if e.university_id in keep}
    meta = {e.university_id: e for e in ranking.entries}
    restricted = rank_universities(
        ranking.uda_id,
        kept,
        n_selected={u: meta[u].n_selected for u in kept},
        n_required={u: meta[u].n_required for u in kept},
    )
    return restricted


def run_sweep(
    corpus: Corpus | CorpusIndex,
    uda_id: str,
    shares: Sequence[float] | None = None,
    pairwise: bool = True,
    *,
    scenarios: Sequence[Scenario] | None = None,
    preset: str | None = None,
    config: AssessmentConfig = AssessmentConfig(),
    reference_rate: SelectionRate = SelectionRate.per_researcher(DEFAULT_PER_RESEARCHER),
    method: str = "spearman",
    cost_per_product: float = 1.0,
) -> SweepResult:
    """Replay the exercise across scenarios and bundle the stability stats.

    Scenarios come from ``scenarios``, a ``preset`` name, or a plain list of
    ``shares`` (exactly one source).  Every scenario ranking is compared
    against the reference-rate ranking when ``pairwise`` is set.  The decile
    matrix covers universities ranked in *every* scenario; when scenarios
    disagree (tiny shares can leave small universities without a quota) the
    others are dropped with a warning and ranks are recomputed within the
    common set.
    """
    index = _as_index(corpus)
    if uda_id not in index.corpus.udas:
        raise UnknownIdError(f"unknown UDA {uda_id!r}")
    sources = sum(s is not None for s in (scenarios, preset, shares))
    if sources != 1:
        raise InvalidConfigError("provide exactly one of scenarios, preset, or shares")
    if scenarios is not None:
        scenario_list = list(scenarios)
    elif preset is not None:
        scenario_list = preset_scenarios(index, uda_id, preset, config.rounding)
    else:
        scenario_list = build_scenarios(index, uda_id, shares, config.rounding)
    if not scenario_list:
        raise InvalidConfigError("at least one scenario is required")
    if any(s.uda_id != uda_id for s in scenario_list):
        raise InvalidConfigError("all scenarios must target the swept UDA")
    labels = [s.label for s in scenario_list]
    if len(set(labels)) != len(labels):
        raise InvalidConfigError("scenario labels must be unique")

    scores = score_corpus(index.corpus, config.impact_method)
    reference_label = "reference"
    reference = assess_uda(index, scores, uda_id, reference_rate, config)
    rankings: dict[str, Ranking] = {reference_label: reference}
    for scenario in scenario_list:
        rankings[scenario.label] = run_scenario(index, scores, scenario, config)

    comparisons: dict[str, RankShiftStats] = {}
    if pairwise:
        for scenario in scenario_list:
            comparisons[scenario.label] = compare_rankings(
                rankings[scenario.label], reference, method
            )

    scenario_rankings = [rankings[label] for label in labels]
    common = set(scenario_rankings[0].university_ids())
    for ranking in scenario_rankings[1:]:
        common &= set(ranking.university_ids())
    decile_matrix: DecileMatrix | None = None
    if common:
        full = set().union(*(set(r.university_ids()) for r in scenario_rankings))
        if full != common:
            warnings.warn(
                f"decile matrix restricted to {len(common)} universities ranked in every scenario",
                stacklevel=2,
            )
            scenario_rankings = [_restrict_ranking(r, common) for r in scenario_rankings]
        decile_matrix = decile_frequency(scenario_rankings)

    curve_shares = [s.share for s in scenario_list if s.share is not None]
    convergence = tuple(
        convergence_curve(
            index,
            uda_id,
            curve_shares,
            cost_per_product,
            config=config,
            scores=scores,
            method=method,
        )
    )
    return SweepResult(
        uda_id=uda_id,
        scenarios=tuple(scenario_list),
        rankings=rankings,
        reference_label=reference_label,
        comparisons=comparisons,
        decile_matrix=decile_matrix,
        convergence=convergence,
    )
