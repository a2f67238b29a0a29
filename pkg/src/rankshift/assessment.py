"""The assessment exercise: selection, quartile rating, university ranking.

The pipeline mirrors a national evaluation round within one disciplinary
area (UDA):

1. universities below the staff threshold are excluded (eligibility);
2. each university must submit a number of products proportional to its
   research staff (``required_selection_count``), and submits its best ones
   by impact index (``select_best``);
3. all submitted *instances* nationwide form one pool, cut at the pool's
   impact quartiles; instances in the top quartile get the highest weight
   and so on down (``quartile_ratings``).  A product co-submitted by two
   universities is rated once per submission;
4. a university's score is the mean weight of its submissions, and
   universities are ranked by score with competition ranking (tied scores
   share the lowest rank, as in "1, 1, 3").

Scores are averages of a small weight set, so exact ties across
universities are common and meaningful; sums use ``math.fsum`` to keep
them independent of summission order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .corpus import Corpus, CorpusIndex
from .errors import EmptyPoolError, InvalidConfigError, NoSelectionError
from .impact import METHODS, ImpactScores, score_corpus
from .rounding import ROUNDING_MODES, round_count, round_half_up

RATE_KINDS = ("per_researcher", "share_of_output")

DEFAULT_WEIGHTS = (1.0, 0.8, 0.6, 0.2)
DEFAULT_MIN_FTE = 5.0
DEFAULT_PER_RESEARCHER = 0.25


@dataclass(frozen=True)
class SelectionRate:
    """How many products a university must submit.

    ``per_researcher`` rates are direct: required = fte x value.
    ``share_of_output`` rates fix the share of the UDA's total production to
    evaluate; the per-researcher rate is derived from the UDA totals, except
    at share 1.0 where every university submits its entire portfolio.
    """

    kind: str
    value: float

    def __post_init__(self) -> None:
        if self.kind not in RATE_KINDS:
            raise InvalidConfigError(f"unknown rate kind {self.kind!r}; expected one of {RATE_KINDS}")
        if not self.value > 0:
            raise InvalidConfigError(f"rate value must be > 0, got {self.value!r}")
        if self.kind == "share_of_output" and self.value > 1:
            raise InvalidConfigError(f"share_of_output must be in (0, 1], got {self.value!r}")

    @staticmethod
    def per_researcher(value: float) -> "SelectionRate":
        return SelectionRate("per_researcher", value)

    @staticmethod
    def share_of_output(value: float) -> "SelectionRate":
        return SelectionRate("share_of_output", value)


@dataclass(frozen=True)
class AssessmentConfig:
    """Tunable parameters of one assessment run.

    ``rate`` may be a single :class:`SelectionRate` applied to every UDA or
    a per-UDA mapping.  ``eligibility_min_fte`` is inclusive: a university
    with exactly the threshold staff participates.
    """

    rate: SelectionRate | Mapping[str, SelectionRate] = field(
        default_factory=lambda: SelectionRate.per_researcher(DEFAULT_PER_RESEARCHER)
    )
    eligibility_min_fte: float = DEFAULT_MIN_FTE
    rounding: str = "half_up"
    weights: tuple[float, float, float, float] = DEFAULT_WEIGHTS
    impact_method: str = "mean_of_means"

    def __post_init__(self) -> None:
        if self.eligibility_min_fte < 0:
            raise InvalidConfigError("eligibility_min_fte must be >= 0")
        if self.rounding not in ROUNDING_MODES:
            raise InvalidConfigError(
                f"unknown rounding mode {self.rounding!r}; expected one of {ROUNDING_MODES}"
            )
        if len(self.weights) != 4 or not all(math.isfinite(w) for w in self.weights):
            raise InvalidConfigError("weights must be four finite reals, top tier first")
        if self.impact_method not in METHODS:
            raise InvalidConfigError(f"unknown impact method {self.impact_method!r}")

    def rate_for(self, uda_id: str) -> SelectionRate:
        if isinstance(self.rate, SelectionRate):
            return self.rate
        try:
            return self.rate[uda_id]
        except KeyError:
            raise InvalidConfigError(f"no selection rate configured for UDA {uda_id!r}") from None


@dataclass(frozen=True)
class RankingEntry:
    university_id: str
    score: float
    rank: int
    n_selected: int
    n_required: int


@dataclass(frozen=True)
class Ranking:
    """Competition-ranked universities of one UDA.

    ``entries`` is ordered best first; tied scores share the lowest rank of
    their block and the next block resumes at its positional rank.
    ``unranked`` lists eligible universities that rated no products at all
    (empty portfolio or a zero requirement); they are reported, not scored.
    """

    uda_id: str
    entries: tuple[RankingEntry, ...]
    unranked: tuple[str, ...] = ()

    def rank_of(self, university_id: str) -> int:
        for entry in self.entries:
            if entry.university_id == university_id:
                return entry.rank
        raise KeyError(university_id)

    def university_ids(self) -> tuple[str, ...]:
        return tuple(e.university_id for e in self.entries)


def required_selection_count(
    fte: float,
    rate: SelectionRate,
    rounding: str = "half_up",
    *,
    uda_total_pubs: int | None = None,
    uda_total_fte: float | None = None,
) -> int:
    """Products a university with ``fte`` staff must submit under ``rate``.

    For ``share_of_output`` rates the UDA totals must be supplied; the share
    is first converted into products to select nationwide, then spread over
    staff.  Note that share 1.0 is handled upstream (full portfolios) since
    it cannot be expressed through a staff-proportional quota.
    """
    if fte < 0:
        raise InvalidConfigError(f"fte must be >= 0, got {fte!r}")
    if rate.kind == "per_researcher":
        return round_count(fte * rate.value, rounding)
    if uda_total_pubs is None or uda_total_fte is None:
        raise InvalidConfigError("share_of_output rates need uda_total_pubs and uda_total_fte")
    if not uda_total_fte > 0:
        raise InvalidConfigError("share_of_output rates need uda_total_fte > 0")
    pubs_to_select = round_count(rate.value * uda_total_pubs, rounding)
    return round_count(fte * (pubs_to_select / uda_total_fte), rounding)


def eligible_universities(
    index: CorpusIndex, uda_id: str, min_fte: float = DEFAULT_MIN_FTE
) -> tuple[str, ...]:
    """Universities admitted to the UDA's exercise (inclusive threshold)."""
    return tuple(
        u for u in index.uda_universities.get(uda_id, ()) if index.fte[(u, uda_id)] >= min_fte
    )


def select_best(
    index: CorpusIndex,
    scores: ImpactScores,
    university_id: str,
    uda_id: str,
    n_required: int,
) -> tuple[str, ...]:
    """The university's top ``n_required`` products by impact index.

    Ties are broken by ascending publication id so selection is
    deterministic.  When the portfolio is smaller than the requirement the
    whole portfolio is returned.
    """
    portfolio = index.portfolio(university_id, uda_id)
    ordered = sorted(portfolio, key=lambda pub: (-scores[pub.id], pub.id))
    return tuple(pub.id for pub in ordered[: max(0, n_required)])


def quartile_thresholds(values: Sequence[float]) -> tuple[float, float, float]:
    """(p25, p50, p75) of ``values`` by the nearest-rank-from-below rule.

    With values sorted ascending, the p-th percentile is the element at
    0-based position ``floor(p * n)`` (capped at the last element).  This
    makes exactly one quarter of an evenly divisible, all-distinct pool fall
    in each tier under the inclusive-upper comparisons used below.
    """
    if not values:
        raise EmptyPoolError("cannot take percentiles of an empty pool")
    ordered = sorted(values)
    n = len(ordered)

    def at(p: float) -> float:
        return ordered[min(n - 1, math.floor(p * n))]

    return at(0.25), at(0.50), at(0.75)


def quartile_ratings(
    pool: Sequence[tuple[tuple[str, str], float]],
    weights: tuple[float, float, float, float] = DEFAULT_WEIGHTS,
) -> dict[tuple[str, str], float]:
    """Weight per selection instance, cut at the pool's impact quartiles.

    ``pool`` holds ``((university_id, publication_id), impact)`` pairs: the
    same publication submitted by two universities appears twice and is
    rated independently each time.  Comparisons are inclusive upward:
    impact >= p75 earns ``weights[0]``, impact >= p50 earns ``weights[1]``,
    impact >= p25 earns ``weights[2]``, anything below earns ``weights[3]``.
    """
    if not pool:
        raise EmptyPoolError("cannot rate an empty pool")
    p25, p50, p75 = quartile_thresholds([impact for _, impact in pool])
    ratings: dict[tuple[str, str], float] = {}
    for instance, impact in pool:
        if impact >= p75:
            weight = weights[0]
        elif impact >= p50:
            weight = weights[1]
        elif impact >= p25:
            weight = weights[2]
        else:
            weight = weights[3]
        ratings[instance] = weight
    return ratings


def university_score(ratings: Iterable[float]) -> float:
    """Mean weight of a university's rated submissions."""
    values = list(ratings)
    if not values:
        raise NoSelectionError("university has no rated submissions")
    return math.fsum(values) / len(values)


def rank_universities(
    uda_id: str,
    scores: Mapping[str, float],
    *,
    n_selected: Mapping[str, int] | None = None,
    n_required: Mapping[str, int] | None = None,
    unranked: tuple[str, ...] = (),
) -> Ranking:
    """Competition ranking: ties share the lowest rank of their block."""
    if not scores:
        raise InvalidConfigError("at least one scored university is required")
    n_selected = n_selected or {}
    n_required = n_required or {}
    ordered = sorted(scores.items(), key=lambda item: (-item[1], item[0]))
    entries: list[RankingEntry] = []
    for position, (university_id, score) in enumerate(ordered):
        if position > 0 and score == ordered[position - 1][1]:
            rank = entries[-1].rank
        else:
            rank = position + 1
        entries.append(
            RankingEntry(
                university_id=university_id,
                score=score,
                rank=rank,
                n_selected=n_selected.get(university_id, 0),
                n_required=n_required.get(university_id, 0),
            )
        )
    return Ranking(uda_id=uda_id, entries=tuple(entries), unranked=unranked)


def required_counts(
    index: CorpusIndex,
    uda_id: str,
    rate: SelectionRate,
    rounding: str = "half_up",
    universities: Sequence[str] | None = None,
) -> dict[str, int]:
    """Per-university requirements for one UDA under ``rate``.

    Share 1.0 means "evaluate everything": each university's requirement is
    its own portfolio size, bypassing the staff-proportional quota.
    """
    if universities is None:
        universities = index.uda_universities.get(uda_id, ())
    if rate.kind == "share_of_output" and rate.value == 1.0:
        return {u: len(index.portfolio(u, uda_id)) for u in universities}
    total_pubs = index.uda_production.get(uda_id, 0)
    total_fte = index.uda_fte.get(uda_id, 0.0)
    if rate.kind == "share_of_output" and universities and not total_fte > 0:
        raise InvalidConfigError(
            f"UDA {uda_id!r} has zero total FTE; a share-of-output rate "
            "cannot be spread over staff"
        )
    return {
        u: required_selection_count(
            index.fte[(u, uda_id)],
            rate,
            rounding,
            uda_total_pubs=total_pubs,
            uda_total_fte=total_fte,
        )
        for u in universities
    }


def assess_uda(
    index: CorpusIndex,
    scores: ImpactScores,
    uda_id: str,
    rate: SelectionRate,
    config: AssessmentConfig = AssessmentConfig(),
) -> Ranking:
    """Run the full exercise for one UDA and return its ranking."""
    eligible = eligible_universities(index, uda_id, config.eligibility_min_fte)
    requirements = required_counts(index, uda_id, rate, config.rounding, eligible)
    selections: dict[str, tuple[str, ...]] = {}
    pool: list[tuple[tuple[str, str], float]] = []
    for university_id in eligible:
        chosen = select_best(index, scores, university_id, uda_id, requirements[university_id])
        selections[university_id] = chosen
        pool.extend(((university_id, pub_id), scores[pub_id]) for pub_id in chosen)

    if not pool:
        return Ranking(uda_id=uda_id, entries=(), unranked=tuple(eligible))

    ratings = quartile_ratings(pool, config.weights)
    university_scores: dict[str, float] = {}
    unranked: list[str] = []
    for university_id in eligible:
        chosen = selections[university_id]
        if chosen:
            university_scores[university_id] = university_score(
                ratings[(university_id, pub_id)] for pub_id in chosen
            )
        else:
            unranked.append(university_id)
    return rank_universities(
        uda_id,
        university_scores,
        n_selected={u: len(sel) for u, sel in selections.items()},
        n_required=requirements,
        unranked=tuple(unranked),
    )


def run_assessment(
    corpus: Corpus,
    config: AssessmentConfig = AssessmentConfig(),
    *,
    scores: ImpactScores | None = None,
    index: CorpusIndex | None = None,
) -> dict[str, Ranking]:
    """Rankings for every UDA of the corpus.

    ``scores`` and ``index`` may be supplied to reuse work across runs (a
    scenario sweep scores the corpus once); they must belong to ``corpus``.
    """
    index = index if index is not None else CorpusIndex(corpus)
    scores = scores if scores is not None else score_corpus(corpus, config.impact_method)
    return {
        uda_id: assess_uda(index, scores, uda_id, config.rate_for(uda_id), config)
        for uda_id in corpus.udas
        if index.uda_universities.get(uda_id)
    }


def share_percent(part: float, whole: float) -> float | None:
    """``part / whole`` as a percentage, half-up to 0.1; None when undefined."""
    if whole == 0:
        return None
    return round_half_up(100.0 * part / whole, 1)


@dataclass(frozen=True)
class RepresentativenessRow:
    """One line of the representativeness table.

    ``university_id`` is None on UDA aggregate rows; the grand-total row
    additionally uses uda_id ``"*"``.  ``share_pct`` is selected/total and
    ``sampling_rate_pct`` is required/total, both in percent at 0.1
    precision.
    """

    uda_id: str
    university_id: str | None
    fte: float
    n_required: int
    n_selected: int
    total_pubs: int
    sampling_rate_pct: float | None
    share_pct: float | None

    @staticmethod
    def from_counts(
        uda_id: str,
        university_id: str | None,
        fte: float,
        n_required: int,
        n_selected: int,
        total_pubs: int,
    ) -> "RepresentativenessRow":
        return RepresentativenessRow(
            uda_id=uda_id,
            university_id=university_id,
            fte=fte,
            n_required=n_required,
            n_selected=n_selected,
            total_pubs=total_pubs,
            sampling_rate_pct=share_percent(n_required, total_pubs),
            share_pct=share_percent(n_selected, total_pubs),
        )


TOTAL_ROW_ID = "*"


@dataclass(frozen=True)
class RepresentativenessReport:
    """How much of total production the exercise actually evaluates.

    Products are counted whole: a co-authored product counts once per
    submitting university in the numerators, and UDA totals count distinct
    products of the area.  All staff entries appear, with no eligibility
    filter; representativeness describes the selection rule itself.
    """

    rows: tuple[RepresentativenessRow, ...]
    counting: str = "whole"

    def aggregate(self, uda_id: str) -> RepresentativenessRow:
        for row in self.rows:
            if row.uda_id == uda_id and row.university_id is None:
                return row
        raise KeyError(uda_id)

    @property
    def total(self) -> RepresentativenessRow:
        return self.aggregate(TOTAL_ROW_ID)


def representativeness_report(
    corpus: Corpus,
    config: AssessmentConfig = AssessmentConfig(),
    *,
    index: CorpusIndex | None = None,
) -> RepresentativenessReport:
    """Selected-versus-total production per UDA and per university."""
    index = index if index is not None else CorpusIndex(corpus)
    rows: list[RepresentativenessRow] = []
    grand = {"fte": 0.0, "required": 0, "selected": 0, "total": 0}
    for uda_id in corpus.udas:
        universities = index.uda_universities.get(uda_id, ())
        if not universities and index.uda_production.get(uda_id, 0) == 0:
            continue
        requirements = required_counts(index, uda_id, config.rate_for(uda_id), config.rounding)
        uda_rows: list[RepresentativenessRow] = []
        agg_fte, agg_required, agg_selected = 0.0, 0, 0
        for university_id in universities:
            fte = index.fte[(university_id, uda_id)]
            stock = len(index.portfolio(university_id, uda_id))
            required = requirements[university_id]
            selected = min(required, stock)
            agg_fte += fte
            agg_required += required
            agg_selected += selected
            uda_rows.append(
                RepresentativenessRow.from_counts(
                    uda_id, university_id, fte, required, selected, stock
                )
            )
        total_pubs = index.uda_production.get(uda_id, 0)
        rows.append(
            RepresentativenessRow.from_counts(
                uda_id, None, agg_fte, agg_required, agg_selected, total_pubs
            )
        )
        rows.extend(uda_rows)
        grand["fte"] += agg_fte
        grand["required"] += agg_required
        grand["selected"] += agg_selected
        grand["total"] += total_pubs
    rows.append(
        RepresentativenessRow.from_counts(
            TOTAL_ROW_ID, None, grand["fte"], grand["required"], grand["selected"], grand["total"]
        )
    )
    return RepresentativenessReport(rows=tuple(rows))
