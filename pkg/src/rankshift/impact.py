"""Field- and year-normalized citation impact.

Raw citation counts are incomparable across disciplines and publication
years, so every product is scored *relative to its own reference set*: the
impact index of a publication is its citation count divided by the mean
citations of all publications from the same year carrying the same subject
category.  An index of 1.40 reads "cited 40% more than the typical product
of its year and field".

For publications with several categories the denominator is, by default,
the arithmetic mean of the per-category cell means (each field counts
equally); ``method="pooled"`` instead weights each cell by its article
count, i.e. uses the mean of the union reference set counted per cell.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

from .corpus import Corpus, Publication
from .errors import MissingBaselineError

METHODS = ("mean_of_means", "pooled")


@dataclass(frozen=True)
class BaselineCell:
    """Reference statistics for one (year, category) pair."""

    mean_citations: float
    article_count: int


class BaselineTable:
    """Per-(year, category) citation baselines for one corpus."""

    def __init__(self, cells: Mapping[tuple[int, str], BaselineCell]) -> None:
        self._cells = dict(cells)

    def cell(self, year: int, category: str) -> BaselineCell:
        try:
            return self._cells[(year, category)]
        except KeyError:
            raise MissingBaselineError(f"no baseline cell for year {year}, category {category!r}") from None

    def __len__(self) -> int:
        return len(self._cells)

    def items(self) -> list[tuple[tuple[int, str], BaselineCell]]:
        return sorted(self._cells.items())


def compute_baselines(corpus: Corpus) -> BaselineTable:
    """Mean citations per (year, category) cell.

    A publication with several categories contributes its full citation
    count to every one of its cells (whole counting), mirroring how the
    index's denominator treats those cells as separate reference sets.
    """
    totals: dict[tuple[int, str], int] = {}
    counts: dict[tuple[int, str], int] = {}
    for pub in corpus.publications:
        for category in pub.categories:
            key = (pub.year, category)
            totals[key] = totals.get(key, 0) + pub.citations
            counts[key] = counts.get(key, 0) + 1
    return BaselineTable(
        {key: BaselineCell(totals[key] / counts[key], counts[key]) for key in totals}
    )


def _expected_citations(publication: Publication, baselines: BaselineTable, method: str) -> float:
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")
    cells = [baselines.cell(publication.year, c) for c in publication.categories]
    if method == "mean_of_means":
        return math.fsum(c.mean_citations for c in cells) / len(cells)
    weight = sum(c.article_count for c in cells)
    return math.fsum(c.mean_citations * c.article_count for c in cells) / weight


def article_impact_index(
    publication: Publication,
    baselines: BaselineTable,
    method: str = "mean_of_means",
) -> float:
    """Citations of ``publication`` over its expected citations.

    Returns 0.0 when the reference mean itself is zero (an entirely uncited
    cell); such publications are flagged by :func:`score_corpus`.
    """
    expected = _expected_citations(publication, baselines, method)
    if expected == 0.0:
        return 0.0
    return publication.citations / expected


@dataclass(frozen=True)
class ImpactScores:
    """Impact index per publication id, plus the zero-baseline flags."""

    scores: Mapping[str, float]
    zero_baseline_ids: frozenset[str]
    method: str

    def __getitem__(self, publication_id: str) -> float:
        return self.scores[publication_id]

    def __len__(self) -> int:
        return len(self.scores)


def score_corpus(corpus: Corpus, method: str = "mean_of_means") -> ImpactScores:
    """Impact index for every publication in the corpus."""
    baselines = compute_baselines(corpus)
    scores: dict[str, float] = {}
    zero: set[str] = set()
    for pub in corpus.publications:
        expected = _expected_citations(pub, baselines, method)
        if expected == 0.0:
            zero.add(pub.id)
            scores[pub.id] = 0.0
        else:
            scores[pub.id] = pub.citations / expected
    return ImpactScores(scores=scores, zero_baseline_ids=frozenset(zero), method=method)
