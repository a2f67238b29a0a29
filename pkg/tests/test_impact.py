"""Citation baselines and the impact index."""

import math

import pytest

from rankshift import (
    Corpus,
    Publication,
    StaffEntry,
    article_impact_index,
    compute_baselines,
    score_corpus,
)
from rankshift.errors import MissingBaselineError

from conftest import single_uda_corpus


def corpus_from_citations(citations_by_cell):
    """citations_by_cell: {(year, category): [citations, ...]}"""
    publications = []
    categories = sorted({cat for _, cat in citations_by_cell})
    serial = 0
    for (year, category), values in sorted(citations_by_cell.items()):
        for value in values:
            serial += 1
            publications.append(
                Publication(
                    id=f"P{serial:03d}",
                    year=year,
                    citations=value,
                    categories=(category,),
                    affiliations=(("U1", "X"),),
                )
            )
    return Corpus.build(
        publications,
        [StaffEntry("U1", "X", 5.0)],
        {category: "X" for category in categories},
    )


class TestBaselines:
    def test_cell_means(self):
        corpus = corpus_from_citations({(2000, "X-C1"): [0, 10, 20], (2001, "X-C1"): [4]})
        table = compute_baselines(corpus)
        assert table.cell(2000, "X-C1").mean_citations == 10.0
        assert table.cell(2000, "X-C1").article_count == 3
        assert table.cell(2001, "X-C1").mean_citations == 4.0

    def test_years_are_separate_cells(self):
        corpus = corpus_from_citations({(2000, "X-C1"): [10], (2001, "X-C1"): [30]})
        table = compute_baselines(corpus)
        assert table.cell(2000, "X-C1").mean_citations == 10.0
        assert table.cell(2001, "X-C1").mean_citations == 30.0

    def test_multi_category_pub_counts_in_every_cell(self):
        pub = Publication(
            id="P1",
            year=2000,
            citations=6,
            categories=("X-C1", "X-C2"),
            affiliations=(("U1", "X"),),
        )
        corpus = Corpus.build([pub], [StaffEntry("U1", "X", 5.0)], {"X-C1": "X", "X-C2": "X"})
        table = compute_baselines(corpus)
        assert table.cell(2000, "X-C1").mean_citations == 6.0
        assert table.cell(2000, "X-C2").mean_citations == 6.0

    def test_missing_cell_raises(self):
        corpus = corpus_from_citations({(2000, "X-C1"): [1]})
        with pytest.raises(MissingBaselineError, match="2001"):
            compute_baselines(corpus).cell(2001, "X-C1")


class TestImpactIndex:
    def test_index_is_citations_over_cell_mean(self):
        # a publication cited 40% more than its reference mean scores 1.40
        corpus = corpus_from_citations({(2000, "X-C1"): [14, 6]})
        table = compute_baselines(corpus)
        pub = corpus.publications[0]
        assert pub.citations == 14
        assert article_impact_index(pub, table) == pytest.approx(1.4)

    def test_multi_category_mean_of_means(self):
        pubs = [
            Publication(id="P1", year=2000, citations=30, categories=("X-C1",), affiliations=(("U1", "X"),)),
            Publication(id="P2", year=2000, citations=10, categories=("X-C2",), affiliations=(("U1", "X"),)),
            Publication(id="P3", year=2000, citations=10, categories=("X-C2",), affiliations=(("U1", "X"),)),
            Publication(
                id="P4", year=2000, citations=20, categories=("X-C1", "X-C2"), affiliations=(("U1", "X"),)
            ),
        ]
        corpus = Corpus.build(pubs, [StaffEntry("U1", "X", 5.0)], {"X-C1": "X", "X-C2": "X"})
        table = compute_baselines(corpus)
        # cells: C1 mean (30+20)/2 = 25 over 2 articles, C2 mean (10+10+20)/3 over 3
        target = corpus.publications[3]
        mean_of_means = (25.0 + 40.0 / 3.0) / 2.0
        assert article_impact_index(target, table) == pytest.approx(20.0 / mean_of_means)
        pooled = (25.0 * 2 + (40.0 / 3.0) * 3) / 5.0
        assert article_impact_index(target, table, "pooled") == pytest.approx(20.0 / pooled)

    def test_single_category_methods_agree(self):
        corpus = corpus_from_citations({(2000, "X-C1"): [3, 7, 11]})
        table = compute_baselines(corpus)
        for pub in corpus.publications:
            assert article_impact_index(pub, table) == article_impact_index(pub, table, "pooled")

    def test_unknown_method_rejected(self):
        corpus = corpus_from_citations({(2000, "X-C1"): [1]})
        table = compute_baselines(corpus)
        with pytest.raises(ValueError, match="method"):
            article_impact_index(corpus.publications[0], table, "geometric")


class TestScoreCorpus:
    def test_scores_every_publication(self):
        corpus = single_uda_corpus({"UA": [5, 3], "UB": [8]})
        scores = score_corpus(corpus)
        assert len(scores) == 3
        assert set(scores.scores) == {p.id for p in corpus.publications}

    def test_zero_baseline_flagged_and_scored_zero(self):
        corpus = corpus_from_citations({(2000, "X-C1"): [0, 0, 0], (2000, "X-C2"): [5]})
        scores = score_corpus(corpus)
        uncited_cell_ids = {p.id for p in corpus.publications if p.categories == ("X-C1",)}
        assert scores.zero_baseline_ids == uncited_cell_ids
        for pub_id in uncited_cell_ids:
            assert scores[pub_id] == 0.0

    def test_zero_citations_in_live_cell_not_flagged(self):
        corpus = corpus_from_citations({(2000, "X-C1"): [0, 10]})
        scores = score_corpus(corpus)
        assert scores.zero_baseline_ids == frozenset()
        assert scores["P001"] == 0.0
        assert scores["P002"] == 2.0

    def test_mean_of_index_is_one_single_category(self):
        # normalization: within one cell the average index is exactly 1
        corpus = corpus_from_citations({(2000, "X-C1"): [0, 1, 5, 14]})
        scores = score_corpus(corpus)
        assert math.fsum(scores[p.id] for p in corpus.publications) / 4 == pytest.approx(1.0)
