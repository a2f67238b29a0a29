"""Synthetic corpus generation."""

import math

import numpy as np
import pytest

from rankshift import CorpusIndex, SyntheticConfig, generate_synthetic
from rankshift.errors import InvalidConfigError


def config(**overrides):
    base = dict(
        seed=42,
        n_universities=8,
        udas={"PHYS": 3.0, "BIO": 1.5},
        staff_range=(5.0, 30.0),
        citation_shape=1.0,
        years=(2001, 2002, 2003),
        categories_per_uda=3,
    )
    base.update(overrides)
    return SyntheticConfig(**base)


class TestConfigValidation:
    def test_rejects_bad_values(self):
        with pytest.raises(InvalidConfigError):
            config(n_universities=0)
        with pytest.raises(InvalidConfigError):
            config(udas={})
        with pytest.raises(InvalidConfigError):
            config(udas={"PHYS": 0.0})
        with pytest.raises(InvalidConfigError):
            config(staff_range=(10.0, 5.0))
        with pytest.raises(InvalidConfigError):
            config(citation_shape=0.0)
        with pytest.raises(InvalidConfigError):
            config(years=())


class TestDeterminism:
    def test_same_seed_same_corpus(self):
        assert generate_synthetic(config()) == generate_synthetic(config())

    def test_different_seed_different_corpus(self):
        assert generate_synthetic(config()) != generate_synthetic(config(seed=43))


class TestStructure:
    def test_staff_covers_every_pair(self):
        corpus = generate_synthetic(config())
        assert len(corpus.staff) == 8 * 2
        lo, hi = 5.0, 30.0
        for entry in corpus.staff:
            assert lo <= entry.fte <= hi

    def test_volume_tracks_fertility_and_staff(self):
        corpus = generate_synthetic(config(seed=7))
        index = CorpusIndex(corpus)
        for uda_id, fertility in (("PHYS", 3.0), ("BIO", 1.5)):
            expected = index.uda_fte[uda_id] * fertility
            # Poisson totals: allow 5 sigma around the expectation.
            assert abs(index.uda_production[uda_id] - expected) < 5 * math.sqrt(expected) + 5

    def test_categories_belong_to_their_uda(self):
        corpus = generate_synthetic(config())
        for category, uda_id in corpus.category_map.items():
            assert category.startswith(f"{uda_id}-C")

    def test_mixtures_present(self):
        corpus = generate_synthetic(config(seed=11, n_universities=12))
        pubs = corpus.publications
        multi_category = [p for p in pubs if len(p.categories) > 1]
        cross_uda = [p for p in pubs if p.uda_override is not None]
        co_authored = [p for p in pubs if len(p.affiliations) > 1]
        assert 0.1 * len(pubs) < len(multi_category) < 0.35 * len(pubs)
        assert 0 < len(cross_uda) < 0.1 * len(pubs)
        assert 0.04 * len(pubs) < len(co_authored) < 0.2 * len(pubs)
        # cross-UDA second categories pin production to the home area
        for pub in cross_uda:
            assert pub.uda_override == pub.affiliations[0][1]

    def test_single_university_has_no_coauthors(self):
        corpus = generate_synthetic(config(n_universities=1, udas={"PHYS": 2.0}))
        assert all(len(p.affiliations) == 1 for p in corpus.publications)


class TestCitationDistribution:
    def test_small_shape_gives_right_skew(self):
        corpus = generate_synthetic(
            config(seed=5, n_universities=20, udas={"PHYS": 4.0}, citation_shape=0.8)
        )
        citations = np.array([p.citations for p in corpus.publications], dtype=float)
        assert len(citations) > 1000
        centered = citations - citations.mean()
        skewness = (centered**3).mean() / (centered**2).mean() ** 1.5
        assert skewness > 1.0
        assert np.median(citations) < citations.mean()

    def test_larger_shape_less_dispersed(self):
        def spread(shape):
            corpus = generate_synthetic(
                config(seed=5, n_universities=15, udas={"PHYS": 4.0}, citation_shape=shape)
            )
            values = np.array([p.citations for p in corpus.publications], dtype=float)
            return values.std() / values.mean()

        assert spread(0.7) > spread(3.0)

    def test_citations_non_negative_everywhere(self):
        corpus = generate_synthetic(config(seed=13, citation_shape=0.5))
        assert all(p.citations >= 0 for p in corpus.publications)
