"""Shared fixtures and corpus-building helpers."""

from __future__ import annotations

import random
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from rankshift import Corpus, Publication, StaffEntry

# Verdict lines collected by the acceptance gate (tests/test_acceptance.py),
# echoed after the run so they stay visible under output capture.
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance gate")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def single_uda_corpus(
    citations_by_university: dict[str, list[int]],
    fte: dict[str, float] | float = 10.0,
    uda_id: str = "AREA",
    year: int = 2000,
) -> Corpus:
    """One UDA, one category, one year; each university gets its own pubs."""
    category = f"{uda_id}-C1"
    publications = []
    staff = []
    for university_id in sorted(citations_by_university):
        for i, citations in enumerate(citations_by_university[university_id]):
            publications.append(
                Publication(
                    id=f"{university_id}-{i:03d}",
                    year=year,
                    citations=citations,
                    categories=(category,),
                    affiliations=((university_id, uda_id),),
                )
            )
        university_fte = fte[university_id] if isinstance(fte, dict) else fte
        staff.append(StaffEntry(university_id, uda_id, university_fte))
    return Corpus.build(publications, staff, {category: uda_id})


def random_tiny_corpus(
    rng: random.Random,
    n_universities: int | None = None,
    n_udas: int | None = None,
    fte_choices: tuple[float, ...] = (0.0, 3.0, 5.0, 8.0, 12.0),
) -> Corpus:
    """A small randomized corpus exercising ties, co-authorship and overrides."""
    if n_universities is None:
        n_universities = rng.randint(2, 6)
    universities = [f"U{i}" for i in range(1, n_universities + 1)]
    if n_udas is None:
        n_udas = rng.randint(1, 2)
    udas = [f"A{i}" for i in range(1, n_udas + 1)]
    category_map = {}
    for uda_id in udas:
        for j in range(1, rng.randint(1, 3) + 1):
            category_map[f"{uda_id}-C{j}"] = uda_id
    categories = sorted(category_map)
    years = [2000, 2001][: rng.randint(1, 2)]

    staff = []
    for university_id in universities:
        for uda_id in udas:
            # Some below the default threshold of 5, some far above.
            staff.append(StaffEntry(university_id, uda_id, rng.choice(list(fte_choices))))

    publications = []
    n_pubs = rng.randint(4, 20)
    for serial in range(n_pubs):
        author = rng.choice(universities)
        uda_id = rng.choice(udas)
        pub_categories = tuple(
            rng.sample(categories, rng.randint(1, min(2, len(categories))))
        )
        affiliations = [(author, uda_id)]
        if n_universities > 1 and rng.random() < 0.25:
            partner = rng.choice([u for u in universities if u != author])
            affiliations.append((partner, uda_id))
        override = rng.choice(udas) if rng.random() < 0.15 else None
        publications.append(
            Publication(
                id=f"P{serial:03d}",
                year=rng.choice(years),
                # Small integer citations make exact ties common on purpose.
                citations=rng.choice([0, 0, 1, 2, 3, 5, 8, 13, 40]),
                categories=pub_categories,
                affiliations=tuple(affiliations),
                uda_override=override,
            )
        )
    return Corpus.build(publications, staff, category_map)


@pytest.fixture
def tiny_corpus() -> Corpus:
    return single_uda_corpus(
        {
            "UA": [40, 12, 8, 3],
            "UB": [25, 9, 4, 1],
            "UC": [2, 1, 0, 0],
        },
        fte=8.0,
    )
