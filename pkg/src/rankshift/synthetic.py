"""Seeded synthetic corpora with realistic disciplinary citation skew.

Citation counts follow a discretized log-normal family: a product from
baseline cell (year, category) authored at university ``u`` receives
``floor(exp(mu_cell + q_u + sigma * z))`` citations, with ``z`` standard
normal and ``sigma = 1 / citation_shape``.  Smaller shape values therefore
give heavier right skew.  Cell levels ``mu_cell`` and institution effects
``q_u`` are themselves seeded normal draws, so fields differ in citation
habits and universities genuinely differ in typical impact (otherwise
rankings would be pure noise and stability analyses meaningless).

All randomness derives from one PCG64 stream consumed in a fixed order, so a
corpus is a pure function of its config.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .corpus import Corpus, Publication, StaffEntry
from .errors import InvalidConfigError

# Spread of per-(year, category) citation levels around ln 5.
_CELL_MU_BASE = math.log(5.0)
_CELL_MU_SIGMA = 0.3
# Spread of persistent per-(university, uda) quality effects.
_INSTITUTION_SIGMA = 0.35
# Mixture knobs for realistic structure.
_P_SECOND_CATEGORY = 0.20
_P_CROSS_UDA = 0.10  # of the second categories, how many sit in another UDA
_P_COAUTHORED = 0.10
# floor(exp(x)) with x capped so citation counts stay in sane integer range
_MAX_EXPONENT = 21.0


@dataclass(frozen=True)
class SyntheticConfig:
    """Parameters of a synthetic corpus.

    ``udas`` maps each UDA id to its fertility: the expected number of
    products per FTE over the whole observation window.  ``staff_range``
    bounds the uniform FTE draw per (university, uda).
    """

    seed: int
    n_universities: int
    udas: Mapping[str, float]
    staff_range: tuple[float, float] = (5.0, 60.0)
    citation_shape: float = 1.0
    years: tuple[int, ...] = (2001, 2002, 2003)
    categories_per_uda: int = 3

    def __post_init__(self) -> None:
        if self.n_universities < 1:
            raise InvalidConfigError("n_universities must be >= 1")
        if not self.udas:
            raise InvalidConfigError("at least one UDA is required")
        for uda_id, fertility in self.udas.items():
            if not fertility > 0:
                raise InvalidConfigError(f"fertility for {uda_id!r} must be > 0, got {fertility!r}")
        lo, hi = self.staff_range
        if not (0 <= lo <= hi):
            raise InvalidConfigError(f"staff_range must satisfy 0 <= lo <= hi, got {self.staff_range!r}")
        if not self.citation_shape > 0:
            raise InvalidConfigError(f"citation_shape must be > 0, got {self.citation_shape!r}")
        if not self.years:
            raise InvalidConfigError("at least one year is required")
        if self.categories_per_uda < 1:
            raise InvalidConfigError("categories_per_uda must be >= 1")


def _university_ids(n: int) -> list[str]:
    width = max(2, len(str(n)))
    return [f"U{i:0{width}d}" for i in range(1, n + 1)]


def generate_synthetic(config: SyntheticConfig) -> Corpus:
    """Generate a corpus deterministically from ``config``."""
    rng = np.random.default_rng(config.seed)
    universities = _university_ids(config.n_universities)
    uda_ids = sorted(config.udas)

    category_map: dict[str, str] = {}
    uda_categories: dict[str, list[str]] = {}
    for uda_id in uda_ids:
        cats = [f"{uda_id}-C{j}" for j in range(1, config.categories_per_uda + 1)]
        uda_categories[uda_id] = cats
        for cat in cats:
            category_map[cat] = uda_id

    # Draw order is part of the contract: cell effects, then per-university
    # blocks of (institution effect, fte, product attributes).
    years = tuple(config.years)
    cell_mu: dict[tuple[int, str], float] = {}
    for year in sorted(set(years)):
        for uda_id in uda_ids:
            for cat in uda_categories[uda_id]:
                cell_mu[(year, cat)] = _CELL_MU_BASE + _CELL_MU_SIGMA * rng.standard_normal()

    sigma = 1.0 / config.citation_shape
    lo, hi = config.staff_range
    staff: list[StaffEntry] = []
    publications: list[Publication] = []
    serial = 0

    for university_id in universities:
        for uda_id in uda_ids:
            quality = _INSTITUTION_SIGMA * rng.standard_normal()
            fte = round(float(rng.uniform(lo, hi)), 1)
            staff.append(StaffEntry(university_id, uda_id, fte))

            n_products = int(rng.poisson(fte * config.udas[uda_id]))
            if n_products == 0:
                continue
            cats = uda_categories[uda_id]
            year_idx = rng.integers(0, len(years), size=n_products)
            primary_idx = rng.integers(0, len(cats), size=n_products)
            extra_draw = rng.random(size=n_products)
            cross_draw = rng.random(size=n_products)
            second_idx = rng.integers(0, max(1, len(cats) - 1), size=n_products)
            other_udas = [a for a in uda_ids if a != uda_id]
            cross_uda_idx = rng.integers(0, max(1, len(other_udas)), size=n_products)
            coauthor_draw = rng.random(size=n_products)
            coauthor_idx = rng.integers(0, max(1, config.n_universities - 1), size=n_products)
            z = rng.standard_normal(size=n_products)

            for k in range(n_products):
                serial += 1
                year = years[int(year_idx[k])]
                primary = cats[int(primary_idx[k])]
                categories = [primary]
                override = None
                if extra_draw[k] < _P_SECOND_CATEGORY:
                    if other_udas and cross_draw[k] < _P_CROSS_UDA:
                        foreign = other_udas[int(cross_uda_idx[k])]
                        categories.append(uda_categories[foreign][0])
                        # Content belongs to the home area even though one
                        # category points elsewhere.
                        override = uda_id
                    elif len(cats) > 1:
                        alternatives = [c for c in cats if c != primary]
                        categories.append(alternatives[int(second_idx[k])])

                affiliations = [(university_id, uda_id)]
                if config.n_universities > 1 and coauthor_draw[k] < _P_COAUTHORED:
                    partners = [u for u in universities if u != university_id]
                    affiliations.append((partners[int(coauthor_idx[k])], uda_id))

                exponent = min(cell_mu[(year, primary)] + quality + sigma * float(z[k]), _MAX_EXPONENT)
                citations = int(math.floor(math.exp(exponent)))
                publications.append(
                    Publication(
                        id=f"P{serial:06d}",
                        year=year,
                        citations=citations,
                        categories=tuple(categories),
                        affiliations=tuple(affiliations),
                        uda_override=override,
                    )
                )

    return Corpus.build(publications, staff, category_map)
