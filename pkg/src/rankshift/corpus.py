"""Core data model: publications, research staff, and the corpus they form.

A corpus is the closed universe for one assessment exercise: every scientific
product published in the observation window, the research staff of every
university broken down by disciplinary area (UDA), and the map from subject
categories to UDAs.  Corpora are immutable once constructed; all validation
happens up front so downstream code can assume referential integrity.

Attribution is deliberately two-sided.  A publication belongs to one or more
``(university, uda)`` affiliation pairs, which define the portfolios that
universities select from; co-authored products count whole for every pair.
Independently, a publication belongs to one or more UDAs *as a subject*,
resolved from its categories (or an explicit override), which defines the
UDA-level production totals used as denominators.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .errors import DuplicateIdError, UnknownIdError

# Identifiers travel through delimited text formats, so keep them flat.
_RESERVED_ID_CHARS = ":;,"


def _check_id(kind: str, value: str) -> None:
    if not value or value != value.strip():
        raise ValueError(f"{kind} id must be non-empty with no surrounding whitespace, got {value!r}")
    if any(ch in value for ch in _RESERVED_ID_CHARS):
        raise ValueError(f"{kind} id {value!r} contains a reserved character (one of {_RESERVED_ID_CHARS!r})")


@dataclass(frozen=True)
class Publication:
    """One scientific product.

    ``citations`` is a snapshot at a fixed census date.  ``affiliations``
    lists every (university_id, uda_id) pair entitled to claim the product.
    ``uda_override``, when set, pins the product to a single UDA for
    production counting regardless of its categories; this is how products in
    multidisciplinary journals are attributed to the area of their content.
    """

    id: str
    year: int
    citations: int
    categories: tuple[str, ...]
    affiliations: tuple[tuple[str, str], ...]
    uda_override: str | None = None

    def __post_init__(self) -> None:
        _check_id("publication", self.id)
        if self.citations < 0:
            raise ValueError(f"publication {self.id}: citations must be >= 0, got {self.citations}")
        if not self.categories:
            raise ValueError(f"publication {self.id}: at least one category is required")
        if len(set(self.categories)) != len(self.categories):
            raise ValueError(f"publication {self.id}: duplicate category")
        if not self.affiliations:
            raise ValueError(f"publication {self.id}: at least one affiliation is required")
        if len(set(self.affiliations)) != len(self.affiliations):
            raise ValueError(f"publication {self.id}: duplicate affiliation pair")


@dataclass(frozen=True)
class StaffEntry:
    """Full-time-equivalent research staff of one university in one UDA."""

    university_id: str
    uda_id: str
    fte: float

    def __post_init__(self) -> None:
        _check_id("university", self.university_id)
        _check_id("uda", self.uda_id)
        if not self.fte >= 0:
            raise ValueError(
                f"staff ({self.university_id}, {self.uda_id}): fte must be >= 0, got {self.fte!r}"
            )


def resolve_udas(publication: Publication, category_map: Mapping[str, str]) -> frozenset[str]:
    """UDAs a publication counts toward as research *output*.

    The override wins outright when present; otherwise the publication counts
    once in each distinct UDA its categories map to.
    """
    if publication.uda_override is not None:
        return frozenset((publication.uda_override,))
    udas = set()
    for category in publication.categories:
        try:
            udas.add(category_map[category])
        except KeyError:
            raise UnknownIdError(
                f"publication {publication.id}: category {category!r} is not in the category map"
            ) from None
    return frozenset(udas)


@dataclass(frozen=True)
class Corpus:
    """An immutable, internally consistent assessment universe."""

    publications: tuple[Publication, ...]
    staff: tuple[StaffEntry, ...]
    category_map: Mapping[str, str]
    udas: tuple[str, ...] = field(default=())
    universities: tuple[str, ...] = field(default=())

    def __post_init__(self) -> None:
        if not self.udas or not self.universities:
            raise ValueError("construct corpora via Corpus.build so udas/universities are derived")
        self._validate()

    @staticmethod
    def build(
        publications: Iterable[Publication],
        staff: Iterable[StaffEntry],
        category_map: Mapping[str, str],
    ) -> "Corpus":
        """Assemble a corpus, deriving the UDA and university registries.

        UDAs form a closed nomenclature: only areas named by the category map
        or by a staff roster exist, and affiliations or overrides pointing
        elsewhere are rejected.  Universities are open-ended: one that appears
        only through affiliations (a co-author outside the census) is kept,
        it simply has no staff and can never become eligible.
        """
        publications = tuple(publications)
        staff = tuple(staff)
        category_map = dict(category_map)
        udas = set(category_map.values())
        universities = set()
        for entry in staff:
            udas.add(entry.uda_id)
            universities.add(entry.university_id)
        for pub in publications:
            for university_id, _uda_id in pub.affiliations:
                universities.add(university_id)
        return Corpus(
            publications=publications,
            staff=staff,
            category_map=category_map,
            udas=tuple(sorted(udas)),
            universities=tuple(sorted(universities)),
        )

    def _validate(self) -> None:
        known_udas = set(self.udas)
        known_universities = set(self.universities)

        for category, uda_id in self.category_map.items():
            _check_id("category", category)
            if uda_id not in known_udas:
                raise UnknownIdError(f"category {category!r} maps to unknown UDA {uda_id!r}")

        seen_pub_ids: set[str] = set()
        for pub in self.publications:
            if pub.id in seen_pub_ids:
                raise DuplicateIdError(f"duplicate publication id {pub.id!r}")
            seen_pub_ids.add(pub.id)
            for category in pub.categories:
                if category not in self.category_map:
                    raise UnknownIdError(
                        f"publication {pub.id}: category {category!r} is not in the category map"
                    )
            for university_id, uda_id in pub.affiliations:
                if university_id not in known_universities:
                    raise UnknownIdError(
                        f"publication {pub.id}: unknown university {university_id!r}"
                    )
                if uda_id not in known_udas:
                    raise UnknownIdError(f"publication {pub.id}: unknown UDA {uda_id!r}")
            if pub.uda_override is not None and pub.uda_override not in known_udas:
                raise UnknownIdError(
                    f"publication {pub.id}: unknown override UDA {pub.uda_override!r}"
                )

        seen_staff: set[tuple[str, str]] = set()
        for entry in self.staff:
            key = (entry.university_id, entry.uda_id)
            if key in seen_staff:
                raise DuplicateIdError(f"duplicate staff entry for {key}")
            seen_staff.add(key)
            if entry.university_id not in known_universities:
                raise UnknownIdError(f"staff entry references unknown university {entry.university_id!r}")
            if entry.uda_id not in known_udas:
                raise UnknownIdError(f"staff entry references unknown UDA {entry.uda_id!r}")

    def output_udas(self, publication: Publication) -> frozenset[str]:
        """Shorthand for :func:`resolve_udas` against this corpus's map."""
        return resolve_udas(publication, self.category_map)


class CorpusIndex:
    """Precomputed lookups over one corpus.

    Building the index is O(publications x affiliations); afterwards
    portfolio, staff and production lookups are O(1).  The index never
    mutates its corpus and may be shared freely.
    """

    def __init__(self, corpus: Corpus) -> None:
        self.corpus = corpus
        self.fte: dict[tuple[str, str], float] = {
            (e.university_id, e.uda_id): e.fte for e in corpus.staff
        }

        portfolios: dict[tuple[str, str], list[Publication]] = {}
        production: dict[str, int] = {uda: 0 for uda in corpus.udas}
        for pub in corpus.publications:
            for pair in pub.affiliations:
                portfolios.setdefault(pair, []).append(pub)
            for uda_id in resolve_udas(pub, corpus.category_map):
                production[uda_id] += 1
        self._portfolios = {pair: tuple(pubs) for pair, pubs in portfolios.items()}

        # Total research output of each UDA (distinct products, whole counting).
        self.uda_production: dict[str, int] = production
        # Total research staff of each UDA across all universities.
        self.uda_fte: dict[str, float] = {uda: 0.0 for uda in corpus.udas}
        for entry in corpus.staff:
            self.uda_fte[entry.uda_id] += entry.fte

        members: dict[str, set[str]] = {uda: set() for uda in corpus.udas}
        for entry in corpus.staff:
            members[entry.uda_id].add(entry.university_id)
        self.uda_universities: dict[str, tuple[str, ...]] = {
            uda: tuple(sorted(ids)) for uda, ids in members.items()
        }

    def portfolio(self, university_id: str, uda_id: str) -> tuple[Publication, ...]:
        """Products the university may submit in the UDA (corpus order)."""
        return self._portfolios.get((university_id, uda_id), ())
