"""Data model, validation, and file round-trips."""

import random

import pytest

from rankshift import Corpus, CorpusIndex, Publication, StaffEntry, resolve_udas
from rankshift.corpus_io import load_corpus, save_corpus
from rankshift.errors import DuplicateIdError, ParseError, UnknownIdError

from conftest import random_tiny_corpus, single_uda_corpus


def make_pub(pid="P1", year=2000, citations=5, categories=("X-C1",), affiliations=(("U1", "X"),), override=None):
    return Publication(
        id=pid,
        year=year,
        citations=citations,
        categories=categories,
        affiliations=affiliations,
        uda_override=override,
    )


class TestPublication:
    def test_rejects_negative_citations(self):
        with pytest.raises(ValueError, match="citations"):
            make_pub(citations=-1)

    def test_rejects_empty_categories_and_affiliations(self):
        with pytest.raises(ValueError, match="category"):
            make_pub(categories=())
        with pytest.raises(ValueError, match="affiliation"):
            make_pub(affiliations=())

    def test_rejects_duplicates(self):
        with pytest.raises(ValueError, match="duplicate"):
            make_pub(categories=("X-C1", "X-C1"))
        with pytest.raises(ValueError, match="duplicate"):
            make_pub(affiliations=(("U1", "X"), ("U1", "X")))

    def test_rejects_reserved_characters_in_id(self):
        with pytest.raises(ValueError, match="reserved"):
            make_pub(pid="P:1")


class TestStaffEntry:
    def test_rejects_negative_fte(self):
        with pytest.raises(ValueError, match="fte"):
            StaffEntry("U1", "X", -2.0)

    def test_zero_fte_allowed(self):
        assert StaffEntry("U1", "X", 0.0).fte == 0.0


class TestResolveUdas:
    def test_categories_map_to_distinct_udas(self):
        pub = make_pub(categories=("X-C1", "Y-C1"))
        assert resolve_udas(pub, {"X-C1": "X", "Y-C1": "Y"}) == {"X", "Y"}

    def test_same_uda_counted_once(self):
        pub = make_pub(categories=("X-C1", "X-C2"))
        assert resolve_udas(pub, {"X-C1": "X", "X-C2": "X"}) == {"X"}

    def test_override_wins(self):
        pub = make_pub(categories=("X-C1", "Y-C1"), override="X")
        assert resolve_udas(pub, {"X-C1": "X", "Y-C1": "Y"}) == {"X"}

    def test_unknown_category_raises(self):
        with pytest.raises(UnknownIdError, match="C1"):
            resolve_udas(make_pub(), {})


class TestCorpusValidation:
    def test_duplicate_publication_id(self):
        with pytest.raises(DuplicateIdError, match="P1"):
            Corpus.build(
                [make_pub(), make_pub(citations=9)],
                [StaffEntry("U1", "X", 5.0)],
                {"X-C1": "X"},
            )

    def test_duplicate_staff_entry(self):
        with pytest.raises(DuplicateIdError, match="U1"):
            Corpus.build(
                [make_pub()],
                [StaffEntry("U1", "X", 5.0), StaffEntry("U1", "X", 6.0)],
                {"X-C1": "X"},
            )

    def test_unknown_category_reference(self):
        with pytest.raises(UnknownIdError, match="X-C2"):
            Corpus.build(
                [make_pub(categories=("X-C1", "X-C2"))],
                [StaffEntry("U1", "X", 5.0)],
                {"X-C1": "X"},
            )

    def test_registries_are_sorted_and_complete(self):
        # universities come from staff and affiliations, udas only from
        # the category map and staff rosters
        corpus = Corpus.build(
            [make_pub(affiliations=(("U2", "X"), ("U1", "Z")))],
            [StaffEntry("U3", "Z", 1.0)],
            {"X-C1": "X"},
        )
        assert corpus.universities == ("U1", "U2", "U3")
        assert corpus.udas == ("X", "Z")

    def test_affiliation_only_university_is_registered_but_unstaffed(self):
        corpus = Corpus.build(
            [make_pub(affiliations=(("U1", "X"), ("ABROAD", "X")))],
            [StaffEntry("U1", "X", 5.0)],
            {"X-C1": "X"},
        )
        assert "ABROAD" in corpus.universities
        index = CorpusIndex(corpus)
        assert index.fte.get(("ABROAD", "X")) is None
        assert index.portfolio("ABROAD", "X") == (make_pub(affiliations=(("U1", "X"), ("ABROAD", "X"))),)

    def test_affiliation_uda_must_exist(self):
        with pytest.raises(UnknownIdError, match="GHOST"):
            Corpus.build(
                [make_pub(affiliations=(("U1", "GHOST"),))],
                [StaffEntry("U1", "X", 5.0)],
                {"X-C1": "X"},
            )

    def test_override_uda_must_exist(self):
        with pytest.raises(UnknownIdError, match="GHOST"):
            Corpus.build(
                [make_pub(override="GHOST")],
                [StaffEntry("U1", "X", 5.0)],
                {"X-C1": "X"},
            )


class TestCorpusIndex:
    def test_portfolio_and_totals(self):
        corpus = Corpus.build(
            [
                make_pub(pid="P1", affiliations=(("U1", "X"), ("U2", "X"))),
                make_pub(pid="P2", affiliations=(("U1", "X"),)),
                make_pub(pid="P3", categories=("Y-C1",), affiliations=(("U2", "Y"),)),
            ],
            [StaffEntry("U1", "X", 5.0), StaffEntry("U2", "X", 7.0), StaffEntry("U2", "Y", 3.0)],
            {"X-C1": "X", "Y-C1": "Y"},
        )
        index = CorpusIndex(corpus)
        assert [p.id for p in index.portfolio("U1", "X")] == ["P1", "P2"]
        assert [p.id for p in index.portfolio("U2", "X")] == ["P1"]
        assert index.portfolio("U1", "Y") == ()
        # co-authored P1 counts once in the UDA total (whole counting of
        # distinct products), but appears in both portfolios
        assert index.uda_production == {"X": 2, "Y": 1}
        assert index.uda_fte == {"X": 12.0, "Y": 3.0}
        assert index.uda_universities["X"] == ("U1", "U2")

    def test_override_moves_production_between_udas(self):
        corpus = Corpus.build(
            [make_pub(categories=("X-C1",), affiliations=(("U1", "X"),), override="Y")],
            [StaffEntry("U1", "X", 5.0), StaffEntry("U1", "Y", 5.0)],
            {"X-C1": "X", "Y-C1": "Y"},
        )
        index = CorpusIndex(corpus)
        assert index.uda_production == {"X": 0, "Y": 1}
        # affiliation, and hence the portfolio, is unaffected by the override
        assert [p.id for p in index.portfolio("U1", "X")] == ["P1"]


class TestRoundTrips:
    @pytest.mark.parametrize("fmt", ["csv", "records"])
    def test_save_load_identity(self, fmt, tmp_path):
        corpus = random_tiny_corpus(random.Random(99))
        save_corpus(corpus, tmp_path, fmt)
        ext = "csv" if fmt == "csv" else "jsonl"
        loaded = load_corpus(
            tmp_path / f"publications.{ext}",
            tmp_path / f"staff.{ext}",
            tmp_path / f"category_map.{ext}",
            fmt,
        )
        assert loaded == corpus

    @pytest.mark.parametrize("fmt", ["csv", "records"])
    @pytest.mark.parametrize("seed", [1, 2, 3, 4])
    def test_load_reserialize_load(self, fmt, seed, tmp_path):
        corpus = random_tiny_corpus(random.Random(seed))
        first_dir = tmp_path / "first"
        second_dir = tmp_path / "second"
        paths = save_corpus(corpus, first_dir, fmt)
        loaded = load_corpus(paths["publications"], paths["staff"], paths["category_map"], fmt)
        again = save_corpus(loaded, second_dir, fmt)
        reloaded = load_corpus(again["publications"], again["staff"], again["category_map"], fmt)
        assert reloaded == loaded
        for name in paths:
            assert paths[name].read_bytes() == again[name].read_bytes()

    def test_writes_are_deterministic(self, tmp_path):
        corpus = single_uda_corpus({"UA": [3, 1], "UB": [2]})
        first = save_corpus(corpus, tmp_path / "a", "csv")
        second = save_corpus(corpus, tmp_path / "b", "csv")
        for name in first:
            assert first[name].read_bytes() == second[name].read_bytes()


class TestLoaderErrors:
    def test_parse_error_carries_line_number(self, tmp_path):
        path = tmp_path / "publications.csv"
        path.write_text(
            "id,year,citations,categories,affiliations,uda_override\n"
            "P1,2000,four,X-C1,U1:X,\n"
        )
        with pytest.raises(ParseError) as excinfo:
            load_corpus(path, path, path)
        assert excinfo.value.line == 2
        assert "citations" in str(excinfo.value)

    def test_bad_header_rejected(self, tmp_path):
        path = tmp_path / "staff.csv"
        path.write_text("university,uda,fte\nU1,X,5\n")
        with pytest.raises(ParseError, match="header"):
            from rankshift.corpus_io import load_staff

            load_staff(path)

    def test_bad_affiliation_token(self, tmp_path):
        path = tmp_path / "publications.csv"
        path.write_text(
            "id,year,citations,categories,affiliations,uda_override\n"
            "P1,2000,4,X-C1,U1,\n"
        )
        from rankshift.corpus_io import load_publications

        with pytest.raises(ParseError, match="university:uda"):
            load_publications(path)

    def test_invalid_json_line(self, tmp_path):
        path = tmp_path / "staff.jsonl"
        path.write_text('{"university_id": "U1", "uda_id": "X", "fte": 5}\n{oops\n')
        from rankshift.corpus_io import load_staff

        with pytest.raises(ParseError) as excinfo:
            load_staff(path, "records")
        assert excinfo.value.line == 2

    def test_unknown_reference_names_offender(self, tmp_path):
        pubs = tmp_path / "publications.csv"
        staff = tmp_path / "staff.csv"
        cmap = tmp_path / "category_map.csv"
        pubs.write_text(
            "id,year,citations,categories,affiliations,uda_override\n"
            "P1,2000,4,X-C1,U1:NOWHERE,\n"
        )
        staff.write_text("university_id,uda_id,fte\nU1,X,5\n")
        cmap.write_text("category_id,uda_id\nX-C1,X\n")
        with pytest.raises(UnknownIdError, match="NOWHERE"):
            load_corpus(pubs, staff, cmap)

    def test_duplicate_category_row(self, tmp_path):
        cmap = tmp_path / "category_map.csv"
        cmap.write_text("category_id,uda_id\nX-C1,X\nX-C1,Y\n")
        from rankshift.corpus_io import load_category_map

        with pytest.raises(ParseError, match="duplicate"):
            load_category_map(cmap)
