"""Reading and writing corpora.

Two on-disk formats are supported, selected by ``fmt``:

* ``csv`` -- three headed CSV files.  Publications use
  ``id,year,citations,categories,affiliations,uda_override`` where
  ``categories`` is ``;``-separated and ``affiliations`` is a ``;``-separated
  list of ``university:uda`` pairs.  Staff files use
  ``university_id,uda_id,fte`` and category maps ``category_id,uda_id``.
* ``records`` -- the same three tables as JSON Lines, one object per line
  with the natural field names (lists instead of delimited strings).

Writers are deterministic: the same corpus always serializes to the same
bytes.  Loading a file, re-serializing it, and loading it again yields an
equal corpus.
"""

from __future__ import annotations

import csv
import json
import os
from pathlib import Path
from typing import Any, Callable, Iterator

from .corpus import Corpus, Publication, StaffEntry
from .errors import ParseError

FORMATS = ("csv", "records")

PUBLICATION_FIELDS = ("id", "year", "citations", "categories", "affiliations", "uda_override")
STAFF_FIELDS = ("university_id", "uda_id", "fte")
CATEGORY_FIELDS = ("category_id", "uda_id")


def atomic_write_text(path: Path | str, text: str) -> None:
    """Write ``text`` to ``path`` atomically (temp file + rename)."""
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text, encoding="utf-8")
    os.replace(tmp, path)


def _check_format(fmt: str) -> None:
    if fmt not in FORMATS:
        raise ValueError(f"unknown format {fmt!r}; expected one of {FORMATS}")


def _iter_csv(path: Path, fields: tuple[str, ...]) -> Iterator[tuple[int, dict[str, str]]]:
    with open(path, newline="", encoding="utf-8") as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError(path, 1, "empty file, expected a header row") from None
        if header != list(fields):
            raise ParseError(path, 1, f"expected header {','.join(fields)}, got {','.join(header)}")
        for row in reader:
            if not row:
                continue
            if len(row) != len(fields):
                raise ParseError(path, reader.line_num, f"expected {len(fields)} fields, got {len(row)}")
            yield reader.line_num, dict(zip(fields, row))


def _iter_records(path: Path, fields: tuple[str, ...]) -> Iterator[tuple[int, dict[str, Any]]]:
    with open(path, encoding="utf-8") as handle:
        for line_num, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(path, line_num, f"invalid JSON: {exc.msg}") from None
            if not isinstance(record, dict):
                raise ParseError(path, line_num, "expected a JSON object per line")
            unknown = set(record) - set(fields)
            if unknown:
                raise ParseError(path, line_num, f"unknown field(s): {', '.join(sorted(unknown))}")
            yield line_num, record


def _rows(path: Path, fmt: str, fields: tuple[str, ...]) -> Iterator[tuple[int, dict[str, Any]]]:
    return _iter_csv(path, fields) if fmt == "csv" else _iter_records(path, fields)


def _convert(path: Path, line: int, field: str, raw: Any, conv: Callable[[Any], Any]) -> Any:
    try:
        return conv(raw)
    except (TypeError, ValueError) as exc:
        raise ParseError(path, line, f"field {field!r}: {exc}") from None


def _parse_int(raw: Any) -> int:
    if isinstance(raw, bool) or not isinstance(raw, (int, str)):
        raise ValueError(f"expected an integer, got {raw!r}")
    return int(raw)


def _parse_float(raw: Any) -> float:
    if isinstance(raw, bool) or not isinstance(raw, (int, float, str)):
        raise ValueError(f"expected a number, got {raw!r}")
    return float(raw)


def _parse_categories(raw: Any) -> tuple[str, ...]:
    if isinstance(raw, str):
        parts = [p for p in raw.split(";") if p]
    elif isinstance(raw, list):
        parts = raw
    else:
        raise ValueError(f"expected a category list, got {raw!r}")
    if not all(isinstance(p, str) for p in parts):
        raise ValueError("categories must be strings")
    return tuple(parts)


def _parse_affiliations(raw: Any) -> tuple[tuple[str, str], ...]:
    pairs: list[tuple[str, str]] = []
    if isinstance(raw, str):
        for token in raw.split(";"):
            if not token:
                continue
            bits = token.split(":")
            if len(bits) != 2 or not bits[0] or not bits[1]:
                raise ValueError(f"affiliation {token!r} is not of the form university:uda")
            pairs.append((bits[0], bits[1]))
    elif isinstance(raw, list):
        for item in raw:
            if (
                not isinstance(item, (list, tuple))
                or len(item) != 2
                or not all(isinstance(p, str) for p in item)
            ):
                raise ValueError(f"affiliation {item!r} is not a [university, uda] pair")
            pairs.append((item[0], item[1]))
    else:
        raise ValueError(f"expected an affiliation list, got {raw!r}")
    return tuple(pairs)


def _parse_override(raw: Any) -> str | None:
    if raw is None or raw == "":
        return None
    if not isinstance(raw, str):
        raise ValueError(f"expected a UDA id or empty, got {raw!r}")
    return raw


def load_publications(path: Path | str, fmt: str = "csv") -> tuple[Publication, ...]:
    _check_format(fmt)
    path = Path(path)
    out: list[Publication] = []
    for line, row in _rows(path, fmt, PUBLICATION_FIELDS):
        missing = [f for f in ("id", "year", "citations", "categories", "affiliations") if f not in row]
        if missing:
            raise ParseError(path, line, f"missing field(s): {', '.join(missing)}")
        try:
            pub = Publication(
                id=_convert(path, line, "id", row["id"], str),
                year=_convert(path, line, "year", row["year"], _parse_int),
                citations=_convert(path, line, "citations", row["citations"], _parse_int),
                categories=_convert(path, line, "categories", row["categories"], _parse_categories),
                affiliations=_convert(path, line, "affiliations", row["affiliations"], _parse_affiliations),
                uda_override=_convert(path, line, "uda_override", row.get("uda_override"), _parse_override),
            )
        except ValueError as exc:
            raise ParseError(path, line, str(exc)) from None
        out.append(pub)
    return tuple(out)


def load_staff(path: Path | str, fmt: str = "csv") -> tuple[StaffEntry, ...]:
    _check_format(fmt)
    path = Path(path)
    out: list[StaffEntry] = []
    for line, row in _rows(path, fmt, STAFF_FIELDS):
        missing = [f for f in STAFF_FIELDS if f not in row]
        if missing:
            raise ParseError(path, line, f"missing field(s): {', '.join(missing)}")
        try:
            entry = StaffEntry(
                university_id=str(row["university_id"]),
                uda_id=str(row["uda_id"]),
                fte=_convert(path, line, "fte", row["fte"], _parse_float),
            )
        except ValueError as exc:
            raise ParseError(path, line, str(exc)) from None
        out.append(entry)
    return tuple(out)


def load_category_map(path: Path | str, fmt: str = "csv") -> dict[str, str]:
    _check_format(fmt)
    path = Path(path)
    out: dict[str, str] = {}
    for line, row in _rows(path, fmt, CATEGORY_FIELDS):
        missing = [f for f in CATEGORY_FIELDS if f not in row]
        if missing:
            raise ParseError(path, line, f"missing field(s): {', '.join(missing)}")
        category = row["category_id"]
        uda_id = row["uda_id"]
        if not isinstance(category, str) or not isinstance(uda_id, str) or not category or not uda_id:
            raise ParseError(path, line, "category_id and uda_id must be non-empty strings")
        if category in out:
            raise ParseError(path, line, f"duplicate category {category!r}")
        out[category] = uda_id
    return out


def load_corpus(
    publications_path: Path | str,
    staff_path: Path | str,
    category_map_path: Path | str,
    fmt: str = "csv",
) -> Corpus:
    """Load a corpus from its three tables and validate referential integrity."""
    return Corpus.build(
        publications=load_publications(publications_path, fmt),
        staff=load_staff(staff_path, fmt),
        category_map=load_category_map(category_map_path, fmt),
    )


def _publication_record(pub: Publication) -> dict[str, Any]:
    return {
        "id": pub.id,
        "year": pub.year,
        "citations": pub.citations,
        "categories": list(pub.categories),
        "affiliations": [list(pair) for pair in pub.affiliations],
        "uda_override": pub.uda_override,
    }


def _publication_csv_row(pub: Publication) -> list[str]:
    return [
        pub.id,
        str(pub.year),
        str(pub.citations),
        ";".join(pub.categories),
        ";".join(f"{u}:{a}" for u, a in pub.affiliations),
        pub.uda_override or "",
    ]


def _csv_text(fields: tuple[str, ...], rows: list[list[str]]) -> str:
    import io

    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(fields)
    writer.writerows(rows)
    return buffer.getvalue()


def _records_text(records: list[dict[str, Any]]) -> str:
    return "".join(json.dumps(record, ensure_ascii=False) + "\n" for record in records)


def save_corpus(corpus: Corpus, out_dir: Path | str, fmt: str = "csv") -> dict[str, Path]:
    """Write the three corpus tables into ``out_dir``; returns the paths."""
    _check_format(fmt)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    ext = "csv" if fmt == "csv" else "jsonl"
    paths = {
        "publications": out_dir / f"publications.{ext}",
        "staff": out_dir / f"staff.{ext}",
        "category_map": out_dir / f"category_map.{ext}",
    }

    if fmt == "csv":
        atomic_write_text(
            paths["publications"],
            _csv_text(PUBLICATION_FIELDS, [_publication_csv_row(p) for p in corpus.publications]),
        )
        atomic_write_text(
            paths["staff"],
            _csv_text(STAFF_FIELDS, [[e.university_id, e.uda_id, repr(e.fte)] for e in corpus.staff]),
        )
        atomic_write_text(
            paths["category_map"],
            _csv_text(CATEGORY_FIELDS, [[c, u] for c, u in sorted(corpus.category_map.items())]),
        )
    else:
        atomic_write_text(
            paths["publications"],
            _records_text([_publication_record(p) for p in corpus.publications]),
        )
        atomic_write_text(
            paths["staff"],
            _records_text(
                [
                    {"university_id": e.university_id, "uda_id": e.uda_id, "fte": e.fte}
                    for e in corpus.staff
                ]
            ),
        )
        atomic_write_text(
            paths["category_map"],
            _records_text(
                [{"category_id": c, "uda_id": u} for c, u in sorted(corpus.category_map.items())]
            ),
        )
    return paths
