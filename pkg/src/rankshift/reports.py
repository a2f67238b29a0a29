"""Writers (and the ranking reader) for all result artifacts.

Every artifact exists in two formats with identical content and stable
column order: ``csv`` (delimited text) and ``records`` (JSON Lines, one
object per row).  Scores round-trip exactly: they are serialized with
``repr`` so reading a ranking back reproduces the in-memory floats.
All writes are atomic (temp file + rename) and contain no timestamps, so
re-running a command overwrites outputs with identical bytes.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
from pathlib import Path
from typing import Any, Mapping, Sequence

from . import __version__
from .assessment import (
    Ranking,
    RankingEntry,
    RepresentativenessReport,
)
from .corpus_io import atomic_write_text
from .errors import ParseError
from .sensitivity import (
    ConvergencePoint,
    DecileMatrix,
    RankShiftStats,
    Scenario,
)

RANKING_FIELDS = ("uda_id", "university_id", "rank", "score", "n_selected", "n_required")
REPRESENTATIVENESS_FIELDS = (
    "uda_id",
    "university_id",
    "fte",
    "n_required",
    "n_selected",
    "total_pubs",
    "sampling_rate_pct",
    "share_pct",
)
STATS_FIELDS = (
    "label",
    "method",
    "n_total",
    "n_changed",
    "correlation",
    "mean_shift",
    "median_shift",
    "max_shift",
    "mean_shift_changed",
    "median_shift_changed",
)
DECILE_FIELDS = ("uda_id", "university_id", "modal_decile", "mean_decile") + tuple(
    f"d{i}" for i in range(1, 11)
)
CONVERGENCE_FIELDS = (
    "share",
    "correlation_to_benchmark",
    "median_shift_to_benchmark",
    "cost_index",
    "pubs_to_select",
)
SCENARIO_FIELDS = (
    "label",
    "uda_id",
    "rate_kind",
    "rate_value",
    "share",
    "derived_per_researcher",
    "pubs_to_select",
    "display",
)


def _cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _csv_text(fields: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(fields)
    for row in rows:
        writer.writerow([_cell(v) for v in row])
    return buffer.getvalue()


def _records_text(fields: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    lines = []
    for row in rows:
        lines.append(json.dumps(dict(zip(fields, row)), ensure_ascii=False) + "\n")
    return "".join(lines)


def _write_table(path: Path, fmt: str, fields: Sequence[str], rows: Sequence[Sequence[Any]]) -> None:
    text = _csv_text(fields, rows) if fmt == "csv" else _records_text(fields, rows)
    atomic_write_text(path, text)


def table_ext(fmt: str) -> str:
    return "csv" if fmt == "csv" else "jsonl"


# --------------------------------------------------------------------------
# Rankings


def ranking_rows(ranking: Ranking) -> list[list[Any]]:
    rows: list[list[Any]] = [
        [ranking.uda_id, e.university_id, e.rank, e.score, e.n_selected, e.n_required]
        for e in ranking.entries
    ]
    rows.extend([ranking.uda_id, u, None, None, None, None] for u in ranking.unranked)
    return rows


def write_ranking(ranking: Ranking, path: Path | str, fmt: str = "csv") -> None:
    _write_table(Path(path), fmt, RANKING_FIELDS, ranking_rows(ranking))


def _ranking_from_rows(path: Path, rows: list[tuple[int, dict[str, Any]]]) -> Ranking:
    uda_ids = {row["uda_id"] for _, row in rows}
    if len(uda_ids) > 1:
        raise ParseError(path, rows[0][0], f"ranking file mixes UDAs: {sorted(uda_ids)}")
    if not rows:
        raise ParseError(path, 1, "ranking file contains no rows")
    entries: list[RankingEntry] = []
    unranked: list[str] = []
    for line, row in rows:
        try:
            if row["rank"] in (None, ""):
                unranked.append(str(row["university_id"]))
                continue
            entries.append(
                RankingEntry(
                    university_id=str(row["university_id"]),
                    score=float(row["score"]),
                    rank=int(row["rank"]),
                    n_selected=int(row["n_selected"] or 0),
                    n_required=int(row["n_required"] or 0),
                )
            )
        except (TypeError, ValueError) as exc:
            raise ParseError(path, line, str(exc)) from None
    return Ranking(uda_id=str(next(iter(uda_ids))), entries=tuple(entries), unranked=tuple(unranked))


def read_ranking(path: Path | str, fmt: str | None = None) -> Ranking:
    """Read a ranking written by :func:`write_ranking` (format by extension)."""
    path = Path(path)
    if fmt is None:
        fmt = "records" if path.suffix == ".jsonl" else "csv"
    rows: list[tuple[int, dict[str, Any]]] = []
    if fmt == "csv":
        with open(path, newline="", encoding="utf-8") as handle:
            reader = csv.reader(handle)
            try:
                header = next(reader)
            except StopIteration:
                raise ParseError(path, 1, "empty ranking file") from None
            if header != list(RANKING_FIELDS):
                raise ParseError(path, 1, f"expected header {','.join(RANKING_FIELDS)}")
            for row in reader:
                if row:
                    rows.append((reader.line_num, dict(zip(RANKING_FIELDS, row))))
    else:
        with open(path, encoding="utf-8") as handle:
            for line_num, line in enumerate(handle, start=1):
                if not line.strip():
                    continue
                try:
                    record = json.loads(line)
                except json.JSONDecodeError as exc:
                    raise ParseError(path, line_num, f"invalid JSON: {exc.msg}") from None
                rows.append((line_num, record))
    if not rows:
        raise ParseError(path, 1, "ranking file contains no rows")
    return _ranking_from_rows(path, rows)


# --------------------------------------------------------------------------
# Other artifacts


def write_representativeness(
    report: RepresentativenessReport, path: Path | str, fmt: str = "csv"
) -> None:
    rows = [
        [
            row.uda_id,
            row.university_id,
            row.fte,
            row.n_required,
            row.n_selected,
            row.total_pubs,
            row.sampling_rate_pct,
            row.share_pct,
        ]
        for row in report.rows
    ]
    _write_table(Path(path), fmt, REPRESENTATIVENESS_FIELDS, rows)


def stats_row(label: str, stats: RankShiftStats) -> list[Any]:
    return [
        label,
        stats.method,
        stats.n_total,
        stats.n_changed,
        stats.correlation,
        stats.mean_shift,
        stats.median_shift,
        stats.max_shift,
        stats.mean_shift_changed,
        stats.median_shift_changed,
    ]


def write_stats_table(
    rows: Sequence[tuple[str, RankShiftStats]], path: Path | str, fmt: str = "csv"
) -> None:
    _write_table(Path(path), fmt, STATS_FIELDS, [stats_row(label, s) for label, s in rows])


def write_decile_matrix(matrix: DecileMatrix, path: Path | str, fmt: str = "csv") -> None:
    rows = [
        [matrix.uda_id, row.university_id, row.modal_decile, row.mean_decile, *row.counts]
        for row in matrix.rows
    ]
    _write_table(Path(path), fmt, DECILE_FIELDS, rows)


def write_convergence(
    points: Sequence[ConvergencePoint], path: Path | str, fmt: str = "csv"
) -> None:
    rows = [
        [
            p.share,
            p.correlation_to_benchmark,
            p.median_shift_to_benchmark,
            p.cost_index,
            p.pubs_to_select,
        ]
        for p in points
    ]
    _write_table(Path(path), fmt, CONVERGENCE_FIELDS, rows)


def write_convergence_plot_data(
    points: Sequence[ConvergencePoint], correlation_path: Path | str, median_path: Path | str
) -> None:
    """Two-column plot-ready files: (share, correlation) and (share, median_shift)."""
    _write_table(
        Path(correlation_path),
        "csv",
        ("share", "correlation"),
        [[p.share, p.correlation_to_benchmark] for p in points],
    )
    _write_table(
        Path(median_path),
        "csv",
        ("share", "median_shift"),
        [[p.share, p.median_shift_to_benchmark] for p in points],
    )


def write_scenarios(scenarios: Sequence[Scenario], path: Path | str, fmt: str = "csv") -> None:
    rows = [
        [
            s.label,
            s.uda_id,
            s.rate.kind,
            s.rate.value,
            s.share,
            s.derived_per_researcher,
            s.pubs_to_select,
            s.display,
        ]
        for s in scenarios
    ]
    _write_table(Path(path), fmt, SCENARIO_FIELDS, rows)


# --------------------------------------------------------------------------
# Manifest


def config_digest(config: Mapping[str, Any]) -> str:
    canonical = json.dumps(config, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def write_manifest(
    out_dir: Path | str, command: str, config: Mapping[str, Any], outputs: Sequence[str]
) -> Path:
    """Record what produced the files in ``out_dir`` (no timestamps)."""
    path = Path(out_dir) / "manifest.json"
    body = {
        "tool": "rankshift",
        "version": __version__,
        "command": command,
        "config": dict(config),
        "config_sha256": config_digest(config),
        "outputs": list(outputs),
    }
    atomic_write_text(path, json.dumps(body, indent=2, sort_keys=True) + "\n")
    return path
