"""Command-line front end.

Four subcommands cover the full workflow:

* ``generate`` -- write a seeded synthetic corpus;
* ``assess``   -- run the assessment on a corpus, one ranking file per UDA
  plus a representativeness report;
* ``sweep``    -- replay one UDA under a list of share scenarios and write
  the stability bundle (scenarios, rankings, shift stats, decile matrix,
  convergence curve and plot data);
* ``compare``  -- rank-shift statistics between two ranking files.

Every command is a pure function of its inputs and flags: outputs carry a
manifest with a config hash and re-running reproduces identical bytes.
Exit codes: 0 success, 1 usage error, 2 data error, 3 internal error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Any

from .assessment import (
    DEFAULT_MIN_FTE,
    DEFAULT_PER_RESEARCHER,
    AssessmentConfig,
    SelectionRate,
    representativeness_report,
    run_assessment,
)
from .corpus import Corpus, CorpusIndex
from .corpus_io import FORMATS, load_corpus, save_corpus
from .errors import DataError, InvalidConfigError, MismatchedSetError
from .impact import score_corpus
from .reports import (
    read_ranking,
    table_ext,
    write_convergence,
    write_convergence_plot_data,
    write_decile_matrix,
    write_manifest,
    write_ranking,
    write_representativeness,
    write_scenarios,
    write_stats_table,
)
from .rounding import ROUNDING_MODES
from .sensitivity import SWEEP_PRESETS, compare_rankings, run_sweep
from .synthetic import SyntheticConfig, generate_synthetic

ASSESS_PRESETS = ("vtr", "uniform-8.9", "benchmark")


def _parse_udas(spec: str) -> dict[str, float]:
    """``"PHYS:5.2,BIO:1.7"`` -> fertility per UDA."""
    out: dict[str, float] = {}
    for token in spec.split(","):
        token = token.strip()
        if not token:
            continue
        bits = token.split(":")
        if len(bits) != 2:
            raise InvalidConfigError(f"--udas entry {token!r} is not of the form uda:fertility")
        try:
            out[bits[0]] = float(bits[1])
        except ValueError:
            raise InvalidConfigError(f"--udas entry {token!r} has a non-numeric fertility") from None
    if not out:
        raise InvalidConfigError("--udas must name at least one UDA")
    return out


def _parse_range(spec: str, flag: str) -> tuple[float, float]:
    bits = spec.split(":")
    if len(bits) != 2:
        raise InvalidConfigError(f"{flag} must look like LO:HI, got {spec!r}")
    try:
        return float(bits[0]), float(bits[1])
    except ValueError:
        raise InvalidConfigError(f"{flag} must be numeric, got {spec!r}") from None


def _parse_years(spec: str) -> tuple[int, ...]:
    try:
        if ":" in spec:
            first, last = spec.split(":")
            return tuple(range(int(first), int(last) + 1))
        return tuple(int(tok) for tok in spec.split(",") if tok)
    except ValueError:
        raise InvalidConfigError(f"--years must look like 2001:2003 or 2001,2002, got {spec!r}") from None


def _parse_rate(spec: str) -> SelectionRate:
    """``0.25`` means per-researcher; ``share:0.089`` means share of output."""
    kind = "per_researcher"
    value = spec
    if ":" in spec:
        kind, value = spec.split(":", 1)
        kind = {"share": "share_of_output", "per-researcher": "per_researcher"}.get(kind, kind)
    try:
        return SelectionRate(kind, float(value))
    except ValueError:
        raise InvalidConfigError(f"--rate must be a number or kind:number, got {spec!r}") from None


def _parse_shares(spec: str) -> list[float]:
    """Comma list; values above 1 are read as percentages."""
    out: list[float] = []
    for token in spec.split(","):
        token = token.strip()
        if not token:
            continue
        try:
            value = float(token)
        except ValueError:
            raise InvalidConfigError(f"--shares entry {token!r} is not a number") from None
        out.append(value / 100.0 if value > 1 else value)
    if not out:
        raise InvalidConfigError("--shares must contain at least one value")
    return out


def _infer_format(path: str) -> str:
    return "records" if Path(path).suffix == ".jsonl" else "csv"


def _load_corpus(args: argparse.Namespace) -> Corpus:
    return load_corpus(
        args.publications, args.staff, args.category_map, _infer_format(args.publications)
    )


def _label_slug(label: str) -> str:
    return label.replace("%", "pct").replace(".", "_").replace(" ", "")


def _assessment_config(args: argparse.Namespace) -> AssessmentConfig:
    preset = getattr(args, "preset", None)
    rate_flag = getattr(args, "rate", None)
    if preset and rate_flag:
        raise InvalidConfigError("--preset and --rate are mutually exclusive")
    if preset == "vtr":
        rate = SelectionRate.per_researcher(DEFAULT_PER_RESEARCHER)
    elif preset == "uniform-8.9":
        rate = SelectionRate.share_of_output(0.089)
    elif preset == "benchmark":
        rate = SelectionRate.share_of_output(1.0)
    elif rate_flag:
        rate = _parse_rate(rate_flag)
    else:
        rate = SelectionRate.per_researcher(DEFAULT_PER_RESEARCHER)
    return AssessmentConfig(
        rate=rate,
        eligibility_min_fte=args.min_fte,
        rounding=args.rounding,
    )


def _config_record(config: AssessmentConfig) -> dict[str, Any]:
    rate = config.rate
    assert isinstance(rate, SelectionRate)
    return {
        "rate_kind": rate.kind,
        "rate_value": rate.value,
        "eligibility_min_fte": config.eligibility_min_fte,
        "rounding": config.rounding,
        "weights": list(config.weights),
        "impact_method": config.impact_method,
    }


def cmd_generate(args: argparse.Namespace) -> int:
    config = SyntheticConfig(
        seed=args.seed,
        n_universities=args.n_universities,
        udas=_parse_udas(args.udas),
        staff_range=_parse_range(args.staff_range, "--staff-range"),
        citation_shape=args.citation_shape,
        years=_parse_years(args.years),
        categories_per_uda=args.categories_per_uda,
    )
    corpus = generate_synthetic(config)
    out_dir = Path(args.out)
    paths = save_corpus(corpus, out_dir, args.format)
    manifest_config = {
        "seed": config.seed,
        "n_universities": config.n_universities,
        "udas": dict(config.udas),
        "staff_range": list(config.staff_range),
        "citation_shape": config.citation_shape,
        "years": list(config.years),
        "categories_per_uda": config.categories_per_uda,
        "format": args.format,
    }
    write_manifest(out_dir, "generate", manifest_config, sorted(p.name for p in paths.values()))
    print(
        f"wrote {len(corpus.publications)} publications, {len(corpus.staff)} staff entries to {out_dir}"
    )
    return 0


def cmd_assess(args: argparse.Namespace) -> int:
    corpus = _load_corpus(args)
    config = _assessment_config(args)
    index = CorpusIndex(corpus)
    scores = score_corpus(corpus, config.impact_method)
    rankings = run_assessment(corpus, config, scores=scores, index=index)
    report = representativeness_report(corpus, config, index=index)

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    ext = table_ext(args.format)
    outputs: list[str] = []
    for uda_id in sorted(rankings):
        name = f"ranking_{uda_id}.{ext}"
        write_ranking(rankings[uda_id], out_dir / name, args.format)
        outputs.append(name)
    report_name = f"representativeness.{ext}"
    write_representativeness(report, out_dir / report_name, args.format)
    outputs.append(report_name)
    write_manifest(out_dir, "assess", _config_record(config), outputs)
    print(f"wrote {len(outputs)} files to {out_dir}")
    return 0


def cmd_sweep(args: argparse.Namespace) -> int:
    corpus = _load_corpus(args)
    if args.preset and args.shares:
        raise InvalidConfigError("--preset and --shares are mutually exclusive")
    if not args.preset and not args.shares:
        raise InvalidConfigError("sweep needs --shares or --preset")
    config = AssessmentConfig(
        rate=SelectionRate.per_researcher(args.reference_rate),
        eligibility_min_fte=args.min_fte,
        rounding=args.rounding,
    )
    result = run_sweep(
        corpus,
        args.uda,
        shares=_parse_shares(args.shares) if args.shares else None,
        preset=args.preset,
        config=config,
        reference_rate=SelectionRate.per_researcher(args.reference_rate),
        method=args.correlation,
        cost_per_product=args.cost_per_product,
    )

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    ext = table_ext(args.format)
    outputs: list[str] = []

    name = f"scenarios.{ext}"
    write_scenarios(result.scenarios, out_dir / name, args.format)
    outputs.append(name)

    for label in [result.reference_label, *(s.label for s in result.scenarios)]:
        name = f"ranking_{_label_slug(label)}.{ext}"
        write_ranking(result.rankings[label], out_dir / name, args.format)
        outputs.append(name)

    if result.comparisons:
        name = f"shift_stats.{ext}"
        write_stats_table(
            [(s.label, result.comparisons[s.label]) for s in result.scenarios],
            out_dir / name,
            args.format,
        )
        outputs.append(name)

    if result.decile_matrix is not None:
        name = f"decile_matrix.{ext}"
        write_decile_matrix(result.decile_matrix, out_dir / name, args.format)
        outputs.append(name)

    name = f"convergence.{ext}"
    write_convergence(result.convergence, out_dir / name, args.format)
    outputs.append(name)
    write_convergence_plot_data(
        result.convergence,
        out_dir / "convergence_correlation.csv",
        out_dir / "convergence_median_shift.csv",
    )
    outputs.extend(["convergence_correlation.csv", "convergence_median_shift.csv"])

    manifest_config = {
        "uda_id": args.uda,
        "preset": args.preset,
        "shares": _parse_shares(args.shares) if args.shares else None,
        "correlation": args.correlation,
        "cost_per_product": args.cost_per_product,
        "reference_rate": args.reference_rate,
        "eligibility_min_fte": args.min_fte,
        "rounding": args.rounding,
        "format": args.format,
    }
    write_manifest(out_dir, "sweep", manifest_config, outputs)
    print(f"wrote {len(outputs)} files to {out_dir}")
    return 0


def cmd_compare(args: argparse.Namespace) -> int:
    ranking_a = read_ranking(args.ranking_a)
    ranking_b = read_ranking(args.ranking_b)
    if ranking_a.uda_id != ranking_b.uda_id:
        raise MismatchedSetError(
            f"rankings cover different UDAs: {ranking_a.uda_id!r} vs {ranking_b.uda_id!r}"
        )
    stats = compare_rankings(ranking_a, ranking_b, args.correlation)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    name = f"comparison.{table_ext(args.format)}"
    write_stats_table([("comparison", stats)], out_dir / name, args.format)
    write_manifest(
        out_dir,
        "compare",
        {
            "ranking_a": str(args.ranking_a),
            "ranking_b": str(args.ranking_b),
            "correlation": args.correlation,
            "format": args.format,
        },
        [name],
    )
    print(
        f"correlation={stats.correlation:.6f} n_changed={stats.n_changed}/{stats.n_total} "
        f"mean_shift={stats.mean_shift:.3f} median_shift={stats.median_shift:.3f} "
        f"max_shift={stats.max_shift}"
    )
    return 0


def _add_corpus_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--publications", required=True, help="publications table (csv or jsonl)")
    parser.add_argument("--staff", required=True, help="staff table")
    parser.add_argument("--category-map", required=True, help="category-to-UDA map")


def _add_common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--rounding", choices=ROUNDING_MODES, default="half_up")
    parser.add_argument("--min-fte", type=float, default=DEFAULT_MIN_FTE)
    parser.add_argument("--format", choices=FORMATS, default="csv", help="output format")
    parser.add_argument("--out", required=True, help="output directory")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rankshift",
        description="Simulate selective research assessments and measure ranking stability.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write a seeded synthetic corpus")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--n-universities", type=int, default=40)
    g.add_argument("--udas", default="AREA1:2.5", help="comma list of uda:fertility")
    g.add_argument("--staff-range", default="5:60", help="uniform FTE bounds, LO:HI")
    g.add_argument("--citation-shape", type=float, default=1.0)
    g.add_argument("--years", default="2001:2003", help="FIRST:LAST or comma list")
    g.add_argument("--categories-per-uda", type=int, default=3)
    g.add_argument("--format", choices=FORMATS, default="csv")
    g.add_argument("--out", required=True, help="output directory")
    g.set_defaults(func=cmd_generate)

    a = sub.add_parser("assess", help="rank universities per UDA")
    _add_corpus_flags(a)
    a.add_argument("--rate", help="per-researcher rate (0.25) or share:FRACTION")
    a.add_argument("--preset", choices=ASSESS_PRESETS)
    _add_common_flags(a)
    a.set_defaults(func=cmd_assess)

    s = sub.add_parser("sweep", help="replay one UDA across share scenarios")
    _add_corpus_flags(s)
    s.add_argument("--uda", required=True, help="UDA to sweep")
    s.add_argument("--shares", help="comma list of shares (values > 1 read as percent)")
    s.add_argument("--preset", choices=tuple(SWEEP_PRESETS))
    s.add_argument("--correlation", choices=("spearman", "kendall"), default="spearman")
    s.add_argument("--cost-per-product", type=float, default=1.0)
    s.add_argument(
        "--reference-rate",
        type=float,
        default=DEFAULT_PER_RESEARCHER,
        help="per-researcher rate of the reference scenario",
    )
    _add_common_flags(s)
    s.set_defaults(func=cmd_sweep)

    c = sub.add_parser("compare", help="rank-shift stats between two ranking files")
    c.add_argument("ranking_a")
    c.add_argument("ranking_b")
    c.add_argument("--correlation", choices=("spearman", "kendall"), default="spearman")
    c.add_argument("--format", choices=FORMATS, default="csv")
    c.add_argument("--out", required=True, help="output directory")
    c.set_defaults(func=cmd_compare)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 0 for --help and 2 for usage errors; ours is 1.
        return 0 if exc.code in (0, None) else 1
    try:
        return args.func(args)
    except InvalidConfigError as exc:
        # bad flag values and flag conflicts are usage errors, not data errors
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # pragma: no cover - defensive
        print(f"internal error: {exc!r}", file=sys.stderr)
        return 3


def cli() -> None:
    raise SystemExit(main(sys.argv[1:]))


if __name__ == "__main__":
    cli()
