"""Command-line entry point. One verb per pipeline stage.

Exit codes: 0 success, 1 data or request errors, 2 usage errors.
All commands are deterministic: same inputs, same bytes out. The --json
flag on predict/evaluate/recommend prints exactly the payload the HTTP
service would return for the equivalent request.
"""

from __future__ import annotations

import argparse
import sys

from .api import (
    ApiError,
    evaluate_payload,
    predict_payload,
    recommend_payload,
    render_json,
)
from .config import AppConfig, ConfigError, load_config
from .domain import CohortKey, ExamType, ScorelineError
from .ingest import (
    load_snapshot,
    parse_contexts,
    parse_enrollment,
    parse_srt_pairs,
    write_srt,
)
from .outliers import filter_scores
from .srt import build_srt, densify_if_sparse, interpolate_sparse, project_srt
from . import service


def _add_cohort_flags(parser, year_flag="--year"):
    parser.add_argument("--par", required=True, help="region identifier")
    parser.add_argument(year_flag, required=True, type=int, dest="year")
    parser.add_argument("--exam", required=True, help="like or wenke")
    parser.add_argument("--tier", required=True, type=int, choices=(1, 2, 3))


def _add_config_flags(parser):
    parser.add_argument("--config", help="flat key = value config file")
    parser.add_argument("--guard", type=int, help="clamp margin below the cutoff line")
    parser.add_argument("--pad", type=int, help="interval pad for recommendations")
    parser.add_argument("--fourier-order", type=int, help="projection series order")
    parser.add_argument("--outlier-method", help="none, single-mad or double-mad")


def _config_from(args) -> AppConfig:
    overrides = {
        "guard": getattr(args, "guard", None),
        "pad": getattr(args, "pad", None),
        "fourier_order": getattr(args, "fourier_order", None),
        "outlier_method": getattr(args, "outlier_method", None),
        "data_dir": getattr(args, "data", None),
        "port": getattr(args, "port", None),
    }
    return load_config(getattr(args, "config", None), overrides)


def _cohort_key(args) -> CohortKey:
    return CohortKey(args.year, args.par.casefold(), ExamType.parse(args.exam), args.tier)


def _context_for(args, contexts):
    key = _cohort_key(args)
    if key not in contexts:
        raise ScorelineError(f"cohort {key} not declared in the contexts file")
    return contexts[key]


def cmd_build_srt(args) -> int:
    contexts = parse_contexts(args.contexts)
    ctx = _context_for(args, contexts)
    records = [
        r for r in parse_enrollment(args.records, contexts) if r.key == ctx.key
    ]
    if not records:
        raise ScorelineError(f"no enrollment rows for {ctx.key}")
    table = build_srt(ctx, records)
    write_srt(table, args.out)
    print(f"wrote exact table for {ctx.key}: scores {table.low}..{table.high}, "
          f"{table.total} students -> {args.out}")
    return 0


def cmd_interpolate_srt(args) -> int:
    contexts = parse_contexts(args.contexts)
    ctx = _context_for(args, contexts)
    pairs = parse_srt_pairs(getattr(args, "in"))
    table = interpolate_sparse(ctx, pairs)
    write_srt(table, args.out)
    print(f"interpolated {len(pairs)} knots into scores {table.low}..{table.high} "
          f"-> {args.out}")
    return 0


def cmd_project_srt(args) -> int:
    config = _config_from(args)
    contexts = parse_contexts(args.contexts)
    prev_ctx = _context_for(args, contexts)
    target_key = CohortKey(args.target_year, prev_ctx.par, prev_ctx.exam_type, prev_ctx.tier)
    if target_key not in contexts:
        raise ScorelineError(f"target cohort {target_key} not declared")
    target_ctx = contexts[target_key]
    pairs = parse_srt_pairs(getattr(args, "in"))
    prev = densify_if_sparse(prev_ctx, pairs)
    table = project_srt(
        prev, target_ctx.ascl, target_ctx.highest, config.projection, context=target_ctx
    )
    write_srt(table, args.out)
    rms = table.curve.rms_residuals
    print(f"projected {target_key}: scores {table.low}..{table.high}, "
          f"fit rms ({rms[0]:.2f}, {rms[1]:.2f}) -> {args.out}")
    return 0


def cmd_clean(args) -> int:
    config = _config_from(args)
    contexts = parse_contexts(args.contexts) if args.contexts else None
    records = parse_enrollment(args.records, contexts)
    by_univ: dict[str, list[int]] = {}
    for r in records:
        if args.university and r.university != args.university.casefold():
            continue
        by_univ.setdefault(r.university, []).append(r.score)
    if not by_univ:
        raise ScorelineError("no matching enrollment rows")
    for university in sorted(by_univ):
        scores = by_univ[university]
        report = filter_scores(scores, args.method, config.mad)
        removed = ", ".join(f"{s} (stat {stat:.2f})" for s, stat in report.removed)
        flags = f" [{','.join(sorted(report.flags))}]" if report.flags else ""
        print(f"{university}: kept {len(report.kept)}/{len(scores)}{flags}"
              + (f"; removed {removed}" if removed else ""))
    return 0


def _print_predictions(payload) -> None:
    print(f"model {payload['model']}  target {payload['target_year']}  "
          f"bases {','.join(map(str, payload['base_years']))}  "
          f"table {payload['srt_provenance']}")
    for row in payload["predictions"]:
        flags = f"  [{','.join(row['flags'])}]" if row["flags"] else ""
        print(f"  {row['university']:<24} {row['predicted_score']:>4}{flags}")


def cmd_predict(args) -> int:
    config = _config_from(args)
    snapshot = load_snapshot(config.require_data_dir(), config.outlier_method, config.mad)
    body = {
        "par": args.par,
        "exam_type": args.exam,
        "tier": args.tier,
        "target_year": args.target,
        "base_years": [int(y) for y in args.base_years.split(",")],
        "model": args.model,
        "guard": config.guard,
    }
    payload = predict_payload(snapshot, config, body)
    if args.json:
        sys.stdout.buffer.write(render_json(payload))
    else:
        _print_predictions(payload)
    return 0


def cmd_evaluate(args) -> int:
    config = _config_from(args)
    snapshot = load_snapshot(config.require_data_dir(), config.outlier_method, config.mad)
    body = {
        "target_year": args.target,
        "base_years": [int(y) for y in args.base_years.split(",")],
        "models": args.models,
        "pd": [int(p) for p in args.pd.split(",")] if args.pd else None,
        "par": args.par,
        "workers": args.workers,
    }
    payload = evaluate_payload(snapshot, config, body)
    if args.json:
        sys.stdout.buffer.write(render_json(payload))
    else:
        sys.stdout.write(payload["text"])
    return 0


def cmd_recommend(args) -> int:
    config = _config_from(args)
    snapshot = load_snapshot(config.require_data_dir(), config.outlier_method, config.mad)
    body = {
        "par": args.par,
        "exam_type": args.exam,
        "tier": args.tier,
        "target_year": args.target,
        "base_years": [int(y) for y in args.base_years.split(",")],
        "model": args.model,
        "j": args.j,
        "pad": args.pad or config.pad,
        "gaokao_score": args.score,
        "preferred_locations": args.prefer_location or [],
        "disliked_locations": args.dislike_location or [],
        "preferred_majors": args.prefer_major or [],
        "disliked_majors": args.dislike_major or [],
    }
    payload = recommend_payload(snapshot, config, body)
    if args.json:
        sys.stdout.buffer.write(render_json(payload))
        return 0
    print(f"score {payload['gaokao_score']}  model {payload['model']}  "
          f"J={payload['j']}  table {payload['srt_provenance']}")
    for slot in payload["slots"]:
        print(f"[{slot['label']}]")
        if not slot["universities"]:
            print("  (none)")
        for card in slot["universities"]:
            flags = f"  [{','.join(card['flags'])}]" if card["flags"] else ""
            print(f"  {card['university']:<24} predicted {card['predicted_low']}-"
                  f"{card['predicted_high']}  slot [{card['interval'][0]},"
                  f"{card['interval'][1]}){flags}")
    for note in payload["diagnostics"]:
        print(f"note: {note}")
    return 0


def cmd_serve(args) -> int:
    config = _config_from(args)
    snapshot = load_snapshot(config.require_data_dir(), config.outlier_method, config.mad)
    service.serve(snapshot, config, host=args.host, port=config.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="scoreline",
        description="Rank-based admission score forecasting and recommendation",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build-srt", help="count an exact score-ranking table from records")
    p.add_argument("--records", required=True)
    p.add_argument("--contexts", required=True)
    _add_cohort_flags(p)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_build_srt)

    p = sub.add_parser("interpolate-srt", help="densify a sparse score-ranking table")
    p.add_argument("--in", required=True)
    p.add_argument("--contexts", required=True)
    _add_cohort_flags(p)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_interpolate_srt)

    p = sub.add_parser("project-srt", help="forecast next year's table from this year's")
    p.add_argument("--in", required=True, help="previous year's table file")
    p.add_argument("--contexts", required=True)
    _add_cohort_flags(p)
    p.add_argument("--target-year", required=True, type=int)
    _add_config_flags(p)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_project_srt)

    p = sub.add_parser("clean", help="run outlier filtering over enrollment records")
    p.add_argument("--records", required=True)
    p.add_argument("--contexts")
    p.add_argument("--method", required=True, choices=("none", "single-mad", "double-mad"))
    p.add_argument("--university")
    _add_config_flags(p)
    p.set_defaults(func=cmd_clean)

    p = sub.add_parser("predict", help="predict admission scores for one cohort")
    p.add_argument("--data", required=True, help="data directory")
    p.add_argument("--model", required=True, choices=("brm", "wsm", "wpm", "aasm", "aadm"))
    p.add_argument("--target", required=True, type=int)
    p.add_argument("--base-years", required=True, help="comma-separated, e.g. 2013,2014")
    p.add_argument("--par", required=True)
    p.add_argument("--exam", required=True)
    p.add_argument("--tier", required=True, type=int, choices=(1, 2, 3))
    p.add_argument("--json", action="store_true")
    _add_config_flags(p)
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("evaluate", help="grid model accuracy against true score lines")
    p.add_argument("--data", required=True)
    p.add_argument("--target", required=True, type=int)
    p.add_argument("--base-years", required=True)
    p.add_argument("--models", default="all", help="'all' or comma-separated ids")
    p.add_argument("--pd", help="comma-separated tolerances, e.g. 5,6,7")
    p.add_argument("--par")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--json", action="store_true")
    _add_config_flags(p)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("recommend", help="bucket universities around a student's score")
    p.add_argument("--data", required=True)
    p.add_argument("--score", required=True, type=int)
    p.add_argument("--par", required=True)
    p.add_argument("--exam", required=True)
    p.add_argument("--tier", required=True, type=int, choices=(1, 2, 3))
    p.add_argument("--target", required=True, type=int)
    p.add_argument("--base-years", required=True)
    p.add_argument("--model", default="brm")
    p.add_argument("--j", type=int, default=3)
    p.add_argument("--prefer-location", action="append")
    p.add_argument("--dislike-location", action="append")
    p.add_argument("--prefer-major", action="append")
    p.add_argument("--dislike-major", action="append")
    p.add_argument("--json", action="store_true")
    _add_config_flags(p)
    p.set_defaults(func=cmd_recommend)

    p = sub.add_parser("serve", help="serve the read-only HTTP API")
    p.add_argument("--data", required=True)
    p.add_argument("--host", default="0.0.0.0")
    p.add_argument("--port", type=int)
    _add_config_flags(p)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ScorelineError, ApiError, ConfigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
