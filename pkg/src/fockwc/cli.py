"""Command line front end: a thin client over the job pipeline.

Each subcommand runs one task against an operator description read from a
JSON config file (``--config -`` reads stdin); numeric options can be
overridden with flags.  By default jobs execute in-process; ``--url`` points
the same request at a running service instead.

Exit codes: 0 all requested checks passed, 1 numeric failure or failed
verification (partial report still written), 2 malformed config / usage.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
import urllib.error
import urllib.request
from pathlib import Path

from pydantic import ValidationError

from . import pipeline
from .schemas import JobConfig, Report, SweepSummary

SINGLE_TASKS = ("classify", "spectrum", "ergodic", "verify", "matrix")


def _read_config(path: str):
    if path == "-":
        text = sys.stdin.read()
    else:
        text = Path(path).read_text()
    return json.loads(text)


def _apply_overrides(raw: dict, args) -> dict:
    raw = dict(raw)
    numeric = dict(raw.get("numeric", {}))
    for key, flag in (("N", "N"), ("nmax", "nmax"), ("tol", "tol"), ("seed", "seed")):
        value = getattr(args, flag, None)
        if value is not None:
            numeric[key] = value
    if numeric:
        raw["numeric"] = numeric
    return raw


def _post_json(url: str, payload: dict) -> dict:
    data = json.dumps(payload).encode()
    request = urllib.request.Request(
        url, data=data, headers={"Content-Type": "application/json"}, method="POST"
    )
    with urllib.request.urlopen(request) as response:
        return json.loads(response.read().decode())


def _emit(report: Report, args) -> int:
    text = pipeline.report_json(report)
    if args.out:
        out = Path(args.out)
        if args.task == "matrix" and out.suffix == ".csv":
            if report.matrix_csv is None:
                print("no matrix in report", file=sys.stderr)
                return 1
            out.write_text(report.matrix_csv)
        else:
            out.write_text(text)
    else:
        sys.stdout.write(text)
    return 0 if report.all_passed() else 1


def _cmd_single(args) -> int:
    try:
        raw = _read_config(args.config)
        raw = _apply_overrides(raw, args)
        raw["tasks"] = [args.task]
        config = JobConfig.model_validate(raw)
    except (OSError, json.JSONDecodeError, ValidationError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    started = time.perf_counter()
    if args.url:
        try:
            payload = _post_json(
                args.url.rstrip("/") + "/run", config.model_dump(mode="json")
            )
            report = Report.model_validate(payload)
        except (urllib.error.URLError, ValidationError) as exc:
            print(f"service error: {exc}", file=sys.stderr)
            return 1
    else:
        report = pipeline.run(config, with_timing=args.timing)
    print(f"{args.task}: {time.perf_counter() - started:.3f}s", file=sys.stderr)
    return _emit(report, args)


def _cmd_sweep(args) -> int:
    try:
        raw = _read_config(args.config)
        jobs = raw["jobs"] if isinstance(raw, dict) else raw
        if not isinstance(jobs, list) or not jobs:
            raise ValueError("sweep config must be a list of jobs or {\"jobs\": [...]}")
    except (OSError, json.JSONDecodeError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    started = time.perf_counter()
    if args.url:
        try:
            payload = _post_json(args.url.rstrip("/") + "/sweep", {"jobs": jobs})
            summary = SweepSummary.model_validate(payload)
        except (urllib.error.URLError, ValidationError) as exc:
            print(f"service error: {exc}", file=sys.stderr)
            return 1
        ran_rows = [row for row in summary.rows if not row.error]
        for row, report in zip(ran_rows, summary.reports):
            (out_dir / f"report_{row.index:03d}.json").write_text(pipeline.report_json(report))
        (out_dir / "summary.csv").write_text(pipeline.summary_csv(summary.rows))
    else:
        summary = pipeline.sweep(jobs, out_dir=out_dir, max_workers=args.jobs)
    print(f"sweep: {len(summary.rows)} jobs, {time.perf_counter() - started:.3f}s", file=sys.stderr)
    return 0 if all(row.ok for row in summary.rows) else 1


def _cmd_serve(args) -> int:
    from .service import serve

    serve(host=args.host, port=args.port)
    return 0


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", required=True, help="JSON job config path, or - for stdin")
    parser.add_argument("--out", help="write the report (or CSV for matrix) to this path")
    parser.add_argument("-N", type=int, default=None, help="truncation dimension override")
    parser.add_argument("--nmax", type=int, default=None, help="iterate count override")
    parser.add_argument("--tol", type=float, default=None, help="tolerance override")
    parser.add_argument("--seed", type=int, default=None, help="verification seed override")
    parser.add_argument("--timing", action="store_true", help="include wall-clock timing in the report")
    parser.add_argument("--url", default=None, help="send the job to a running service instead")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fockwc",
        description="Classify and numerically verify weighted composition operators on Fock spaces.",
    )
    sub = parser.add_subparsers(dest="task", required=True)
    for name, help_text in (
        ("classify", "boundedness, compactness, power boundedness and norm estimates"),
        ("spectrum", "spectrum descriptor"),
        ("ergodic", "mean / uniform mean ergodicity verdicts"),
        ("verify", "numeric oracle cross-checks"),
        ("matrix", "truncated matrix export (CSV)"),
    ):
        p = sub.add_parser(name, help=help_text)
        _add_common(p)
        p.set_defaults(func=_cmd_single)
    p = sub.add_parser("sweep", help="run many jobs and write reports plus a summary CSV")
    p.add_argument("--config", required=True, help="JSON file with a list of jobs (or {\"jobs\": [...]})")
    p.add_argument("--out-dir", required=True, help="directory for per-job reports and summary.csv")
    p.add_argument("--jobs", type=int, default=4, help="parallel workers")
    p.add_argument("--url", default=None, help="send the sweep to a running service instead")
    p.set_defaults(func=_cmd_sweep)
    p = sub.add_parser("serve", help="start the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=_cmd_serve)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
