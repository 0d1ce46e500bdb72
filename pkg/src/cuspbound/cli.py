"""Command-line front end: bound reports, hull exports, verification and fuzzing."""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from . import formats
from .bounds import bound_report
from .flow import canonicalize_flow, format_rational, parse_vector
from .hull import crossing_edge, upper_boundary
from .oracle import derive_seeds, random_flow, verify_all
from .weyl import EnumerationLimitError


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class FuzzTrial:
    index: int
    seed: int
    flow: tuple[str, ...]
    checks: int
    failures: tuple[dict, ...]

    @property
    def passed(self) -> bool:
        return not self.failures


def _flow(args):
    try:
        raw = parse_vector(args.alpha)
        total = sum(raw)
        if total != 0 and not args.project:
            raise UsageError(f"entries sum to {format_rational(total)}, not 0; use --project to subtract the mean")
        return canonicalize_flow(raw, project=args.project)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _k_selection(args, d: int) -> list[int]:
    if args.all_k or args.k is None:
        return list(range(1, d))
    try:
        ks = sorted({int(p) for p in args.k.split(",")})
    except ValueError:
        raise UsageError(f"--k expects an integer or comma-separated integers, got {args.k!r}") from None
    for k in ks:
        if not 1 <= k <= d - 1:
            raise UsageError(f"k={k} outside 1..{d - 1}")
    return ks


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    try:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise UsageError(f"cannot write {out}: {exc.strerror or exc}") from None


def cmd_bound(args) -> int:
    alpha = _flow(args)
    ks = _k_selection(args, alpha.d)
    report = bound_report(alpha)
    fmt = args.format or "json"
    if fmt == "json":
        text = formats.dumps(formats.bound_report_dict(report, ks))
    elif fmt == "table":
        text = formats.bound_report_table(report, ks)
    else:
        raise UsageError(f"bound supports --format json or table, not {fmt}")
    _emit(text, args.out)
    return 0


def cmd_hull(args) -> int:
    alpha = _flow(args)
    if args.k is None or args.all_k:
        raise UsageError("hull needs a single --k")
    ks = _k_selection(args, alpha.d)
    if len(ks) != 1:
        raise UsageError("hull needs a single --k")
    boundary = upper_boundary(ks[0], alpha)
    crossing = crossing_edge(boundary)
    fmt = args.format or "csv"
    if fmt == "csv":
        text = formats.hull_csv(boundary)
    elif fmt == "svg":
        text = formats.hull_svg(boundary, crossing)
    elif fmt == "json":
        text = formats.dumps(formats.hull_dict(boundary, crossing))
    else:
        raise UsageError(f"hull supports --format csv, svg or json, not {fmt}")
    _emit(text, args.out)
    return 0


def cmd_verify(args) -> int:
    alpha = _flow(args)
    report = verify_all(alpha, limit=args.limit)
    fmt = args.format or "table"
    if fmt == "json":
        text = formats.dumps(report.to_dict())
    elif fmt == "table":
        text = report.table() + "\n"
    else:
        raise UsageError(f"verify supports --format json or table, not {fmt}")
    _emit(text, args.out)
    return 0 if report.passed else 1


def run_trial(index: int, seed: int, d: int, max_den: int, max_num: int, pool: int | None, limit: int | None) -> FuzzTrial:
    alpha = random_flow(d, seed, max_denominator=max_den, max_numerator=max_num, pool=pool)
    report = verify_all(alpha, limit=limit)
    return FuzzTrial(
        index=index,
        seed=seed,
        flow=tuple(format_rational(x) for x in alpha.entries),
        checks=len(report.checks),
        failures=tuple(c.to_dict() for c in report.failures()),
    )


def _run_trial_packed(job):
    return run_trial(*job)


def fuzz_trials(d: int, trials: int, seed: int, max_den: int = 10, max_num: int = 10,
                pool: int | None = None, limit: int | None = None, workers: int = 1) -> list[FuzzTrial]:
    """Trials in index order; the result does not depend on ``workers``."""
    jobs = [(i, s, d, max_den, max_num, pool, limit) for i, s in enumerate(derive_seeds(seed, trials))]
    if workers <= 1:
        return [run_trial(*job) for job in jobs]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(_run_trial_packed, jobs, chunksize=max(1, len(jobs) // (4 * workers))))


def fuzz_dict(args, results: list[FuzzTrial]) -> dict:
    return {
        "config": {
            "d": args.d,
            "trials": args.trials,
            "seed": args.seed,
            "max_den": args.max_den,
            "max_num": args.max_num,
            "pool": args.pool,
        },
        "passed": sum(r.passed for r in results),
        "failed": sum(not r.passed for r in results),
        "trials": [
            {
                "index": r.index,
                "seed": r.seed,
                "flow": list(r.flow),
                "checks": r.checks,
                "failures": list(r.failures),
            }
            for r in results
        ],
    }


def fuzz_table(results: list[FuzzTrial]) -> str:
    lines = []
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        lines.append(f"{status} trial {r.index:>4} seed {r.seed:>10} checks {r.checks:>4} flow ({', '.join(r.flow)})")
        for f in r.failures:
            lines.append(f"     {f['name']}: expected {f['relation']} {f['expected']}, actual {f['actual']}")
    passed = sum(r.passed for r in results)
    lines.append(f"{passed}/{len(results)} trials passed")
    return "\n".join(lines) + "\n"


def cmd_fuzz(args) -> int:
    if args.d is None:
        raise UsageError("fuzz needs --d")
    if args.d < 2 or args.trials < 0 or args.max_den < 1 or args.max_num < 1:
        raise UsageError("fuzz needs d >= 2, trials >= 0 and positive --max-den/--max-num")
    results = fuzz_trials(args.d, args.trials, args.seed, args.max_den, args.max_num,
                          args.pool, args.limit, args.workers)
    fmt = args.format or "table"
    if fmt == "json":
        text = formats.dumps(fuzz_dict(args, results))
    elif fmt == "table":
        text = fuzz_table(results)
    else:
        raise UsageError(f"fuzz supports --format json or table, not {fmt}")
    _emit(text, args.out)
    return 0 if all(r.passed for r in results) else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cuspbound",
        description="Exact upper bounds on entropy in the cusp for diagonal flows on SL_d(R)/SL_d(Z).",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def flow_args(p, k_help):
        p.add_argument("--alpha", required=True, help="comma-separated exact rationals, e.g. 1,0,-1 or 1/2,-1/2")
        p.add_argument("--project", action="store_true", help="subtract the exact mean instead of rejecting non-zero sums")
        p.add_argument("--k", help=k_help)
        p.add_argument("--all-k", action="store_true", help="every k in 1..d-1")

    def output_args(p, choices):
        p.add_argument("--format", choices=choices)
        p.add_argument("--out", help="write to this path instead of stdout")

    p = sub.add_parser("bound", help="closed-form bounds for every maximal parabolic and the whole cusp")
    flow_args(p, "k or comma-separated list of k (default: all)")
    output_args(p, ["json", "table"])
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("hull", help="upper boundary of the (psi_k, h_k) point cloud")
    flow_args(p, "the block size k")
    output_args(p, ["csv", "svg", "json"])
    p.set_defaults(func=cmd_hull)

    p = sub.add_parser("verify", help="check every closed form against brute force for one flow")
    p.add_argument("--alpha", required=True)
    p.add_argument("--project", action="store_true")
    p.add_argument("--limit", type=int, help="largest d allowed for d! enumeration (default 8)")
    output_args(p, ["table", "json"])
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("fuzz", help="verify many seeded random flows")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-den", type=int, default=10)
    p.add_argument("--max-num", type=int, default=10)
    p.add_argument("--pool", type=int, help="draw entries from this many values, forcing repeats")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--limit", type=int)
    output_args(p, ["table", "json"])
    p.set_defaults(func=cmd_fuzz)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (UsageError, EnumerationLimitError) as exc:
        print(f"cuspbound {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
