"""Command-line front end: ``gabor-janssen {eval,table,scan,certify}``."""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from contextlib import contextmanager
from fractions import Fraction

from .ambiguity import TailStrategy, Verdict, janssen_sum, parse_cutoff
from .certify import REPORT_IDS, REFERENCE_TABLE, run_reports, table_rows
from .errors import HypothesisViolated, JanssenError
from .intervals import ceil_decimals
from .lattice import RectLattice
from .specfun import PrecisionConfig

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_HYPOTHESIS = 3
EXIT_INCONCLUSIVE = 10

CSV_HEADER = "n,a,b,density,value,verdict,mode,cutoff"

PRESETS = ("diagonal-nmax120", "density3", "safety-h15-grid")


def _positive_rational(text: str) -> Fraction:
    try:
        v = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None
    if v <= 0:
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return v


def _cutoff(text: str):
    try:
        return parse_cutoff(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _range(text: str) -> tuple[Fraction, Fraction]:
    lo, sep, hi = text.partition(":")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected LO:HI, got {text!r}")
    lo_v, hi_v = _positive_rational(lo), _positive_rational(hi)
    if lo_v > hi_v:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return lo_v, hi_v


def _orders(text: str) -> list[int]:
    lo, sep, hi = text.partition("-")
    try:
        a = int(lo)
        b = int(hi) if sep else a
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected N or N-M, got {text!r}") from None
    if a < 0 or b < a:
        raise argparse.ArgumentTypeError(f"bad order range {text!r}")
    return list(range(a, b + 1))


def _default_jobs() -> int:
    env = os.environ.get("JANSSEN_JOBS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return os.cpu_count() or 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gabor-janssen",
        description="Janssen-test evaluation for Gabor systems with Hermite windows.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def precision_flags(p, default_mode):
        p.add_argument("--mode", choices=("certified", "fast"), default=default_mode)
        p.add_argument("--precision-bits", type=int, default=128)
        p.add_argument("--target-width", type=float, default=1e-30)
        p.add_argument("--out", help="write output here instead of standard output")

    ev = sub.add_parser("eval", help="evaluate one lattice")
    ev.add_argument("--order", type=int, required=True)
    ev.add_argument("--density", type=_positive_rational, help="square lattice of this density")
    ev.add_argument("--a", type=_positive_rational)
    ev.add_argument("--b", type=_positive_rational)
    ev.add_argument("--cutoff", type=_cutoff, default=parse_cutoff("maxnorm:5"))
    precision_flags(ev, "certified")

    tb = sub.add_parser("table", help="finite parts for n = 0..36 against the reference table")
    precision_flags(tb, "certified")

    sc = sub.add_parser("scan", help="grid scan, CSV output")
    sc.add_argument("--preset", choices=PRESETS)
    sc.add_argument("--n", type=_orders, help="order N or range N-M")
    sc.add_argument("--a-range", type=_range)
    sc.add_argument("--b-range", type=_range)
    sc.add_argument("--step", type=_positive_rational)
    sc.add_argument("--cutoff", type=_cutoff, default=None,
                    help="default maxnorm:5 (maxnorm:12 for safety-h15-grid)")
    sc.add_argument("--jobs", type=int, default=None)
    precision_flags(sc, None)

    ce = sub.add_parser("certify", help="run certification reports, JSON output")
    ce.add_argument("--props", default="all", help="'all' or a comma-separated list of ids")
    ce.add_argument("--out")
    return parser


@contextmanager
def _output(path):
    if path:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            yield fh
    else:
        yield sys.stdout


def _precision(args) -> PrecisionConfig:
    bits = args.precision_bits
    return PrecisionConfig(mode=args.mode, bits=bits, target_width=args.target_width,
                           max_bits=max(8192, bits))


# ---------------------------------------------------------------------------
# eval


def cmd_eval(args, parser) -> int:
    if args.order < 0:
        parser.error("--order must be non-negative")
    if args.density is not None and (args.a is not None or args.b is not None):
        parser.error("use either --density or --a/--b")
    if args.density is not None:
        lattice = RectLattice.square(args.density)
    elif args.a is not None and args.b is not None:
        lattice = RectLattice.from_steps(args.a, args.b)
    else:
        parser.error("give --density or both --a and --b")
    try:
        prec = _precision(args)
    except ValueError as exc:
        parser.error(str(exc))
    try:
        strategy = TailStrategy.for_cutoff(args.cutoff)
    except ValueError as exc:
        parser.error(str(exc))
    try:
        report = janssen_sum(args.order, lattice, strategy, prec)
    except HypothesisViolated as exc:
        print(f"tail hypothesis violated: {exc}", file=sys.stderr)
        return EXIT_HYPOTHESIS
    out = report.to_dict()
    out["value"] = report.value
    out["density"] = float(format(math.sqrt(lattice.density_squared), ".17g"))
    with _output(args.out) as fh:
        json.dump(out, fh, indent=2)
        fh.write("\n")
    return EXIT_OK if report.verdict is Verdict.FRAME_CERTIFIED else EXIT_INCONCLUSIVE


# ---------------------------------------------------------------------------
# table


def _fast_table_rows() -> list[dict]:
    rows = []
    fast = PrecisionConfig(mode="fast")
    for n, ref in enumerate(REFERENCE_TABLE):
        rep = janssen_sum(n, RectLattice.square(n + 1), TailStrategy(), fast)
        v = rep.finite_part.hi
        if ref == "2":
            match = abs(v - 2) < 1e-12
        else:
            match = f"{float(ceil_decimals(v)):.5f}" == ref
        rows.append({"n": n, "value": f"{float(ceil_decimals(v)):.5f}", "published": ref,
                     "match": match})
    return rows


def cmd_table(args, parser) -> int:
    rows = table_rows() if args.mode == "certified" else _fast_table_rows()
    with _output(args.out) as fh:
        fh.write("n,value,published,match\n")
        for r in rows:
            value = "2" if r["published"] == "2" and r["match"] else r["value"]
            fh.write(f"{r['n']},{value},{r['published']},{'true' if r['match'] else 'false'}\n")
    bad = [r["n"] for r in rows if not r["match"]]
    status = "PASS" if not bad else "FAIL"
    detail = f" (mismatched n: {', '.join(map(str, bad))})" if bad else ""
    print(f"{status}: {len(rows) - len(bad)}/{len(rows)} rows match{detail}", file=sys.stderr)
    return EXIT_OK if not bad else EXIT_FAILED


# ---------------------------------------------------------------------------
# scan


def _fmt(x: Fraction | float, digits: int = 12) -> str:
    return format(float(x), f".{digits}g")


def _grid(lo: Fraction, hi: Fraction, step: Fraction) -> list[Fraction]:
    count = int((hi - lo) / step)
    return [lo + i * step for i in range(count + 1)]


def scan_tasks(args) -> list[tuple]:
    """Grid points in output order: n, then a, then b ascending."""
    mode = args.mode
    tasks = []
    if args.preset == "diagonal-nmax120":
        for n in range(121):
            tasks.append((n, Fraction(n + 1), None, None, mode or "fast"))
        return tasks
    if args.preset == "density3":
        return [(n, Fraction(3), None, None, mode or "certified") for n in range(41)]
    if args.preset == "safety-h15-grid":
        grid = _grid(Fraction("0.05"), Fraction("1.3"), Fraction("0.0125"))
        return [(15, None, a, b, mode or "fast") for a in grid for b in grid]
    if args.n is None or args.a_range is None:
        return []
    step = args.step or Fraction("0.0125")
    a_vals = _grid(*args.a_range, step)
    b_vals = _grid(*(args.b_range or args.a_range), step)
    for n in args.n:
        for a in a_vals:
            for b in b_vals:
                tasks.append((n, None, a, b, mode or "fast"))
    return tasks


def scan_row(task: tuple, cutoff_text: str, bits: int, target_width: float) -> str:
    n, delta, a, b, mode = task
    if delta is not None:
        lattice = RectLattice.square(delta)
        step = 1 / math.sqrt(delta)
        a_txt = b_txt = _fmt(step)
        dens = _fmt(delta)
    else:
        lattice = RectLattice.from_steps(a, b)
        a_txt, b_txt = _fmt(a), _fmt(b)
        dens = _fmt(1 / (a * b))
    prec = PrecisionConfig(mode=mode, bits=bits, target_width=target_width,
                           max_bits=max(8192, bits))
    cutoff = parse_cutoff(cutoff_text)
    try:
        rep = janssen_sum(n, lattice, TailStrategy.for_cutoff(cutoff), prec)
        value = format(rep.value, ".6g")
        verdict = rep.verdict.value
    except HypothesisViolated:
        value = "inf"
        verdict = Verdict.INCONCLUSIVE.value if mode == "certified" else Verdict.FAST_ESTIMATE.value
    return f"{n},{a_txt},{b_txt},{dens},{value},{verdict},{mode},{cutoff_text}"


def _scan_chunk(args: tuple) -> list[str]:
    tasks, cutoff_text, bits, target_width = args
    return [scan_row(t, cutoff_text, bits, target_width) for t in tasks]


def run_scan(tasks: list[tuple], cutoff_text: str, jobs: int, bits: int = 128,
             target_width: float = 1e-30) -> list[str]:
    """CSV rows in task order; identical output for any ``jobs``."""
    if jobs <= 1 or len(tasks) < 2:
        return _scan_chunk((tasks, cutoff_text, bits, target_width))
    size = max(1, math.ceil(len(tasks) / (jobs * 4)))
    chunks = [(tasks[i:i + size], cutoff_text, bits, target_width)
              for i in range(0, len(tasks), size)]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return [row for part in pool.map(_scan_chunk, chunks) for row in part]


def cmd_scan(args, parser) -> int:
    tasks = scan_tasks(args)
    if not tasks:
        parser.error("empty grid: give --preset, or --n with --a-range")
    jobs = args.jobs if args.jobs is not None else _default_jobs()
    cutoff = args.cutoff or parse_cutoff(
        "maxnorm:12" if args.preset == "safety-h15-grid" else "maxnorm:5")
    rows = run_scan(tasks, str(cutoff), max(1, jobs), args.precision_bits,
                    args.target_width)
    with _output(args.out) as fh:
        fh.write(CSV_HEADER + "\n")
        for row in rows:
            fh.write(row + "\n")
    return EXIT_OK


# ---------------------------------------------------------------------------
# certify


def cmd_certify(args, parser) -> int:
    ids = list(REPORT_IDS) if args.props == "all" else [
        p.strip() for p in args.props.split(",") if p.strip()]
    unknown = [i for i in ids if i not in REPORT_IDS]
    if unknown or not ids:
        parser.error(f"unknown report ids: {', '.join(unknown) or '(none)'}; "
                     f"choose from {', '.join(REPORT_IDS)}")
    reports = run_reports(ids)
    with _output(args.out) as fh:
        json.dump([r.to_dict() for r in reports], fh, indent=2)
        fh.write("\n")
    return EXIT_OK if all(r.verified for r in reports) else EXIT_FAILED


COMMANDS = {"eval": cmd_eval, "table": cmd_table, "scan": cmd_scan, "certify": cmd_certify}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args, parser)
    except HypothesisViolated as exc:
        print(f"tail hypothesis violated: {exc}", file=sys.stderr)
        return EXIT_HYPOTHESIS
    except JanssenError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILED
    except BrokenPipeError:
        # reader went away (e.g. piped into head); keep the interpreter from
        # complaining again when it flushes stdout at exit
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return EXIT_FAILED


if __name__ == "__main__":
    raise SystemExit(main())
