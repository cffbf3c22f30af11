"""Command-line interface: ``househunt <subcommand> ...``.

Exit status is 0 on success, 1 when a verification fails or a search finds
nothing, and 2 on usage errors. Data goes to stdout; progress and
diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import math
import sys
import time
from dataclasses import replace
from typing import Sequence

from . import bounds, corpus
from .algebra import minimal_gate
from .poly import IntPolynomial, PolynomialError, is_primitive, is_squarefree, parse_poly
from .roots import RootFindingError, UndecidableError, count_outside_unit, house, mahler_measure
from .search import SearchConfig, SearchError, checkpoint_file, default_height, partition_merge, search_extremal

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def fmt(x: float) -> str:
    return f"{x:.15g}"


def _error_exponent(err: float) -> str:
    if err <= 0:
        return "exact"
    return f"1e{math.ceil(math.log10(err))}"


def _add_poly_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("poly", nargs="?", help="descending integer coefficients, e.g. \"1 3 1\"")
    p.add_argument("--half", help="half list of a reciprocal polynomial, x^d down to x^(d/2)")
    p.add_argument("--full", help="descending coefficients")


def _poly_from(args: argparse.Namespace) -> IntPolynomial:
    given = [(t, enc) for t, enc in ((args.poly, "full"), (args.half, "half"), (args.full, "full")) if t]
    if len(given) != 1:
        raise UsageError("give exactly one polynomial (positional, --half or --full)")
    text, enc = given[0]
    try:
        p = parse_poly(text, enc)
    except PolynomialError as exc:
        raise UsageError(str(exc)) from exc
    if p.degree < 1:
        raise UsageError("polynomial must have positive degree")
    return p


def _require_squarefree(p: IntPolynomial) -> None:
    if not is_squarefree(p):
        raise UsageError("polynomial has a repeated factor (gcd(P, P') is not constant)")


def _flags(p: IntPolynomial) -> str:
    out = ("P" if is_primitive(p) else "") + ("M" if mahler_measure(p) < corpus.MAHLER_SMALL else "")
    return out or "-"


# -- subcommands -----------------------------------------------------------------------


def cmd_house(args: argparse.Namespace) -> int:
    p = _poly_from(args)
    _require_squarefree(p)
    h, err = house(p)
    if args.tsv:
        print(f"{p.degree}\t{fmt(h)}\t{_error_exponent(err)}")
    else:
        print(f"{fmt(h)}\terror <= {_error_exponent(err)}")
    return EXIT_OK


def cmd_measure(args: argparse.Namespace) -> int:
    p = _poly_from(args)
    _require_squarefree(p)
    if abs(p.leading) != 1:
        raise UsageError("the Mahler measure here needs a monic polynomial")
    m = mahler_measure(p)
    h, err = house(p)
    try:
        nu = str(count_outside_unit(p))
    except UndecidableError:
        nu = "?"
    if args.tsv:
        print(f"{p.degree}\t{fmt(m)}\t{fmt(h)}\t{nu}\t{_error_exponent(err)}")
    else:
        print(f"{fmt(m)}\terror <= {_error_exponent(max(err, 1e-15) * max(1, p.degree))}\tnu {nu}")
    return EXIT_OK


def cmd_classify(args: argparse.Namespace) -> int:
    p = _poly_from(args)
    if abs(p.leading) != 1:
        raise UsageError("classification needs a monic polynomial")
    print(str(minimal_gate(p)))
    return EXIT_OK


def cmd_bounds(args: argparse.Namespace) -> int:
    d = args.degree
    if d < 2:
        raise UsageError("--degree must be at least 2")
    if args.reciprocal and (d % 2 or d < 6):
        raise UsageError("reciprocal bounds need an even degree >= 6")
    cols = [str(d), fmt(bounds.matveev_lower_bound(d, reciprocal=args.reciprocal))]
    cols += [fmt(bounds.column_bound(d, k)) for k in ("theta32", "tau10", "sigma8")]
    witness, wh = bounds.upper_bound_witness(d, reciprocal=args.reciprocal)
    cols += [fmt(wh), witness.format()]
    if not args.tsv:
        print("degree\tmatveev\ttheta^(3/(2d))\ttau^(10/d)\tsigma^(8/d)\twitness_house\twitness")
    print("\t".join(cols))
    return EXIT_OK


def _parse_shard(text: str | None) -> tuple[int, int] | None:
    if text is None:
        return None
    try:
        i, n = (int(x) for x in text.split("/"))
    except ValueError as exc:
        raise UsageError(f"--shard expects i/n, got {text!r}") from exc
    if not (n >= 1 and 0 <= i < n):
        raise UsageError(f"--shard index out of range: {text}")
    return i, n


class _Progress:
    def __init__(self, label: str, every: float = 5.0) -> None:
        self.label, self.every, self.last = label, every, time.monotonic()

    def __call__(self, done: int, total: int) -> None:
        now = time.monotonic()
        if now - self.last >= self.every:
            self.last = now
            print(f"[{self.label}] {done}/{total} ({100 * done / max(total, 1):.1f}%)", file=sys.stderr)


def _run_shard(config: SearchConfig):
    return search_extremal(config)


def cmd_search(args: argparse.Namespace) -> int:
    d = args.degree
    height = args.height if args.height is not None else (default_height(d) if d >= 2 else 1)
    shard = _parse_shard(args.shard)
    try:
        base = SearchConfig(
            degree=d, height=height, threshold=args.threshold,
            prune_lemmas=not args.no_prune, prune_real_root=not args.no_prune,
            checkpoint_path=args.checkpoint, skip_nonprimitive=args.skip_nonprimitive,
        )
    except SearchError as exc:
        raise UsageError(str(exc)) from exc
    if shard is not None:
        configs = [replace(base, partitions=shard)]
    elif args.jobs > 1:
        if args.checkpoint:
            raise UsageError("--checkpoint names one file; use the checkpoint directory variable with --jobs")
        configs = [replace(base, partitions=(i, args.jobs)) for i in range(args.jobs)]
    else:
        configs = [base]
    for c in configs:
        path = checkpoint_file(c)
        if path:
            print(f"[search] checkpoint {path}", file=sys.stderr)
    if len(configs) == 1:
        record = search_extremal(configs[0], progress=_Progress(f"d={d} H={height}"))
    else:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            record = partition_merge(list(pool.map(_run_shard, configs)))
    if not record.found:
        print(f"no Candidate polynomial at degree {d}, height {height}", file=sys.stderr)
        return EXIT_FAIL
    rows = record.ties if args.best_only else sorted({*record.ties, *record.candidates_below_threshold})
    if not args.tsv:
        print("degree\thouse\tnu\thalf\tflags")
    for h in rows:
        print(f"{d}\t{fmt(h.house)}\t{h.nu}\t{' '.join(map(str, h.half))}\t{_flags(h.poly)}")
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    tables = corpus.TABLES if args.table == "all" else (args.table,)
    ok = True
    for t in tables:
        report = corpus.verify_table(t)
        for line in report.tsv_lines():
            print(line)
        ok &= report.passed
        if not args.tsv:
            print(f"# {t}: {'PASS' if report.passed else 'FAIL'} ({len(report.rows)} rows)", file=sys.stderr)
    if args.conjectures:
        for line in corpus.evidence_lines(corpus.check_conjecture_evidence()):
            print("evidence\t" + line)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_predict(args: argparse.Namespace) -> int:
    reciprocal = not args.nonreciprocal
    known = corpus.known_records(reciprocal)
    known = {b: p for b, p in known.items() if b < args.degree}
    try:
        pred = bounds.composite_prediction(args.degree, known, reciprocal=reciprocal)
    except bounds.MissingRecordError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_FAIL
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    ties = ",".join(map(str, pred.ties)) or "-"
    if not args.tsv:
        print("degree\thouse\tdivisor\tpowerhouse\tties\tpolynomial")
    print(f"{args.degree}\t{fmt(pred.house)}\t{pred.divisor}\t{fmt(pred.powerhouse)}\t{ties}\t{pred.poly.format()}")
    return EXIT_OK


def cmd_generate(args: argparse.Namespace) -> int:
    d = args.degree
    try:
        if args.family == "prime5mod6":
            p, note = bounds.generate_prime5mod6(d), "exact"
        elif args.family == "failed":
            p, exact = bounds.failed_generalization(d)
            note = "exact" if exact else "reduced"
        else:
            p, _ = bounds.upper_bound_witness(d, reciprocal=args.family == "witness-reciprocal")
            note = "exact"
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    h, _ = house(p)
    print(f"{p.degree}\t{fmt(h)}\t{fmt(2 ** (1 / d))}\t{note}\t{p.format()}")
    return EXIT_OK


# -- parser -----------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # one-line diagnostic plus synopsis, exit 2
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="househunt", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name: str, func, help: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help)
        p.add_argument("--tsv", action="store_true", help="machine-readable output only")
        p.set_defaults(func=func)
        return p

    _add_poly_args(add("house", cmd_house, "certified house of a polynomial"))
    _add_poly_args(add("measure", cmd_measure, "Mahler measure and roots outside the unit circle"))
    _add_poly_args(add("classify", cmd_classify, "RootOfUnity / Reducible / Candidate"))

    p = add("bounds", cmd_bounds, "lower bounds, columns and the upper-bound witness")
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--reciprocal", action="store_true")

    p = add("search", cmd_search, "exhaustive search for the extremal reciprocal polynomial")
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--height", type=int)
    p.add_argument("--threshold", type=float)
    p.add_argument("--shard", help="run only shard i of n, written i/n")
    p.add_argument("--jobs", type=int, default=1, help="split into this many shards run in parallel")
    p.add_argument("--checkpoint", help="checkpoint file (default: inside $HOUSEHUNT_CHECKPOINT_DIR)")
    p.add_argument("--no-prune", action="store_true", help="disable lemma and real-root pruning")
    p.add_argument("--skip-nonprimitive", action="store_true")
    p.add_argument("--best-only", action="store_true", help="print only the record and its ties")

    p = add("verify", cmd_verify, "recompute the embedded tables")
    p.add_argument("--table", default="all", choices=(*corpus.TABLES, "all"))
    p.add_argument("--conjectures", action="store_true")

    p = add("predict", cmd_predict, "composite-degree prediction from known records")
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--nonreciprocal", action="store_true")

    p = add("generate", cmd_generate, "explicit polynomial families")
    p.add_argument("--family", required=True,
                   choices=("prime5mod6", "failed", "witness", "witness-reciprocal"))
    p.add_argument("--degree", type=int, required=True)
    return parser


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        sub = parser._subparsers._group_actions[0].choices[args.command]
        sub.print_usage(sys.stderr)
        print(f"househunt {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (RootFindingError, UndecidableError) as exc:
        print(f"househunt {args.command}: {exc}", file=sys.stderr)
        return EXIT_FAIL


def main() -> None:
    sys.exit(run())
