"""Command line interface.

Exit codes: 0 success, 1 internal invariant failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import analysis, dimensions, quadratic, traces
from .errors import ConsistencyError, InvalidInput
from .serialize import load_cache, render, save_cache
from .verify import run_verify

PATTERN_HELP = (
    "sign pattern over {+,-}, one character per prime of M in ascending order "
    "(for M = 35, '+-' means +1 at 5 and -1 at 7)"
)


def _protect_pattern(argv: list[str]) -> list[str]:
    # argparse drops a bare '--' even as an option value, and treats '-+' as a flag
    out: list[str] = []
    it = iter(argv)
    for tok in it:
        if tok == "--pattern":
            nxt = next(it, None)
            if nxt is None or not set(nxt) <= set("+-"):
                out.append(tok)
                if nxt is not None:
                    out.append(nxt)
                continue
            tok = "--pattern=" + nxt
        if tok.startswith("--pattern="):
            head, value = tok.split("=", 1)
            tok = head + "=" + value.replace("-", "\u2212")
        out.append(tok)
    return out


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(2, f"{self.prog}: error: {message}\n")


def parse_range(text: str) -> range:
    """``A..B`` (inclusive) or a single integer."""
    try:
        if ".." in text:
            a, b = text.split("..", 1)
            lo, hi = int(a), int(b)
        else:
            lo = hi = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"malformed range {text!r}; expected A..B") from None
    if lo > hi:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return range(lo, hi + 1)


def _add_output_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--float", type=int, metavar="DIGITS", dest="float_digits",
                   help="render rationals as decimals with DIGITS places")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="alq", description="Atkin-Lehner traces and refined newform dimensions at squarefree level.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("dim", help="dimensions of newform spaces")
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--weight", type=int, required=True)
    p.add_argument("--m", type=int, help="sign modulus M | N; prints all 2^omega(M) patterns")
    p.add_argument("--pattern", help=PATTERN_HELP + "; defaults M to N")
    _add_output_flags(p)

    p = sub.add_parser("trace", help="trace of the Atkin-Lehner operator W_M")
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--weight", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--space", choices=("full", "new"), default="new")
    _add_output_flags(p)

    p = sub.add_parser("scan", help="tabulate a report over ranges of levels and weights")
    p.add_argument("--levels", type=parse_range, required=True, help="A..B")
    p.add_argument("--weights", type=parse_range, required=True, help="C..D")
    p.add_argument("--m-mode", default="full", help="'full' (M = N) or 'fixed:M'")
    p.add_argument("--report", choices=tuple(analysis.REPORT_FIELDS), default="dims")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--cache", help="class number cache file (default: $ALQ_CACHE)")
    _add_output_flags(p)

    p = sub.add_parser("verify", help="check every identity between independent routes")
    p.add_argument("--max-level", type=int, default=500)
    p.add_argument("--max-weight", type=int, default=20)
    p.add_argument("--jobs", type=int, default=1)
    return parser


def _emit(rows, fields, args) -> None:
    sys.stdout.write(render(rows, fields, args.format, args.float_digits))


def cmd_dim(args) -> int:
    N, k = args.level, args.weight
    if args.pattern is not None:
        M = args.m if args.m is not None else N
        if N % M:
            raise InvalidInput(f"M = {M} does not divide level {N}")
        value = dimensions.dim_sign_pattern(N, k, args.pattern, M)
        rows = [dict(N=N, k=k, M=M, pattern=str(dimensions.SignPattern.parse(M, args.pattern)), dim=value)]
        _emit(rows, ("N", "k", "M", "pattern", "dim"), args)
    elif args.m is not None:
        if args.m <= 1 or N % args.m:
            raise InvalidInput(f"M = {args.m} must be > 1 and divide level {N}")
        b = dimensions.dimension_breakdown(N, k, args.m)
        rows = [dict(N=N, k=k, M=args.m, pattern=e, dim=v) for e, v in b.entries.items()]
        _emit(rows, ("N", "k", "M", "pattern", "dim"), args)
    else:
        plus, minus = dimensions.dim_plus_minus(N, k)
        rows = [dict(N=N, k=k, total=dimensions.dim_new(N, k), plus=plus, minus=minus)]
        _emit(rows, ("N", "k", "total", "plus", "minus"), args)
    return 0


def cmd_trace(args) -> int:
    N, k, M = args.level, args.weight, args.m
    fn = traces.full_trace if args.space == "full" else traces.new_trace
    rows = [dict(N=N, k=k, M=M, space=args.space, trace=fn(N, M, k))]
    _emit(rows, ("N", "k", "M", "space", "trace"), args)
    return 0


def cmd_scan(args) -> int:
    cache = args.cache or os.environ.get("ALQ_CACHE")
    if cache and os.path.exists(cache):
        quadratic.seed_class_numbers(load_cache(cache))
    m_fixed = analysis.parse_m_mode(args.m_mode)
    if args.jobs < 1:
        raise InvalidInput("--jobs must be >= 1")
    rows = analysis.scan(args.levels, args.weights, m_fixed, args.report, args.jobs)
    _emit(rows, analysis.REPORT_FIELDS[args.report], args)
    if cache:
        save_cache(cache, quadratic.class_number_table())
    return 0


def cmd_verify(args) -> int:
    if args.max_level < 2 or args.max_weight < 2:
        raise InvalidInput("empty verification range")
    failure = run_verify(args.max_level, args.max_weight, args.jobs)
    if failure is not None:
        print(f"FAIL {failure}", file=sys.stderr)
        return 1
    print(f"ok: all identities hold for squarefree N <= {args.max_level}, even k <= {args.max_weight}")
    return 0


COMMANDS = {"dim": cmd_dim, "trace": cmd_trace, "scan": cmd_scan, "verify": cmd_verify}


def main(argv: list[str] | None = None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    args = build_parser().parse_args(_protect_pattern(argv))
    try:
        return COMMANDS[args.command](args)
    except InvalidInput as exc:
        print(f"alq: error: {exc}", file=sys.stderr)
        return 2
    except ConsistencyError as exc:
        print(f"alq: internal consistency failure: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
