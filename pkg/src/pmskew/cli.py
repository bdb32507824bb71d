"""Command-line interface.

Subcommands: test (apply all four normality tests to a data file),
calibrate, power, hist, moments (the Monte Carlo experiments). Experiment
output is CSV (or JSON via --format json) with a `# seed=` comment header
so every artifact names the seed that reproduces it. Numbers are printed
with 6 significant digits; output goes to --out, with "-" meaning stdout.

Exit codes: 0 success, 1 data error or degenerate statistic, 2 bad
invocation or configuration, 3 I/O failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from .distributions import AlternativeSpec
from .errors import (
    DegenerateCorrelationError,
    DegenerateDenominatorError,
    InvalidConfigError,
    InvalidLevelError,
    InvalidParamsError,
    NonFiniteError,
    ParseError,
    PmskewError,
    SampleTooLargeError,
    SampleTooSmallError,
    ZeroVarianceError,
)
from .moments import Sample
from .montecarlo import (
    ALL_TESTS,
    Statistic,
    calibrate,
    moment_validation,
    null_histogram,
    power_study,
)
from .skewtests import (
    TestName,
    lin_mudholkar_test,
    shapiro_wilk_test,
    spms_test,
    sqrt_b1_test,
)

__all__ = ["main"]

REPORT_LEVELS = (0.01, 0.05, 0.10, 0.20)

_DATA_ERRORS = (
    ParseError,
    NonFiniteError,
    ZeroVarianceError,
    SampleTooSmallError,
    SampleTooLargeError,
    DegenerateDenominatorError,
    DegenerateCorrelationError,
)
_CONFIG_ERRORS = (InvalidConfigError, InvalidParamsError, InvalidLevelError)

_TEST_FUNCS = {
    TestName.SPMS: spms_test,
    TestName.SQRT_B1: sqrt_b1_test,
    TestName.SHAPIRO_WILK: shapiro_wilk_test,
    TestName.LIN_MUDHOLKAR: lin_mudholkar_test,
}


def _fmt(value) -> str:
    """One CSV cell: ints verbatim, floats at 6 significant digits.

    Strings containing a comma or quote are quoted per RFC 4180 (the
    alt column holds labels like beta:2,1).
    """
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, str):
        if any(ch in value for ch in ',"\n'):
            return '"' + value.replace('"', '""') + '"'
        return value
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format(float(value), ".6g")


def _csv(header: list[str], rows: list[list], comments: list[str]) -> str:
    lines = [f"# {c}" for c in comments]
    lines.append(",".join(header))
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def _json_doc(meta: dict, rows: list[dict]) -> str:
    doc = dict(meta)
    doc["rows"] = rows
    return json.dumps(doc, indent=2) + "\n"


def _write_output(text: str, out: str) -> None:
    if out == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _summary(message: str) -> None:
    print(message, file=sys.stderr)


def _int_list(text: str) -> list[int]:
    try:
        return [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise InvalidConfigError(f"expected comma-separated integers: {text!r}")


def _float_list(text: str) -> list[float]:
    try:
        return [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise InvalidConfigError(f"expected comma-separated numbers: {text!r}")


def _resolve_threads(value) -> int:
    if value is not None:
        threads = int(value)
    else:
        raw = os.environ.get("PMSKEW_THREADS", "1")
        try:
            threads = int(raw)
        except ValueError:
            raise InvalidConfigError(f"PMSKEW_THREADS must be an integer: {raw!r}")
    if threads < 1:
        raise InvalidConfigError(f"threads must be >= 1, got {threads}")
    return threads


def _read_sample(path: str, col: int | None) -> Sample:
    """Parse one number per line, or column `col` (1-based) of a CSV.

    Blank lines are ignored. Any other non-numeric content is a ParseError
    naming the offending line; there is no header detection.
    """
    if path == "-":
        raw_lines = sys.stdin.read().splitlines()
    else:
        with open(path, "r", encoding="utf-8") as fh:
            raw_lines = fh.read().splitlines()
    values = []
    for lineno, line in enumerate(raw_lines, start=1):
        if not line.strip():
            continue
        if col is None:
            token = line.strip()
        else:
            fields = line.split(",")
            if col < 1 or col > len(fields):
                raise ParseError(
                    f"line {lineno}: no column {col} (found {len(fields)})",
                    line=lineno,
                )
            token = fields[col - 1].strip()
        try:
            values.append(float(token))
        except ValueError:
            raise ParseError(
                f"line {lineno}: not a number: {token!r}", line=lineno
            )
    return Sample(np.array(values))


def cmd_test(args) -> int:
    sample = _read_sample(args.input, args.col)
    rows = []
    failures = []
    any_undefined = False
    for name in ALL_TESTS:
        try:
            result = _TEST_FUNCS[name](sample)
        except _DATA_ERRORS as exc:
            failures.append(f"{name.value}: {exc}")
            rows.append([name.value, False, None, None, None] + [False] * 4)
            any_undefined = True
            continue
        if not result.defined:
            any_undefined = True
        rows.append(
            [
                name.value,
                result.defined,
                result.raw_statistic if result.defined else None,
                result.z_value if result.defined else None,
                result.p_value if result.defined else None,
            ]
            + [result.reject_at(level) for level in REPORT_LEVELS]
        )
    header = ["test", "defined", "raw_statistic", "z_value", "p_value"] + [
        f"reject_{level:g}" for level in REPORT_LEVELS
    ]
    if args.format == "json":
        text = _json_doc(
            {"command": "test", "n": sample.n},
            [dict(zip(header, row)) for row in rows],
        )
    else:
        text = _csv(header, rows, [f"n={sample.n}"])
    _write_output(text, args.out)
    for message in failures:
        _summary(f"warning: {message}")
    _summary(f"test: n={sample.n}, {len(rows)} tests")
    return 1 if any_undefined else 0


def cmd_calibrate(args) -> int:
    ns = _int_list(args.n)
    levels = _float_list(args.levels)
    threads = _resolve_threads(args.threads)
    rows = []
    for n in ns:
        result = calibrate(n, args.reps, levels, args.seed, threads=threads)
        for level, rate in zip(result.levels, result.rejection_rates):
            rows.append([n, result.reps, level, rate, result.undefined_count])
    header = ["n", "reps", "level", "rejection_rate", "undefined"]
    if args.format == "json":
        text = _json_doc(
            {"command": "calibrate", "seed": args.seed},
            [dict(zip(header, row)) for row in rows],
        )
    else:
        text = _csv(header, rows, [f"seed={args.seed}"])
    _write_output(text, args.out)
    _summary(
        f"calibrate: {len(rows)} rows ({len(ns)} n x {len(levels)} levels), "
        f"reps={args.reps}, seed={args.seed}"
    )
    return 0


def cmd_power(args) -> int:
    alt = AlternativeSpec.parse(args.alt)
    ns = _int_list(args.n)
    tests = [t.strip() for t in args.tests.split(",") if t.strip()]
    threads = _resolve_threads(args.threads)
    rows = []
    for n in ns:
        cell = power_study(
            alt,
            n,
            args.reps,
            args.level,
            tests=tests,
            seed=args.seed,
            threads=threads,
            critical_values=args.critical_values,
            null_reps=args.null_reps,
        )
        for test in cell.powers:
            rows.append(
                [
                    alt.label,
                    n,
                    cell.reps,
                    cell.level,
                    test.value,
                    cell.powers[test],
                    cell.undefined_counts[test],
                ]
            )
    header = ["alt", "n", "reps", "level", "test", "power", "undefined"]
    if args.format == "json":
        text = _json_doc(
            {"command": "power", "seed": args.seed},
            [dict(zip(header, row)) for row in rows],
        )
    else:
        text = _csv(header, rows, [f"seed={args.seed}"])
    _write_output(text, args.out)
    _summary(
        f"power: alt={alt.label}, {len(rows)} rows, reps={args.reps}, "
        f"level={args.level:g}, criticals={args.critical_values}, "
        f"seed={args.seed}"
    )
    return 0


def cmd_hist(args) -> int:
    threads = _resolve_threads(args.threads)
    value_range = None
    if args.range is not None:
        bounds = _float_list(args.range)
        if len(bounds) != 2:
            raise InvalidConfigError(f"--range needs two numbers: {args.range!r}")
        value_range = (bounds[0], bounds[1])
    result = null_histogram(
        args.stat,
        args.n,
        args.reps,
        args.bins,
        args.seed,
        threads=threads,
        value_range=value_range,
    )
    rows = [
        [result.bin_edges[i], result.bin_edges[i + 1], result.counts[i]]
        for i in range(len(result.counts))
    ]
    header = ["bin_left", "bin_right", "count"]
    if args.format == "json":
        text = _json_doc(
            {
                "command": "hist",
                "seed": args.seed,
                "stat": str(result.statistic_name),
                "n": result.n,
                "reps": result.reps,
                "out_of_range": result.out_of_range,
            },
            [dict(zip(header, row)) for row in rows],
        )
    else:
        text = _csv(
            header,
            rows,
            [f"seed={args.seed}", f"out_of_range={result.out_of_range}"],
        )
    _write_output(text, args.out)
    _summary(
        f"hist: stat={result.statistic_name}, n={result.n}, "
        f"reps={result.reps}, bins={len(rows)}, "
        f"out_of_range={result.out_of_range}, seed={args.seed}"
    )
    return 0


def cmd_moments(args) -> int:
    threads = _resolve_threads(args.threads)
    result = moment_validation(
        args.n, args.reps, args.seed, threads=threads
    )
    rows = [
        [result.n, result.reps, row.quantity, row.empirical, row.series, row.se]
        for row in result.rows
    ]
    header = ["n", "reps", "quantity", "empirical", "series", "se"]
    if args.format == "json":
        text = _json_doc(
            {"command": "moments", "seed": args.seed},
            [dict(zip(header, row)) for row in rows],
        )
    else:
        text = _csv(header, rows, [f"seed={args.seed}"])
    _write_output(text, args.out)
    _summary(
        f"moments: n={result.n}, reps={result.reps}, "
        f"undefined={result.undefined_count}, seed={args.seed}"
    )
    return 0


def _add_common(sub, *, seed=True):
    if seed:
        sub.add_argument("--seed", type=int, default=0, help="RNG seed")
    sub.add_argument(
        "--threads",
        type=int,
        default=None,
        help="worker threads (default: PMSKEW_THREADS or 1; never changes output)",
    )
    sub.add_argument("--out", default="-", help="output path, - for stdout")
    sub.add_argument(
        "--format", choices=["csv", "json"], default="csv", help="output format"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pmskew",
        description=(
            "Pearson-measure-of-skewness normality test and its Monte Carlo "
            "calibration, power, and histogram experiments."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("test", help="apply the four normality tests to a file")
    p.add_argument("input", help="data file, one number per line; - for stdin")
    p.add_argument(
        "--col", type=int, default=None, help="read this 1-based CSV column"
    )
    _add_common(p, seed=False)
    p.set_defaults(func=cmd_test)

    p = sub.add_parser("calibrate", help="null rejection rates of the spms test")
    p.add_argument("--n", required=True, help="comma-separated sample sizes")
    p.add_argument("--reps", type=int, default=100_000)
    p.add_argument("--levels", default="0.01,0.05,0.10,0.20")
    _add_common(p)
    p.set_defaults(func=cmd_calibrate)

    p = sub.add_parser("power", help="power of the tests against an alternative")
    p.add_argument("--alt", required=True, help="e.g. beta:2,1 gamma:3 lognormal:0,0.5")
    p.add_argument("--n", required=True, help="comma-separated sample sizes")
    p.add_argument("--reps", type=int, default=10_000)
    p.add_argument("--level", type=float, default=0.05)
    p.add_argument(
        "--tests",
        default=",".join(t.value for t in ALL_TESTS),
        help="comma-separated subset of "
        + ",".join(t.value for t in ALL_TESTS),
    )
    p.add_argument(
        "--critical-values",
        choices=["simulated", "asymptotic"],
        default="simulated",
        help="simulated: empirical null quantiles at the same n (default); "
        "asymptotic: nominal normal-approximation thresholds",
    )
    p.add_argument(
        "--null-reps",
        type=int,
        default=100_000,
        help="null replications behind simulated critical values",
    )
    _add_common(p)
    p.set_defaults(func=cmd_power)

    p = sub.add_parser("hist", help="null histogram of spms or its Z transform")
    p.add_argument("--stat", choices=[str(s) for s in Statistic], default="spms")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--reps", type=int, default=10_000)
    p.add_argument("--bins", type=int, default=60)
    p.add_argument(
        "--range", default=None, help="lo,hi bin range (default: mean +- 5 sd)"
    )
    _add_common(p)
    p.set_defaults(func=cmd_hist)

    p = sub.add_parser("moments", help="empirical null moments vs. series values")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--reps", type=int, default=100_000)
    _add_common(p)
    p.set_defaults(func=cmd_moments)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _DATA_ERRORS as exc:
        print(f"pmskew: error: {exc}", file=sys.stderr)
        return 1
    except _CONFIG_ERRORS as exc:
        print(f"pmskew: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"pmskew: i/o error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
