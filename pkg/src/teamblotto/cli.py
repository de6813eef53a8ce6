"""Command-line front end.

Subcommands::

    sweep        lower bounds on the distributed integer value for B1 = 0..b1-max (CSV)
    verify       check a strategy file against the security conditions (JSON)
    construct    factor-comb profile for a division B1 (JSON)
    bands        divisions where the factor comb is feasible (JSON)
    centralized  closed-form value next to the integer LP value (JSON)

Exit codes: 0 ok, 2 usage or bad input, 3 infeasible request, 4 internal error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from .analytic import centralized_value
from .construct import bands, comb_distributed
from .core import (
    BadDivision,
    BlottoError,
    BoundaryCase,
    BudgetOrder,
    GameConfig,
    InfeasibleDivision,
    InfeasibleGap,
    TooLarge,
    UnsupportedValues,
    as_rational,
    format_rational,
    parse_rational,
    partition_of,
)
from .distributions import IntStrategy, StrategyError, loads_strategy, strategy_to_dict
from .intgame import PayoffMatrix, centralized_value_int, eval_value_int, solve_distributed
from .security import READINGS, is_security_strategy

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INFEASIBLE = 3
EXIT_INTERNAL = 4

CSV_COLUMNS = ("b1", "lower_bound", "centralized", "in_band", "band_k1", "comb_value")


class SweepInvariantError(BlottoError):
    pass


@dataclass(frozen=True)
class SweepRecord:
    B1: int
    lower_bound: Fraction
    centralized_value_int: Fraction
    in_band: bool
    band_k1: Optional[int] = None
    comb_value_int: Optional[Fraction] = None

    def check(self) -> None:
        if self.lower_bound > self.centralized_value_int:
            raise SweepInvariantError(
                f"B1={self.B1}: lower bound {self.lower_bound} exceeds centralized {self.centralized_value_int}"
            )
        if self.in_band:
            if self.comb_value_int is None or self.band_k1 is None:
                raise SweepInvariantError(f"B1={self.B1}: in-band row without comb value")
            if self.lower_bound < self.comb_value_int:
                raise SweepInvariantError(
                    f"B1={self.B1}: lower bound {self.lower_bound} below comb value {self.comb_value_int}"
                )
        if self.B1 == 0 and self.lower_bound != self.centralized_value_int:
            raise SweepInvariantError(f"B1=0 row {self.lower_bound} differs from the centralized LP")

    def to_row(self) -> list[str]:
        return [
            str(self.B1),
            format_rational(self.lower_bound),
            format_rational(self.centralized_value_int),
            "true" if self.in_band else "false",
            "" if self.band_k1 is None else str(self.band_k1),
            "" if self.comb_value_int is None else format_rational(self.comb_value_int),
        ]

    @classmethod
    def from_row(cls, row: dict) -> "SweepRecord":
        if row["in_band"] not in ("true", "false"):
            raise ValueError(f"in_band must be true or false, got {row['in_band']!r}")
        return cls(
            B1=int(row["b1"]),
            lower_bound=parse_rational(row["lower_bound"]),
            centralized_value_int=parse_rational(row["centralized"]),
            in_band=row["in_band"] == "true",
            band_k1=int(row["band_k1"]) if row["band_k1"] else None,
            comb_value_int=parse_rational(row["comb_value"]) if row["comb_value"] else None,
        )


def records_to_csv(records: Sequence[SweepRecord]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for rec in sorted(records, key=lambda r: r.B1):
        rec.check()
        writer.writerow(rec.to_row())
    return buf.getvalue()


def records_from_csv(text: str) -> list[SweepRecord]:
    reader = csv.DictReader(io.StringIO(text))
    if tuple(reader.fieldnames or ()) != CSV_COLUMNS:
        raise ValueError(f"expected columns {','.join(CSV_COLUMNS)}, got {reader.fieldnames}")
    return [SweepRecord.from_row(row) for row in reader]


def _band_for(B: int, E: int, B1: int):
    if B >= E:
        return None
    pi = partition_of(GameConfig(B, E))
    for band in bands(pi, Fraction(B, 2)):
        if band.lo <= B1 <= band.feasible_hi:
            return pi, band
    return None


def sweep_records(
    B: int, E: int, b1_max: int, starts: int = 64, seed: int = 0, tol: Fraction = Fraction(0)
) -> list[SweepRecord]:
    if 2 * b1_max > B:
        raise BadDivision(f"b1-max={b1_max} exceeds B/2={Fraction(B, 2)}")
    central, _ = centralized_value_int(B, E)
    pm = PayoffMatrix.build(B, E)
    records = []
    for B1 in range(b1_max + 1):
        result = solve_distributed(B, E, B1, starts=starts, seed=seed, tol=tol)
        # re-evaluated here so a CSV row never trusts the solver's bookkeeping
        if eval_value_int(pm, result.F1, result.F2) != result.lower_bound:
            raise SweepInvariantError(f"B1={B1}: reported lower bound is not the profile's value")
        found = _band_for(B, E, B1)
        k1 = comb_value = None
        if found is not None:
            pi, band = found
            F1, F2 = comb_distributed(pi, band.k1, Fraction(B1))
            k1 = band.k1
            comb_value = eval_value_int(pm, IntStrategy.from_atomic(F1), IntStrategy.from_atomic(F2))
        rec = SweepRecord(B1, result.lower_bound, central, found is not None, k1, comb_value)
        rec.check()
        log.info("B1=%d lower bound %s (start %s)", B1, rec.lower_bound, result.best_start)
        records.append(rec)
    return records


def _write(text: str, out: Optional[str]) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
        return
    path = Path(out)
    try:
        path.write_text(text)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc


def _dump(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _integer(value: Fraction, flag: str) -> int:
    if value.denominator != 1:
        raise ValueError(f"{flag} must be an integer here, got {value}")
    return int(value)


def cmd_sweep(args) -> int:
    B, E = _integer(args.b, "--b"), _integer(args.e, "--e")
    b1_max = B // 2 if args.b1_max is None else args.b1_max
    records = sweep_records(B, E, b1_max, args.starts, args.seed, args.tol)
    _write(records_to_csv(records), args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    path = Path(args.strategy)
    try:
        text = path.read_text()
    except OSError as exc:
        raise OSError(f"cannot read {path}: {exc.strerror or exc}") from exc
    try:
        F = loads_strategy(text)
    except StrategyError as exc:
        raise StrategyError(f"{path}: {exc}") from exc
    cfg = GameConfig(args.b, args.e)
    report = is_security_strategy(cfg, F, args.ss2_reading)
    violation = None
    if report.ss2_violation is not None:
        v = report.ss2_violation
        violation = {
            "j": v.j,
            "x": format_rational(v.x),
            "lhs": format_rational(v.lhs),
            "rhs": format_rational(v.rhs),
        }
    _write(
        _dump(
            {
                "reading": report.reading,
                "ss1_ok": report.ss1_ok,
                "ss1_masses": [[j, format_rational(m)] for j, m in report.ss1_masses],
                "outside_mass": format_rational(report.outside_mass),
                "ss2_ok": report.ss2_ok,
                "ss2_violation": violation,
                "is_security": report.is_security,
                "value": format_rational(report.value),
                "centralized": format_rational(report.centralized),
                "agrees": report.agrees,
            }
        ),
        args.out,
    )
    return EXIT_OK


def cmd_construct(args) -> int:
    if args.k1 is None or args.b1 is None:
        raise ValueError("construct needs --k1 and --b1")
    pi = partition_of(GameConfig(args.b, args.e))
    F1, F2 = comb_distributed(pi, args.k1, args.b1)
    if args.out is None or args.out == "-":
        _write(_dump({"F1": strategy_to_dict(F1), "F2": strategy_to_dict(F2)}), None)
    else:
        # --out is a prefix for the two strategy files
        for name, F in (("F1", F1), ("F2", F2)):
            _write(_dump(strategy_to_dict(F)), f"{args.out}_{name}.json")
    return EXIT_OK


def cmd_bands(args) -> int:
    pi = partition_of(GameConfig(args.b, args.e))
    half = args.b / 2
    found = bands(pi, half)
    for band in found:
        if band.clipped:
            print(f"band k1={band.k1} [{band.lo}, {band.hi}] clipped to {band.feasible_hi} (B/2)", file=sys.stderr)
    kept = {band.k1 for band in found}
    for k1 in range(1, pi.m + 1):
        if pi.m % k1 == 0 and k1 not in kept:
            lo = (k1 - 1) * pi.d
            print(f"band k1={k1} [{lo}, {lo + pi.rB}] lies above B/2 = {half}, dropped", file=sys.stderr)
    pairs = [[format_rational(b.lo), format_rational(b.feasible_hi)] for b in found]
    _write(json.dumps(pairs) + "\n", args.out)
    return EXIT_OK


def cmd_centralized(args) -> int:
    cfg = GameConfig(args.b, args.e)
    out = {"formula": format_rational(centralized_value(cfg)), "lp": None}
    if args.b.denominator == 1 and args.e.denominator == 1:
        value, _ = centralized_value_int(int(args.b), int(args.e))
        out["lp"] = format_rational(value)
    _write(_dump(out), args.out)
    return EXIT_OK


def _rational_arg(text: str) -> Fraction:
    try:
        return as_rational(text)
    except (TypeError, ValueError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def build_parser() -> argparse.ArgumentParser:
    fmt = argparse.ArgumentDefaultsHelpFormatter
    parser = argparse.ArgumentParser(prog="teamblotto", description=__doc__.splitlines()[0], formatter_class=fmt)
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--b", type=_rational_arg, required=True, help="team budget B")
        p.add_argument("--e", type=_rational_arg, required=True, help="enemy budget E")
        p.add_argument("--out", default="-", help="output path ('-' for stdout)")

    p = sub.add_parser("sweep", help="lower bounds for B1 = 0..b1-max as CSV", formatter_class=fmt)
    common(p)
    p.add_argument("--b1-max", type=int, default=None, help="largest B1 (default floor(B/2))")
    p.add_argument("--starts", type=int, default=64, help="random starts per B1")
    p.add_argument("--seed", type=int, default=0, help="seed for the random starts")
    p.add_argument("--tol", type=_rational_arg, default=Fraction(0), help="stop when a round gains at most this")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="check a strategy JSON file", formatter_class=fmt)
    p.add_argument("strategy", help="strategy file")
    common(p)
    p.add_argument(
        "--ss2-reading",
        choices=READINGS,
        default="closed",
        help="endpoint convention: closed keeps interval endpoints and the atom at x - d, "
        "strict uses the half-open forms",
    )
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("construct", help="factor-comb profile (F1, F2)", formatter_class=fmt)
    common(p)
    p.add_argument("--k1", type=int, default=None, help="factor of m giving F1's atom count")
    p.add_argument("--b1", type=_rational_arg, default=None, help="sub-colonel 1 budget")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("bands", help="divisions where the factor comb is feasible", formatter_class=fmt)
    common(p)
    p.set_defaults(func=cmd_bands)

    p = sub.add_parser("centralized", help="closed form and integer LP value", formatter_class=fmt)
    common(p)
    p.set_defaults(func=cmd_centralized)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except (InfeasibleDivision, InfeasibleGap, BudgetOrder, BoundaryCase) as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (StrategyError, BadDivision, TooLarge, UnsupportedValues, ValueError, TypeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # includes SweepInvariantError and failed self-checks
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
