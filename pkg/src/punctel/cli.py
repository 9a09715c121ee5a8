"""Command-line entry point: ``punctel {codes,puncture,sweep,select,crossing,validate}``.

Exit codes: 0 success, 2 usage, 3 degenerate puncture, 4 I/O, 5 infeasible
selection or crossing, 6 validation failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from collections.abc import Sequence
from dataclasses import dataclass
from pathlib import Path
from typing import TextIO

from . import oracle
from .css import CodeRegistry, CssCode, builtin_registry
from .errors import (
    DegenerateResult,
    DistanceContradiction,
    IndexOutOfRange,
    LabelMismatch,
    LineageFormatError,
    NoCrossing,
    OutOfRange,
    UnknownCode,
)
from .gf2 import same_rowspace
from .puncturing import parse_lineage, puncture_many
from .purification import purify, to_channel
from .reliability import fidelity_grid, find_crossing, select_code, sweep, write_sweep_csv

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DEGENERATE = 3
EXIT_IO = 4
EXIT_INFEASIBLE = 5
EXIT_VALIDATION = 6

VALIDATION_POINTS = ((0.9, 0), (0.9, 1), (0.95, 2), (0.95, 3))
SWEEP_DEFAULTS = {
    "f0_start": "0.80",
    "f0_end": "1.00",
    "f0_step": "0.001",
    "rounds": "0,1,2,3",
    "codes": "all",
    "target": None,
    "output": "-",
}


class UsageError(Exception):
    pass


def _g6(x: float) -> str:
    return format(x, ".6g")


def _dump_code(code: CssCode, out: TextIO) -> None:
    info = code.describe()
    for key in ("id", "n", "k", "dX", "dZ", "tX", "tZ"):
        print(f"{key}: {info[key]}", file=out)
    for key in ("h1", "h2"):
        print(f"{key}:", file=out)
        for row in info[key]:
            print(f"  {row}", file=out)


def cmd_codes(args: argparse.Namespace, registry: CodeRegistry, out: TextIO) -> int:
    codes = [registry.get(args.id)] if args.id else list(registry)
    for i, code in enumerate(codes):
        if i:
            print(file=out)
        _dump_code(code, out)
    return EXIT_OK


def cmd_puncture(args: argparse.Namespace, registry: CodeRegistry, out: TextIO) -> int:
    origin = registry.get(args.origin)
    try:
        steps = parse_lineage(args.steps)
        state = puncture_many(origin, steps)
    except (LineageFormatError, IndexOutOfRange) as exc:
        raise UsageError(str(exc)) from exc
    print(f"origin: {origin.id}", file=out)
    for step in state.steps:
        removed = ", ".join(step.removed_stabilizers) or "-"
        print(f"step {step} (current index {step.qubit_index}): removed {removed}", file=out)
    code = state.code
    print(f"result: {code.label}", file=out)
    _dump_code(code, out)
    kept = state.lineage.kept_stabilizers
    print("kept: " + ", ".join(kept[key] for key in sorted(kept)), file=out)
    matches = [
        c.id
        for c in registry
        if c.n == code.n and same_rowspace(c.h1, code.h1) and same_rowspace(c.h2, code.h2)
    ]
    print(f"matches: {', '.join(matches) if matches else 'none'}", file=out)
    return EXIT_OK


@dataclass(frozen=True)
class SweepConfig:
    f0_start: float
    f0_end: float
    f0_step: float
    rounds: tuple[int, ...]
    codes: tuple[str, ...] | None
    target: float | None
    output: str


def read_config(path: str) -> dict[str, str]:
    """Parse ``key = value`` lines; blank lines and '#' comments are skipped."""
    values = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key=value")
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in SWEEP_DEFAULTS:
            raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
        values[key] = value
    return values


def sweep_config(args: argparse.Namespace) -> SweepConfig:
    merged = dict(SWEEP_DEFAULTS)
    if args.config:
        try:
            merged.update(read_config(args.config))
        except OSError as exc:
            raise UsageError(f"cannot read config: {exc}") from exc
    for key in SWEEP_DEFAULTS:
        flag = getattr(args, key)
        if flag is not None:
            merged[key] = flag
    try:
        start, end, step = (float(merged[k]) for k in ("f0_start", "f0_end", "f0_step"))
        rounds = tuple(int(r) for r in str(merged["rounds"]).split(","))
        target = None if merged["target"] in (None, "") else float(merged["target"])
    except ValueError as exc:
        raise UsageError(f"bad sweep setting: {exc}") from exc
    if not (0.0 <= start <= end <= 1.0) or step <= 0:
        raise UsageError(f"bad fidelity grid {start}:{end}:{step}")
    if any(not 0 <= r <= 32 for r in rounds):
        raise UsageError("rounds must lie in 0..32")
    codes = None if merged["codes"] == "all" else tuple(c.strip() for c in merged["codes"].split(","))
    return SweepConfig(start, end, step, rounds, codes, target, merged["output"])


def cmd_sweep(args: argparse.Namespace, registry: CodeRegistry, out: TextIO) -> int:
    config = sweep_config(args)
    codes = registry.subset(config.codes) if config.codes else registry
    grid = fidelity_grid(config.f0_start, config.f0_end, config.f0_step)
    points = sweep(codes, grid, config.rounds, config.target)
    if config.output == "-":
        count = write_sweep_csv(points, out)
        print(f"rows: {count}", file=sys.stderr)
        return EXIT_OK
    try:
        with open(config.output, "w", newline="") as fh:
            count = write_sweep_csv(points, fh)
    except OSError as exc:
        print(f"error: cannot write {config.output}: {exc}", file=sys.stderr)
        return EXIT_IO
    print(f"rows: {count}", file=out)
    return EXIT_OK


def cmd_select(args: argparse.Namespace, registry: CodeRegistry, out: TextIO) -> int:
    result = select_code(registry, args.f0, args.r, args.target, family=args.family)
    print(f"target: {_g6(result.target)}  f0: {args.f0}  r: {args.r}  family: {args.family}", file=out)
    for p in result.points:
        mark = "feasible" if p.feasible else "infeasible"
        print(f"  {p.code_id:<10} n={p.n:<3} pL={_g6(p.pL):<12} {mark}", file=out)
    print(f"chosen: {result.chosen or 'none'}", file=out)
    block = {
        "target": result.target,
        "f0": args.f0,
        "r": args.r,
        "family": args.family,
        "feasible": list(result.feasible),
        "chosen": result.chosen,
        "chosen_n": result.chosen_n,
    }
    print(json.dumps(block, sort_keys=True), file=out)
    return EXIT_OK if result.chosen else EXIT_INFEASIBLE


def cmd_crossing(args: argparse.Namespace, registry: CodeRegistry, out: TextIO) -> int:
    code = registry.get(args.code)
    try:
        f0 = find_crossing(code, args.r, args.target, (args.f0_min, args.f0_max))
    except NoCrossing as exc:
        print(f"no crossing: {exc}", file=out)
        return EXIT_INFEASIBLE
    print(f"{code.id} r={args.r} target={_g6(args.target)} crossing f0={f0:.6f}", file=out)
    return EXIT_OK


def cmd_validate(args: argparse.Namespace, registry: CodeRegistry, out: TextIO) -> int:
    if args.samples < 1:
        raise UsageError("--samples must be at least 1")
    failures: list[str] = []
    try:
        resolution = oracle.resolve_convention(registry)
    except (DistanceContradiction, LabelMismatch) as exc:
        print(f"FAIL convention resolution: {type(exc).__name__}: {exc}", file=out)
        return EXIT_VALIDATION
    print(f"convention: {resolution.convention}", file=out)
    print(f"samples: {args.samples}  seed: {args.seed}  workers: {args.workers}", file=out)
    for line in resolution.diagnosis:
        print(f"  diagnosis: {line}", file=out)

    for code in registry:
        for branch in oracle.Branch:
            label = oracle.branch_label(code, branch)
            measured = oracle.operational_distance(code, branch, resolution.convention, max_weight=5)
            if measured != label:
                failures.append(f"operational distance {code.id}/{branch.value}: {measured} != {label}")

    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(oracle.REPORT_COLUMNS)
    for f0, r in VALIDATION_POINTS:
        ch = to_channel(purify(f0, r))
        for code in registry:
            rep = oracle.oracle_report(
                code, ch, f0, r, args.samples, args.seed, resolution.convention, args.workers
            )
            writer.writerow(oracle.report_row(rep))
            where = f"{code.id} at f0={f0}, r={r}"
            if abs(rep.exact_threshold - rep.analytic) > 1e-12:
                failures.append(f"threshold enumeration != analytic for {where}")
            if rep.exact_lookup > rep.exact_threshold or rep.exact_lookup_branchwise > rep.exact_threshold:
                failures.append(f"lookup exceeds threshold for {where}")
            if rep.exact_lookup > rep.exact_threshold_joint:
                failures.append(f"joint lookup exceeds joint threshold for {where}")
            # a point fails only when all three seeds miss
            agree = oracle.within_sigmas(rep.mc, rep.exact_lookup)
            extra = 1
            while not agree and extra < 3:
                retry = oracle.mc_logical_error(
                    code, ch, args.samples, args.seed + extra, resolution.convention, args.workers
                )
                agree = oracle.within_sigmas(retry, rep.exact_lookup)
                extra += 1
            if not agree:
                failures.append(f"MC outside 3 sigma for seeds {args.seed}..{args.seed + 2} for {where}")

    for failure in failures:
        print(f"FAIL {failure}", file=out)
    if failures:
        return EXIT_VALIDATION
    print("validation: ok", file=out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="punctel", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("codes", help="dump registry codes")
    p.add_argument("--id", help="show a single code")
    p.set_defaults(func=cmd_codes)

    p = sub.add_parser("puncture", help="apply a puncture lineage to a registry code")
    p.add_argument("--from", dest="origin", required=True, help="origin code id")
    p.add_argument("--steps", default="", help='e.g. "(0|1)@1,(1|0)@6", origin numbering')
    p.set_defaults(func=cmd_puncture)

    p = sub.add_parser("sweep", help="write the reliability CSV over an f0 x r grid")
    p.add_argument("--config", help="key=value file; flags override it")
    p.add_argument("--f0-start", dest="f0_start")
    p.add_argument("--f0-end", dest="f0_end")
    p.add_argument("--f0-step", dest="f0_step")
    p.add_argument("--rounds", help="comma-separated, default 0,1,2,3")
    p.add_argument("--codes", help='comma-separated ids or "all"')
    p.add_argument("--target")
    p.add_argument("--output", help='CSV path, "-" for stdout')
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("select", help="shortest code meeting a reliability target")
    p.add_argument("--f0", type=float, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--target", type=float, required=True)
    p.add_argument("--family", choices=("all", "punctured"), default="all")
    p.set_defaults(func=cmd_select)

    p = sub.add_parser("crossing", help="lowest f0 reaching a target")
    p.add_argument("--code", required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--target", type=float, required=True)
    p.add_argument("--f0-min", dest="f0_min", type=float, default=0.8)
    p.add_argument("--f0-max", dest="f0_max", type=float, default=1.0)
    p.set_defaults(func=cmd_crossing)

    p = sub.add_parser("validate", help="run the enumeration and Monte-Carlo cross-checks")
    p.add_argument("--samples", type=int, default=10**6)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_validate)
    return parser


def main(
    argv: Sequence[str] | None = None,
    registry: CodeRegistry | None = None,
    out: TextIO | None = None,
) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    registry = registry or builtin_registry()
    try:
        return args.func(args, registry, out)
    except UnknownCode as exc:
        print(f"error: {exc.args[0]}", file=sys.stderr)
        return EXIT_USAGE
    except (UsageError, OutOfRange) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DegenerateResult as exc:
        print(f"error: degenerate puncture: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE


if __name__ == "__main__":
    sys.exit(main())
