"""Analytic logical error under the independent-branch model, sweeps, crossings and selection."""

from __future__ import annotations

import csv
import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from typing import TextIO

from .css import CodeRegistry, CssCode, punctured_family
from .errors import NoCrossing, OutOfRange
from .purification import PauliChannel, purify, to_channel

CSV_COLUMNS = ("code_id", "n", "r", "f0", "qX", "qZ", "pL")
CROSSING_TOL = 1e-5
DEFAULT_F0_RANGE = (0.8, 1.0)


@dataclass(frozen=True)
class ReliabilityPoint:
    code_id: str
    n: int
    f0: float
    r: int
    qX: float
    qZ: float
    pSuccX: float
    pSuccZ: float
    pL: float
    feasible: bool | None = None


@dataclass(frozen=True)
class SelectionResult:
    target: float
    feasible: tuple[str, ...]
    chosen: str | None
    chosen_n: int | None
    points: tuple[ReliabilityPoint, ...] = field(default=(), compare=False)


def branch_success(n: int, t: int, q: float) -> float:
    """P[at most t of n independent flips with probability q]."""
    if not 0.0 <= q <= 1.0:
        raise OutOfRange(f"flip probability {q} outside [0, 1]")
    if not 0 <= t <= n:
        raise OutOfRange(f"radius {t} outside 0..{n}")
    if t == n:
        return 1.0
    total = math.fsum(math.comb(n, i) * (1.0 - q) ** (n - i) * q**i for i in range(t + 1))
    return min(total, 1.0)


def branch_failure(n: int, t: int, q: float) -> float:
    """P[more than t of n flips]; summed directly so tiny tails keep full precision."""
    if not 0.0 <= q <= 1.0:
        raise OutOfRange(f"flip probability {q} outside [0, 1]")
    if not 0 <= t <= n:
        raise OutOfRange(f"radius {t} outside 0..{n}")
    return min(math.fsum(math.comb(n, i) * (1.0 - q) ** (n - i) * q**i for i in range(t + 1, n + 1)), 1.0)


def _point(code: CssCode, f0: float, r: int, ch: PauliChannel, target: float | None) -> ReliabilityPoint:
    fx = branch_failure(code.n, code.tX, ch.qX)
    fz = branch_failure(code.n, code.tZ, ch.qZ)
    # 1 - (1 - fx)(1 - fz), rearranged to avoid cancellation
    pl = fx + fz - fx * fz
    sx, sz = 1.0 - fx, 1.0 - fz
    return ReliabilityPoint(
        code.id, code.n, f0, r, ch.qX, ch.qZ, sx, sz, pl, None if target is None else pl <= target
    )


def logical_error(code: CssCode, ch: PauliChannel) -> float:
    """1 - P_succ,X * P_succ,Z with radius tX on the qX branch and tZ on the qZ branch."""
    return _point(code, math.nan, -1, ch, None).pL


def evaluate(code: CssCode, f0: float, r: int, target: float | None = None) -> ReliabilityPoint:
    return _point(code, f0, r, to_channel(purify(f0, r)), target)


def fidelity_grid(start: float, end: float, step: float) -> list[float]:
    """Inclusive grid; points are rounded to 12 decimals so 0.8 + 0.001*i prints cleanly."""
    if step <= 0 or start > end:
        raise OutOfRange(f"bad grid {start}:{end}:{step}")
    count = math.floor((end - start) / step + 1e-9) + 1
    return [round(start + i * step, 12) for i in range(count)]


def sweep(
    registry: CodeRegistry | Iterable[CssCode],
    f0_grid: Sequence[float],
    rounds: Sequence[int],
    target: float | None = None,
) -> list[ReliabilityPoint]:
    """Every (code, r, f0) combination, ordered by registry order, then r, then f0."""
    if not f0_grid or not rounds:
        raise OutOfRange("sweep grids must be nonempty")
    f0s = sorted(f0_grid)
    channels = {(f0, r): to_channel(purify(f0, r)) for r in rounds for f0 in f0s}
    return [
        _point(code, f0, r, channels[f0, r], target)
        for code in registry
        for r in sorted(rounds)
        for f0 in f0s
    ]


def find_crossing(
    code: CssCode,
    r: int,
    target: float,
    f0_range: tuple[float, float] = DEFAULT_F0_RANGE,
    tol: float = CROSSING_TOL,
) -> float:
    """Smallest f0 in range with pL <= target, by bisection (pL is monotone in f0 here).

    The returned value always satisfies the target; it lies within ``tol`` of the
    true crossing.
    """
    lo, hi = f0_range

    def pl(f0: float) -> float:
        return evaluate(code, f0, r).pL

    if pl(hi) > target:
        raise NoCrossing(f"{code.id} at r={r} never reaches pL <= {target:g} on [{lo}, {hi}]")
    if pl(lo) <= target:
        return lo
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if pl(mid) <= target:
            hi = mid
        else:
            lo = mid
    return hi


def select_code(
    registry: CodeRegistry,
    f0: float,
    r: int,
    target: float,
    family: str = "all",
) -> SelectionResult:
    """Shortest code meeting ``target`` at (f0, r); ties go to registry order.

    ``family="punctured"`` drops codes outside the base code's punctured family.
    """
    if family == "punctured":
        registry = punctured_family(registry)
    elif family != "all":
        raise ValueError(f"unknown family {family!r}")
    points = tuple(evaluate(code, f0, r, target) for code in registry)
    feasible = [p for p in points if p.feasible]
    chosen = min(feasible, key=lambda p: p.n) if feasible else None
    return SelectionResult(
        target=target,
        feasible=tuple(p.code_id for p in feasible),
        chosen=chosen.code_id if chosen else None,
        chosen_n=chosen.n if chosen else None,
        points=points,
    )


def uncoded_gap(f0: float, r: int) -> tuple[float, float]:
    """(branch-factorized uncoded pL, exact 1 - fidelity); they differ by pY - qX*qZ."""
    ch = to_channel(purify(f0, r))
    return 1.0 - (1.0 - ch.qX) * (1.0 - ch.qZ), ch.pX + ch.pY + ch.pZ


def fmt_prob(x: float) -> str:
    return format(x, ".17g")


def write_sweep_csv(points: Iterable[ReliabilityPoint], out: TextIO) -> int:
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    count = 0
    for p in points:
        writer.writerow([p.code_id, p.n, p.r, repr(p.f0), fmt_prob(p.qX), fmt_prob(p.qZ), fmt_prob(p.pL)])
        count += 1
    return count
