"""Independent checks of the analytic model: exhaustive enumeration, lookup decoding, Monte Carlo.

Branch conventions
------------------
``standard``: X errors are read by the Z-stabilizers (h2) and are harmless when
they lie in the row space of h1; Z errors are read by h1 and are harmless in the
row space of h2.  ``swapped`` exchanges the two blocks.  The radius applied to a
branch is always the one the code labels assign to it (tX for X errors, tZ for
Z errors), so a convention is consistent for a code exactly when each branch's
operational distance equals that branch's label.
"""

from __future__ import annotations

import enum
import itertools
import math
from collections.abc import Iterable, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .css import CssCode
from .errors import DistanceContradiction, LabelMismatch, OutOfRange
from .gf2 import BinaryMatrix, BinaryVector, RowSpace, enumerate_span, syndrome_bits
from .purification import PauliChannel
from .reliability import logical_error

STANDARD = "standard"
SWAPPED = "swapped"
CONVENTIONS = (STANDARD, SWAPPED)
MAX_N = 20
CHUNK = 1 << 16


class Branch(enum.Enum):
    X = "X"
    Z = "Z"


def branch_matrices(code: CssCode, branch: Branch, convention: str = STANDARD) -> tuple[BinaryMatrix, BinaryMatrix]:
    """(check matrix, harmless row space) for errors of type ``branch``."""
    if convention not in CONVENTIONS:
        raise ValueError(f"unknown convention {convention!r}")
    x_reads_h2 = convention == STANDARD
    if (branch is Branch.X) == x_reads_h2:
        return code.h2, code.h1
    return code.h1, code.h2


def branch_radius(code: CssCode, branch: Branch) -> int:
    return code.tX if branch is Branch.X else code.tZ


def branch_label(code: CssCode, branch: Branch) -> int:
    return code.dX if branch is Branch.X else code.dZ


def _fmt(bits: int, n: int) -> str:
    return str(BinaryVector(bits, n))


@dataclass(frozen=True)
class SyndromeTable:
    code_id: str
    branch: Branch
    convention: str
    check: BinaryMatrix
    harmless: BinaryMatrix
    radius: int
    map: dict[int, int] = field(compare=False)
    errors_enumerated: int = 0

    @property
    def n(self) -> int:
        return self.check.ncols

    def decode(self, syndrome: int) -> int | None:
        return self.map.get(syndrome)

    def as_array(self) -> np.ndarray:
        """Representative per syndrome index, -1 where the table has no entry."""
        reps = np.full(1 << self.check.nrows, -1, dtype=np.int64)
        for s, rep in self.map.items():
            reps[s] = rep
        return reps


def build_table(code: CssCode, branch: Branch, convention: str = STANDARD) -> SyndromeTable:
    """Map each syndrome of a weight <= t error to a minimum-weight representative.

    Raises DistanceContradiction naming the first pair of enumerated errors that
    share a syndrome but differ by something outside the harmless row space.
    """
    if code.n > MAX_N:
        raise OutOfRange(f"lookup tables are limited to n <= {MAX_N}")
    check, harmless = branch_matrices(code, branch, convention)
    space = RowSpace(harmless)
    radius = branch_radius(code, branch)
    table: dict[int, int] = {}
    count = 0
    for w in range(radius + 1):
        for support in itertools.combinations(range(code.n), w):
            e = sum(1 << j for j in support)
            count += 1
            s = syndrome_bits(check.rows, e)
            rep = table.get(s)
            if rep is None:
                table[s] = e
            elif (rep ^ e) not in space:
                raise DistanceContradiction(
                    code.id, f"{branch.value}/{convention}", _fmt(rep, code.n), _fmt(e, code.n), radius
                )
    return SyndromeTable(code.id, branch, convention, check, harmless, radius, table, count)


def operational_distance(
    code: CssCode, branch: Branch, convention: str = STANDARD, max_weight: int = 5
) -> int | None:
    """Smallest weight of an undetectable error outside the harmless space, or None up to ``max_weight``."""
    check, harmless = branch_matrices(code, branch, convention)
    space = RowSpace(harmless)
    for w in range(1, min(max_weight, code.n) + 1):
        for support in itertools.combinations(range(code.n), w):
            e = sum(1 << j for j in support)
            if syndrome_bits(check.rows, e) == 0 and e not in space:
                return w
    return None


# vectorized machinery over all 2^n error patterns


def _all_patterns(n: int) -> np.ndarray:
    return np.arange(1 << n, dtype=np.int64)


def _syndromes(rows: Sequence[int], errors: np.ndarray) -> np.ndarray:
    out = np.zeros(errors.shape, dtype=np.int64)
    for i, row in enumerate(rows):
        parity = np.bitwise_count(errors & np.int64(row)).astype(np.int64) & 1
        out |= parity << i
    return out


def _harmless_mask(harmless: BinaryMatrix, n: int) -> np.ndarray:
    mask = np.zeros(1 << n, dtype=bool)
    basis = [BinaryVector(r, n) for r in RowSpace(harmless).basis]
    for v in enumerate_span(basis, n):
        mask[v.bits] = True
    return mask


@dataclass
class _Decoder:
    """Vectorized lookup decoder for one branch."""

    table: SyndromeTable
    reps: np.ndarray
    harmless: np.ndarray

    @classmethod
    def for_table(cls, table: SyndromeTable) -> _Decoder:
        return cls(table, table.as_array(), _harmless_mask(table.harmless, table.n))

    def succeeds(self, errors: np.ndarray) -> np.ndarray:
        rep = self.reps[_syndromes(self.table.check.rows, errors)]
        found = rep >= 0
        residual = errors ^ np.where(found, rep, 0)
        return found & self.harmless[residual]


def success_indicator(
    code: CssCode, branch: Branch, mode: str, convention: str = STANDARD
) -> np.ndarray:
    """Boolean over all 2^n branch errors: does the decoder return the code state?"""
    if code.n > MAX_N:
        raise OutOfRange(f"exhaustive enumeration is limited to n <= {MAX_N}")
    patterns = _all_patterns(code.n)
    if mode == "threshold":
        return np.bitwise_count(patterns) <= branch_radius(code, branch)
    if mode == "lookup":
        return _Decoder.for_table(build_table(code, branch, convention)).succeeds(patterns)
    raise ValueError(f"unknown mode {mode!r}")


def exact_branch_error(
    code: CssCode, branch: Branch, q: float, mode: str = "threshold", convention: str = STANDARD
) -> float:
    """Exact branch failure probability by summing q^w (1-q)^(n-w) over every failing pattern."""
    if not 0.0 <= q <= 1.0:
        raise OutOfRange(f"flip probability {q} outside [0, 1]")
    ok = success_indicator(code, branch, mode, convention)
    weights = np.bitwise_count(_all_patterns(code.n)).astype(np.int64)
    probs = np.power(q, weights) * np.power(1.0 - q, code.n - weights)
    return math.fsum(probs[~ok].tolist())


def joint_success(ok_x: np.ndarray, ok_z: np.ndarray, ch: PauliChannel, n: int) -> float:
    """P[both branches succeed] under i.i.d. correlated Pauli noise.

    Sums sum_{x,z} ok_x[x] ok_z[z] prod_j P(x_j, z_j) by contracting the
    per-qubit joint table P(x_j, z_j) along each qubit axis.
    """
    joint = np.array([[ch.pI, ch.pZ], [ch.pX, ch.pY]])
    v = ok_z.astype(float).reshape((2,) * n)
    for _ in range(n):
        v = np.tensordot(joint, v, axes=([1], [n - 1]))
    return float(np.dot(ok_x.astype(float), v.reshape(-1)))


def exact_joint_error(
    code: CssCode, ch: PauliChannel, mode: str = "lookup", convention: str = STANDARD
) -> float:
    """Exact logical failure probability with Y errors hitting both branches at once."""
    ok_x = success_indicator(code, Branch.X, mode, convention)
    ok_z = success_indicator(code, Branch.Z, mode, convention)
    return max(0.0, 1.0 - joint_success(ok_x, ok_z, ch, code.n))


@dataclass(frozen=True)
class McEstimate:
    failures: int
    samples: int
    seed: int
    workers: int

    @property
    def mean(self) -> float:
        return self.failures / self.samples

    @property
    def stderr(self) -> float:
        p = self.mean
        return math.sqrt(p * (1.0 - p) / self.samples)


def _mc_stream(
    decoders: tuple[_Decoder, _Decoder], ch: PauliChannel, n: int, samples: int, seed: np.random.SeedSequence
) -> int:
    rng = np.random.default_rng(seed)
    x_cut = ch.qX
    z_lo, z_hi = ch.pX, ch.pX + ch.pY + ch.pZ
    place = np.int64(1) << np.arange(n, dtype=np.int64)
    failures = 0
    remaining = samples
    while remaining:
        size = min(CHUNK, remaining)
        u = rng.random((size, n))
        # [0,pX) X, [pX,pX+pY) Y, [pX+pY,pX+pY+pZ) Z, rest identity
        x = ((u < x_cut) * place).sum(axis=1)
        z = (((u >= z_lo) & (u < z_hi)) * place).sum(axis=1)
        ok = decoders[0].succeeds(x) & decoders[1].succeeds(z)
        failures += int(size - np.count_nonzero(ok))
        remaining -= size
    return failures


def mc_logical_error(
    code: CssCode,
    ch: PauliChannel,
    samples: int,
    seed: int,
    convention: str = STANDARD,
    workers: int = 1,
) -> McEstimate:
    """Monte-Carlo lookup-decoder failure rate; deterministic for a fixed (seed, workers)."""
    if samples < 1:
        raise OutOfRange("samples must be at least 1")
    if workers < 1:
        raise OutOfRange("workers must be at least 1")
    decoders = (
        _Decoder.for_table(build_table(code, Branch.X, convention)),
        _Decoder.for_table(build_table(code, Branch.Z, convention)),
    )
    streams = np.random.SeedSequence(seed).spawn(workers)
    shares = [samples // workers + (1 if i < samples % workers else 0) for i in range(workers)]
    jobs = [(decoders, ch, code.n, share, stream) for share, stream in zip(shares, streams)]
    if workers == 1:
        counts = [_mc_stream(*jobs[0])]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            counts = list(pool.map(lambda job: _mc_stream(*job), jobs))
    return McEstimate(sum(counts), samples, seed, workers)


def within_sigmas(estimate: McEstimate, exact: float, sigmas: float = 3.0) -> bool:
    """z-test of the MC mean against the exact value, using the exact value's binomial spread."""
    spread = math.sqrt(exact * (1.0 - exact) / estimate.samples)
    return abs(estimate.mean - exact) <= sigmas * spread


@dataclass(frozen=True)
class ConventionResolution:
    convention: str
    diagnosis: tuple[str, ...]

    @property
    def swapped(self) -> bool:
        return self.convention == SWAPPED


def _convention_issues(code: CssCode, convention: str) -> list[Exception]:
    issues: list[Exception] = []
    for branch in Branch:
        try:
            build_table(code, branch, convention)
        except DistanceContradiction as exc:
            issues.append(exc)
            continue
        measured = operational_distance(code, branch, convention, max_weight=branch_label(code, branch))
        if measured != branch_label(code, branch):
            issues.append(
                LabelMismatch(
                    f"{code.id}: {branch.value} branch ({convention}) has operational distance "
                    f"{measured if measured is not None else '>' + str(branch_label(code, branch))}, "
                    f"label says {branch_label(code, branch)}"
                )
            )
    return issues


def resolve_convention(codes: Iterable[CssCode]) -> ConventionResolution:
    """Pick the one branch convention under which every code's tables and labels agree.

    The standard convention is kept unless it contradicts a label; the diagnosis
    records what failed under each convention that was rejected.
    """
    codes = list(codes)
    diagnosis: list[str] = []
    failures: dict[str, list[Exception]] = {}
    for convention in CONVENTIONS:
        issues = [issue for code in codes for issue in _convention_issues(code, convention)]
        if not issues:
            return ConventionResolution(convention, tuple(diagnosis))
        failures[convention] = issues
        diagnosis.extend(f"{convention}: {issue}" for issue in issues)
    first = failures[STANDARD][0]
    contradictions = [i for issues in failures.values() for i in issues if isinstance(i, DistanceContradiction)]
    raise contradictions[0] if contradictions else first


@dataclass(frozen=True)
class OracleReport:
    code_id: str
    f0: float
    r: int
    channel: PauliChannel
    convention: str
    exact_threshold: float
    exact_lookup: float
    exact_threshold_joint: float
    exact_lookup_branchwise: float
    analytic: float
    mc: McEstimate | None

    @property
    def samples(self) -> int:
        return self.mc.samples if self.mc else 0


REPORT_COLUMNS = (
    "code_id", "f0", "r", "exact_threshold", "exact_lookup", "mc_mean", "mc_stderr", "samples", "seed",
    "exact_threshold_joint", "exact_lookup_branchwise", "convention",
)


def oracle_report(
    code: CssCode,
    ch: PauliChannel,
    f0: float,
    r: int,
    samples: int = 0,
    seed: int = 0,
    convention: str = STANDARD,
    workers: int = 1,
) -> OracleReport:
    """Exact threshold/lookup failure rates (branchwise and joint) plus an optional MC run.

    ``exact_threshold`` multiplies the enumerated branch failures, matching the
    analytic formula; ``exact_lookup`` is the joint lookup-decoder failure under
    correlated Pauli noise, which is what the MC run estimates.
    """
    ok = {
        (mode, b): success_indicator(code, b, mode, convention)
        for mode in ("threshold", "lookup")
        for b in Branch
    }
    weights = np.bitwise_count(_all_patterns(code.n)).astype(np.int64)

    def branch_fail(mode: str, b: Branch, q: float) -> float:
        probs = np.power(q, weights) * np.power(1.0 - q, code.n - weights)
        return math.fsum(probs[~ok[mode, b]].tolist())

    def factorized(mode: str) -> float:
        fx = branch_fail(mode, Branch.X, ch.qX)
        fz = branch_fail(mode, Branch.Z, ch.qZ)
        return fx + fz - fx * fz

    def joint(mode: str) -> float:
        return max(0.0, 1.0 - joint_success(ok[mode, Branch.X], ok[mode, Branch.Z], ch, code.n))

    mc = mc_logical_error(code, ch, samples, seed, convention, workers) if samples else None
    return OracleReport(
        code_id=code.id,
        f0=f0,
        r=r,
        channel=ch,
        convention=convention,
        exact_threshold=factorized("threshold"),
        exact_lookup=joint("lookup"),
        exact_threshold_joint=joint("threshold"),
        exact_lookup_branchwise=factorized("lookup"),
        analytic=logical_error(code, ch),
        mc=mc,
    )


def report_row(rep: OracleReport) -> list[str]:
    fmt = lambda x: format(x, ".17g")  # noqa: E731
    mc_mean = fmt(rep.mc.mean) if rep.mc else ""
    mc_stderr = fmt(rep.mc.stderr) if rep.mc else ""
    seed = str(rep.mc.seed) if rep.mc else ""
    return [
        rep.code_id, repr(rep.f0), str(rep.r), fmt(rep.exact_threshold), fmt(rep.exact_lookup),
        mc_mean, mc_stderr, str(rep.samples), seed,
        fmt(rep.exact_threshold_joint), fmt(rep.exact_lookup_branchwise), rep.convention,
    ]
