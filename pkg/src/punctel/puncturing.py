"""Puncturing CSS codes with respect to (0|1) and (1|0), with stabilizer lineage.

A Z-type step, puncturing w.r.t. (0|1) at qubit i, shortens the row space of
h1 at i and punctures the row space of h2 at i; classically this punctures
C1 = ker(h1) and shortens C2 = ker(h2).  An X-type step, w.r.t. (1|0), swaps
the roles of the two blocks.

Every stabilizer row carries a bitmask over the origin code's rows of the same
block, so removed and kept stabilizers can be named in the origin's numbering
(S^X_i is row i of h1, S^Z_i row i of h2).
"""

from __future__ import annotations

import enum
import itertools
import random
import re
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

from .css import CodeRegistry, CssCode, make_css
from .errors import DegenerateResult, EmptySet, IndexOutOfRange, LineageFormatError
from .gf2 import BinaryMatrix, RowSpace, same_rowspace, syndrome_bits


class PunctureKind(enum.Enum):
    Z = "(0|1)"
    X = "(1|0)"

    @property
    def shortened_block(self) -> str:
        """Stabilizer block ('X' = h1, 'Z' = h2) that loses a row by shortening."""
        return "X" if self is PunctureKind.Z else "Z"


@dataclass(frozen=True)
class PunctureStep:
    kind: PunctureKind
    qubit_index: int
    original_index: int
    removed_stabilizers: tuple[str, ...]

    def __str__(self) -> str:
        return f"{self.kind.value}@{self.original_index}"


def stabilizer_label(block: str, mask: int) -> str:
    """Name a row by the origin rows it combines, e.g. ``S^X_3`` or ``S^Z_5+S^Z_6``."""
    indices = [i + 1 for i in range(mask.bit_length()) if (mask >> i) & 1]
    return "+".join(f"S^{block}_{i}" for i in indices) or f"S^{block}_0"


@dataclass(frozen=True)
class _Block:
    rows: tuple[int, ...]
    masks: tuple[int, ...]

    def shorten(self, col: int) -> tuple[_Block, list[int]]:
        """Keep the combinations vanishing at 0-based ``col``; returns removed masks."""
        bit = 1 << col
        hits = [i for i, r in enumerate(self.rows) if r & bit]
        if not hits:
            return self, []
        pivot = hits[0]
        rows, masks = list(self.rows), list(self.masks)
        for i in hits[1:]:
            rows[i] ^= rows[pivot]
            masks[i] ^= masks[pivot]
        removed = masks.pop(pivot)
        rows.pop(pivot)
        return _Block(tuple(rows), tuple(masks)), [removed]

    def puncture(self, col: int) -> tuple[_Block, list[int]]:
        """Delete 0-based ``col``; drops rows that become newly dependent on earlier rows."""
        kept_rows: list[int] = []
        kept_masks: list[int] = []
        kept_before: list[int] = []
        removed: list[int] = []
        for row, mask in zip(self.rows, self.masks):
            cut = _drop_bit(row, col)
            dependent_now = _in_span(cut, kept_rows)
            dependent_before = _in_span(row, kept_before)
            if dependent_now and not dependent_before:
                removed.append(mask)
                continue
            kept_rows.append(cut)
            kept_masks.append(mask)
            kept_before.append(row)
        return _Block(tuple(kept_rows), tuple(kept_masks)), removed


def _in_span(bits: int, rows: Sequence[int]) -> bool:
    if not bits:
        return True
    ncols = max([bits.bit_length()] + [r.bit_length() for r in rows])
    return bits in RowSpace(BinaryMatrix(tuple(rows), ncols))


@dataclass(frozen=True)
class PunctureLineage:
    origin: str
    steps: tuple[PunctureStep, ...] = ()
    kept_stabilizers: dict[tuple[str, int], str] = field(default_factory=dict, compare=False)

    def to_text(self) -> str:
        return format_lineage((s.kind, s.original_index) for s in self.steps)

    @property
    def removed_stabilizers(self) -> list[str]:
        return [label for step in self.steps for label in step.removed_stabilizers]


@dataclass(frozen=True)
class PunctureState:
    """A code derived from ``origin`` together with the bookkeeping needed to replay it."""

    origin: CssCode
    code: CssCode
    x_block: _Block
    z_block: _Block
    qubits: tuple[int, ...]
    steps: tuple[PunctureStep, ...] = ()
    removed_x: tuple[int, ...] = ()
    removed_z: tuple[int, ...] = ()

    @classmethod
    def start(cls, code: CssCode) -> PunctureState:
        return cls(
            origin=code,
            code=code,
            x_block=_Block(code.h1.rows, tuple(1 << i for i in range(code.h1.nrows))),
            z_block=_Block(code.h2.rows, tuple(1 << i for i in range(code.h2.nrows))),
            qubits=tuple(range(1, code.n + 1)),
        )

    def apply(self, kind: PunctureKind, qubit_index: int) -> PunctureState:
        """Puncture at 1-based ``qubit_index`` in the current code's numbering."""
        n = self.code.n
        if not 1 <= qubit_index <= n:
            raise IndexOutOfRange(f"qubit {qubit_index} outside 1..{n}")
        col = qubit_index - 1
        x_block, z_block, removed_x, removed_z = _step_blocks(self.x_block, self.z_block, kind, col)
        gone_x = _reduce_masks(self.removed_x, removed_x)
        gone_z = _reduce_masks(self.removed_z, removed_z)
        removed = tuple(
            [stabilizer_label("X", m) for m in gone_x[len(self.removed_x) :]]
            + [stabilizer_label("Z", m) for m in gone_z[len(self.removed_z) :]]
        )
        step = PunctureStep(kind, qubit_index, self.qubits[col], removed)
        steps = self.steps + (step,)
        h1 = BinaryMatrix(x_block.rows, n - 1)
        h2 = BinaryMatrix(z_block.rows, n - 1)
        code_id = f"{self.origin.id}>{format_lineage((s.kind, s.original_index) for s in steps)}"
        try:
            code = make_css(code_id, h1, h2)
        except EmptySet as exc:
            raise DegenerateResult(f"{step} leaves no logical qubit") from exc
        if code.k < 1:
            raise DegenerateResult(f"{step} leaves k = {code.k}")
        return PunctureState(
            origin=self.origin,
            code=code,
            x_block=x_block,
            z_block=z_block,
            qubits=self.qubits[:col] + self.qubits[col + 1 :],
            steps=steps,
            removed_x=gone_x,
            removed_z=gone_z,
        )

    def apply_original(self, kind: PunctureKind, original_index: int) -> PunctureState:
        """Puncture the qubit that carried 1-based ``original_index`` in the origin code."""
        try:
            current = self.qubits.index(original_index) + 1
        except ValueError:
            raise IndexOutOfRange(
                f"qubit {original_index} of {self.origin.id} is not present "
                f"(origin has {self.origin.n} qubits, already removed: "
                f"{sorted(set(range(1, self.origin.n + 1)) - set(self.qubits))})"
            ) from None
        return self.apply(kind, current)

    @property
    def lineage(self) -> PunctureLineage:
        kept = {("X", i + 1): stabilizer_label("X", m) for i, m in enumerate(self.x_block.masks)}
        kept.update(
            {("Z", i + 1): stabilizer_label("Z", m) for i, m in enumerate(self.z_block.masks)}
        )
        return PunctureLineage(self.origin.id, self.steps, kept)

    def punctured_positions(self, kind: PunctureKind) -> list[int]:
        return [s.original_index for s in self.steps if s.kind is kind]


def _reduce_masks(previous: tuple[int, ...], new: Sequence[int]) -> tuple[int, ...]:
    """Append ``new`` removed-row masks, each reduced modulo the rows removed before it.

    Elimination can fold an earlier pivot into a later row; reducing credits
    each removal with the one origin stabilizer it newly takes away.
    """
    out = list(previous)
    for mask in new:
        for prior in sorted(out, key=int.bit_length, reverse=True):
            if mask >> (prior.bit_length() - 1) & 1:
                mask ^= prior
        out.append(mask)
    return tuple(out)


def _step_blocks(
    x_block: _Block, z_block: _Block, kind: PunctureKind, col: int
) -> tuple[_Block, _Block, list[int], list[int]]:
    if kind is PunctureKind.Z:
        x_block, removed_x = x_block.shorten(col)
        x_block = _Block(tuple(_drop_bit(r, col) for r in x_block.rows), x_block.masks)
        z_block, removed_z = z_block.puncture(col)
    else:
        z_block, removed_z = z_block.shorten(col)
        z_block = _Block(tuple(_drop_bit(r, col) for r in z_block.rows), z_block.masks)
        x_block, removed_x = x_block.puncture(col)
    return x_block, z_block, removed_x, removed_z


def _drop_bit(row: int, col: int) -> int:
    low = (1 << col) - 1
    return (row & low) | ((row >> (col + 1)) << col)


def _start(code: CssCode | PunctureState) -> PunctureState:
    return code if isinstance(code, PunctureState) else PunctureState.start(code)


def puncture_z_type(code: CssCode | PunctureState, i: int) -> tuple[CssCode, PunctureStep]:
    """Puncture w.r.t. (0|1) at qubit ``i`` (current numbering)."""
    state = _start(code).apply(PunctureKind.Z, i)
    return state.code, state.steps[-1]


def puncture_x_type(code: CssCode | PunctureState, i: int) -> tuple[CssCode, PunctureStep]:
    """Puncture w.r.t. (1|0) at qubit ``i`` (current numbering)."""
    state = _start(code).apply(PunctureKind.X, i)
    return state.code, state.steps[-1]


def puncture_many(
    code: CssCode | PunctureState, steps: Iterable[tuple[PunctureKind, int]]
) -> PunctureState:
    """Apply steps whose indices are given in the origin code's numbering."""
    state = _start(code)
    for kind, index in steps:
        state = state.apply_original(kind, index)
    return state


_STEP_RE = re.compile(r"^\((0\|1|1\|0)\)@(\d+)$")


def parse_lineage(text: str) -> list[tuple[PunctureKind, int]]:
    """Parse ``"(0|1)@1,(1|0)@6"``; indices refer to the origin code's qubits."""
    steps = []
    for token in filter(None, (t.strip() for t in text.split(","))):
        match = _STEP_RE.match(token.replace(" ", ""))
        if not match:
            raise LineageFormatError(f"bad puncture step {token!r}; expected (0|1)@i or (1|0)@i")
        steps.append((PunctureKind(f"({match.group(1)})"), int(match.group(2))))
    return steps


def format_lineage(steps: Iterable[tuple[PunctureKind, int]]) -> str:
    return ",".join(f"{kind.value}@{index}" for kind, index in steps)


def replay(lineage: PunctureLineage, registry: CodeRegistry) -> CssCode:
    return replay_state(lineage, registry).code


def replay_state(lineage: PunctureLineage, registry: CodeRegistry) -> PunctureState:
    origin = registry.get(lineage.origin)
    return puncture_many(origin, ((s.kind, s.original_index) for s in lineage.steps))


# lineages from base-17 to the two punctured registry codes, origin numbering
Z_STEPS_TO_13 = tuple((PunctureKind.Z, i) for i in (1, 2, 9, 11))
X_STEPS_TO_8 = tuple((PunctureKind.X, i) for i in (6, 8, 10, 12, 13))


def registry_lineage(target: str) -> PunctureLineage:
    steps = {"punct-13": Z_STEPS_TO_13, "punct-8": Z_STEPS_TO_13 + X_STEPS_TO_8}[target]
    return PunctureLineage(
        "base-17",
        tuple(PunctureStep(kind, 0, index, ()) for kind, index in steps),
    )


def _express(target: int, rows: Sequence[int]) -> int | None:
    """Bitmask of ``rows`` summing to ``target`` over GF(2), or None."""
    # elimination with combination tracking
    basis: list[tuple[int, int, int]] = []  # (pivot bit, row, combination)
    for idx, row in enumerate(rows):
        combo = 1 << idx
        for pivot, brow, bcombo in basis:
            if row & pivot:
                row ^= brow
                combo ^= bcombo
        if row:
            basis.append((row & -row, row, combo))
    combo = 0
    for pivot, brow, bcombo in basis:
        if target & pivot:
            target ^= brow
            combo ^= bcombo
    return combo if target == 0 else None


@dataclass
class CompatibilityReport:
    big: str
    small: str
    kept_stabilizers: list[str]
    errors_checked: int
    mismatches: list[str]

    @property
    def ok(self) -> bool:
        return not self.mismatches


def syndrome_compatibility_check(
    big: CssCode,
    small: CssCode,
    lineage: PunctureLineage,
    samples: int = 2000,
    seed: int = 0,
) -> CompatibilityReport:
    """Check that the parent's kept stabilizers read the same syndromes on padded errors.

    Each row of ``small`` is matched to the parent stabilizer (or product of
    stabilizers) it descends from.  Kept X-stabilizers must vanish on
    (0|1)-punctured qubits and kept Z-stabilizers on (1|0)-punctured qubits, so
    padding with |0> and |+> leaves them stabilized.  Syndromes are then
    compared for every error of weight <= 2 and ``samples`` random errors,
    zero-padded onto the parent's qubits.
    """
    if lineage.origin != big.id:
        raise ValueError(f"lineage starts at {lineage.origin!r}, not {big.id!r}")
    state = puncture_many(big, ((s.kind, s.original_index) for s in lineage.steps))
    mismatches: list[str] = []
    kept: list[str] = []
    if state.code.n != small.n:
        return CompatibilityReport(big.id, small.id, kept, 0, [f"length {small.n} != {state.code.n}"])

    z_removed = set(state.punctured_positions(PunctureKind.Z))
    x_removed = set(state.punctured_positions(PunctureKind.X))
    checks = []  # (label, small row, parent row, forbidden parent positions)
    for block, small_h, derived, parent_h, forbidden in (
        ("X", small.h1, state.x_block, big.h1, z_removed),
        ("Z", small.h2, state.z_block, big.h2, x_removed),
    ):
        if not same_rowspace(small_h, BinaryMatrix(derived.rows, small.n)):
            mismatches.append(f"{block}-block of {small.id} is not the lineage's {block}-block")
            continue
        for i, row in enumerate(small_h.rows, start=1):
            combo = _express(row, derived.rows)
            mask = 0
            for j, m in enumerate(derived.masks):
                if combo is not None and (combo >> j) & 1:
                    mask ^= m
            parent_row = 0
            for j, prow in enumerate(parent_h.rows):
                if (mask >> j) & 1:
                    parent_row ^= prow
            label = stabilizer_label(block, mask)
            kept.append(label)
            bad = [q for q in forbidden if (parent_row >> (q - 1)) & 1]
            if bad:
                mismatches.append(f"{label} acts on padded qubits {sorted(bad)}")
            checks.append((label, row, parent_row))

    positions = state.qubits

    def pad(bits: int) -> int:
        return sum(1 << (positions[j] - 1) for j in range(small.n) if (bits >> j) & 1)

    rng = random.Random(seed)
    errors = [0]
    errors += [1 << a for a in range(small.n)]
    errors += [(1 << a) | (1 << b) for a, b in itertools.combinations(range(small.n), 2)]
    errors += [rng.getrandbits(small.n) for _ in range(samples)]
    for e in errors:
        padded = pad(e)
        for label, row, parent_row in checks:
            if syndrome_bits((row,), e) != syndrome_bits((parent_row,), padded):
                mismatches.append(f"{label} disagrees on error {e:0{small.n}b}")
                break
    return CompatibilityReport(big.id, small.id, kept, len(errors), mismatches)


def search_punctures(
    code: CssCode,
    kind: PunctureKind,
    size: int,
    target: tuple[int, int],
    limit: int | None = None,
) -> list[tuple[int, ...]]:
    """All index sets of ``size`` qubits whose puncturing yields (dX, dZ) = ``target`` at equal k.

    Indices are 1-based in ``code``'s numbering, returned in lexicographic order.
    """
    if code.n > 20:
        raise ValueError("puncture search is capped at n <= 20")
    if not 0 <= size <= 6:
        raise ValueError("puncture search is capped at subsets of size <= 6")
    start = PunctureState.start(code)
    found = []
    for subset in itertools.combinations(range(1, code.n + 1), size):
        x_block, z_block = start.x_block, start.z_block
        # descending order keeps the remaining indices valid in the original numbering
        for index in sorted(subset, reverse=True):
            x_block, z_block, _, _ = _step_blocks(x_block, z_block, kind, index - 1)
        n = code.n - size
        try:
            result = make_css("candidate", BinaryMatrix(x_block.rows, n), BinaryMatrix(z_block.rows, n))
        except EmptySet:
            continue
        if result.k == code.k and (result.dX, result.dZ) == tuple(target):
            found.append(subset)
            if limit is not None and len(found) >= limit:
                break
    return found
