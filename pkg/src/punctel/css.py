"""CSS codes built from two classical parity checks, plus the built-in code registry."""

from __future__ import annotations

import functools
from collections.abc import Iterator, Sequence
from dataclasses import dataclass, field

from .errors import CssViolation, DimensionMismatch, EmptySet, LabelMismatch, UnknownCode
from .gf2 import BinaryMatrix, RowSpace, enumerate_span, kernel_basis, rank


@dataclass(frozen=True)
class CssCode:
    """CSS code with X-stabilizer block ``h1`` and Z-stabilizer block ``h2``.

    Row ``i`` of ``h1`` is the stabilizer S^X_i and row ``i`` of ``h2`` is S^Z_i.
    """

    id: str
    h1: BinaryMatrix
    h2: BinaryMatrix
    k: int
    dX: int
    dZ: int

    @property
    def n(self) -> int:
        return self.h1.ncols

    @property
    def tX(self) -> int:
        return (self.dX - 1) // 2

    @property
    def tZ(self) -> int:
        return (self.dZ - 1) // 2

    @property
    def label(self) -> str:
        return f"[[{self.n},{self.k},{self.dX}/{self.dZ}]]"

    def describe(self) -> dict[str, object]:
        return {
            "id": self.id,
            "n": self.n,
            "k": self.k,
            "dX": self.dX,
            "dZ": self.dZ,
            "tX": self.tX,
            "tZ": self.tZ,
            "h1": self.h1.to_text().splitlines(),
            "h2": self.h2.to_text().splitlines(),
        }


def css_condition_holds(h1: BinaryMatrix, h2: BinaryMatrix) -> bool:
    return all((a & b).bit_count() % 2 == 0 for a in h1.rows for b in h2.rows)


def _min_weight_outside(codespace: BinaryMatrix, excluded: BinaryMatrix) -> int:
    """min w_H(ker(codespace) minus rowspace(excluded))."""
    span = RowSpace(excluded)
    best = None
    for v in enumerate_span(kernel_basis(codespace), codespace.ncols):
        if v.bits and v.bits not in span:
            w = v.weight
            if best is None or w < best:
                best = w
    if best is None:
        raise EmptySet("every codeword is a stabilizer; the code encodes no qubit")
    return best


def distances(h1: BinaryMatrix, h2: BinaryMatrix) -> tuple[int, int]:
    """(dX, dZ) = (min w(C1 \\ C2^perp), min w(C2 \\ C1^perp)) with C_i = ker(h_i)."""
    if h1.ncols != h2.ncols:
        raise DimensionMismatch(f"h1 has {h1.ncols} columns, h2 has {h2.ncols}")
    return _min_weight_outside(h1, h2), _min_weight_outside(h2, h1)


def make_css(
    id: str,
    h1: BinaryMatrix,
    h2: BinaryMatrix,
    expect: tuple[int, int, int, int] | None = None,
) -> CssCode:
    """Validate and build a CSS code, recomputing k and both distances.

    ``expect`` is an optional ``(n, k, dX, dZ)`` label; any disagreement with the
    recomputed values raises :class:`LabelMismatch`.
    """
    if h1.ncols != h2.ncols:
        raise DimensionMismatch(f"h1 has {h1.ncols} columns, h2 has {h2.ncols}")
    if not css_condition_holds(h1, h2):
        raise CssViolation(f"{id}: h1 . h2^T != 0")
    n = h1.ncols
    k = n - rank(h1) - rank(h2)
    dX, dZ = distances(h1, h2)
    code = CssCode(id, h1, h2, k, dX, dZ)
    if expect is not None and (n, k, dX, dZ) != tuple(expect):
        raise LabelMismatch(f"{id}: recomputed (n,k,dX,dZ)={(n, k, dX, dZ)}, label says {expect}")
    return code


@dataclass(frozen=True)
class CodeRegistry:
    codes: tuple[CssCode, ...]
    _by_id: dict[str, CssCode] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "codes", tuple(self.codes))
        ids = [c.id for c in self.codes]
        if len(set(ids)) != len(ids):
            raise ValueError(f"duplicate code ids in {ids}")
        if [c.n for c in self.codes] != sorted(c.n for c in self.codes):
            raise ValueError("registry must be ordered by n ascending")
        object.__setattr__(self, "_by_id", {c.id: c for c in self.codes})

    def __iter__(self) -> Iterator[CssCode]:
        return iter(self.codes)

    def __len__(self) -> int:
        return len(self.codes)

    def __contains__(self, code_id: object) -> bool:
        return code_id in self._by_id

    @property
    def ids(self) -> list[str]:
        return [c.id for c in self.codes]

    def get(self, code_id: str) -> CssCode:
        try:
            return self._by_id[code_id]
        except KeyError:
            raise UnknownCode(f"unknown code id {code_id!r}") from None

    def subset(self, ids: Sequence[str]) -> CodeRegistry:
        wanted = set(ids)
        for code_id in wanted:
            self.get(code_id)
        return CodeRegistry(tuple(c for c in self.codes if c.id in wanted))


HAMMING_7_4 = """
1010101
0110011
0001111
"""

BASE_17 = """
11011010101000010
01100011001100110
00111000000000100
00010000000001110
00001110010011101
00000101000110000
00000011111011010
00000001010100001
"""

PUNCT_13_H1 = """
1110000000100
0100000001110
0011101011101
0001010110000
0000011100001
"""

PUNCT_13_H2 = """
0110100000010
1000110100110
1110000000100
0100000001110
0011101011101
0001010110000
0000111011010
"""

PUNCT_8_H1 = """
11100100
01001110
00111101
00000001
"""

PUNCT_8_H2 = """
01110010
01001110
11100100
"""

# codes outside the punctured family of base-17
NON_FAMILY = frozenset({"steane-7"})


@functools.lru_cache(maxsize=None)
def builtin_registry() -> CodeRegistry:
    """uncoded, Steane, and the [[17,1,5/5]] family, ordered by length."""
    parse = BinaryMatrix.parse
    hamming = parse(HAMMING_7_4)
    base = parse(BASE_17)
    return CodeRegistry(
        (
            make_css("uncoded", BinaryMatrix.zeros(0, 1), BinaryMatrix.zeros(0, 1), (1, 1, 1, 1)),
            make_css("steane-7", hamming, hamming, (7, 1, 3, 3)),
            make_css("punct-8", parse(PUNCT_8_H1), parse(PUNCT_8_H2), (8, 1, 3, 3)),
            make_css("punct-13", parse(PUNCT_13_H1), parse(PUNCT_13_H2), (13, 1, 3, 5)),
            make_css("base-17", base, base, (17, 1, 5, 5)),
        )
    )


def punctured_family(registry: CodeRegistry) -> CodeRegistry:
    return CodeRegistry(tuple(c for c in registry if c.id not in NON_FAMILY))
