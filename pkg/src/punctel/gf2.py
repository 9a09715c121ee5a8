"""Dense linear algebra over GF(2) on int bitsets.

Rows and vectors are stored as Python ints.  Bit ``j`` (least significant
first) holds column ``j + 1`` in the 1-based numbering used by every public
accessor, so ``0b101`` over three columns is the row ``1 0 1``.  Bits at or
above the logical width are always zero; equality and weight therefore act on
logical entries only.
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass

from .errors import DimensionMismatch, EnumerationTooLarge, IndexOutOfRange, MatrixFormatError

MAX_SPAN_DIM = 24


def _mask(width: int) -> int:
    return (1 << width) - 1


def _bits_from_entries(entries: Sequence[int]) -> int:
    bits = 0
    for j, entry in enumerate(entries):
        if entry not in (0, 1):
            raise MatrixFormatError(f"entry {entry!r} is not 0 or 1")
        bits |= entry << j
    return bits


@dataclass(frozen=True)
class BinaryVector:
    """A length-``length`` vector over GF(2)."""

    bits: int
    length: int

    def __post_init__(self) -> None:
        if self.length < 0:
            raise ValueError("length must be non-negative")
        if self.bits < 0 or self.bits >> self.length:
            raise MatrixFormatError("bits set beyond the vector length")

    @classmethod
    def from_entries(cls, entries: Sequence[int]) -> BinaryVector:
        return cls(_bits_from_entries(entries), len(entries))

    @classmethod
    def zeros(cls, length: int) -> BinaryVector:
        return cls(0, length)

    @classmethod
    def unit(cls, length: int, index: int) -> BinaryVector:
        """Weight-one vector with a 1 at 1-based ``index``."""
        _check_index(index, length, "index")
        return cls(1 << (index - 1), length)

    def __getitem__(self, index: int) -> int:
        _check_index(index, self.length, "index")
        return (self.bits >> (index - 1)) & 1

    def __len__(self) -> int:
        return self.length

    def __add__(self, other: BinaryVector) -> BinaryVector:
        if other.length != self.length:
            raise DimensionMismatch(f"cannot add vectors of length {self.length} and {other.length}")
        return BinaryVector(self.bits ^ other.bits, self.length)

    @property
    def weight(self) -> int:
        return self.bits.bit_count()

    def entries(self) -> list[int]:
        return [(self.bits >> j) & 1 for j in range(self.length)]

    def support(self) -> list[int]:
        """1-based positions of the nonzero entries."""
        return [j + 1 for j in range(self.length) if (self.bits >> j) & 1]

    def __str__(self) -> str:
        return "".join(str(b) for b in self.entries())


def _check_index(index: int, size: int, what: str) -> None:
    if not 1 <= index <= size:
        raise IndexOutOfRange(f"{what} {index} outside 1..{size}")


@dataclass(frozen=True)
class BinaryMatrix:
    """An ``nrows x ncols`` matrix over GF(2), one int bitset per row."""

    rows: tuple[int, ...]
    ncols: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "rows", tuple(self.rows))
        limit = _mask(self.ncols)
        for row in self.rows:
            if row < 0 or row & ~limit:
                raise MatrixFormatError("row has bits set beyond the column count")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], ncols: int | None = None) -> BinaryMatrix:
        if ncols is None:
            if not rows:
                raise MatrixFormatError("column count is required for a matrix with no rows")
            ncols = len(rows[0])
        for row in rows:
            if len(row) != ncols:
                raise MatrixFormatError(f"ragged row: expected {ncols} entries, got {len(row)}")
        return cls(tuple(_bits_from_entries(row) for row in rows), ncols)

    @classmethod
    def from_vectors(cls, vectors: Sequence[BinaryVector], ncols: int) -> BinaryMatrix:
        for v in vectors:
            if v.length != ncols:
                raise DimensionMismatch(f"vector of length {v.length} in a {ncols}-column matrix")
        return cls(tuple(v.bits for v in vectors), ncols)

    @classmethod
    def parse(cls, text: str, ncols: int | None = None) -> BinaryMatrix:
        """Parse one row of '0'/'1' characters per line; whitespace inside a row is ignored."""
        rows = []
        for line in text.strip().splitlines():
            compact = "".join(line.split())
            if not compact:
                continue
            if set(compact) - {"0", "1"}:
                raise MatrixFormatError(f"row {line!r} contains characters other than 0/1")
            rows.append([int(c) for c in compact])
        return cls.from_rows(rows, ncols)

    @classmethod
    def identity(cls, size: int) -> BinaryMatrix:
        return cls(tuple(1 << j for j in range(size)), size)

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> BinaryMatrix:
        return cls((0,) * nrows, ncols)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def entry(self, i: int, j: int) -> int:
        _check_index(i, self.nrows, "row")
        _check_index(j, self.ncols, "column")
        return (self.rows[i - 1] >> (j - 1)) & 1

    def row(self, i: int) -> BinaryVector:
        _check_index(i, self.nrows, "row")
        return BinaryVector(self.rows[i - 1], self.ncols)

    def column(self, j: int) -> BinaryVector:
        _check_index(j, self.ncols, "column")
        return BinaryVector(
            sum(((r >> (j - 1)) & 1) << i for i, r in enumerate(self.rows)), self.nrows
        )

    def row_vectors(self) -> list[BinaryVector]:
        return [BinaryVector(r, self.ncols) for r in self.rows]

    def transpose(self) -> BinaryMatrix:
        return BinaryMatrix(tuple(self.column(j).bits for j in range(1, self.ncols + 1)), self.nrows)

    def __matmul__(self, other: BinaryMatrix) -> BinaryMatrix:
        if self.ncols != other.nrows:
            raise DimensionMismatch(f"cannot multiply {self.shape} by {other.shape}")
        cols = [other.column(j).bits for j in range(1, other.ncols + 1)]
        return BinaryMatrix(
            tuple(
                sum(((r & c).bit_count() & 1) << j for j, c in enumerate(cols))
                for r in self.rows
            ),
            other.ncols,
        )

    def is_zero(self) -> bool:
        return not any(self.rows)

    def delete_column(self, j: int) -> BinaryMatrix:
        """Drop 1-based column ``j``; later columns shift left by one."""
        _check_index(j, self.ncols, "column")
        low = _mask(j - 1)
        return BinaryMatrix(
            tuple((r & low) | ((r >> j) << (j - 1)) for r in self.rows), self.ncols - 1
        )

    def to_lists(self) -> list[list[int]]:
        return [BinaryVector(r, self.ncols).entries() for r in self.rows]

    def to_text(self) -> str:
        return "\n".join(str(BinaryVector(r, self.ncols)) for r in self.rows)

    def __str__(self) -> str:
        return self.to_text()


def _reduce(rows: Iterable[int], ncols: int) -> tuple[list[int], list[int]]:
    """Gauss-Jordan elimination; returns (nonzero reduced rows, 0-based pivot columns)."""
    work = [r for r in rows if r]
    pivots: list[int] = []
    top = 0
    for col in range(ncols):
        bit = 1 << col
        found = next((i for i in range(top, len(work)) if work[i] & bit), None)
        if found is None:
            continue
        work[top], work[found] = work[found], work[top]
        for i in range(len(work)):
            if i != top and work[i] & bit:
                work[i] ^= work[top]
        pivots.append(col)
        top += 1
        if top == len(work):
            break
    return work[:top], pivots


def rref(m: BinaryMatrix) -> tuple[BinaryMatrix, list[int]]:
    """Reduced row-echelon form and 1-based pivot columns.

    The returned matrix keeps the input's shape; zero rows sit at the bottom.
    """
    reduced, pivots = _reduce(m.rows, m.ncols)
    padded = tuple(reduced) + (0,) * (m.nrows - len(reduced))
    return BinaryMatrix(padded, m.ncols), [p + 1 for p in pivots]


def rank(m: BinaryMatrix) -> int:
    return len(_reduce(m.rows, m.ncols)[0])


def same_rowspace(a: BinaryMatrix, b: BinaryMatrix) -> bool:
    if a.ncols != b.ncols:
        return False
    return _reduce(a.rows, a.ncols)[0] == _reduce(b.rows, b.ncols)[0]


class RowSpace:
    """Membership oracle for the row space of a matrix, reused across many queries."""

    def __init__(self, m: BinaryMatrix) -> None:
        self.ncols = m.ncols
        reduced, pivots = _reduce(m.rows, m.ncols)
        self._basis = list(zip((1 << p for p in pivots), reduced))
        self.dim = len(reduced)
        self.basis = reduced

    def reduce(self, bits: int) -> int:
        for pivot, row in self._basis:
            if bits & pivot:
                bits ^= row
        return bits

    def __contains__(self, bits: int) -> bool:
        return self.reduce(bits) == 0


def in_rowspace(v: BinaryVector, m: BinaryMatrix) -> bool:
    if v.length != m.ncols:
        raise DimensionMismatch(f"vector length {v.length} vs {m.ncols} columns")
    return v.bits in RowSpace(m)


def kernel_basis(m: BinaryMatrix) -> list[BinaryVector]:
    """Basis of {x : m x = 0}, one vector per free column."""
    reduced, pivots = _reduce(m.rows, m.ncols)
    pivot_set = set(pivots)
    basis = []
    for free in range(m.ncols):
        if free in pivot_set:
            continue
        bits = 1 << free
        for row, p in zip(reduced, pivots):
            if (row >> free) & 1:
                bits |= 1 << p
        basis.append(BinaryVector(bits, m.ncols))
    return basis


def enumerate_span(basis: Sequence[BinaryVector], length: int | None = None) -> Iterator[BinaryVector]:
    """Yield every GF(2) combination of ``basis`` exactly once, in Gray-code order.

    ``length`` is only needed when ``basis`` is empty.
    """
    if len(basis) > MAX_SPAN_DIM:
        raise EnumerationTooLarge(f"span of {len(basis)} vectors exceeds 2^{MAX_SPAN_DIM}")
    if length is None:
        if not basis:
            raise ValueError("length is required for an empty basis")
        length = basis[0].length
    for v in basis:
        if v.length != length:
            raise DimensionMismatch("basis vectors differ in length")
    current = 0
    yield BinaryVector(0, length)
    for step in range(1, 1 << len(basis)):
        # Gray code: flip the vector indexed by the lowest set bit of the step
        current ^= basis[(step & -step).bit_length() - 1].bits
        yield BinaryVector(current, length)


def syndrome(h: BinaryMatrix, e: BinaryVector) -> BinaryVector:
    """h . e over GF(2); bit ``i`` of the result is the parity of row ``i + 1``."""
    if e.length != h.ncols:
        raise DimensionMismatch(f"error length {e.length} vs {h.ncols} columns")
    return BinaryVector(syndrome_bits(h.rows, e.bits), h.nrows)


def syndrome_bits(rows: Sequence[int], bits: int) -> int:
    return sum(((r & bits).bit_count() & 1) << i for i, r in enumerate(rows))
