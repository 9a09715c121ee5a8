"""Bell-diagonal EPR pairs, DEJMPS purification, and the induced teleportation channel."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import OutOfRange, ZeroNormalization

MAX_ROUNDS = 32
NORMALIZATION_TOL = 1e-12


@dataclass(frozen=True)
class BellDiagonalState:
    """Weights of Phi+ (a, the fidelity), Psi- (b), Psi+ (c) and Phi- (d)."""

    a: float
    b: float
    c: float
    d: float
    round: int = 0

    def __post_init__(self) -> None:
        coeffs = (self.a, self.b, self.c, self.d)
        if any(not 0.0 <= x <= 1.0 for x in coeffs):
            raise OutOfRange(f"Bell coefficients must lie in [0, 1], got {coeffs}")
        if abs(sum(coeffs) - 1.0) > NORMALIZATION_TOL:
            raise OutOfRange(f"Bell coefficients sum to {sum(coeffs)!r}, not 1")

    @property
    def fidelity(self) -> float:
        return self.a

    def coefficients(self) -> tuple[float, float, float, float]:
        return self.a, self.b, self.c, self.d


@dataclass(frozen=True)
class PauliChannel:
    """Per-use Pauli error probabilities; qX and qZ are the bit- and phase-flip marginals."""

    pX: float
    pY: float
    pZ: float

    def __post_init__(self) -> None:
        probs = (self.pX, self.pY, self.pZ)
        if any(not 0.0 <= p <= 1.0 for p in probs) or sum(probs) > 1.0 + NORMALIZATION_TOL:
            raise OutOfRange(f"invalid Pauli probabilities {probs}")

    @property
    def pI(self) -> float:
        return max(0.0, 1.0 - self.pX - self.pY - self.pZ)

    @property
    def qX(self) -> float:
        return self.pX + self.pY

    @property
    def qZ(self) -> float:
        return self.pZ + self.pY

    @classmethod
    def perfect(cls) -> PauliChannel:
        return cls(0.0, 0.0, 0.0)


def werner(f0: float) -> BellDiagonalState:
    if not 0.0 <= f0 <= 1.0:
        raise OutOfRange(f"fidelity {f0} outside [0, 1]")
    rest = (1.0 - f0) / 3.0
    return BellDiagonalState(f0, rest, rest, rest, 0)


def dejmps_round(s: BellDiagonalState) -> BellDiagonalState:
    """One DEJMPS recurrence step on the Bell coefficients, renormalized to sum 1."""
    a, b, c, d = s.coefficients()
    norm = (a + b) ** 2 + (c + d) ** 2
    if norm <= 1e-300:
        raise ZeroNormalization(f"DEJMPS normalization {norm!r} for state {s}")
    a2 = (a * a + b * b) / norm
    b2 = 2.0 * c * d / norm
    c2 = (c * c + d * d) / norm
    d2 = 2.0 * a * b / norm
    total = a2 + b2 + c2 + d2
    return BellDiagonalState(
        min(a2 / total, 1.0), b2 / total, c2 / total, d2 / total, s.round + 1
    )


def purify(f0: float, r: int) -> BellDiagonalState:
    if not 0 <= r <= MAX_ROUNDS:
        raise OutOfRange(f"round count {r} outside 0..{MAX_ROUNDS}")
    state = werner(f0)
    for _ in range(r):
        state = dejmps_round(state)
    return state


def to_channel(s: BellDiagonalState) -> PauliChannel:
    """Teleporting through Phi+/Psi-/Psi+/Phi- applies I/Y/X/Z."""
    return PauliChannel(pX=s.c, pY=s.b, pZ=s.d)


def raw_pair_cost(r: int) -> int:
    """Noisy pairs consumed per output pair after ``r`` ideal DEJMPS rounds."""
    if not 0 <= r <= MAX_ROUNDS:
        raise OutOfRange(f"round count {r} outside 0..{MAX_ROUNDS}")
    return 2**r
