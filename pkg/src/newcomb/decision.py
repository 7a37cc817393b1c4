"""Closed-form expected-utility analysis of Newcomb's game.

Two players: S moves first with choices S1/S2, C moves second with
choices C1/C2. The payoff to C is a 2x2 table v_ij (row = S's choice,
column = C's choice). S's move is driven by a prediction of C, whose
quality is summarized by two conditional accuracies

    p1 = P(S = S1 | C = C1),    p2 = P(S = S2 | C = C2).

C's expected utilities are affine in the accuracies:

    U1 = v21 + p1 * (v11 - v21)
    U2 = v12 + p2 * (v22 - v12)

C picks C1 whenever U1 >= U2 (ties resolve to C1). Rearranged, that
rule is the half-plane

    a1 * p1 + a2 * p2 >= b,   a1 = v11 - v21,  a2 = v12 - v22,
                              b  = v12 - v21,

which for the classic payoff table (10000 / 0 / 1010000 / 1000000
euros) reduces to p1 + p2 <= 1.01.

Everything here is a pure function of its inputs; all values are
64-bit floats and no shared state exists, so concurrent use is safe.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .errors import ValidationError

__all__ = [
    "CChoice",
    "SChoice",
    "UtilityMatrix",
    "PredictorProfile",
    "DecisionBoundary",
    "RegionGrid",
    "expected_utilities",
    "choose",
    "decision_boundary",
    "region_grid",
    "dominant_choice",
]


class CChoice(Enum):
    """C's move: take only the opaque box (C1) or both boxes (C2)."""

    C1 = "C1"
    C2 = "C2"


class SChoice(Enum):
    """S's move, fixed before C plays: S1 matches C1, S2 matches C2."""

    S1 = "S1"
    S2 = "S2"


def _require_utility(value: float, name: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValidationError(f"{name} must be a number, got {value!r}")
    x = float(value)
    if not math.isfinite(x):
        raise ValidationError(f"{name} must be finite, got {x}")
    if x < 0.0:
        raise ValidationError(f"{name} must be >= 0, got {x}")
    return x


def _require_probability(value: float, name: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValidationError(f"{name} must be a number, got {value!r}")
    x = float(value)
    if not math.isfinite(x) or x < 0.0 or x > 1.0:
        raise ValidationError(f"{name} must be in [0, 1], got {value!r}")
    return x


@dataclass(frozen=True)
class UtilityMatrix:
    """C's payoff table in euros; rows are S's choice, columns are C's.

    Entries must be finite and nonnegative (the classic table contains
    a literal zero).
    """

    v11: float
    v12: float
    v21: float
    v22: float

    def __post_init__(self) -> None:
        for name in ("v11", "v12", "v21", "v22"):
            object.__setattr__(self, name, _require_utility(getattr(self, name), name))

    @classmethod
    def classic(cls) -> "UtilityMatrix":
        """The classic million-euro table."""
        return cls(v11=10_000.0, v12=0.0, v21=1_010_000.0, v22=1_000_000.0)

    @classmethod
    def from_rows(cls, rows) -> "UtilityMatrix":
        """Build from [[v11, v12], [v21, v22]]."""
        try:
            (v11, v12), (v21, v22) = rows
        except (TypeError, ValueError):
            raise ValidationError(f"utilities must be a 2x2 table, got {rows!r}") from None
        return cls(v11=v11, v12=v12, v21=v21, v22=v22)

    def as_rows(self) -> list[list[float]]:
        return [[self.v11, self.v12], [self.v21, self.v22]]

    def payoff(self, s: SChoice, c: CChoice) -> float:
        """Table lookup v[s][c]."""
        if s is SChoice.S1:
            return self.v11 if c is CChoice.C1 else self.v12
        return self.v21 if c is CChoice.C1 else self.v22

    def column(self, c: CChoice) -> tuple[float, float]:
        """The (v1j, v2j) column for C's choice j."""
        if c is CChoice.C1:
            return (self.v11, self.v21)
        return (self.v12, self.v22)


@dataclass(frozen=True)
class PredictorProfile:
    """Predictor accuracies: p1 = P(S=S1|C=C1), p2 = P(S=S2|C=C2).

    The complementary conditionals are implied: P(S=S2|C=C1) = 1 - p1
    and P(S=S1|C=C2) = 1 - p2.
    """

    p1: float
    p2: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "p1", _require_probability(self.p1, "p1"))
        object.__setattr__(self, "p2", _require_probability(self.p2, "p2"))

    @classmethod
    def perfect(cls) -> "PredictorProfile":
        return cls(1.0, 1.0)

    @classmethod
    def random(cls) -> "PredictorProfile":
        return cls(0.5, 0.5)

    def s1_probability(self, c: CChoice) -> float:
        """P(S = S1 | C = c)."""
        return self.p1 if c is CChoice.C1 else 1.0 - self.p2


@dataclass(frozen=True)
class DecisionBoundary:
    """Affine half-plane form of the choice rule: C1 iff a1*p1 + a2*p2 >= b."""

    a1: float
    a2: float
    b: float

    def prefers_c1(self, p1: float, p2: float) -> bool:
        return self.a1 * p1 + self.a2 * p2 >= self.b


@dataclass(frozen=True)
class RegionGrid:
    """Optimal choice sampled on an inclusive uniform grid over [0,1]^2.

    cells[i][j] is the choice at p1 = i/(resolution-1), p2 = j/(resolution-1).
    """

    resolution: int
    cells: tuple[tuple[CChoice, ...], ...]

    def __post_init__(self) -> None:
        if len(self.cells) != self.resolution or any(
            len(row) != self.resolution for row in self.cells
        ):
            raise ValidationError(
                f"grid must hold {self.resolution}x{self.resolution} cells"
            )

    def axis_value(self, index: int) -> float:
        """Grid coordinate for an axis index (endpoints inclusive)."""
        return index / (self.resolution - 1)

    def choice_at(self, i: int, j: int) -> CChoice:
        return self.cells[i][j]


def expected_utilities(v: UtilityMatrix, p: PredictorProfile) -> tuple[float, float]:
    """Return (U1, U2), C's expected payoff for each choice.

    U1 = v21 + p1*(v11 - v21) and U2 = v12 + p2*(v22 - v12), evaluated
    directly in double precision with no extra rounding.
    """
    u1 = v.v21 + p.p1 * (v.v11 - v.v21)
    u2 = v.v12 + p.p2 * (v.v22 - v.v12)
    return (u1, u2)


def choose(v: UtilityMatrix, p: PredictorProfile) -> CChoice:
    """C's optimal choice: C1 iff U1 >= U2 (ties go to C1)."""
    u1, u2 = expected_utilities(v, p)
    return CChoice.C1 if u1 >= u2 else CChoice.C2


def decision_boundary(v: UtilityMatrix) -> DecisionBoundary:
    """Canonical half-plane coefficients of the choice rule for v."""
    return DecisionBoundary(a1=v.v11 - v.v21, a2=v.v12 - v.v22, b=v.v12 - v.v21)


def region_grid(v: UtilityMatrix, resolution: int = 101) -> RegionGrid:
    """Evaluate choose() on an inclusive resolution x resolution grid.

    The first index runs over p1, the second over p2, both ascending
    from 0 to 1 in steps of 1/(resolution-1).
    """
    if isinstance(resolution, bool) or not isinstance(resolution, int):
        raise ValidationError(f"resolution must be an integer, got {resolution!r}")
    if resolution < 2:
        raise ValidationError(f"resolution must be >= 2, got {resolution}")
    step = resolution - 1
    cells = tuple(
        tuple(choose(v, PredictorProfile(i / step, j / step)) for j in range(resolution))
        for i in range(resolution)
    )
    return RegionGrid(resolution=resolution, cells=cells)


def dominant_choice(v: UtilityMatrix) -> CChoice | None:
    """The strictly dominant choice for C, or None when neither dominates.

    C1 dominates when it beats C2 in both of S's rows (v11 > v12 and
    v21 > v22); symmetrically for C2.
    """
    if v.v11 > v.v12 and v.v21 > v.v22:
        return CChoice.C1
    if v.v12 > v.v11 and v.v22 > v.v21:
        return CChoice.C2
    return None
