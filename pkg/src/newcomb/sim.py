"""Oracle-frame simulation of the game, single plays and Monte Carlo.

A play cannot be simulated in C's or S's own event order without a
real oracle. It can be simulated in the oracle's order, which visits
the events as 1, 3, 5, 2, 6, 7: C's choice is resolved first, the
prediction is elaborated from it, S responds (faithfully to the
prediction with the profiled accuracy), and the copied events just
replay the entangled outcomes.

S's response is sampled from the conditional law: given C = Cj, S
plays S1 with probability P(S=S1|C=Cj), which is p1 when j=1 and
1-p2 when j=2. Each trial consumes exactly one uniform draw, taking
S1 when u < P(S=S1|C=Cj).

Randomness is counter-based: trial i of seed s draws from a SplitMix64
stream indexed by (s, i), so results do not depend on execution order
or worker count. Batch means are aggregated from exact trial counts,
which makes them bit-identical at any parallelism degree.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .decision import CChoice, PredictorProfile, SChoice, UtilityMatrix, expected_utilities
from .errors import EntanglementViolationError, ValidationError

__all__ = [
    "OMEGA_ORDER",
    "TrialStream",
    "RngSpec",
    "TrialTrace",
    "SimulationReport",
    "ComparisonTable",
    "play_once",
    "monte_carlo",
    "standard_error",
    "compare",
]

# The oracle's visit order over the 7-node game graph.
OMEGA_ORDER = (1, 3, 5, 2, 6, 7)

_MASK64 = (1 << 64) - 1
_TRIAL_INCREMENT = 0x9E3779B97F4A7C15  # golden-ratio Weyl step between trials
_DRAW_INCREMENT = 0xC2B2AE3D27D4EB4F  # odd step between draws within a trial


def _mix64(x: int) -> int:
    # SplitMix64 output function
    x &= _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return x ^ (x >> 31)


def _require_seed(seed: int) -> int:
    if isinstance(seed, bool) or not isinstance(seed, int):
        raise ValidationError(f"seed must be an integer, got {seed!r}")
    if not (0 <= seed < 1 << 64):
        raise ValidationError(f"seed must fit in 64 unsigned bits, got {seed}")
    return seed


def _require_count(value: int, name: str, minimum: int = 1) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ValidationError(f"{name} must be an integer, got {value!r}")
    if value < minimum:
        raise ValidationError(f"{name} must be >= {minimum}, got {value}")
    return value


class TrialStream:
    """Uniform [0,1) draws for one trial, derived from (seed, trial)."""

    def __init__(self, seed: int, trial: int):
        self._base = (_require_seed(seed) + (trial + 1) * _TRIAL_INCREMENT) & _MASK64
        self._draw = 0

    def uniform(self) -> float:
        z = _mix64(self._base + self._draw * _DRAW_INCREMENT)
        self._draw += 1
        return (z >> 11) * 2.0**-53


@dataclass(frozen=True)
class RngSpec:
    """Root seed; trial i's stream is a pure function of (seed, i)."""

    seed: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "seed", _require_seed(self.seed))

    def stream(self, trial: int) -> TrialStream:
        return TrialStream(self.seed, trial)


@dataclass(frozen=True)
class TrialTrace:
    """One play resolved in the oracle's visit order.

    Node 3 fixes C's choice, node 5 the prediction, node 2 S's sampled
    response, node 6 the entangled copy of C's choice, and node 7 the
    payout. The copy is forced equal to the original.
    """

    c_choice: CChoice
    prediction: CChoice
    s_choice: SChoice
    entangled_c_choice: CChoice
    utility: float

    def __post_init__(self) -> None:
        if self.entangled_c_choice is not self.c_choice:
            raise EntanglementViolationError(
                "copied choice diverged from the original"
            )

    def entries(self) -> tuple[tuple[int, object], ...]:
        """(node id, resolved event) pairs in oracle order."""
        return (
            (1, "start"),
            (3, self.c_choice),
            (5, self.prediction),
            (2, self.s_choice),
            (6, self.entangled_c_choice),
            (7, self.utility),
        )


@dataclass(frozen=True)
class SimulationReport:
    """Monte Carlo batch result for one fixed choice of C."""

    c_choice: CChoice
    trials: int
    seed: int
    empirical_mean: float
    theoretical: float
    standard_error: float
    elapsed_seconds: float

    def __post_init__(self) -> None:
        _require_count(self.trials, "trials")
        if self.standard_error < 0.0:
            raise ValidationError("standard error cannot be negative")


@dataclass(frozen=True)
class ComparisonTable:
    """Theoretical vs empirical utilities for both of C's choices."""

    c1: SimulationReport
    c2: SimulationReport

    @property
    def theoretical(self) -> tuple[float, float]:
        return (self.c1.theoretical, self.c2.theoretical)

    @property
    def empirical(self) -> tuple[float, float]:
        return (self.c1.empirical_mean, self.c2.empirical_mean)


def play_once(
    v: UtilityMatrix,
    p: PredictorProfile,
    c_choice: CChoice,
    trial_stream: TrialStream,
) -> TrialTrace:
    """Resolve one play in the oracle's order, consuming one draw.

    The prediction always equals C's actual choice; predictor
    fallibility shows up in S's response, which follows the predicted
    row only with the profiled accuracy.
    """
    if not isinstance(c_choice, CChoice):
        raise ValidationError(f"c_choice must be a CChoice, got {c_choice!r}")
    prediction = c_choice
    s1_prob = p.s1_probability(c_choice)
    s_choice = SChoice.S1 if trial_stream.uniform() < s1_prob else SChoice.S2
    entangled = c_choice
    utility = v.payoff(s_choice, entangled)
    return TrialTrace(
        c_choice=c_choice,
        prediction=prediction,
        s_choice=s_choice,
        entangled_c_choice=entangled,
        utility=utility,
    )


# Trials per work unit. Fixed independently of the parallelism degree so
# that chunk boundaries (and therefore results) never depend on it.
_CHUNK = 4096


def _count_s1_chunk(seed: int, start: int, stop: int, s1_prob: float) -> int:
    # Vectorized draw 0 of trials [start, stop); matches TrialStream exactly.
    idx = np.arange(start, stop, dtype=np.uint64)
    x = np.uint64(seed) + (idx + np.uint64(1)) * np.uint64(_TRIAL_INCREMENT)
    x = (x ^ (x >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    x = (x ^ (x >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    x = x ^ (x >> np.uint64(31))
    u = (x >> np.uint64(11)).astype(np.float64) * 2.0**-53
    return int(np.count_nonzero(u < s1_prob))


def standard_error(
    v: UtilityMatrix, p: PredictorProfile, c_choice: CChoice, n: int
) -> float:
    """Exact standard error of the batch mean for a fixed choice.

    The per-trial utility is two-valued, so the mean's standard error
    is |v1j - v2j| * sqrt(q * (1 - q) / n) with q = P(S=S1|C=Cj).
    """
    _require_count(n, "n")
    if not isinstance(c_choice, CChoice):
        raise ValidationError(f"c_choice must be a CChoice, got {c_choice!r}")
    v1, v2 = v.column(c_choice)
    q = p.s1_probability(c_choice)
    return abs(v1 - v2) * float(np.sqrt(q * (1.0 - q) / n))


def monte_carlo(
    v: UtilityMatrix,
    p: PredictorProfile,
    c_choice: CChoice,
    n: int,
    rng: RngSpec = RngSpec(),
    parallelism: int = 1,
    first_trial: int = 0,
) -> SimulationReport:
    """Average the payout of n independent plays with C's choice fixed.

    Trial i uses the stream for index first_trial + i. Work is split
    into fixed-size chunks and the S1 outcomes are counted exactly, so
    the reported mean is bit-identical for any parallelism degree.
    """
    _require_count(n, "n")
    _require_count(parallelism, "parallelism")
    _require_count(first_trial, "first_trial", minimum=0)
    if not isinstance(c_choice, CChoice):
        raise ValidationError(f"c_choice must be a CChoice, got {c_choice!r}")
    if not isinstance(rng, RngSpec):
        raise ValidationError(f"rng must be an RngSpec, got {rng!r}")

    started = time.perf_counter()
    s1_prob = p.s1_probability(c_choice)
    bounds = [
        (first_trial + lo, first_trial + min(lo + _CHUNK, n))
        for lo in range(0, n, _CHUNK)
    ]
    if parallelism == 1 or len(bounds) == 1:
        counts = [_count_s1_chunk(rng.seed, lo, hi, s1_prob) for lo, hi in bounds]
    else:
        with ThreadPoolExecutor(max_workers=parallelism) as pool:
            counts = list(
                pool.map(lambda b: _count_s1_chunk(rng.seed, b[0], b[1], s1_prob), bounds)
            )
    n_s1 = sum(counts)

    v1, v2 = v.column(c_choice)
    empirical_mean = (n_s1 * v1 + (n - n_s1) * v2) / n
    u1, u2 = expected_utilities(v, p)
    return SimulationReport(
        c_choice=c_choice,
        trials=n,
        seed=rng.seed,
        empirical_mean=empirical_mean,
        theoretical=u1 if c_choice is CChoice.C1 else u2,
        standard_error=standard_error(v, p, c_choice, n),
        elapsed_seconds=time.perf_counter() - started,
    )


def compare(
    v: UtilityMatrix,
    p: PredictorProfile,
    n: int,
    rng: RngSpec = RngSpec(),
    parallelism: int = 1,
) -> ComparisonTable:
    """Run both choices, n trials each, on disjoint trial indices.

    The C1 batch uses trials [0, n) and the C2 batch [n, 2n), so the
    whole table is a pure function of (seed, n).
    """
    return ComparisonTable(
        c1=monte_carlo(v, p, CChoice.C1, n, rng, parallelism, first_trial=0),
        c2=monte_carlo(v, p, CChoice.C2, n, rng, parallelism, first_trial=n),
    )
