"""Exact probabilities for every ordering of election-day support rates.

Two candidates' support rates cross at exactly one value of the accumulated
signal, so the real line splits into intervals on each of which the
election-day ranking of all candidates is a fixed permutation. The
probability of the terminal signal landing in an interval has a closed form:
a change of measure turns the information process into a standard Brownian
motion, leaving a prior-weighted mixture of Gaussian CDF differences. Every
ordering probability, and hence every candidate's probability of ranking
first, is a finite sum of such interval probabilities.

All thresholds and intervals live in accumulated-signal space (Y-space),
which unifies constant and time-dependent rate schedules; for a constant
rate, dividing a threshold by the rate recovers the raw-process value.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegeneratePrior,
    DegenerateTieWarning,
    InvalidInterval,
    InvalidPermutation,
    NonPositiveHorizon,
    NonPositiveRate,
)
from .gaussian import normal_cdf, normal_cdf_diff
from .model import ElectionModel, posterior_support

__all__ = [
    "CrossingThreshold",
    "PartitionCell",
    "OrderingPartition",
    "OutcomeProbabilities",
    "crossing_threshold",
    "ordering_partition",
    "interval_probability",
    "ordering_probability",
    "win_probabilities",
    "two_candidate_win_probability",
]


@dataclass(frozen=True)
class CrossingThreshold:
    """Accumulated-signal value at which candidates ``first`` and ``second``
    have equal election-day support. Symmetric in the pair; infinite when one
    of the two priors is zero (the other can never be overtaken)."""

    first: int
    second: int
    value: float


@dataclass(frozen=True)
class PartitionCell:
    """One open interval of accumulated-signal values and the strict ranking
    (best first) realized on it. ``lower``/``upper`` may be infinite."""

    lower: float
    upper: float
    ordering: tuple[int, ...]


@dataclass(frozen=True)
class OrderingPartition:
    """Interval decomposition of the real line by election-day ranking.

    ``boundaries`` are the sorted distinct finite thresholds; ``cells`` tile
    the line left to right, one per gap (plus the two unbounded ends).
    ``tie_count`` is the number of coincident thresholds that were merged
    away (zero-width cells); coincidences happen only on measure-zero
    parameter sets and do not affect probabilities.
    """

    boundaries: tuple[float, ...]
    cells: tuple[PartitionCell, ...]
    tie_count: int = 0

    def cell_for(self, ordering: tuple[int, ...]) -> tuple[PartitionCell, ...]:
        return tuple(c for c in self.cells if c.ordering == ordering)


@dataclass(frozen=True, eq=False)
class OutcomeProbabilities:
    """Ordering probabilities (only realized orderings appear as keys) and
    per-candidate probabilities of ranking first."""

    ordering_probs: dict[tuple[int, ...], float]
    win_probs: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.win_probs, dtype=np.float64)
        arr.flags.writeable = False
        object.__setattr__(self, "win_probs", arr)


def crossing_threshold(model: ElectionModel, k: int, j: int) -> CrossingThreshold:
    """Threshold in accumulated-signal space where k's and j's election-day
    support rates are equal.

        value = [log(p_j / p_k) + (x_k^2 - x_j^2) V / 2] / (x_k - x_j)

    with V the terminal accumulated squared rate. For a constant rate this
    is rate * (raw-process threshold). Support above the threshold favours
    whichever of the pair sits further right on the spectrum. With exactly
    one zero prior the value is +-infinity; with both zero it is NaN (the
    pair is tied everywhere at zero support).
    """
    n = model.n_candidates
    if k == j or not (0 <= k < n) or not (0 <= j < n):
        raise InvalidPermutation(f"need distinct candidate indices in [0, {n}), got ({k}, {j})")
    v = model.terminal_variance
    xk, xj = model.positions[k], model.positions[j]
    pk, pj = model.priors[k], model.priors[j]
    if pk == 0.0 and pj == 0.0:
        value = math.nan
    else:
        log_ratio = _log_ratio(pj, pk)
        value = (log_ratio + 0.5 * (xk * xk - xj * xj) * v) / (xk - xj)
    return CrossingThreshold(first=k, second=j, value=value)


def _log_ratio(num: float, den: float) -> float:
    if num == 0.0:
        return -math.inf
    if den == 0.0:
        return math.inf
    return math.log(num / den)


def ordering_partition(model: ElectionModel) -> OrderingPartition:
    """Partition accumulated-signal space by the election-day ranking.

    The ranking on each cell is found constructively: evaluate the posterior
    at the cell midpoint (or one unit beyond the end boundary for the
    unbounded cells) and sort, ties broken by lower candidate index. This
    works for any number of candidates. Adjacent cells with identical
    rankings are merged; exactly coincident thresholds trigger a
    DegenerateTieWarning and count into ``tie_count``.
    """
    n = model.n_candidates
    priors = model.priors
    values = []
    for k in range(n):
        for j in range(k + 1, n):
            if priors[k] == 0.0 or priors[j] == 0.0:
                continue  # no finite crossing; the zero-prior candidate never leads
            values.append(crossing_threshold(model, k, j).value)
    finite = sorted(v for v in values if math.isfinite(v))

    boundaries: list[float] = []
    tie_count = 0
    for v in finite:
        if boundaries and v == boundaries[-1]:
            tie_count += 1
        else:
            boundaries.append(v)
    if tie_count:
        warnings.warn(
            f"{tie_count} coincident crossing threshold(s); zero-width cells merged",
            DegenerateTieWarning,
            stacklevel=2,
        )

    edges = [-math.inf, *boundaries, math.inf]
    cells: list[PartitionCell] = []
    for lo, hi in zip(edges, edges[1:]):
        probe = _probe_point(lo, hi)
        support = posterior_support(model, probe, model.horizon)
        ordering = tuple(int(i) for i in np.argsort(-support, kind="stable"))
        if cells and cells[-1].ordering == ordering:
            cells[-1] = PartitionCell(cells[-1].lower, hi, ordering)
        else:
            cells.append(PartitionCell(lo, hi, ordering))
    kept = tuple(c.upper for c in cells if math.isfinite(c.upper))
    return OrderingPartition(boundaries=kept, cells=tuple(cells), tie_count=tie_count)


def _probe_point(lo: float, hi: float) -> float:
    if math.isinf(lo) and math.isinf(hi):
        return 0.0
    if math.isinf(lo):
        return hi - 1.0
    if math.isinf(hi):
        return lo + 1.0
    return 0.5 * (lo + hi)


def interval_probability(model: ElectionModel, a: float, b: float) -> float:
    """P(a < Y_T < b) for the terminal accumulated signal Y_T.

    Under candidate j the terminal signal is Normal(x_j V, V), so

        P(a < Y_T < b) = sum_j p_j [Phi((b - x_j V)/sqrt(V)) - Phi((a - x_j V)/sqrt(V))].

    Endpoints may be infinite. Far-tail intervals are evaluated through
    complementary CDFs, so the result is positive and monotone in the
    endpoints with no catastrophic cancellation.
    """
    if not (a <= b):
        raise InvalidInterval(f"need a <= b, got ({a}, {b})")
    if a == b:
        return 0.0
    v = model.terminal_variance
    sd = math.sqrt(v)
    total = 0.0
    for xj, pj in zip(model.positions, model.priors):
        if pj == 0.0:
            continue
        lo = (a - xj * v) / sd if math.isfinite(a) else -math.inf
        hi = (b - xj * v) / sd if math.isfinite(b) else math.inf
        total += pj * normal_cdf_diff(lo, hi)
    return total


def ordering_probability(model: ElectionModel, permutation) -> float:
    """Probability that the election-day ranking (best first) equals
    ``permutation``. Zero for orderings realized on no cell."""
    perm = tuple(int(i) for i in permutation)
    if sorted(perm) != list(range(model.n_candidates)):
        raise InvalidPermutation(
            f"{permutation!r} is not a strict ordering of all {model.n_candidates} candidates"
        )
    partition = ordering_partition(model)
    return math.fsum(
        interval_probability(model, c.lower, c.upper) for c in partition.cell_for(perm)
    )


def win_probabilities(model: ElectionModel) -> OutcomeProbabilities:
    """All ordering probabilities and the per-candidate probabilities of
    ranking first on election day (first-past-the-post)."""
    partition = ordering_partition(model)
    ordering_probs: dict[tuple[int, ...], float] = {}
    win = np.zeros(model.n_candidates)
    for cell in partition.cells:
        p = interval_probability(model, cell.lower, cell.upper)
        ordering_probs[cell.ordering] = ordering_probs.get(cell.ordering, 0.0) + p
        win[cell.ordering[0]] += p
    return OutcomeProbabilities(ordering_probs=ordering_probs, win_probs=win)


def two_candidate_win_probability(p: float, sigma: float, horizon: float) -> float:
    """Closed form for a two-candidate race with labels (0, 1).

    The candidate holding current support p wins with probability

        p N(d+) + (1 - p) N(d-),   d+- = [log(p/(1-p)) +- sigma^2 T / 2] / (sigma sqrt(T)).

    Agrees with ``win_probabilities`` on the equivalent two-candidate model.
    """
    if not (0.0 < p < 1.0):
        raise DegeneratePrior(f"need 0 < p < 1, got {p}")
    if not (sigma > 0.0):
        raise NonPositiveRate(f"need sigma > 0, got {sigma}")
    if not (horizon > 0.0):
        raise NonPositiveHorizon(f"need horizon > 0, got {horizon}")
    log_odds = math.log(p / (1.0 - p))
    scale = sigma * math.sqrt(horizon)
    half_var = 0.5 * sigma * sigma * horizon
    d_plus = (log_odds + half_var) / scale
    d_minus = (log_odds - half_var) / scale
    return p * normal_cdf(d_plus) + (1.0 - p) * normal_cdf(d_minus)
