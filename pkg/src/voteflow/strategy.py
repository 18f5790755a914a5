"""Strategy analytics: dead zones, attainable support, parameter sweeps.

A centre-ground candidate can be locked out entirely: when the crossing
thresholds order the wrong way, no value of the terminal signal ranks that
candidate first and their win probability is identically zero. For three
candidates the lockout condition is equivalent to an upper bound on the
information flow rate, so the rate at which the dead zone opens up can be
solved for. Interior candidates also face a hard ceiling on their
election-day support, the root of a one-dimensional first-order condition.

Sweeps evaluate win probabilities over grids of the rate, the current
support rates, and the spectrum positions; each grid point is an
independent closed-form evaluation, assembled in deterministic grid order.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import (
    NoBracket,
    NonIncreasingPositions,
    NotInteriorCandidate,
    RequiresThreeCandidates,
    ValidationError,
    ZeroPrior,
)
from .model import ElectionModel, posterior_support
from .outcomes import crossing_threshold, ordering_partition, win_probabilities

__all__ = [
    "DeadZoneReport",
    "MaxSupportReport",
    "SweepTable",
    "is_dead_zone",
    "dead_zone_sigma_bound",
    "max_support_point",
    "max_support_curve",
    "sweep_sigma",
    "sweep_positions",
    "sweep_priors",
    "default_sigma_grid",
]

logger = logging.getLogger(__name__)

#: Residual tolerance for the support-maximum first-order condition,
#: measured on the posterior-weighted (overflow-free) form.
ROOT_RESIDUAL_TOL = 1e-10

#: Width tolerance for the dead-zone boundary bisection.
BOUND_BISECTION_TOL = 1e-9


@dataclass(frozen=True)
class DeadZoneReport:
    """Whether a candidate can rank first for any terminal signal value.

    ``sigma_bound`` is filled only for the centre candidate of a
    three-candidate race with all-positive priors and a constant rate: the
    largest rate below which that candidate's win probability is identically
    zero (None when no rate creates a dead zone, or when not applicable).
    """

    candidate: int
    is_dead: bool
    sigma_bound: Optional[float]
    method: str = "direct-threshold"


@dataclass(frozen=True)
class MaxSupportReport:
    """Peak election-day support attainable by an interior candidate.

    ``y_star`` is the accumulated-signal value at the peak (rate * raw
    process value for constant schedules); ``residual`` is the absolute
    value of the posterior-weighted first-order condition there.
    """

    candidate: int
    y_star: float
    pi_max: float
    residual: float


@dataclass(frozen=True, eq=False)
class SweepTable:
    """Win probabilities (or probability differences) over a parameter grid.

    Rows follow ``axis_values`` in order; ``kind`` is "probability" for
    entries in [0, 1] or "difference" for entries in [-1, 1]. ``zero_mask``
    (prior sweeps) marks entries that are exactly zero.
    """

    axis_name: str
    axis_values: tuple
    columns: tuple[str, ...]
    values: np.ndarray
    kind: str = "probability"
    zero_mask: Optional[np.ndarray] = None

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        if values.shape != (len(self.axis_values), len(self.columns)):
            raise ValidationError(
                f"values shape {values.shape} does not match "
                f"{len(self.axis_values)} axis points x {len(self.columns)} columns"
            )
        lo = -1.0 if self.kind == "difference" else 0.0
        if values.size and (values.min() < lo - 1e-12 or values.max() > 1.0 + 1e-12):
            raise ValidationError(f"{self.kind} entries outside [{lo}, 1]")
        values.flags.writeable = False
        object.__setattr__(self, "values", values)
        if self.zero_mask is not None:
            mask = np.asarray(self.zero_mask, dtype=bool)
            mask.flags.writeable = False
            object.__setattr__(self, "zero_mask", mask)


def default_sigma_grid() -> tuple[float, ...]:
    """0.05, 0.10, ..., 3.00 (the resolution of the rate sweeps)."""
    return tuple(round(0.05 * i, 10) for i in range(1, 61))


def is_dead_zone(model: ElectionModel, k: int) -> DeadZoneReport:
    """Whether candidate k ranks first on no cell of the ordering partition.

    Works for any number of candidates and any k. For the three-candidate
    centre seat (all priors positive, constant rate) the report also carries
    the rate bound below which the dead zone persists.
    """
    n = model.n_candidates
    if not (0 <= k < n):
        raise ValidationError(f"candidate index {k} outside [0, {n})")
    partition = ordering_partition(model)
    dead = all(cell.ordering[0] != k for cell in partition.cells)
    bound = None
    if (
        n == 3
        and k == 1
        and model.schedule.is_constant
        and all(p > 0.0 for p in model.priors)
    ):
        bound = dead_zone_sigma_bound(model.positions, model.priors, model.horizon)
    return DeadZoneReport(candidate=k, is_dead=dead, sigma_bound=bound)


def _centre_dead_at(positions, priors, horizon, sigma: float) -> bool:
    """Direct threshold-ordering predicate for the three-candidate centre."""
    model = ElectionModel(positions, priors, horizon, sigma)
    w01 = crossing_threshold(model, 0, 1).value
    w20 = crossing_threshold(model, 2, 0).value
    w12 = crossing_threshold(model, 1, 2).value
    return w01 > w20 > w12


def _closed_form_bound(positions, priors, horizon) -> Optional[float]:
    """Rate bound from the threshold-order inequalities solved for sigma^2.

    Each of the two inequalities in the lockout condition is linear in
    sigma^2, giving sigma^2 < 2*min(A, B) / (T * w01 * w02 * w12) with the
    gap-weighted log-odds terms below; no rate creates a dead zone when the
    min is nonpositive.
    """
    x0, x1, x2 = positions
    p0, p1, p2 = priors
    w01, w02, w12 = x1 - x0, x2 - x0, x2 - x1
    a = w02 * math.log(p0 / p1) - w01 * math.log(p0 / p2)
    b = w12 * math.log(p0 / p2) - w02 * math.log(p1 / p2)
    m = min(a, b)
    if m <= 0.0:
        return None
    return math.sqrt(2.0 * m / (horizon * w01 * w02 * w12))


def dead_zone_sigma_bound(
    positions: Sequence[float],
    priors: Sequence[float],
    horizon: float,
    sigma_max: float = 1e3,
) -> Optional[float]:
    """Largest constant rate at which the centre candidate is locked out.

    The centre candidate of a three-candidate race has identically zero win
    probability exactly when the rate is below this bound; None when the
    lockout holds for no positive rate. The value is refined by bisection on
    the direct threshold-ordering predicate (authoritative); the closed-form
    solution of the same inequalities is computed alongside and any
    discrepancy beyond the bisection tolerance is logged.
    """
    if len(positions) != 3 or len(priors) != 3:
        raise RequiresThreeCandidates(
            f"bound is defined for 3 candidates, got {len(positions)}"
        )
    if any(p <= 0.0 for p in priors):
        raise ZeroPrior(f"all priors must be > 0, got {tuple(priors)}")

    closed = _closed_form_bound(positions, priors, horizon)

    def dead(sigma: float) -> bool:
        return _centre_dead_at(positions, priors, horizon, sigma)

    lo = hi = None
    if closed is not None and closed > 0.0:
        lo_guess, hi_guess = 0.5 * closed, 2.0 * closed
        if dead(lo_guess) and not dead(hi_guess):
            lo, hi = lo_guess, hi_guess
    if lo is None:
        # scan a geometric grid for the transition
        grid = np.geomspace(1e-6, sigma_max, 200)
        flags = [dead(s) for s in grid]
        if not any(flags):
            return None
        last_true = max(i for i, f in enumerate(flags) if f)
        if last_true == len(grid) - 1:
            return float(grid[-1])  # dead over the whole scan range
        lo, hi = float(grid[last_true]), float(grid[last_true + 1])

    for _ in range(200):
        if hi - lo <= BOUND_BISECTION_TOL:
            break
        mid = 0.5 * (lo + hi)
        if dead(mid):
            lo = mid
        else:
            hi = mid
    bound = 0.5 * (lo + hi)
    if closed is not None and abs(bound - closed) > 1e-6 * max(1.0, closed):
        logger.warning(
            "dead-zone bound mismatch: bisection %.12g vs closed form %.12g", bound, closed
        )
    return bound


def max_support_point(model: ElectionModel, k: int) -> MaxSupportReport:
    """Peak election-day support for interior candidate k.

    The support curve of an interior candidate is unimodal in the terminal
    signal; its maximum sits where the posterior mean of the positions
    equals x_k. That first-order condition

        g(y) = sum_j (x_j - x_k) * pi_j(y)  =  0

    is strictly increasing in y (g is the posterior mean minus x_k), so a
    guaranteed sign-change bracket plus bisection is unconditionally
    convergent. Requires positive prior mass strictly on both sides of x_k;
    otherwise the support curve is monotone and has no interior peak.
    """
    n = model.n_candidates
    if not (0 < k < n - 1):
        raise NotInteriorCandidate(f"candidate {k} is not interior for N={n}")
    priors = model.priors
    positions = model.positions
    if not any(p > 0.0 for p, x in zip(priors, positions) if x < positions[k]):
        raise NoBracket(f"no supported candidate left of x_{k}={positions[k]}")
    if not any(p > 0.0 for p, x in zip(priors, positions) if x > positions[k]):
        raise NoBracket(f"no supported candidate right of x_{k}={positions[k]}")

    v = model.terminal_variance
    horizon = model.horizon
    xk = model.positions_arr[k]

    def g(y: float) -> float:
        support = posterior_support(model, y, horizon)
        return float((model.positions_arr - xk) @ support)

    p_min = min(p for p in priors if p > 0.0)
    x_max_sq = max(x * x for x in positions)
    radius = 10.0 * (abs(math.log(p_min)) + x_max_sq * v + 1.0)
    lo, hi = -radius, radius
    for _ in range(60):
        if g(lo) < 0.0:
            break
        lo *= 2.0
    for _ in range(60):
        if g(hi) > 0.0:
            break
        hi *= 2.0
    g_lo, g_hi = g(lo), g(hi)
    if not (g_lo < 0.0 < g_hi):
        raise NoBracket(f"no sign change on [{lo}, {hi}]: g={g_lo}, {g_hi}")

    y_star, residual = lo, abs(g_lo)
    for _ in range(500):
        mid = 0.5 * (lo + hi)
        g_mid = g(mid)
        if abs(g_mid) < residual:
            y_star, residual = mid, abs(g_mid)
        if abs(g_mid) < ROOT_RESIDUAL_TOL:
            break
        if g_mid < 0.0:
            lo = mid
        else:
            hi = mid
    pi_max = float(posterior_support(model, y_star, horizon)[k])
    return MaxSupportReport(candidate=k, y_star=y_star, pi_max=pi_max, residual=residual)


def max_support_curve(
    positions: Sequence[float],
    priors: Sequence[float],
    horizon: float,
    sigma_grid: Optional[Sequence[float]] = None,
) -> SweepTable:
    """Peak attainable support per candidate over a grid of constant rates.

    Spectrum-end candidates have no interior peak: their support is monotone
    in the signal and approaches 1 (0 for a zero prior), reported as such.
    """
    grid = tuple(sigma_grid) if sigma_grid is not None else default_sigma_grid()
    n = len(positions)
    values = np.zeros((len(grid), n))
    for row, sigma in enumerate(grid):
        model = ElectionModel(positions, priors, horizon, sigma)
        for k in range(n):
            if k in (0, n - 1):
                values[row, k] = 1.0 if model.priors[k] > 0.0 else 0.0
                continue
            try:
                values[row, k] = max_support_point(model, k).pi_max
            except NoBracket:
                values[row, k] = 1.0 if model.priors[k] > 0.0 else 0.0
    return SweepTable(
        axis_name="sigma",
        axis_values=grid,
        columns=tuple(f"max_support_{k}" for k in range(n)),
        values=values,
    )


def sweep_sigma(
    model: ElectionModel, sigma_grid: Optional[Sequence[float]] = None
) -> SweepTable:
    """Win probabilities per candidate over a grid of constant rates."""
    grid = tuple(sigma_grid) if sigma_grid is not None else default_sigma_grid()
    n = model.n_candidates
    values = np.zeros((len(grid), n))
    for row, sigma in enumerate(grid):
        values[row] = win_probabilities(model.with_schedule(sigma)).win_probs
    return SweepTable(
        axis_name="sigma",
        axis_values=grid,
        columns=tuple(f"p_win_{k}" for k in range(n)),
        values=values,
    )


def sweep_positions(
    base_model: ElectionModel,
    variants: Sequence[Sequence[float]],
    sigma_grid: Optional[Sequence[float]] = None,
) -> SweepTable:
    """Win-probability gains of repositioned spectra over a rate grid.

    For each variant position vector (same length, strictly increasing) and
    each rate, the entry is win_prob(variant) - win_prob(base), candidate by
    candidate. Columns are grouped variant-major; with a single variant the
    labels are plain ``delta_<k>``.
    """
    grid = tuple(sigma_grid) if sigma_grid is not None else default_sigma_grid()
    n = base_model.n_candidates
    variants = [tuple(float(x) for x in v) for v in variants]
    for v in variants:
        if len(v) != n:
            raise NonIncreasingPositions(f"variant {v} has {len(v)} positions, need {n}")
        if any(a >= b for a, b in zip(v, v[1:])):
            raise NonIncreasingPositions(f"variant positions must be strictly increasing: {v}")

    values = np.zeros((len(grid), len(variants) * n))
    for row, sigma in enumerate(grid):
        base = win_probabilities(base_model.with_schedule(sigma)).win_probs
        for vi, positions in enumerate(variants):
            variant_model = ElectionModel(
                positions, base_model.priors, base_model.horizon, sigma
            )
            delta = win_probabilities(variant_model).win_probs - base
            values[row, vi * n : (vi + 1) * n] = delta
    if len(variants) == 1:
        columns = tuple(f"delta_{k}" for k in range(n))
    else:
        columns = tuple(
            f"delta_{k}_v{vi + 1}" for vi in range(len(variants)) for k in range(n)
        )
    return SweepTable(
        axis_name="sigma",
        axis_values=grid,
        columns=columns,
        values=values,
        kind="difference",
    )


def simplex_grid(n_candidates: int, step: float = 0.01) -> tuple[tuple[float, ...], ...]:
    """Prior vectors on a regular simplex grid (exact corners included).

    Two candidates: p0 runs over {0, step, ..., 1}. Three candidates: all
    (p0, p1) with p0 + p1 <= 1 on the step lattice, p2 the remainder.
    """
    cells = round(1.0 / step)
    if abs(cells * step - 1.0) > 1e-9 or cells < 1:
        raise ValidationError(f"step {step} must divide 1")
    if n_candidates == 2:
        return tuple((i / cells, (cells - i) / cells) for i in range(cells + 1))
    if n_candidates == 3:
        return tuple(
            (i / cells, j / cells, (cells - i - j) / cells)
            for i in range(cells + 1)
            for j in range(cells + 1 - i)
        )
    raise ValidationError(
        f"no default prior grid for {n_candidates} candidates; pass prior points explicitly"
    )


def sweep_priors(
    positions: Sequence[float],
    sigma,
    horizon: float,
    prior_points: Optional[Sequence[Sequence[float]]] = None,
    step: float = 0.01,
) -> SweepTable:
    """Win probabilities per candidate over a grid of current support rates.

    ``prior_points`` are full prior vectors; by default a regular simplex
    grid of the given step (two or three candidates). ``zero_mask`` marks
    entries that are exactly zero, the lockout region.
    """
    n = len(positions)
    if prior_points is None:
        prior_points = simplex_grid(n, step)
    points = tuple(tuple(float(p) for p in pt) for pt in prior_points)
    values = np.zeros((len(points), n))
    for row, priors in enumerate(points):
        model = ElectionModel(positions, priors, horizon, sigma)
        values[row] = win_probabilities(model).win_probs
    return SweepTable(
        axis_name="priors",
        axis_values=points,
        columns=tuple(f"p_win_{k}" for k in range(n)),
        values=values,
        zero_mask=(values == 0.0),
    )
