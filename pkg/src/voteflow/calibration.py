"""Estimating the information flow rate from data.

Historic route: along the filter dynamics each support rate moves as
d pi_i = sigma * pi_i * (x_i - xbar) dW with a single driving noise, so the
squared increments of an observed poll series, normalized by that loading,
recover sigma^2 as a quadratic-variation ratio:

    sigma_hat^2 = sum_steps sum_i (d pi_i)^2
                  / sum_steps sum_i pi_i^2 (x_i - xbar)^2 dt.

Implied route: invert the closed-form win probability for the rate that
reproduces a target probability. Win probabilities need not be monotone in
the rate when there are more than two candidates, so the inversion scans a
grid, refines every sign change by bisection, and returns all solutions
(including the edges of exact plateaus, e.g. the dead-zone boundary when
the target is zero).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    DegenerateSeriesWarning,
    TooFewObservations,
    Unattainable,
    ValidationError,
)
from .model import ElectionModel
from .outcomes import win_probabilities

__all__ = [
    "PollSeries",
    "SigmaEstimate",
    "estimate_sigma_historic",
    "implied_sigma",
]

_ROW_SUM_TOL = 1e-6


@dataclass(frozen=True, eq=False)
class PollSeries:
    """Observed support-rate time series on a fixed candidate spectrum."""

    times: np.ndarray
    supports: np.ndarray
    positions: np.ndarray

    def __post_init__(self):
        # copy, then freeze: callers keep ownership of what they passed in
        times = np.array(self.times, dtype=np.float64)
        supports = np.array(self.supports, dtype=np.float64)
        positions = np.array(self.positions, dtype=np.float64)
        if times.ndim != 1 or len(times) < 3:
            raise TooFewObservations(f"need at least 3 observations, got {times.shape}")
        if np.any(np.diff(times) <= 0.0):
            raise ValidationError("observation times must be strictly increasing")
        if supports.shape != (len(times), len(positions)):
            raise ValidationError(
                f"supports shape {supports.shape} does not match "
                f"{len(times)} times x {len(positions)} candidates"
            )
        if np.any(supports < 0.0) or np.any(supports > 1.0):
            raise ValidationError("support entries must lie in [0, 1]")
        row_sums = supports.sum(axis=1)
        worst = np.argmax(np.abs(row_sums - 1.0))
        if abs(row_sums[worst] - 1.0) > _ROW_SUM_TOL:
            raise ValidationError(
                f"support row {worst} sums to {row_sums[worst]!r}, not 1 within {_ROW_SUM_TOL}"
            )
        if np.any(np.diff(positions) <= 0.0):
            raise ValidationError("positions must be strictly increasing")
        for name, arr in (("times", times), ("supports", supports), ("positions", positions)):
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)

    @property
    def n_observations(self) -> int:
        return len(self.times)


@dataclass(frozen=True)
class SigmaEstimate:
    """Point estimate of the information flow rate with its standard error.

    ``effective_increments`` is the effective number of independent squared
    increments behind the estimate (loadings vary along the series, so this
    is generally below the raw step count).
    """

    sigma: float
    standard_error: float
    effective_increments: float


def estimate_sigma_historic(series: PollSeries) -> SigmaEstimate:
    """Quadratic-variation estimate of the rate from a poll series.

    A constant series (or one stuck at a degenerate one-hot posterior, which
    carries no loading) yields sigma = 0 with a DegenerateSeriesWarning. The
    standard error comes from the chi-squared spread of squared Gaussian
    increments via the delta method: Var(sigma_hat^2) ~ 2 sigma^4 / M_eff.
    """
    pi = series.supports
    x = series.positions
    dt = np.diff(series.times)
    d_pi = np.diff(pi, axis=0)
    numerator = float(np.sum(d_pi * d_pi))

    left = pi[:-1]
    xbar = left @ x
    loading = np.sum(left * left * (x[None, :] - xbar[:, None]) ** 2, axis=1)
    weights = loading * dt
    denominator = float(np.sum(weights))

    if numerator == 0.0 or denominator == 0.0:
        reason = "constant supports" if numerator == 0.0 else "degenerate posterior loading"
        warnings.warn(
            f"poll series carries no usable movement ({reason}); estimate is 0",
            DegenerateSeriesWarning,
            stacklevel=2,
        )
        return SigmaEstimate(sigma=0.0, standard_error=0.0, effective_increments=0.0)

    sigma_sq = numerator / denominator
    sigma = math.sqrt(sigma_sq)
    m_eff = denominator**2 / float(np.sum(weights * weights))
    # Var(sigma^2) ~ 2 sigma^4 / m_eff; SE(sigma) = SE(sigma^2) / (2 sigma)
    standard_error = sigma * math.sqrt(0.5 / m_eff)
    return SigmaEstimate(sigma=sigma, standard_error=standard_error, effective_increments=m_eff)


def implied_sigma(
    positions: Sequence[float],
    priors: Sequence[float],
    horizon: float,
    candidate: int,
    target: float,
    sigma_min: float = 1e-4,
    sigma_max: float = 1e3,
    scan_points: int = 200,
    tol: float = 1e-8,
) -> tuple[float, ...]:
    """All constant rates at which the candidate's win probability hits target.

    Scans a geometric grid over [sigma_min, sigma_max], refines every sign
    change of win_prob(sigma) - target by bisection to ``tol``, and also
    returns the interior edge(s) of runs where the probability equals the
    target exactly (for a zero target inside a dead zone this is the
    supremum solution, the dead-zone rate bound). Raises Unattainable when
    the scan never meets or crosses the target.
    """
    if not (0.0 <= target <= 1.0):
        raise ValidationError(f"target probability must lie in [0, 1], got {target}")
    n = len(positions)
    if not (0 <= candidate < n):
        raise ValidationError(f"candidate index {candidate} outside [0, {n})")

    def win(sigma: float) -> float:
        model = ElectionModel(positions, priors, horizon, sigma)
        return float(win_probabilities(model).win_probs[candidate])

    grid = np.geomspace(sigma_min, sigma_max, scan_points)
    gap = np.array([win(s) - target for s in grid])
    zero = gap == 0.0

    solutions: list[float] = []
    i = 0
    while i < len(grid):
        if zero[i]:
            # maximal run of exact hits; its interior edges against a nonzero
            # neighbour are the meaningful solutions (e.g. the dead-zone
            # supremum when the target is 0)
            j = i
            while j + 1 < len(grid) and zero[j + 1]:
                j += 1
            if i > 0:
                solutions.append(_plateau_edge(win, target, float(grid[i]), float(grid[i - 1]), tol))
            if j + 1 < len(grid):
                solutions.append(_plateau_edge(win, target, float(grid[j]), float(grid[j + 1]), tol))
            if i == 0 and j + 1 == len(grid):
                solutions.extend([float(grid[i]), float(grid[j])])  # target met everywhere
            i = j + 1
        else:
            if i + 1 < len(grid) and not zero[i + 1] and gap[i] * gap[i + 1] < 0.0:
                solutions.append(
                    _bisect_crossing(win, target, float(grid[i]), float(grid[i + 1]), tol)
                )
            i += 1

    if not solutions:
        raise Unattainable(
            f"target {target} for candidate {candidate} not reached on "
            f"[{sigma_min}, {sigma_max}] (achieved range [{target + gap.min():.6g}, "
            f"{target + gap.max():.6g}])"
        )
    solutions.sort()
    deduped = [solutions[0]]
    for s in solutions[1:]:
        if s - deduped[-1] > 10.0 * tol:
            deduped.append(s)
    return tuple(deduped)


def _bisect_crossing(win, target: float, lo: float, hi: float, tol: float) -> float:
    f_lo = win(lo) - target
    for _ in range(200):
        if abs(hi - lo) <= tol:
            break
        mid = 0.5 * (lo + hi)
        f_mid = win(mid) - target
        if f_mid == 0.0:
            return mid
        if (f_lo < 0.0) == (f_mid < 0.0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _plateau_edge(win, target: float, inside: float, outside: float, tol: float) -> float:
    """Boundary between {win == target exactly} and {win != target}."""
    for _ in range(200):
        if abs(outside - inside) <= tol:
            break
        mid = 0.5 * (inside + outside)
        if win(mid) == target:
            inside = mid
        else:
            outside = mid
    return inside
