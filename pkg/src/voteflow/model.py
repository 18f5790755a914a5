"""Election model, information schedule, and the posterior support filter.

The latent outcome is a random label X taking one value per candidate, with
the candidates' positions on the political spectrum as the values and the
current poll shares as the prior. Evidence reaches the electorate through a
signal-plus-noise information process; the sufficient statistic for the
posterior is the accumulated signal

    Y_t = integral of rate_s d(information process)_s,

which under candidate j is Gaussian with mean ``x_j * V(0, t)`` and variance
``V(0, t)``, where ``V(t0, t1)`` is the accumulated squared rate. For a
constant rate, Y_t is just rate * (information process value). All public
operations condition on Y rather than on the raw process so that constant
and time-dependent schedules share one code path.

Everything here is immutable and pure; instances are safe to share across
threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence, Union

import numpy as np

from .errors import (
    NonIncreasingPositions,
    NonPositiveHorizon,
    NonPositiveRate,
    OutOfRangeInterval,
    OutOfRangeTime,
    PriorsNotNormalized,
    ValidationError,
)

__all__ = [
    "InfoSchedule",
    "ElectionModel",
    "PosteriorDistribution",
    "effective_variance",
    "posterior",
    "posterior_support",
    "condition_on_history",
]

#: Input priors may miss 1 by this much (poll data is rounded); they are
#: renormalized to machine precision internally.
PRIOR_SUM_TOLERANCE = 1e-9


@dataclass(frozen=True)
class InfoSchedule:
    """Piecewise-constant information flow rate on [0, infinity).

    ``breakpoints`` are the interior segment boundaries (strictly increasing,
    positive); ``rates`` has one entry per segment, so ``len(rates) ==
    len(breakpoints) + 1``. The final rate extends past the last breakpoint;
    the model's horizon bounds what is actually used. A constant schedule has
    no breakpoints.
    """

    breakpoints: tuple[float, ...]
    rates: tuple[float, ...]

    def __post_init__(self):
        breaks = tuple(float(b) for b in self.breakpoints)
        rates = tuple(float(r) for r in self.rates)
        object.__setattr__(self, "breakpoints", breaks)
        object.__setattr__(self, "rates", rates)
        if len(rates) != len(breaks) + 1:
            raise ValidationError(
                f"need len(rates) == len(breakpoints) + 1, got {len(rates)} rates "
                f"for {len(breaks)} breakpoints"
            )
        for r in rates:
            if not (r > 0.0) or not math.isfinite(r):
                raise NonPositiveRate(f"rates must be finite and > 0, got {r}")
        for b in breaks:
            if not (b > 0.0) or not math.isfinite(b):
                raise OutOfRangeInterval(f"breakpoints must be finite and > 0, got {b}")
        if any(b1 >= b2 for b1, b2 in zip(breaks, breaks[1:])):
            raise OutOfRangeInterval(f"breakpoints must be strictly increasing: {breaks}")

    @classmethod
    def constant(cls, rate: float) -> "InfoSchedule":
        return cls((), (rate,))

    @classmethod
    def piecewise(cls, breakpoints: Sequence[float], rates: Sequence[float]) -> "InfoSchedule":
        return cls(tuple(breakpoints), tuple(rates))

    @property
    def is_constant(self) -> bool:
        return len(self.rates) == 1

    def rate_at(self, t: float) -> float:
        """Rate of the segment containing t (right-continuous)."""
        i = 0
        for b in self.breakpoints:
            if t < b:
                break
            i += 1
        return self.rates[i]

    def rates_at(self, times: np.ndarray) -> np.ndarray:
        """Vectorized rate_at."""
        idx = np.searchsorted(np.asarray(self.breakpoints), np.asarray(times), side="right")
        return np.asarray(self.rates)[idx]

    def variance(self, t0: float, t1: float) -> float:
        """Accumulated squared rate over [t0, t1]: sum of rate_i^2 * overlap."""
        edges = (0.0,) + self.breakpoints + (math.inf,)
        total = 0.0
        for rate, lo, hi in zip(self.rates, edges, edges[1:]):
            overlap = min(t1, hi) - max(t0, lo)
            if overlap > 0.0:
                total += rate * rate * overlap
        return total

    def restricted(self, t0: float) -> "InfoSchedule":
        """The schedule from t0 onward, re-based so t0 becomes time 0."""
        keep = [i for i, b in enumerate(self.breakpoints) if b > t0]
        if not keep:
            return InfoSchedule.constant(self.rates[-1])
        first = keep[0]
        return InfoSchedule(
            tuple(self.breakpoints[i] - t0 for i in keep),
            self.rates[first:],
        )


ScheduleLike = Union[InfoSchedule, float, int]


def _as_schedule(schedule: ScheduleLike) -> InfoSchedule:
    if isinstance(schedule, InfoSchedule):
        return schedule
    return InfoSchedule.constant(float(schedule))


@dataclass(frozen=True)
class ElectionModel:
    """Validated parameterization of a race.

    positions: candidate labels on the political spectrum, strictly
        increasing (only the gaps matter for outcomes, not the absolute
        values).
    priors: current support rates; nonnegative, summing to 1 within 1e-9
        on input (renormalized exactly). A zero entry is allowed and means
        the candidate has negligible current support.
    horizon: time to the election in years, > 0.
    schedule: information flow rate process; a bare float means a constant
        rate.
    """

    positions: tuple[float, ...]
    priors: tuple[float, ...]
    horizon: float
    schedule: InfoSchedule

    def __post_init__(self):
        positions = tuple(float(v) for v in self.positions)
        raw_priors = tuple(float(v) for v in self.priors)
        horizon = float(self.horizon)
        schedule = _as_schedule(self.schedule)

        if len(positions) < 2:
            raise NonIncreasingPositions("need at least two candidates")
        if len(raw_priors) != len(positions):
            raise PriorsNotNormalized(
                f"{len(raw_priors)} priors for {len(positions)} positions"
            )
        if any(not math.isfinite(v) for v in positions):
            raise NonIncreasingPositions(f"positions must be finite: {positions}")
        if any(a >= b for a, b in zip(positions, positions[1:])):
            raise NonIncreasingPositions(
                f"positions must be strictly increasing: {positions}"
            )
        if any((v < 0.0) or not math.isfinite(v) for v in raw_priors):
            raise PriorsNotNormalized(f"priors must be finite and >= 0: {raw_priors}")
        total = math.fsum(raw_priors)
        if abs(total - 1.0) > PRIOR_SUM_TOLERANCE:
            raise PriorsNotNormalized(f"priors sum to {total!r}, not 1")
        if not (horizon > 0.0) or not math.isfinite(horizon):
            raise NonPositiveHorizon(f"horizon must be finite and > 0, got {horizon}")

        object.__setattr__(self, "positions", positions)
        object.__setattr__(self, "priors", tuple(v / total for v in raw_priors))
        object.__setattr__(self, "horizon", horizon)
        object.__setattr__(self, "schedule", schedule)

    @property
    def n_candidates(self) -> int:
        return len(self.positions)

    @cached_property
    def positions_arr(self) -> np.ndarray:
        arr = np.asarray(self.positions, dtype=np.float64)
        arr.flags.writeable = False
        return arr

    @cached_property
    def priors_arr(self) -> np.ndarray:
        arr = np.asarray(self.priors, dtype=np.float64)
        arr.flags.writeable = False
        return arr

    @cached_property
    def log_priors_arr(self) -> np.ndarray:
        """log priors with zeros mapped to -inf (no runtime warnings)."""
        arr = np.array(
            [math.log(p) if p > 0.0 else -math.inf for p in self.priors],
            dtype=np.float64,
        )
        arr.flags.writeable = False
        return arr

    @property
    def terminal_variance(self) -> float:
        """V(0, horizon), the election-day accumulated squared rate."""
        return self.schedule.variance(0.0, self.horizon)

    def with_schedule(self, schedule: ScheduleLike) -> "ElectionModel":
        return ElectionModel(self.positions, self.priors, self.horizon, _as_schedule(schedule))


@dataclass(frozen=True, eq=False)
class PosteriorDistribution:
    """Conditional support rates at one (time, accumulated signal) point."""

    time: float
    signal: float
    support: np.ndarray

    def __post_init__(self):
        arr = np.array(self.support, dtype=np.float64)
        arr.flags.writeable = False
        object.__setattr__(self, "support", arr)


def effective_variance(schedule: ScheduleLike, t0: float, t1: float) -> float:
    """Accumulated squared information flow rate over [t0, t1].

    Exact for piecewise-constant schedules (sum of rate^2 times segment
    overlap). Additive over adjacent intervals and nonnegative.
    """
    if not (0.0 <= t0 <= t1) or not math.isfinite(t0) or not math.isfinite(t1):
        raise OutOfRangeInterval(f"need 0 <= t0 <= t1, got [{t0}, {t1}]")
    return _as_schedule(schedule).variance(t0, t1)


def posterior_support(model: ElectionModel, y, t: float) -> np.ndarray:
    """Support rates given accumulated signal(s) y at time t.

    Accepts a scalar y (returns shape (N,)) or an array of signals (returns
    shape y.shape + (N,)). Weights are formed in the log domain with a
    max-shift, so no overflow occurs even for |y| up to 1e6; candidates with
    a zero prior get exactly zero support.
    """
    if not (0.0 <= t <= model.horizon):
        raise OutOfRangeTime(f"t={t} outside [0, {model.horizon}]")
    v = model.schedule.variance(0.0, t)
    x = model.positions_arr
    logw = model.log_priors_arr - 0.5 * x * x * v
    y_arr = np.asarray(y, dtype=np.float64)
    expo = logw + np.multiply.outer(y_arr, x)
    expo -= np.max(expo, axis=-1, keepdims=True)
    w = np.exp(expo)
    w /= np.sum(w, axis=-1, keepdims=True)
    return w


def posterior(model: ElectionModel, y: float, t: float) -> PosteriorDistribution:
    """The conditional support vector at time t given accumulated signal y."""
    support = posterior_support(model, float(y), t)
    return PosteriorDistribution(time=float(t), signal=float(y), support=support)


def condition_on_history(model: ElectionModel, y: float, t: float) -> ElectionModel:
    """The model as seen from time t after observing accumulated signal y.

    Returns a new model whose priors are the time-t support rates, whose
    horizon is the remaining time, and whose schedule is the original one
    re-based at t. The information process is Markov, so every downstream
    probability computed from the new model is the conditional probability
    given the history up to t.
    """
    if not (0.0 <= t < model.horizon):
        raise OutOfRangeTime(f"t={t} outside [0, {model.horizon}) for conditioning")
    support = posterior_support(model, float(y), t)
    return ElectionModel(
        positions=model.positions,
        priors=tuple(support.tolist()),
        horizon=model.horizon - t,
        schedule=model.schedule.restricted(t),
    )
